from typing import List, Tuple
from MeshFlow.builders import File
from MeshFlow.core import MeshFormatError
from MeshFlow.utils import Source

def readManifest(path) -> List[Tuple[Source, Source]]:
    """
    Read a training manifest: one `source<TAB>target` pair per line.

    Relative paths are resolved against the manifest's folder. Blank lines and
    lines starting with `#` are skipped.

    Raises:
        FileNotFoundError: If the manifest does not exist.
        MeshFormatError: On a line without exactly two fields, or when no pair is listed.
    """
    pairs = []
    for lineNumber, raw in enumerate(File(path).readFile(lines=True), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        parts = [part.strip() for part in raw.split('\t')]
        if len(parts) != 2 or not all(parts):
            raise MeshFormatError(
                f"Expected 'source<TAB>target' at line {lineNumber} of '{path}', got '{line}'.", lineNumber
            )
        pairs.append((Source.relativeTo(parts[0], path), Source.relativeTo(parts[1], path)))

    if not pairs:
        raise MeshFormatError(f"The manifest '{path}' lists no pairs.")
    return pairs
