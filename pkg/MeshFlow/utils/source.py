from pathlib import Path

class Source:
    """
    A path resolved against an explicit root.

    Manifest entries are resolved against the manifest's folder; absolute
    paths are kept as given.
    """

    def __init__(
        self,
        path: str | Path,
        root: Path
    ):
        self.inputPath = Path(path).expanduser()

        if self.inputPath.is_absolute():
            self.resolvedPath = self.inputPath
        else:
            self.resolvedPath = (Path(root) / self.inputPath).resolve()

    @classmethod
    def relativeTo(cls, path: str | Path, anchor: str | Path) -> "Source":
        """
        Resolve a path relative to the folder containing `anchor`.
        """
        return cls(path, Path(anchor).expanduser().resolve().parent)

    def get(self) -> str:
        """
        Get the resolved path.
        """
        return str(self.resolvedPath)

    def path(self) -> Path:
        return self.resolvedPath

    def __str__(self) -> str:
        return str(self.resolvedPath)

    def __fspath__(self):
        return str(self.resolvedPath)
