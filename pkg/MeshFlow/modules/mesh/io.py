"""
Wavefront OBJ and XYZ readers and writers.

Only `v` and `f` OBJ records are honored; every other record (normals,
texture coordinates, groups, materials) is skipped and counted. Polygons are
fan-triangulated from their first vertex. Files are read and written through
the `File` builder.
"""

import logging
import math
import os
import numpy as np
from MeshFlow.builders import File
from MeshFlow.core import FLOAT, INDEX, MeshFormatError, GeometryError
from .triMesh import TriMesh, PointCloud

logger = logging.getLogger(__name__)

def parseFloats(tokens: list[str], lineNumber: int, path: str) -> list[float]:
    try:
        values = [float(token) for token in tokens]
    except ValueError:
        raise MeshFormatError(
            f"Malformed coordinates '{' '.join(tokens)}' at line {lineNumber} of '{path}'.", lineNumber
        )
    if not all(math.isfinite(value) for value in values):
        raise MeshFormatError(f"Non-finite coordinate at line {lineNumber} of '{path}'.", lineNumber)
    return values

def parseFaceIndex(token: str, vertexCount: int, lineNumber: int, path: str) -> int:
    """
    Convert one `f` record corner ('i', 'i/t', 'i//n' or 'i/t/n') to a zero-based index.

    Negative OBJ indices count back from the last vertex read so far.
    """
    head = token.split('/')[0]
    try:
        index = int(head)
    except ValueError:
        raise MeshFormatError(f"Malformed face index '{token}' at line {lineNumber} of '{path}'.", lineNumber)

    if index == 0:
        raise MeshFormatError(f"Face index '0' is invalid at line {lineNumber} of '{path}'.", lineNumber)
    return index - 1 if index > 0 else vertexCount + index

def readObj(path) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """
    Parse the `v` and `f` records of an OBJ file.

    Args:
        path (str | os.PathLike): OBJ file.

    Returns:
        tuple: (vertices (n, 3), triangles (m, 3), source line of every triangle).

    Raises:
        FileNotFoundError: If the file does not exist.
        MeshFormatError: On a malformed record or an out-of-range index.
    """
    path = os.fspath(path)
    lines = File(path).readFile(lines=True)

    vertices: list[list[float]] = []
    triangles: list[tuple[int, int, int]] = []
    triangleLines: list[int] = []
    skipped = 0

    for lineNumber, raw in enumerate(lines, start=1):
        tokens = raw.split('#', 1)[0].split()
        if not tokens:
            continue

        tag = tokens[0]
        if tag == 'v':
            if len(tokens) < 4:
                raise MeshFormatError(f"Vertex record needs 3 coordinates at line {lineNumber} of '{path}'.", lineNumber)
            vertices.append(parseFloats(tokens[1:4], lineNumber, path))
        elif tag == 'f':
            corners = [parseFaceIndex(token, len(vertices), lineNumber, path) for token in tokens[1:]]
            if len(corners) < 3:
                raise MeshFormatError(f"Face record needs at least 3 corners at line {lineNumber} of '{path}'.", lineNumber)
            for index in corners:
                if index < 0 or index >= len(vertices):
                    raise MeshFormatError(
                        f"Face index '{index + 1}' is out of range at line {lineNumber} of '{path}'.", lineNumber
                    )
            # Fan from the first corner
            for k in range(1, len(corners) - 1):
                triangles.append((corners[0], corners[k], corners[k + 1]))
                triangleLines.append(lineNumber)
        else:
            skipped += 1

    if skipped:
        logger.warning(f"Skipped {skipped} unsupported OBJ record(s) in '{path}'.")

    return (
        np.array(vertices, dtype=FLOAT).reshape(-1, 3),
        np.array(triangles, dtype=INDEX).reshape(-1, 3),
        triangleLines
    )

def loadMesh(path) -> TriMesh:
    """
    Load a triangle mesh from a Wavefront OBJ file.

    Args:
        path (str | os.PathLike): OBJ file.

    Returns:
        TriMesh: The fan-triangulated mesh with zero-based indices.

    Raises:
        FileNotFoundError: If the file does not exist.
        MeshFormatError: On malformed records, out-of-range indices, faces that
            repeat a vertex, or a file without faces.
    """
    vertices, faces, faceLines = readObj(path)

    if faces.shape[0] == 0:
        raise MeshFormatError(f"The OBJ file '{os.fspath(path)}' contains no faces.")

    repeated = (faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2]) | (faces[:, 0] == faces[:, 2])
    if np.any(repeated):
        lineNumber = faceLines[int(np.argmax(repeated))]
        raise MeshFormatError(
            f"Face references the same vertex twice at line {lineNumber} of '{os.fspath(path)}'.", lineNumber
        )

    try:
        return TriMesh(vertices, faces)
    except GeometryError as e:
        raise MeshFormatError(f"Invalid mesh in '{os.fspath(path)}': {e}")

def saveMesh(mesh: TriMesh, path) -> None:
    """
    Write a mesh as OBJ: all `v` lines, then all `f` lines with 1-based indices.

    Coordinates use the shortest round-trip float text, so a reload gives the
    same vertices bit for bit.

    Raises:
        PermissionError | OSError: If the file cannot be written.
    """
    lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in mesh.vertices.tolist()]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces.tolist()]
    File(path).writeLines(lines)

def loadPoints(path) -> PointCloud:
    """
    Load a point cloud from an XYZ text file or from the vertices of an OBJ file.

    XYZ lines hold whitespace-separated coordinates; the first three numbers of
    each line are used, so files with trailing normals load too. '#' starts a
    comment.

    Raises:
        FileNotFoundError: If the file does not exist.
        MeshFormatError: On a malformed line or an empty file.
    """
    path = os.fspath(path)

    if path.lower().endswith('.obj'):
        vertices, _, _ = readObj(path)
        if vertices.shape[0] == 0:
            raise MeshFormatError(f"The OBJ file '{path}' contains no vertices.")
        return PointCloud(vertices)

    points = []
    for lineNumber, raw in enumerate(File(path).readFile(lines=True), start=1):
        tokens = raw.split('#', 1)[0].replace(',', ' ').split()
        if not tokens:
            continue
        if len(tokens) < 3:
            raise MeshFormatError(f"Expected 'x y z' at line {lineNumber} of '{path}'.", lineNumber)
        points.append(parseFloats(tokens[:3], lineNumber, path))

    if not points:
        raise MeshFormatError(f"The point file '{path}' contains no points.")
    return PointCloud(np.array(points, dtype=FLOAT))

def savePoints(cloud: PointCloud, path) -> None:
    """
    Write one 'x y z' line per point.
    """
    File(path).writeLines([f"{x!r} {y!r} {z!r}" for x, y, z in cloud.points.tolist()])

def loadShape(path) -> TriMesh | PointCloud:
    """
    Load a mesh when the file is an OBJ with faces, a point cloud otherwise.
    """
    if os.fspath(path).lower().endswith('.obj'):
        vertices, faces, _ = readObj(path)
        if faces.shape[0] > 0:
            return loadMesh(path)
        if vertices.shape[0] == 0:
            raise MeshFormatError(f"The OBJ file '{os.fspath(path)}' contains no vertices.")
        return PointCloud(vertices)
    return loadPoints(path)
