"""
This module defines the geometry data model shared by every other module:
triangle meshes, point clouds, bounding boxes, and the basic queries on them.

All arrays are 64-bit floats (indices 64-bit integers) and are frozen after
construction, so instances can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal
import numpy as np
from MeshFlow.core import FLOAT, INDEX, GeometryError, ShapeMismatchError

SymmetryPlane = Literal['xz', 'xy', 'yz']
"""Axis-aligned reflection planes through the origin."""

PLANEAXIS: dict[str, int] = {'yz': 0, 'xz': 1, 'xy': 2}
"""Coordinate negated by the reflection across each plane."""

def frozenArray(values, dtype, columns: int | None = None, name: str = 'array') -> np.ndarray:
    """
    Copy values into a read-only contiguous array.

    Args:
        values: Array-like input.
        dtype: Target dtype.
        columns (int, optional): Required second dimension.
        name (str): Name used in error messages.

    Raises:
        ShapeMismatchError: If the array is not 2-D with `columns` columns.
    """
    array = np.array(values, dtype=dtype, copy=True)
    if columns is not None:
        if array.size == 0:
            array = array.reshape(0, columns)
        if array.ndim != 2 or array.shape[1] != columns:
            raise ShapeMismatchError(f"'{name}' must have shape (n, {columns}), got '{array.shape}'.")
    array.setflags(write=False)
    return array

def asPoints(shape: 'TriMesh | PointCloud | np.ndarray') -> np.ndarray:
    """
    Positions of a shape: mesh vertices, cloud points, or an (n, 3) array.
    """
    if isinstance(shape, TriMesh):
        return shape.vertices
    if isinstance(shape, PointCloud):
        return shape.points
    return frozenArray(shape, FLOAT, 3, 'points')

def planeAxis(plane: str) -> int:
    """
    Coordinate index negated by a symmetry plane.

    Raises:
        ValueError: If the plane is not one of 'xz', 'xy', 'yz'.
    """
    try:
        return PLANEAXIS[plane]
    except KeyError:
        raise ValueError(f"Unknown symmetry plane '{plane}', expected one of {sorted(PLANEAXIS)}.")

@dataclass(frozen=True, eq=False)
class TriMesh:
    """
    Vertex positions plus fixed triangle connectivity.

    Attributes:
        vertices (np.ndarray): (N_V, 3) positions.
        faces (np.ndarray): (N_E, 3) zero-based vertex indices.
    """

    vertices: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        vertices = frozenArray(self.vertices, FLOAT, 3, 'vertices')
        faces = frozenArray(self.faces, INDEX, 3, 'faces')

        if vertices.shape[0] < 3:
            raise GeometryError(f"A mesh needs at least 3 vertices, got '{vertices.shape[0]}'.")
        if faces.shape[0] < 1:
            raise GeometryError("A mesh needs at least 1 face.")
        if not np.all(np.isfinite(vertices)):
            raise GeometryError("Mesh vertices must be finite.")
        if faces.min() < 0 or faces.max() >= vertices.shape[0]:
            bad = faces[(faces < 0) | (faces >= vertices.shape[0])][0]
            raise GeometryError(f"Face index '{bad}' is out of range for '{vertices.shape[0]}' vertices.")

        repeated = (faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2]) | (faces[:, 0] == faces[:, 2])
        if np.any(repeated):
            raise GeometryError(f"Face '{int(np.argmax(repeated))}' references the same vertex twice.")

        object.__setattr__(self, 'vertices', vertices)
        object.__setattr__(self, 'faces', faces)

    @property
    def vertexCount(self) -> int:
        return self.vertices.shape[0]

    @property
    def faceCount(self) -> int:
        return self.faces.shape[0]

    def withVertices(self, vertices: np.ndarray) -> 'TriMesh':
        """
        A mesh with new vertex positions and the same faces.

        Raises:
            ShapeMismatchError: If the vertex count changes.
        """
        vertices = np.asarray(vertices, dtype=FLOAT)
        if vertices.shape != self.vertices.shape:
            raise ShapeMismatchError(
                f"Expected vertices of shape '{self.vertices.shape}', got '{vertices.shape}'."
            )
        return TriMesh(vertices, self.faces)

    def faceCorners(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Corner positions (v1, v2, v3) of every face, each (N_E, 3)."""
        return (
            self.vertices[self.faces[:, 0]],
            self.vertices[self.faces[:, 1]],
            self.vertices[self.faces[:, 2]]
        )

@dataclass(frozen=True, eq=False)
class PointCloud:
    """
    Unordered set of 3D points.

    Attributes:
        points (np.ndarray): (N, 3) positions, N >= 1, all finite.
    """

    points: np.ndarray

    def __post_init__(self):
        points = frozenArray(self.points, FLOAT, 3, 'points')
        if points.shape[0] < 1:
            raise GeometryError("A point cloud needs at least 1 point.")
        if not np.all(np.isfinite(points)):
            raise GeometryError("Point coordinates must be finite.")
        object.__setattr__(self, 'points', points)

    def __len__(self) -> int:
        return self.points.shape[0]

@dataclass(frozen=True, eq=False)
class BoundingBox:
    """Axis-aligned box given by its min and max corners."""

    minCorner: np.ndarray
    maxCorner: np.ndarray

    def __post_init__(self):
        minCorner = frozenArray(self.minCorner, FLOAT).reshape(3)
        maxCorner = frozenArray(self.maxCorner, FLOAT).reshape(3)
        if np.any(minCorner > maxCorner):
            raise GeometryError(f"Box min '{minCorner}' exceeds max '{maxCorner}'.")
        object.__setattr__(self, 'minCorner', minCorner)
        object.__setattr__(self, 'maxCorner', maxCorner)

    @property
    def extent(self) -> np.ndarray:
        return self.maxCorner - self.minCorner

    @property
    def center(self) -> np.ndarray:
        return (self.minCorner + self.maxCorner) / 2.0

@dataclass(frozen=True)
class UnitCubeTransform:
    """
    Uniform scale plus translation: `normalized = (x + translation) * scale`.
    """

    scale: float
    translation: tuple[float, float, float]

    def apply(self, points: np.ndarray) -> np.ndarray:
        return (np.asarray(points, dtype=FLOAT) + np.asarray(self.translation, dtype=FLOAT)) * self.scale

    def invert(self, points: np.ndarray) -> np.ndarray:
        """Map normalized positions back to the original frame."""
        return np.asarray(points, dtype=FLOAT) / self.scale - np.asarray(self.translation, dtype=FLOAT)

def boundingBox(shape: TriMesh | PointCloud | np.ndarray) -> BoundingBox:
    """
    Componentwise min/max of a shape's coordinates.

    Raises:
        GeometryError: If the shape has no points.
    """
    points = asPoints(shape)
    if points.shape[0] == 0:
        raise GeometryError("Cannot bound an empty point set.")
    return BoundingBox(points.min(axis=0), points.max(axis=0))

def normalizeUnitCube(shape: TriMesh | PointCloud) -> tuple[TriMesh | PointCloud, UnitCubeTransform]:
    """
    Center a shape at the origin and scale it uniformly so its largest
    bounding-box extent is 1.

    Args:
        shape (TriMesh | PointCloud): The shape to normalize.

    Returns:
        tuple: The normalized shape (same type, same faces) and the applied transform.

    Raises:
        GeometryError: If every extent is zero.
    """
    box = boundingBox(shape)
    largest = float(box.extent.max())
    if not largest > 0.0:
        raise GeometryError("Cannot normalize a shape with zero extent.")

    transform = UnitCubeTransform(
        scale=1.0 / largest,
        translation=tuple(float(c) for c in -box.center)
    )
    moved = transform.apply(asPoints(shape))

    if isinstance(shape, TriMesh):
        return TriMesh(moved, shape.faces), transform
    return PointCloud(moved), transform

def faceAreas(mesh: TriMesh) -> np.ndarray:
    """
    Area of every face, `|(v2 - v1) x (v3 - v1)| / 2`; degenerate faces give 0.
    """
    v1, v2, v3 = mesh.faceCorners()
    return np.linalg.norm(np.cross(v2 - v1, v3 - v1), axis=1) / 2.0

def mirrorPoints(cloud: PointCloud | np.ndarray, plane: SymmetryPlane = 'xz') -> PointCloud:
    """
    Reflect points across an axis-aligned plane through the origin.

    Args:
        cloud (PointCloud | np.ndarray): Points to reflect.
        plane (str): 'xz' (negates y, the default), 'xy' (negates z) or 'yz' (negates x).

    Returns:
        PointCloud: The reflected points, in the same order.
    """
    points = np.array(asPoints(cloud), dtype=FLOAT)
    points[:, planeAxis(plane)] *= -1.0
    return PointCloud(points)
