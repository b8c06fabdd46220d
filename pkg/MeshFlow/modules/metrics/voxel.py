"""
Solid voxelization.

Surface cells are the cells whose box overlaps a triangle, decided by the
separating axis test (touching counts as overlap). Every non-surface cell
connected to the grid border through 6-neighbors is exterior; the solid is
everything else. A mesh that encloses nothing lets the exterior reach almost
every free cell, and then only its surface cells are kept and the grid is
flagged as leaking.
"""

import logging
from dataclasses import dataclass
import numpy as np
from scipy import ndimage
from MeshFlow.core import FLOAT, GeometryError, ShapeMismatchError
from MeshFlow.modules.mesh import TriMesh, BoundingBox
from .params import VoxelParams

logger = logging.getLogger(__name__)

@dataclass(frozen=True, eq=False)
class VoxelGrid:
    """
    Occupancy of an R x R x R grid of cubic cells.

    Cell (i, j, k) spans `origin + voxelSize * [i, i + 1] x [j, j + 1] x [k, k + 1]`.

    Attributes:
        occupancy (np.ndarray): (R, R, R) booleans.
        origin (np.ndarray): World position of the grid corner.
        voxelSize (float): Cell edge length.
        leak (bool): The mesh did not enclose a volume; occupancy is surface only.
    """

    occupancy: np.ndarray
    origin: np.ndarray
    voxelSize: float
    leak: bool = False

    def __post_init__(self):
        occupancy = np.array(self.occupancy, dtype=bool)
        if occupancy.ndim != 3 or len(set(occupancy.shape)) != 1 or occupancy.shape[0] < 2:
            raise ShapeMismatchError(f"Occupancy must be an R x R x R grid with R >= 2, got '{occupancy.shape}'.")
        occupancy.setflags(write=False)
        object.__setattr__(self, 'occupancy', occupancy)
        object.__setattr__(self, 'origin', np.asarray(self.origin, dtype=FLOAT).reshape(3))
        object.__setattr__(self, 'voxelSize', float(self.voxelSize))

    @property
    def resolution(self) -> int:
        return self.occupancy.shape[0]

    def count(self) -> int:
        return int(self.occupancy.sum())

    def volume(self) -> float:
        return self.count() * self.voxelSize ** 3

    def sameFrame(self, other: 'VoxelGrid') -> bool:
        return (
            self.resolution == other.resolution
            and self.voxelSize == other.voxelSize
            and np.array_equal(self.origin, other.origin)
        )

    def centers(self) -> np.ndarray:
        """(R, R, R, 3) world positions of the cell centers."""
        index = np.indices(self.occupancy.shape, dtype=FLOAT).transpose(1, 2, 3, 0)
        return self.origin + (index + 0.5) * self.voxelSize

def gridFrame(params: VoxelParams) -> tuple[np.ndarray, float]:
    """
    Origin and cell size of the grid covering `params.bounds` with the padding.
    """
    box = BoundingBox(*params.bounds)
    extent = float(box.extent.max())
    if not extent > 0.0:
        raise GeometryError("Voxel bounds must have a positive extent.")
    voxelSize = extent / (params.resolution - 2.0 * params.padding)
    origin = box.center - voxelSize * params.resolution / 2.0
    return origin, voxelSize

def separated(p0: np.ndarray, p1: np.ndarray, p2: np.ndarray, radius) -> np.ndarray:
    low = np.minimum(np.minimum(p0, p1), p2)
    high = np.maximum(np.maximum(p0, p1), p2)
    return (low > radius) | (high < -radius)

def triangleBoxOverlap(triangle: np.ndarray, centers: np.ndarray, half: float) -> np.ndarray:
    """
    Separating axis test of one triangle against many axis-aligned cubes.

    Args:
        triangle (np.ndarray): (3, 3) corners.
        centers (np.ndarray): (M, 3) cube centers.
        half (float): Half edge length of the cubes.

    Returns:
        np.ndarray: (M,) True where the triangle and the cube overlap or touch.
    """
    v0, v1, v2 = triangle[0] - centers, triangle[1] - centers, triangle[2] - centers
    edges = (triangle[1] - triangle[0], triangle[2] - triangle[1], triangle[0] - triangle[2])
    axes = [np.cross(unit, edge) for unit in np.eye(3) for edge in edges]
    axes += list(np.eye(3))
    axes.append(np.cross(edges[0], edges[1]))

    overlap = np.ones(centers.shape[0], dtype=bool)
    for axis in axes:
        radius = half * float(np.abs(axis).sum())
        overlap &= ~separated(v0 @ axis, v1 @ axis, v2 @ axis, radius)
    return overlap

def markSurface(mesh: TriMesh, origin: np.ndarray, voxelSize: float, resolution: int) -> np.ndarray:
    """
    Cells overlapped by at least one triangle. Candidates per triangle are the
    cells of its bounding box; work happens in grid units (cell size 1).
    """
    surface = np.zeros((resolution,) * 3, dtype=bool)
    corners = (mesh.vertices[mesh.faces] - origin) / voxelSize

    for triangle in corners:
        low = np.clip(np.floor(triangle.min(axis=0)).astype(int), 0, resolution - 1)
        high = np.clip(np.floor(triangle.max(axis=0)).astype(int), 0, resolution - 1)
        if np.any(triangle.max(axis=0) < 0.0) or np.any(triangle.min(axis=0) > resolution):
            continue
        cells = np.stack(np.meshgrid(
            *(np.arange(low[d], high[d] + 1) for d in range(3)), indexing='ij'
        ), axis=-1).reshape(-1, 3)
        hit = triangleBoxOverlap(triangle, cells + 0.5, 0.5)
        surface[tuple(cells[hit].T)] = True
    return surface

def exteriorOf(surface: np.ndarray) -> np.ndarray:
    """Free cells 6-connected to the grid border."""
    labels, _ = ndimage.label(~surface, structure=ndimage.generate_binary_structure(3, 1))
    border = np.concatenate([
        labels[0].ravel(), labels[-1].ravel(),
        labels[:, 0].ravel(), labels[:, -1].ravel(),
        labels[:, :, 0].ravel(), labels[:, :, -1].ravel()
    ])
    outside = np.unique(border[border > 0])
    return np.isin(labels, outside)

def voxelizeSolid(mesh: TriMesh, resolution: int | None = None, params: VoxelParams | None = None) -> VoxelGrid:
    """
    Solid occupancy of a mesh.

    Args:
        mesh (TriMesh): The shape, inside `params.bounds` (the unit cube by default).
        resolution (int, optional): Overrides `params.resolution`.
        params (VoxelParams, optional): Grid options.

    Returns:
        VoxelGrid: Surface plus enclosed cells; surface cells only, with `leak`
            set, when the exterior reaches more than `leakFraction` of the free cells.
    """
    params = params or VoxelParams()
    if resolution is not None:
        params = VoxelParams(resolution, params.padding, params.bounds, params.leakFraction)

    origin, voxelSize = gridFrame(params)
    surface = markSurface(mesh, origin, voxelSize, params.resolution)
    exterior = exteriorOf(surface)

    free = int((~surface).sum())
    if free and exterior.sum() > params.leakFraction * free:
        logger.warning(
            f"Voxelization leaked: the exterior reached '{int(exterior.sum())}' of '{free}' free cells; "
            "keeping surface cells only."
        )
        return VoxelGrid(surface, origin, voxelSize, leak=True)

    return VoxelGrid(~exterior, origin, voxelSize)
