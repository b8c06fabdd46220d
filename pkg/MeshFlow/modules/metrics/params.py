from dataclasses import dataclass, field
from typing import Tuple

UNITCUBE: Tuple[Tuple[float, float, float], Tuple[float, float, float]] = ((-0.5, -0.5, -0.5), (0.5, 0.5, 0.5))
"""Bounds of a shape after `normalizeUnitCube`."""

@dataclass(frozen=True)
class VoxelParams:
    """
    Voxel grid options.

    Attributes:
        resolution (int): Cells per axis, >= 2. Defaults to 32.
        padding (float): Empty margin around the bounds, in voxels per side.
        bounds (tuple): (min corner, max corner) the grid must cover.
        leakFraction (float): Share of the non-surface cells the exterior may
            reach before the mesh is treated as open.
    """

    resolution: int = 32
    padding: float = 1.25
    bounds: Tuple[Tuple[float, float, float], Tuple[float, float, float]] = field(default=UNITCUBE)
    leakFraction: float = 0.99

    def __post_init__(self):
        if int(self.resolution) < 2:
            raise ValueError(f"Voxel resolution must be at least 2, got '{self.resolution}'.")
        if not 0.0 <= self.padding < self.resolution / 2.0:
            raise ValueError(f"Voxel padding '{self.padding}' does not fit resolution '{self.resolution}'.")
        if not 0.0 < self.leakFraction <= 1.0:
            raise ValueError(f"Leak fraction must lie in (0, 1], got '{self.leakFraction}'.")
