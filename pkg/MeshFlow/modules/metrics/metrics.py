import logging
from dataclasses import dataclass
from typing import Any, Dict
import numpy as np
from MeshFlow.builders import JSON
from MeshFlow.core import ShapeMismatchError, seeds
from MeshFlow.modules.mesh import TriMesh, PointCloud, normalizeUnitCube
from MeshFlow.modules.sampling import sampleShape
from MeshFlow.modules.losses import chamfer, emd, EXACTTHRESHOLD
from .params import VoxelParams
from .voxel import VoxelGrid, voxelizeSolid

logger = logging.getLogger(__name__)

FIELDS = ('cd', 'emd', 'iou', 'leak')

@dataclass(frozen=True)
class MetricReport:
    """
    Evaluation of one shape pair.

    Attributes:
        cd (float | None): Chamfer distance.
        emd (float | None): Earth Mover's distance; None when the clouds differ in size.
        iou (float | None): Solid IoU; None unless both shapes are meshes.
        leak (bool): A voxelization fell back to surface-only occupancy.
    """

    cd: float | None = None
    emd: float | None = None
    iou: float | None = None
    leak: bool = False

    def __post_init__(self):
        for name in ('cd', 'emd'):
            value = getattr(self, name)
            if value is not None and not value >= 0.0:
                raise ValueError(f"Metric '{name}' must be nonnegative, got '{value}'.")
        if self.iou is not None and not 0.0 <= self.iou <= 1.0:
            raise ValueError(f"IoU must lie in [0, 1], got '{self.iou}'.")

    def record(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in FIELDS}

    def line(self) -> str:
        """Single-line JSON record, fields in the order cd, emd, iou, leak."""
        return JSON.line(self.record())

    @staticmethod
    def csvHeader() -> str:
        return ','.join(FIELDS)

    def csvRow(self) -> str:
        """CSV row; absent metrics are empty cells and the leak flag is 0 or 1."""
        cells = ['' if getattr(self, name) is None else repr(float(getattr(self, name))) for name in FIELDS[:3]]
        return ','.join(cells + [str(int(self.leak))])

    def scaled(self) -> Dict[str, Any]:
        """Record in reporting units: CD x 1e3, EMD x 1e2, IoU in percent."""
        factors = {'cd': 1e3, 'emd': 1e2, 'iou': 100.0}
        record = self.record()
        for name, factor in factors.items():
            if record[name] is not None:
                record[name] = record[name] * factor
        return record

def metricCd(a, b) -> float:
    """Chamfer distance of two nonempty clouds (sum of squared nearest distances both ways)."""
    return chamfer(a, b).value

def metricEmd(a, b, exactThreshold: int = EXACTTHRESHOLD) -> float:
    """
    Earth Mover's distance of two clouds of equal size.

    Raises:
        ShapeMismatchError: If the sizes differ.
    """
    return emd(a, b, exactThreshold=exactThreshold).value

def metricIou(a: VoxelGrid, b: VoxelGrid) -> float:
    """
    `|A and B| / |A or B|`, or 1 when both grids are empty.

    Raises:
        ShapeMismatchError: If the grids do not share resolution and frame.
    """
    if not a.sameFrame(b):
        raise ShapeMismatchError("IoU needs two grids of the same resolution and frame.")
    union = int(np.logical_or(a.occupancy, b.occupancy).sum())
    if union == 0:
        return 1.0
    return int(np.logical_and(a.occupancy, b.occupancy).sum()) / union

def evaluationCloud(shape: TriMesh | PointCloud, samples: int, seed: int) -> PointCloud:
    if isinstance(shape, TriMesh):
        return sampleShape(shape, samples, seeds.stream(seed, seeds.CLI_SAMPLE))
    return shape

def evaluateShapes(
    a: TriMesh | PointCloud,
    b: TriMesh | PointCloud,
    samples: int = 2048,
    seed: int = 0,
    voxels: VoxelParams | None = None,
    exactThreshold: int = EXACTTHRESHOLD
) -> MetricReport:
    """
    All metrics of a shape pair, each shape normalized to the unit cube on its own.

    Meshes are surface sampled with `samples` points from the same seed stream,
    clouds are used as given. EMD is left out (and logged) when the clouds
    differ in size; IoU is computed only when both shapes are meshes.
    """
    a, _ = normalizeUnitCube(a)
    b, _ = normalizeUnitCube(b)
    cloudA = evaluationCloud(a, samples, seed)
    cloudB = evaluationCloud(b, samples, seed)

    distance = None
    try:
        distance = metricEmd(cloudA, cloudB, exactThreshold)
    except ShapeMismatchError as e:
        logger.warning(f"EMD not computed: {e}")

    iou, leak = None, False
    if isinstance(a, TriMesh) and isinstance(b, TriMesh):
        voxels = voxels or VoxelParams()
        gridA = voxelizeSolid(a, params=voxels)
        gridB = voxelizeSolid(b, params=voxels)
        iou, leak = metricIou(gridA, gridB), gridA.leak or gridB.leak

    return MetricReport(cd=metricCd(cloudA, cloudB), emd=distance, iou=iou, leak=leak)
