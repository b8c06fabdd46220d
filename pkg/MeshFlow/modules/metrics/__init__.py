from .params import VoxelParams, UNITCUBE
from .voxel import VoxelGrid, voxelizeSolid, triangleBoxOverlap, gridFrame
from .metrics import MetricReport, metricCd, metricEmd, metricIou, evaluateShapes

__all__ = [
    'VoxelParams', 'UNITCUBE', 'VoxelGrid', 'voxelizeSolid', 'triangleBoxOverlap', 'gridFrame',
    'MetricReport', 'metricCd', 'metricEmd', 'metricIou', 'evaluateShapes'
]
