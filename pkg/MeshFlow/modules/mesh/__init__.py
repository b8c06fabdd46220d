from .triMesh import (
    TriMesh, PointCloud, BoundingBox, UnitCubeTransform, SymmetryPlane,
    boundingBox, normalizeUnitCube, faceAreas, mirrorPoints, planeAxis, asPoints
)
from .io import loadMesh, saveMesh, loadPoints, savePoints, loadShape

__all__ = [
    'TriMesh', 'PointCloud', 'BoundingBox', 'UnitCubeTransform', 'SymmetryPlane',
    'boundingBox', 'normalizeUnitCube', 'faceAreas', 'mirrorPoints', 'planeAxis', 'asPoints',
    'loadMesh', 'saveMesh', 'loadPoints', 'savePoints', 'loadShape'
]
