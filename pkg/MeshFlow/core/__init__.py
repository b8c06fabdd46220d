from .flags import FLOAT, INDEX, BARYCENTRIC_TOLERANCE
from .exceptions import (
    MeshFlowError, MeshFormatError, GeometryError, ShapeMismatchError,
    ConfigError, CheckpointError, TapeError, DivergenceError
)
from . import seeds

__all__ = [
    'FLOAT', 'INDEX', 'BARYCENTRIC_TOLERANCE', 'seeds',
    'MeshFlowError', 'MeshFormatError', 'GeometryError', 'ShapeMismatchError',
    'ConfigError', 'CheckpointError', 'TapeError', 'DivergenceError'
]
