"""
MeshFlow: differentiable deformation of triangle meshes toward point cloud or
mesh targets, with the losses, network and metrics it needs.
"""

from . import core
from . import typing
from . import injectors
from . import builders
from . import stores
from . import utils
from . import modules
from .modules import mesh, sampling, losses, nn, deform, metrics

__version__ = '0.1.0'

__all__ = [
    'core', 'typing', 'injectors', 'builders', 'stores', 'utils', 'modules',
    'mesh', 'sampling', 'losses', 'nn', 'deform', 'metrics'
]
