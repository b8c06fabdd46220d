from . import mesh
from . import sampling
from . import losses
from . import nn
from . import deform
from . import metrics

__all__ = ['mesh', 'sampling', 'losses', 'nn', 'deform', 'metrics']
