from .tensor import Tensor
from .tape import Tape, GradientMap, backward
from .ops import (
    linear, relu, maxPoolPoints, concatFeatures, add, scale, sumAll, sumSquares,
    interpolate, external, constant, reshape
)
from .params import ArchitectureParams, ENCODER_WIDTHS, DECODER_WIDTHS, fingerprint
from .mlp import Layer, MlpParams
from .network import NetworkParams, encodePointcloud, offsetDecoder
from .optim import Adam
from .checkpoint import saveCheckpoint, loadCheckpoint, saveEncoder, loadEncoder

__all__ = [
    'Tensor', 'Tape', 'GradientMap', 'backward',
    'linear', 'relu', 'maxPoolPoints', 'concatFeatures', 'add', 'scale', 'sumAll', 'sumSquares',
    'interpolate', 'external', 'constant', 'reshape',
    'ArchitectureParams', 'ENCODER_WIDTHS', 'DECODER_WIDTHS', 'fingerprint',
    'Layer', 'MlpParams', 'NetworkParams', 'encodePointcloud', 'offsetDecoder',
    'Adam', 'saveCheckpoint', 'loadCheckpoint', 'saveEncoder', 'loadEncoder'
]
