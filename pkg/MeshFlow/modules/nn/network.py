"""
PointNet-style encoders and the offset decoder.

Both encoders apply a shared per-point MLP followed by a max pool over the
points, so the global feature does not depend on point order. The decoder maps
`[position, source feature, target feature]` to a 3D offset, one row at a time,
and starts at zero so an untrained network leaves shapes unchanged.
"""

from dataclasses import dataclass
from typing import List
import numpy as np
from MeshFlow.core import GeometryError, ShapeMismatchError, seeds
from .tensor import Tensor
from .tape import Tape
from .ops import maxPoolPoints, concatFeatures, constant
from .mlp import MlpParams
from .params import ArchitectureParams, fingerprint

def encodePointcloud(points, params: MlpParams, tape: Tape | None = None) -> Tensor:
    """
    Global feature of a point cloud.

    Args:
        points: (N, 3) array, PointCloud or Tensor, N >= 1.
        params (MlpParams): Shared per-point MLP.
        tape (Tape, optional): Records the pass for differentiation.

    Returns:
        Tensor: (D_g,) feature, the columnwise maximum of the per-point features.

    Raises:
        GeometryError: If the cloud is empty.
        ShapeMismatchError: If the MLP does not take 3 inputs.
    """
    x = constant(getattr(points, 'points', points))
    if x.data.ndim != 2 or x.shape[1] != 3:
        raise ShapeMismatchError(f"Expected (N, 3) points, got '{x.shape}'.")
    if x.shape[0] == 0:
        raise GeometryError("Cannot encode an empty point cloud.")

    feature, _ = maxPoolPoints(params(x, tape), tape)
    return feature

def offsetDecoder(positions, sourceFeature: Tensor, targetFeature: Tensor, params: MlpParams, tape: Tape | None = None) -> Tensor:
    """
    Offsets `F(v)` of a set of positions given the two global features.

    Args:
        positions: (N, 3) array or Tensor (mesh vertices or surface points).
        sourceFeature (Tensor): (D_g,) source global feature.
        targetFeature (Tensor): (D_g,) target global feature.
        params (MlpParams): Decoder MLP taking 3 + 2 D_g inputs and giving 3 outputs.
        tape (Tape, optional): Records the pass for differentiation.

    Returns:
        Tensor: (N, 3) offsets.
    """
    x = concatFeatures(constant(positions), sourceFeature, targetFeature, tape)
    if x.shape[1] != params.inputs or params.outputs != 3:
        raise ShapeMismatchError(
            f"Decoder '{params.name}' maps '{params.inputs}' to '{params.outputs}', got '{x.shape[1]}' inputs."
        )
    return params(x, tape)

@dataclass(eq=False)
class NetworkParams:
    """
    Parameters of the full deformation network.

    Attributes:
        architecture (ArchitectureParams): Widths.
        sourceEncoder (MlpParams): Per-point MLP of the source encoder.
        targetEncoder (MlpParams): Per-point MLP of the target encoder.
        decoder (MlpParams): Offset decoder.
    """

    architecture: ArchitectureParams
    sourceEncoder: MlpParams
    targetEncoder: MlpParams
    decoder: MlpParams

    @classmethod
    def create(cls, seed: int, architecture: ArchitectureParams | None = None) -> 'NetworkParams':
        """
        Initialize from the seed's init stream: source encoder, target encoder,
        then decoder, whose last layer starts at zero.
        """
        architecture = architecture or ArchitectureParams()
        rng = seeds.stream(seed, seeds.INIT)
        return cls(
            architecture=architecture,
            sourceEncoder=MlpParams.create('sourceEncoder', 3, architecture.encoderWidths, rng),
            targetEncoder=MlpParams.create('targetEncoder', 3, architecture.encoderWidths, rng),
            decoder=MlpParams.create(
                'decoder', architecture.decoderInputSize, architecture.decoderWidths, rng,
                outputActivation='linear', zeroLast=True
            )
        )

    def mlps(self) -> List[MlpParams]:
        return [self.sourceEncoder, self.targetEncoder, self.decoder]

    def parameters(self) -> List[Tensor]:
        return [tensor for mlp in self.mlps() for tensor in mlp.parameters()]

    def fingerprint(self) -> str:
        return fingerprint([entry for mlp in self.mlps() for entry in mlp.layout()])

    def snapshot(self) -> List[np.ndarray]:
        """Copies of every parameter array, in `parameters()` order."""
        return [tensor.data.copy() for tensor in self.parameters()]

