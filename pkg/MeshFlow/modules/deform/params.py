import math
from dataclasses import dataclass, field
from typing import Literal
import numpy as np
from MeshFlow.core import FLOAT, ShapeMismatchError
from MeshFlow.modules.mesh import TriMesh, PointCloud, planeAxis
from MeshFlow.modules.losses import LossWeights, LpiConfig, EXACTTHRESHOLD

DeformMode = Literal['network', 'direct', 'train']
SymmetrySamples = Literal['mesh', 'points', 'both']

@dataclass(frozen=True)
class PipelineParams:
    """
    Loss and sampling options of one forward pass.

    Attributes:
        weights (LossWeights): Term weights.
        meshSamples (int): Samples drawn on the deformed mesh.
        pointSamples (int): Source surface points of the second, per-point pass.
        encodeSamples (int): Points fed to each encoder.
        plane (str): Symmetry plane.
        symmetrySamples (str): Deformed samples the symmetry loss sees:
            'mesh' (default), 'points' or 'both'.
        lpi (LpiConfig): Shifts of the local permutation invariant loss.
        laplacianWeights (str): 'uniform' or 'cotangent'.
        bruteForce (bool): Exhaustive nearest neighbors in the Chamfer terms.
        exactThreshold (int): Largest EMD problem solved exactly.
    """

    weights: LossWeights = field(default_factory=LossWeights)
    meshSamples: int = 2048
    pointSamples: int = 2048
    encodeSamples: int = 2048
    plane: str = 'xz'
    symmetrySamples: SymmetrySamples = 'mesh'
    lpi: LpiConfig = field(default_factory=LpiConfig)
    laplacianWeights: str = 'uniform'
    bruteForce: bool = False
    exactThreshold: int = EXACTTHRESHOLD

    def __post_init__(self):
        for name in ('meshSamples', 'pointSamples', 'encodeSamples'):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"'{name}' must be at least 1, got '{getattr(self, name)}'.")
        planeAxis(self.plane)
        if self.symmetrySamples not in ('mesh', 'points', 'both'):
            raise ValueError(f"Unknown symmetry sample set '{self.symmetrySamples}'.")
        if self.laplacianWeights not in ('uniform', 'cotangent'):
            raise ValueError(f"Unknown Laplacian weights '{self.laplacianWeights}'.")

@dataclass(frozen=True, eq=False)
class DeformJob:
    """
    One deformation request.

    Attributes:
        source (TriMesh): Mesh to deform.
        target (PointCloud | TriMesh): Target shape; meshes are surface sampled.
        pipeline (PipelineParams): Losses and sample counts.
        iterations (int): Optimization budget, >= 0.
        stepSize (float): Adam step size, > 0.
        seed (int): Run seed.
        mode (str): 'network', 'direct' or 'train'.
        resample (bool): Draw fresh surface samples at every iteration.
    """

    source: TriMesh
    target: PointCloud | TriMesh
    pipeline: PipelineParams = field(default_factory=PipelineParams)
    iterations: int = 500
    stepSize: float = 1e-3
    seed: int = 0
    mode: DeformMode = 'direct'
    resample: bool = True

    def __post_init__(self):
        if int(self.iterations) < 0:
            raise ValueError(f"Iteration budget must be nonnegative, got '{self.iterations}'.")
        if not (math.isfinite(self.stepSize) and self.stepSize > 0.0):
            raise ValueError(f"Step size must be positive, got '{self.stepSize}'.")
        if self.mode not in ('network', 'direct', 'train'):
            raise ValueError(f"Unknown deformation mode '{self.mode}'.")

@dataclass(frozen=True, eq=False)
class OffsetField:
    """
    Per-vertex or per-point displacements.

    Attributes:
        offsets (np.ndarray): (N, 3) finite displacement vectors.
    """

    offsets: np.ndarray

    def __post_init__(self):
        offsets = np.array(self.offsets, dtype=FLOAT)
        if offsets.ndim != 2 or offsets.shape[1] != 3:
            raise ShapeMismatchError(f"Offsets must be (N, 3), got '{offsets.shape}'.")
        if not np.all(np.isfinite(offsets)):
            raise ValueError("Offsets must be finite.")
        offsets.setflags(write=False)
        object.__setattr__(self, 'offsets', offsets)

    def __len__(self) -> int:
        return self.offsets.shape[0]

@dataclass(frozen=True)
class TrainParams:
    """
    Training loop options.

    Attributes:
        steps (int): Parameter updates; pairs are visited in order, one per step.
        learningRate (float): Adam step size, >= 0.
        seed (int): Run seed.
        resample (bool): Fresh samples at every step; otherwise every step reuses step 0's.
        pipeline (PipelineParams): Losses and sample counts.
    """

    steps: int = 200
    learningRate: float = 1e-4
    seed: int = 0
    resample: bool = True
    pipeline: PipelineParams = field(default_factory=PipelineParams)

    def __post_init__(self):
        if int(self.steps) < 0:
            raise ValueError(f"Step count must be nonnegative, got '{self.steps}'.")
        if not (math.isfinite(self.learningRate) and self.learningRate >= 0.0):
            raise ValueError(f"Learning rate must be nonnegative, got '{self.learningRate}'.")

@dataclass(frozen=True)
class AutoencoderParams:
    """
    Options of the embedding autoencoder.

    Attributes:
        steps (int): Updates; clouds are visited in order, one per step.
        learningRate (float): Adam step size.
        samples (int): Input points per step.
        outputPoints (int): Points reconstructed by the decoder.
        encoderWidths (tuple): Encoder widths; the last is the embedding size.
        hiddenWidth (int): Hidden width of the decoder.
        seed (int): Run seed.
    """

    steps: int = 200
    learningRate: float = 1e-3
    samples: int = 256
    outputPoints: int = 256
    encoderWidths: tuple = (64, 128, 256)
    hiddenWidth: int = 256
    seed: int = 0

    def __post_init__(self):
        if int(self.steps) < 0 or int(self.samples) < 1 or int(self.outputPoints) < 1:
            raise ValueError("Autoencoder steps must be >= 0 and point counts >= 1.")
        if not self.learningRate >= 0.0:
            raise ValueError(f"Learning rate must be nonnegative, got '{self.learningRate}'.")
