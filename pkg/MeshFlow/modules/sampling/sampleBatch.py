from dataclasses import dataclass
import numpy as np
from MeshFlow.core import FLOAT, INDEX, BARYCENTRIC_TOLERANCE, GeometryError, ShapeMismatchError
from MeshFlow.modules.mesh.triMesh import frozenArray

@dataclass(frozen=True, eq=False)
class SampleBatch:
    """
    Surface samples with the provenance needed to move gradients back to vertices.

    Attributes:
        points (np.ndarray): (N_s, 3) sample positions.
        faceIndex (np.ndarray): (N_s,) face of every sample.
        weights (np.ndarray): (N_s, 3) barycentric weights (w1, w2, w3).
        corners (np.ndarray): (N_s, 3) vertex indices of the sampled faces, the
            rows of the mesh face array selected by `faceIndex`.
        vertexCount (int): N_V of the sampled mesh.
    """

    points: np.ndarray
    faceIndex: np.ndarray
    weights: np.ndarray
    corners: np.ndarray
    vertexCount: int

    def __post_init__(self):
        points = frozenArray(self.points, FLOAT, 3, 'points')
        weights = frozenArray(self.weights, FLOAT, 3, 'weights')
        corners = frozenArray(self.corners, INDEX, 3, 'corners')
        faceIndex = frozenArray(self.faceIndex, INDEX).reshape(-1)

        count = points.shape[0]
        if weights.shape[0] != count or corners.shape[0] != count or faceIndex.shape[0] != count:
            raise ShapeMismatchError(
                f"Sample arrays disagree on the sample count: points '{count}', weights '{weights.shape[0]}', "
                f"corners '{corners.shape[0]}', faces '{faceIndex.shape[0]}'."
            )
        if np.any(weights < 0.0) or np.any(np.abs(weights.sum(axis=1) - 1.0) > BARYCENTRIC_TOLERANCE):
            raise GeometryError("Barycentric weights must be nonnegative and sum to 1.")

        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'corners', corners)
        object.__setattr__(self, 'faceIndex', faceIndex)
        object.__setattr__(self, 'vertexCount', int(self.vertexCount))

    def __len__(self) -> int:
        return self.points.shape[0]

@dataclass(frozen=True, eq=False)
class VertexGradients:
    """
    Per-vertex gradient accumulators; vertices no sample touches hold exact zeros.

    Attributes:
        gradients (np.ndarray): (N_V, D) accumulated gradients.
    """

    gradients: np.ndarray

    def __post_init__(self):
        gradients = np.array(self.gradients, dtype=FLOAT)
        gradients.setflags(write=False)
        object.__setattr__(self, 'gradients', gradients)

    def __len__(self) -> int:
        return self.gradients.shape[0]
