import itertools
import numpy as np
import pytest
from MeshFlow.modules.mesh import TriMesh, PointCloud
from MeshFlow.modules.nn import ArchitectureParams, NetworkParams
from MeshFlow.modules.losses import LossWeights
from MeshFlow.modules.deform import PipelineParams

BOXFACES = [
    (0, 1, 3), (0, 3, 2),
    (4, 6, 7), (4, 7, 5),
    (0, 4, 5), (0, 5, 1),
    (2, 3, 7), (2, 7, 6),
    (0, 2, 6), (0, 6, 4),
    (1, 5, 7), (1, 7, 3),
]

def boxMesh(low=(-0.5, -0.5, -0.5), high=(0.5, 0.5, 0.5)) -> TriMesh:
    """Closed box; vertex index is 4 * x + 2 * y + z of its corner bits."""
    corners = [
        [(low, high)[bx][0], (low, high)[by][1], (low, high)[bz][2]]
        for bx, by, bz in itertools.product((0, 1), repeat=3)
    ]
    return TriMesh(np.array(corners, dtype=float), np.array(BOXFACES))

@pytest.fixture
def makeBox():
    return boxMesh

@pytest.fixture
def cube() -> TriMesh:
    return boxMesh()

@pytest.fixture
def tetrahedron() -> TriMesh:
    vertices = [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)]
    faces = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)]
    return TriMesh(np.array(vertices), np.array(faces))

@pytest.fixture
def square() -> TriMesh:
    """Unit square in the z = 0 plane, split along its diagonal."""
    vertices = [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, 0.0), (0.0, 1.0, 0.0)]
    return TriMesh(np.array(vertices), np.array([(0, 1, 2), (0, 2, 3)]))

@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)

@pytest.fixture
def cloud(rng) -> PointCloud:
    return PointCloud(rng.normal(size=(32, 3)))

@pytest.fixture
def tinyArchitecture() -> ArchitectureParams:
    return ArchitectureParams(encoderWidths=(8, 16), decoderWidths=(16, 3))

@pytest.fixture
def tinyNetwork(tinyArchitecture) -> NetworkParams:
    return NetworkParams.create(7, tinyArchitecture)

@pytest.fixture
def perturbedNetwork(tinyArchitecture) -> NetworkParams:
    """A network whose decoder no longer starts at zero offsets."""
    network = NetworkParams.create(7, tinyArchitecture)
    last = network.decoder.layers[-1]
    noise = np.random.default_rng(99)
    last.weight.data = 0.05 * noise.normal(size=last.weight.shape)
    last.bias.data = 0.05 * noise.normal(size=last.bias.shape)
    return network

@pytest.fixture
def smallPipeline() -> PipelineParams:
    return PipelineParams(meshSamples=64, pointSamples=64, encodeSamples=64)

@pytest.fixture
def chamferOnly() -> PipelineParams:
    weights = LossWeights(cdMesh=1.0, emdMesh=0.0, cdPoints=1.0, emdPoints=0.0, sym=0.0, lap=0.0, lpi=0.0)
    return PipelineParams(weights=weights, meshSamples=64, pointSamples=64, encodeSamples=64)
