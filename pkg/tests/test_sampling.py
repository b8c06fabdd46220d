import numpy as np
import pytest
from scipy.stats import chisquare
from MeshFlow.core import GeometryError, ShapeMismatchError
from MeshFlow.modules.mesh import TriMesh, PointCloud
from MeshFlow.modules.sampling import (
    sampleSurface, samplesFromWeights, propagate, scatterGradients, subsamplePoints, sampleShape
)

def test_same_generator_state_gives_same_samples(cube):
    a = sampleSurface(cube, 100, 11)
    b = sampleSurface(cube, 100, np.random.default_rng(11))
    assert np.array_equal(a.points, b.points)
    assert np.array_equal(a.faceIndex, b.faceIndex)

def test_samples_lie_on_their_faces(tetrahedron):
    batch = sampleSurface(tetrahedron, 500, 0)
    assert np.all(batch.weights >= 0.0)
    assert np.allclose(batch.weights.sum(axis=1), 1.0)
    assert np.array_equal(batch.corners, tetrahedron.faces[batch.faceIndex])
    rebuilt = np.einsum('nk,nkd->nd', batch.weights, tetrahedron.vertices[batch.corners])
    assert np.allclose(rebuilt, batch.points, atol=1e-12)

def test_faces_are_chosen_by_area():
    # Second triangle has three times the area of the first
    vertices = np.array([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (3, 0, 1), (0, 1, 1)], dtype=float)
    mesh = TriMesh(vertices, np.array([(0, 1, 2), (3, 4, 5)]))
    batch = sampleSurface(mesh, 100_000, 5)
    assert abs(np.mean(batch.faceIndex == 0) - 0.25) < 0.01

def test_samples_spread_uniformly_over_the_surface(square):
    points = sampleSurface(square, 100_000, 2024).points
    cells = np.minimum((points[:, :2] * 4).astype(int), 3)
    counts = np.bincount(cells[:, 0] * 4 + cells[:, 1], minlength=16)
    assert chisquare(counts).pvalue > 0.001

def test_zero_area_faces_are_never_chosen(square):
    vertices = np.vstack([square.vertices, [(2.0, 0.0, 0.0)]])
    mesh = TriMesh(vertices, np.vstack([square.faces, [(0, 1, 4)]]))
    batch = sampleSurface(mesh, 2000, 1)
    assert not np.any(batch.faceIndex == 2)
    with pytest.raises(GeometryError):
        samplesFromWeights(mesh, [2], [(1.0, 0.0, 0.0)])

def test_invalid_requests(square):
    with pytest.raises(ValueError):
        sampleSurface(square, 0, 0)
    flat = TriMesh(np.array([(0, 0, 0), (1, 0, 0), (2, 0, 0)], dtype=float), np.array([(0, 1, 2)]))
    with pytest.raises(GeometryError):
        sampleSurface(flat, 4, 0)

def test_propagated_positions_are_the_samples(cube):
    batch = sampleSurface(cube, 64, 2)
    assert np.allclose(propagate(batch, cube.vertices), batch.points, atol=1e-12)
    with pytest.raises(ShapeMismatchError):
        propagate(batch, np.zeros((3, 3)))

def test_scatter_is_the_adjoint_of_propagate(tetrahedron, rng):
    batch = sampleSurface(tetrahedron, 50, 3)
    features = rng.normal(size=(4, 3))
    sampleGrads = rng.normal(size=(50, 3))
    lhs = np.sum(propagate(batch, features) * sampleGrads)
    rhs = np.sum(features * scatterGradients(batch, sampleGrads).gradients)
    assert np.isclose(lhs, rhs, rtol=1e-12)

def test_scatter_distributes_barycentric_weights(square):
    batch = samplesFromWeights(square, [0], [(0.2, 0.3, 0.5)])
    gradients = scatterGradients(batch, np.array([[1.0, 2.0, 0.0]])).gradients
    assert np.allclose(gradients, [(0.2, 0.4, 0.0), (0.3, 0.6, 0.0), (0.5, 1.0, 0.0), (0.0, 0.0, 0.0)])

def test_untouched_vertices_get_exact_zeros(square):
    mesh = TriMesh(np.vstack([square.vertices, [(5.0, 5.0, 5.0)]]), square.faces)
    batch = sampleSurface(mesh, 40, 4)
    gradients = scatterGradients(batch, np.ones((40, 3))).gradients
    assert gradients.shape == (5, 3)
    assert np.all(gradients[4] == 0.0)
    with pytest.raises(ShapeMismatchError):
        scatterGradients(batch, np.ones((40, 3)), nVertices=4)

def test_subsample_points(cloud):
    assert len(subsamplePoints(cloud, 10, 0)) == 10
    assert len(np.unique(subsamplePoints(cloud, 32, 0).points, axis=0)) == 32
    assert len(subsamplePoints(cloud, 100, 0)) == 100

def test_sample_shape_handles_both_kinds(cube, cloud):
    assert isinstance(sampleShape(cube, 16, 0), PointCloud)
    assert len(sampleShape(cloud, 16, 0)) == 16
