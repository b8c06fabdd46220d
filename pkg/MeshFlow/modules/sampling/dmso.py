"""
Differentiable mesh sampling.

Points are drawn uniformly by area on a mesh and remember the face and
barycentric weights they came from. Those stored weights drive both
directions of the operator: `propagate` interpolates any per-vertex feature
(positions, offsets) to the samples, and `scatterGradients` is its exact
adjoint, returning `w_i * g` to the three corners of each sample's face.

Random draws happen in a fixed order for a given generator: one uniform per
sample for the face choice, then two per sample for the barycentric warp.
"""

import numpy as np
from MeshFlow.core import FLOAT, INDEX, GeometryError, ShapeMismatchError
from MeshFlow.modules.mesh import TriMesh, PointCloud, faceAreas
from .sampleBatch import SampleBatch, VertexGradients

def asGenerator(rng: np.random.Generator | int) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(int(rng))

def barycentricWarp(r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """
    Map two uniforms in [0, 1) to weights uniform over the triangle.

    Returns:
        np.ndarray: (n, 3) weights `(1 - sqrt(r1), sqrt(r1)(1 - r2), sqrt(r1) r2)`.
    """
    root = np.sqrt(r1)
    return np.stack([1.0 - root, root * (1.0 - r2), root * r2], axis=1)

def chooseFaces(areas: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """
    Invert the area CDF: face k is chosen with probability area_k / total.

    Zero-area faces own an empty CDF interval and are never chosen.
    """
    cdf = np.cumsum(areas)
    total = cdf[-1]
    chosen = np.searchsorted(cdf, uniforms * total, side='right')
    # Rounding can push a draw past the last positive face
    lastPositive = int(np.flatnonzero(areas > 0.0)[-1])
    return np.minimum(chosen, lastPositive).astype(INDEX)

def samplesFromWeights(mesh: TriMesh, faceIndex, weights) -> SampleBatch:
    """
    Build a batch from explicit provenance.

    Args:
        mesh (TriMesh): Sampled mesh.
        faceIndex: (n,) face ids.
        weights: (n, 3) barycentric weights.

    Raises:
        GeometryError: If a face id is out of range or names a zero-area face.
    """
    faceIndex = np.asarray(faceIndex, dtype=INDEX).reshape(-1)
    if faceIndex.size and (faceIndex.min() < 0 or faceIndex.max() >= mesh.faceCount):
        raise GeometryError(f"Sample face ids must lie in [0, {mesh.faceCount}).")
    if np.any(faceAreas(mesh)[faceIndex] <= 0.0):
        raise GeometryError("Samples cannot be placed on zero-area faces.")

    weights = np.asarray(weights, dtype=FLOAT).reshape(-1, 3)
    corners = mesh.faces[faceIndex]
    points = np.einsum('nk,nkd->nd', weights, mesh.vertices[corners])
    return SampleBatch(points, faceIndex, weights, corners, mesh.vertexCount)

def sampleSurface(mesh: TriMesh, n: int, rng: np.random.Generator | int) -> SampleBatch:
    """
    Draw `n` points uniformly by area on the mesh surface.

    Args:
        mesh (TriMesh): Mesh to sample.
        n (int): Sample count, at least 1.
        rng (np.random.Generator | int): Generator, or a seed for a fresh one.

    Returns:
        SampleBatch: Points with their face ids and barycentric weights.

    Raises:
        ValueError: If n < 1.
        GeometryError: If the total surface area is zero.
    """
    if n < 1:
        raise ValueError(f"Sample count must be at least 1, got '{n}'.")

    areas = faceAreas(mesh)
    if not areas.sum() > 0.0:
        raise GeometryError("Cannot sample a mesh with zero surface area.")

    generator = asGenerator(rng)
    faceIndex = chooseFaces(areas, generator.random(n))
    r = generator.random((n, 2))
    return samplesFromWeights(mesh, faceIndex, barycentricWarp(r[:, 0], r[:, 1]))

def propagate(batch: SampleBatch, vertexFeatures: np.ndarray) -> np.ndarray:
    """
    Interpolate per-vertex features to the samples: `w1 f1 + w2 f2 + w3 f3`.

    Args:
        batch (SampleBatch): Samples with stored weights.
        vertexFeatures (np.ndarray): (N_V, D) or (N_V,) features.

    Returns:
        np.ndarray: (N_s, D) or (N_s,) sample features.

    Raises:
        ShapeMismatchError: If the feature rows do not match N_V.
    """
    features = np.asarray(vertexFeatures, dtype=FLOAT)
    if features.shape[0] != batch.vertexCount:
        raise ShapeMismatchError(
            f"Expected '{batch.vertexCount}' vertex feature rows, got '{features.shape[0]}'."
        )
    flat = features.reshape(batch.vertexCount, -1)
    result = np.einsum('nk,nkd->nd', batch.weights, flat[batch.corners])
    return result.reshape((len(batch),) + features.shape[1:])

def scatterGradients(batch: SampleBatch, sampleGrads: np.ndarray, nVertices: int | None = None) -> VertexGradients:
    """
    Adjoint of `propagate`: every corner i of a sample's face receives `w_i * g`.

    Accumulation runs in sample order, so results are reproducible bit for bit.

    Args:
        batch (SampleBatch): Samples with stored weights.
        sampleGrads (np.ndarray): (N_s, D) or (N_s,) gradients at the samples.
        nVertices (int, optional): N_V; defaults to the batch's vertex count.

    Returns:
        VertexGradients: (N_V, D) accumulated gradients.

    Raises:
        ShapeMismatchError: If the gradient rows do not match the batch size or
            nVertices differs from the sampled mesh.
    """
    grads = np.asarray(sampleGrads, dtype=FLOAT)
    vertexCount = batch.vertexCount if nVertices is None else int(nVertices)
    if vertexCount != batch.vertexCount:
        raise ShapeMismatchError(f"Batch was sampled on '{batch.vertexCount}' vertices, not '{vertexCount}'.")
    if grads.shape[0] != len(batch):
        raise ShapeMismatchError(f"Expected '{len(batch)}' sample gradient rows, got '{grads.shape[0]}'.")

    flat = grads.reshape(len(batch), -1)
    contributions = batch.weights[:, :, None] * flat[:, None, :]
    targets = batch.corners.reshape(-1)
    columns = contributions.reshape(-1, flat.shape[1])

    accumulated = np.stack(
        [np.bincount(targets, weights=columns[:, d], minlength=vertexCount) for d in range(flat.shape[1])],
        axis=1
    ) if flat.shape[1] else np.zeros((vertexCount, 0), dtype=FLOAT)
    return VertexGradients(accumulated.reshape((vertexCount,) + grads.shape[1:]))

def subsamplePoints(cloud: PointCloud, n: int, rng: np.random.Generator | int) -> PointCloud:
    """
    Draw `n` points of a cloud: without replacement when it holds at least `n`
    points, with replacement otherwise.
    """
    if n < 1:
        raise ValueError(f"Sample count must be at least 1, got '{n}'.")
    generator = asGenerator(rng)
    count = len(cloud)
    if count >= n:
        chosen = generator.permutation(count)[:n]
    else:
        chosen = generator.integers(0, count, size=n)
    return PointCloud(cloud.points[chosen])

def sampleShape(shape: TriMesh | PointCloud, n: int, rng: np.random.Generator | int) -> PointCloud:
    """
    An `n`-point cloud from a mesh (surface sampling) or from a cloud (subsampling).
    """
    if isinstance(shape, TriMesh):
        return PointCloud(sampleSurface(shape, n, rng).points)
    return subsamplePoints(shape, n, rng)
