"""
Chamfer loss with exact gradients.

Nearest neighbors come from a KD-tree (`scipy.spatial.cKDTree`), with an
exhaustive search kept as the reference path. Both paths break distance ties
toward the lowest reference index and recompute squared distances with the same
expression, so they agree bit for bit whenever they pick the same neighbors.
"""

import numpy as np
from scipy.spatial import cKDTree
from MeshFlow.core import FLOAT, GeometryError
from .params import LossTerm

TIERELATIVE = 1e-9
"""Relative slack on the nearest distance when collecting tied neighbors."""

TIEABSOLUTE = 1e-12
"""Absolute slack on the nearest distance when collecting tied neighbors."""

BRUTECHUNK = 1024
"""Query rows per block of the exhaustive search."""

def pointArray(points, name: str) -> np.ndarray:
    array = np.asarray(getattr(points, 'points', points), dtype=FLOAT).reshape(-1, 3)
    if array.shape[0] == 0:
        raise GeometryError(f"The point set '{name}' is empty.")
    return array

def squaredDistances(query: np.ndarray, reference: np.ndarray, index: np.ndarray) -> np.ndarray:
    return np.sum((query - reference[index]) ** 2, axis=1)

def nearestBruteForce(query: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """
    Exhaustive nearest neighbor of every query point (lowest index on ties).
    """
    index = np.empty(query.shape[0], dtype=np.int64)
    for start in range(0, query.shape[0], BRUTECHUNK):
        block = query[start:start + BRUTECHUNK]
        distances = np.sum((block[:, None, :] - reference[None, :, :]) ** 2, axis=2)
        index[start:start + BRUTECHUNK] = np.argmin(distances, axis=1)
    return index

def nearestKdTree(query: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """
    KD-tree nearest neighbor of every query point (lowest index on ties).

    Rows whose two closest candidates are not clearly apart are settled by
    gathering every reference point within the nearest distance and taking
    the lowest index among the exact minima, so the result agrees with
    `nearestBruteForce` bit for bit.
    """
    tree = cKDTree(reference)
    if reference.shape[0] == 1:
        return np.zeros(query.shape[0], dtype=np.int64)

    distances, candidates = tree.query(query, k=2)
    index = candidates[:, 0].astype(np.int64)
    ambiguous = np.flatnonzero(distances[:, 1] <= distances[:, 0] * (1.0 + TIERELATIVE) + TIEABSOLUTE)

    if ambiguous.size == 0:
        return index

    radii = distances[ambiguous, 0] * (1.0 + TIERELATIVE) + TIEABSOLUTE
    for row, neighbors in zip(ambiguous, tree.query_ball_point(query[ambiguous], r=radii)):
        neighbors = np.sort(np.asarray(neighbors, dtype=np.int64))
        exact = np.sum((query[row] - reference[neighbors]) ** 2, axis=1)
        index[row] = neighbors[np.argmin(exact)]
    return index

def nearestNeighbors(query, reference, bruteForce: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """
    Nearest reference point of every query point.

    Args:
        query: (n, 3) points or a PointCloud.
        reference: (m, 3) points or a PointCloud.
        bruteForce (bool): Use the exhaustive search instead of the KD-tree.

    Returns:
        tuple: (indices into reference, squared distances).
    """
    query = pointArray(query, 'query')
    reference = pointArray(reference, 'reference')
    index = nearestBruteForce(query, reference) if bruteForce else nearestKdTree(query, reference)
    return index, squaredDistances(query, reference, index)

def chamfer(pc, pcTarget, bruteForce: bool = False, role: str = 'points') -> LossTerm:
    """
    Symmetric sum of squared nearest-neighbor distances.

    `sum_p min_q |p - q|^2 + sum_q min_p |p - q|^2`, differentiated with
    respect to `pc`; the second sum reaches `pc` through the points picked as
    nearest neighbors of the target points.

    Args:
        pc: (n, 3) points or PointCloud, the differentiated set.
        pcTarget: (m, 3) points or PointCloud.
        bruteForce (bool): Use the exhaustive neighbor search.
        role (str): Key of the gradient in the returned term.

    Returns:
        LossTerm: Value and `{role: (n, 3) gradient}`.

    Raises:
        GeometryError: If a point set is empty.
    """
    source = pointArray(pc, 'pc')
    target = pointArray(pcTarget, 'pcTarget')

    forward, forwardSq = nearestNeighbors(source, target, bruteForce)
    backward, backwardSq = nearestNeighbors(target, source, bruteForce)
    value = float(np.sum(forwardSq) + np.sum(backwardSq))

    gradient = 2.0 * (source - target[forward])
    np.add.at(gradient, backward, 2.0 * (source[backward] - target))

    return LossTerm(value=value, gradients={role: gradient})
