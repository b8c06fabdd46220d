"""
Mesh Laplacian operators and the Laplacian coordinate loss.

`Lap(X)_i = sum_j W_ij (x_i - x_j)` with rows of W summing to one over the
neighbors of i: uniform (umbrella) weights `1 / |N(i)|` by default, clamped and
normalized cotangent weights on request. Isolated vertices map to zero.
Evaluating the operator on edge differences keeps it exactly translation
invariant whenever the differences themselves are exact.
"""

from dataclasses import dataclass
from typing import Literal
import numpy as np
from scipy import sparse
from MeshFlow.core import FLOAT, ShapeMismatchError
from MeshFlow.modules.mesh import TriMesh
from .params import LossTerm

LaplacianWeights = Literal['uniform', 'cotangent']

def edgeAdjacency(mesh: TriMesh) -> sparse.csr_matrix:
    """
    Binary symmetric vertex adjacency of the triangle edges.
    """
    t0, t1, t2 = mesh.faces[:, 0], mesh.faces[:, 1], mesh.faces[:, 2]
    i = np.concatenate([t0, t1, t1, t2, t2, t0])
    j = np.concatenate([t1, t0, t2, t1, t0, t2])
    n = mesh.vertexCount
    adjacency = sparse.csr_matrix((np.ones(i.shape, dtype=FLOAT), (i, j)), shape=(n, n))
    adjacency.data[:] = 1.0
    return adjacency

def cotangentWeights(mesh: TriMesh) -> sparse.csr_matrix:
    """
    Symmetric half-cotangent edge weights, negative values clamped to zero.
    """
    v = mesh.vertices
    rows, cols, values = [], [], []
    for corner in range(3):
        a = mesh.faces[:, corner]
        b = mesh.faces[:, (corner + 1) % 3]
        c = mesh.faces[:, (corner + 2) % 3]
        # Angle at a is opposite edge (b, c)
        u = v[b] - v[a]
        w = v[c] - v[a]
        crossNorm = np.linalg.norm(np.cross(u, w), axis=1)
        dot = np.sum(u * w, axis=1)
        cot = np.divide(dot, crossNorm, out=np.zeros_like(dot), where=crossNorm > 0.0)
        rows += [b, c]
        cols += [c, b]
        values += [cot / 2.0, cot / 2.0]

    n = mesh.vertexCount
    weights = sparse.csr_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    weights.data = np.maximum(weights.data, 0.0)
    weights.eliminate_zeros()
    return weights

@dataclass(frozen=True, eq=False)
class LaplacianOperator:
    """
    Row-normalized neighbor weights stored as (row, col, weight) triplets.

    Attributes:
        rows (np.ndarray): Vertex i of every weighted pair.
        cols (np.ndarray): Neighbor j of every weighted pair.
        weights (np.ndarray): W_ij, summing to 1 per non-isolated row.
        vertexCount (int): N_V.
    """

    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    vertexCount: int

    @classmethod
    def fromMesh(cls, mesh: TriMesh, weights: LaplacianWeights = 'uniform') -> 'LaplacianOperator':
        if weights == 'uniform':
            raw = edgeAdjacency(mesh)
        elif weights == 'cotangent':
            raw = cotangentWeights(mesh)
        else:
            raise ValueError(f"Unknown Laplacian weights '{weights}'.")

        raw = raw.tocoo()
        rowSums = np.bincount(raw.row, weights=raw.data, minlength=mesh.vertexCount)
        normalized = raw.data / rowSums[raw.row]
        order = np.lexsort((raw.col, raw.row))
        return cls(
            rows=raw.row[order].astype(np.int64),
            cols=raw.col[order].astype(np.int64),
            weights=normalized[order],
            vertexCount=mesh.vertexCount
        )

    def accumulate(self, index: np.ndarray, values: np.ndarray) -> np.ndarray:
        return np.stack(
            [np.bincount(index, weights=values[:, d], minlength=self.vertexCount) for d in range(values.shape[1])],
            axis=1
        )

    def apply(self, positions: np.ndarray) -> np.ndarray:
        """Laplacian coordinates of (N_V, 3) positions."""
        positions = np.asarray(positions, dtype=FLOAT)
        if positions.shape[0] != self.vertexCount:
            raise ShapeMismatchError(f"Expected '{self.vertexCount}' positions, got '{positions.shape[0]}'.")
        differences = positions[self.rows] - positions[self.cols]
        return self.accumulate(self.rows, self.weights[:, None] * differences)

    def adjoint(self, gradients: np.ndarray) -> np.ndarray:
        """Transpose of `apply`, applied to (N_V, 3) gradients."""
        scaled = self.weights[:, None] * np.asarray(gradients, dtype=FLOAT)[self.rows]
        return self.accumulate(self.rows, scaled) - self.accumulate(self.cols, scaled)

    def matrix(self) -> sparse.csr_matrix:
        """The operator as an (N_V, N_V) sparse matrix `I - W` on connected rows."""
        n = self.vertexCount
        neighbors = sparse.csr_matrix((self.weights, (self.rows, self.cols)), shape=(n, n))
        connected = np.zeros(n, dtype=FLOAT)
        connected[np.unique(self.rows)] = 1.0
        return (sparse.diags(connected) - neighbors).tocsr()

def laplacianMatrix(mesh: TriMesh, weights: LaplacianWeights = 'uniform') -> sparse.csr_matrix:
    """
    Sparse (N_V, N_V) mesh Laplacian, `Lap(V)_i = v_i - mean of its neighbors`
    for uniform weights. Isolated vertices give zero rows.
    """
    return LaplacianOperator.fromMesh(mesh, weights).matrix()

def laplacianLoss(
    source: TriMesh,
    deformedVertices,
    weights: LaplacianWeights = 'uniform',
    operator: LaplacianOperator | None = None,
    role: str = 'vertices'
) -> LossTerm:
    """
    Sum over vertices of `|Lap(S)_i - Lap(S')_i|`, with S' the source
    connectivity on the deformed vertices.

    Args:
        source (TriMesh): Undeformed mesh.
        deformedVertices: (N_V, 3) positions of S'.
        weights (str): 'uniform' or 'cotangent'; ignored when `operator` is given.
        operator (LaplacianOperator, optional): Prebuilt operator of the source.
        role (str): Key of the gradient in the returned term.

    Returns:
        LossTerm: Value and `{role: (N_V, 3) gradient}`; a vertex whose Laplacian
        coordinate is unchanged contributes a zero subgradient.

    Raises:
        ShapeMismatchError: If the vertex counts differ.
    """
    deformed = np.asarray(getattr(deformedVertices, 'vertices', deformedVertices), dtype=FLOAT)
    if deformed.shape != source.vertices.shape:
        raise ShapeMismatchError(
            f"Expected deformed vertices of shape '{source.vertices.shape}', got '{deformed.shape}'."
        )

    operator = operator or LaplacianOperator.fromMesh(source, weights)
    difference = operator.apply(source.vertices) - operator.apply(deformed)
    norms = np.linalg.norm(difference, axis=1)

    direction = np.zeros_like(difference)
    moving = norms > 0.0
    direction[moving] = difference[moving] / norms[moving, None]

    return LossTerm(value=float(norms.sum()), gradients={role: -operator.adjoint(direction)})
