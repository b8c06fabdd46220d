"""
Linear assignment solvers used by the Earth Mover's loss.

Small problems are solved exactly with the shortest augmenting path method of
`scipy.optimize.linear_sum_assignment`; dual potentials for an exact solution
can be recovered with `assignmentDuals`. Large problems use a Jacobi auction
with epsilon scaling, whose prices bound the distance to the optimum.
"""

import logging
import numpy as np
from scipy.optimize import linear_sum_assignment
from MeshFlow.core import FLOAT, ShapeMismatchError

logger = logging.getLogger(__name__)

def squareCost(cost) -> np.ndarray:
    cost = np.asarray(cost, dtype=FLOAT)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ShapeMismatchError(f"Assignment needs a square cost matrix, got '{cost.shape}'.")
    return cost

def exactAssignment(cost) -> np.ndarray:
    """
    Minimum-cost perfect matching.

    Args:
        cost: (n, n) cost matrix.

    Returns:
        np.ndarray: (n,) column assigned to every row.
    """
    cost = squareCost(cost)
    rows, cols = linear_sum_assignment(cost)
    assigned = np.empty(cost.shape[0], dtype=np.int64)
    assigned[rows] = cols
    return assigned

def assignmentDuals(cost, assigned, maxSweeps: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """
    Dual potentials (u, v) certifying an optimal assignment.

    Column potentials are shortest-path distances in the residual graph, where
    column k reaches column j at cost `c[r_k, j] - c[r_k, k]` and r_k is the row
    matched to k; row potentials follow as `u_i = c[i, a_i] - v[a_i]`. Reduced
    costs `c - u - v` are then nonnegative and vanish on matched pairs.

    Args:
        cost: (n, n) cost matrix.
        assigned: (n,) column of every row.
        maxSweeps (int, optional): Relaxation sweeps. Defaults to n + 1.

    Returns:
        tuple: (u, v), each (n,).

    Raises:
        ValueError: If the assignment admits a negative cycle (it is not optimal).
    """
    cost = squareCost(cost)
    assigned = np.asarray(assigned, dtype=np.int64)
    n = cost.shape[0]

    rowOfColumn = np.empty(n, dtype=np.int64)
    rowOfColumn[assigned] = np.arange(n)
    matchedCost = cost[rowOfColumn, np.arange(n)]
    step = cost[rowOfColumn, :] - matchedCost[:, None]

    # Rounding on zero-cost cycles must not count as progress
    tolerance = 1e-12 * max(1.0, float(np.abs(cost).max()))
    v = np.zeros(n, dtype=FLOAT)
    for _ in range(maxSweeps or n + 1):
        relaxed = np.minimum(v, np.min(v[:, None] + step, axis=0))
        if np.all(relaxed >= v - tolerance):
            break
        v = relaxed
    else:
        raise ValueError("The assignment is not optimal: its residual graph has a negative cycle.")

    u = cost[np.arange(n), assigned] - v[assigned]
    return u, v

def unhappyRows(benefit: np.ndarray, prices: np.ndarray, assigned: np.ndarray, epsilon: float) -> np.ndarray:
    """
    Rows whose column is no longer within `epsilon` of their best value at the
    current prices, the ones that must bid again in the next phase.
    """
    values = benefit - prices
    held = values[np.arange(assigned.size), assigned]
    return np.flatnonzero(held < values.max(axis=1) - epsilon)

def auctionAssignment(
    cost,
    relativeTolerance: float = 1e-6,
    scaling: float = 5.0
) -> tuple[np.ndarray, float]:
    """
    Approximate minimum-cost matching by an epsilon-scaling auction.

    Every unassigned row bids for its most profitable column at once; each
    column goes to its highest bidder (lowest row on equal bids). Epsilon
    shrinks by `scaling` per phase down to `range(cost) * relativeTolerance / n`,
    so the final matching is within `n * epsilon` of optimal. Prices carry over
    between phases, and so do the pairs still within the new epsilon of their
    row's best value; only the other rows bid again.

    Args:
        cost: (n, n) cost matrix.
        relativeTolerance (float): Final epsilon relative to the cost range, times n.
        scaling (float): Epsilon reduction factor per phase, > 1.

    Returns:
        tuple: (column of every row, duality gap of the final prices).
    """
    cost = squareCost(cost)
    n = cost.shape[0]
    benefit = -cost
    spread = float(benefit.max() - benefit.min())
    finalEpsilon = max(spread, 1.0) * relativeTolerance / n
    epsilon = max(spread / scaling, finalEpsilon)

    prices = np.zeros(n, dtype=FLOAT)
    owner = np.full(n, -1, dtype=np.int64)
    assigned = np.full(n, -1, dtype=np.int64)
    rows = np.arange(n)
    phases = 0

    while True:
        phases += 1
        if phases > 1:
            released = unhappyRows(benefit, prices, assigned, epsilon)
            owner[assigned[released]] = -1
            assigned[released] = -1

        while True:
            bidders = np.flatnonzero(assigned < 0)
            if bidders.size == 0:
                break

            values = benefit[bidders] - prices
            best = np.argmax(values, axis=1)
            bestValue = values[np.arange(bidders.size), best]
            if n > 1:
                values[np.arange(bidders.size), best] = -np.inf
                secondValue = values.max(axis=1)
            else:
                secondValue = bestValue
            bids = prices[best] + (bestValue - secondValue) + epsilon

            order = np.lexsort((bidders, -bids, best))
            columns, first = np.unique(best[order], return_index=True)
            winners = bidders[order][first]
            winningBids = bids[order][first]

            previous = owner[columns]
            assigned[previous[previous >= 0]] = -1
            owner[columns] = winners
            assigned[winners] = columns
            prices[columns] = winningBids

        if epsilon <= finalEpsilon:
            break
        epsilon = max(epsilon / scaling, finalEpsilon)

    primal = float(benefit[rows, assigned].sum())
    dual = float(np.max(benefit - prices, axis=1).sum() + prices.sum())
    gap = max(dual - primal, 0.0)
    logger.debug(f"Auction finished after {phases} phase(s) with gap '{gap}'.")
    return assigned, gap
