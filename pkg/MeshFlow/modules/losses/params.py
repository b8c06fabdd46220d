"""
This file contains the parameter and result objects of the loss module.

Modifying a term name in `TERMS` requires making the same change in the config
schema of the cli module and in the loss trace columns.
"""

import math
from dataclasses import dataclass, field, fields, replace
from typing import Dict, Tuple
import numpy as np

TERMS: Tuple[str, ...] = ('cdMesh', 'emdMesh', 'cdPoints', 'emdPoints', 'sym', 'lap', 'lpi')
"""
Loss terms in combination order:

- **cdMesh** / **emdMesh** → shape losses on samples of the deformed mesh.
- **cdPoints** / **emdPoints** → shape losses on the deformed point-cloud pass.
- **sym** → shape losses on the mirrored deformed samples.
- **lap** → Laplacian coordinate preservation.
- **lpi** → local permutation invariance of the offset field.
"""

ABLATIONS: Dict[str, Tuple[str, ...]] = {
    'none': (),
    'symmetry': ('sym',),
    'laplacian': ('lap',),
    'lpi': ('lpi',),
}
"""Regularizers switched off by each ablation variant."""

@dataclass(frozen=True)
class LossWeights:
    """
    Relative weights of the combined loss. Every weight defaults to 1.0.
    """

    cdMesh: float = 1.0
    emdMesh: float = 1.0
    cdPoints: float = 1.0
    emdPoints: float = 1.0
    sym: float = 1.0
    lap: float = 1.0
    lpi: float = 1.0

    def __post_init__(self):
        for item in fields(self):
            value = float(getattr(self, item.name))
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"Loss weight '{item.name}' must be finite and nonnegative, got '{value}'.")
            object.__setattr__(self, item.name, value)

    def weightOf(self, term: str) -> float:
        if term not in TERMS:
            raise KeyError(f"Unknown loss term '{term}'.")
        return getattr(self, term)

    def asDict(self) -> Dict[str, float]:
        return {term: getattr(self, term) for term in TERMS}

    def scaled(self, factor: float) -> 'LossWeights':
        return LossWeights(**{term: getattr(self, term) * factor for term in TERMS})

    def ablate(self, variant: str) -> 'LossWeights':
        """
        Weights with the regularizer of an ablation variant switched off.

        Args:
            variant (str): 'none', 'symmetry', 'laplacian' or 'lpi'.
        """
        if variant not in ABLATIONS:
            raise ValueError(f"Unknown ablation '{variant}', expected one of {sorted(ABLATIONS)}.")
        return replace(self, **{term: 0.0 for term in ABLATIONS[variant]})

UNITAXES: Tuple[Tuple[float, float, float], ...] = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))

@dataclass(frozen=True)
class LpiConfig:
    """
    Shifts used by the local permutation invariant loss.

    Attributes:
        epsilon (float): Shift magnitude, > 0. Defaults to 0.05.
        axes (tuple): Unit shift directions. Defaults to the positive x, y, z axes.
        includeDelta (bool): Penalize `delta + F(V + delta) - F(V)` (the motion of
            the shifted point relative to the original) instead of the printed
            `F(V + delta) - F(V)`. Defaults to False.
    """

    epsilon: float = 0.05
    axes: Tuple[Tuple[float, float, float], ...] = UNITAXES
    includeDelta: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise ValueError(f"LPI epsilon must be positive, got '{self.epsilon}'.")
        axes = np.asarray(self.axes, dtype=float).reshape(-1, 3)
        if axes.shape[0] == 0 or not np.allclose(np.linalg.norm(axes, axis=1), 1.0):
            raise ValueError("LPI axes must be a nonempty set of unit vectors.")

    def deltas(self) -> np.ndarray:
        """(k, 3) shift vectors `epsilon * axis`."""
        return self.epsilon * np.asarray(self.axes, dtype=np.float64).reshape(-1, 3)

@dataclass(frozen=True, eq=False)
class LossTerm:
    """
    Value of one loss term and its gradients, keyed by input role.

    Attributes:
        value (float): The loss.
        gradients (Dict[str, np.ndarray]): Gradient per input role, each shaped like its input.
        matching (np.ndarray | None): Assignment used by EMD terms.
        gap (float): Duality gap of the assignment (0 for exact solves).
    """

    value: float
    gradients: Dict[str, np.ndarray] = field(default_factory=dict)
    matching: np.ndarray | None = None
    gap: float = 0.0

@dataclass(frozen=True, eq=False)
class LossReport:
    """
    Combined loss: per-term values, weighted total and combined gradients.

    Attributes:
        terms (Dict[str, float]): Value of every computed term.
        total (float): `sum(weight * value)` in `TERMS` order.
        gradients (Dict[str, np.ndarray]): Weighted gradient sums per role.
        weights (LossWeights): Weights used.
        gap (float): Largest assignment duality gap among the EMD terms.
    """

    terms: Dict[str, float]
    total: float
    gradients: Dict[str, np.ndarray]
    weights: LossWeights
    gap: float = 0.0
