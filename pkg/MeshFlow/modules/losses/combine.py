import numpy as np
from typing import Dict
from .params import TERMS, LossTerm, LossWeights, LossReport

def weightedTotal(values: Dict[str, float], weights: LossWeights) -> float:
    """
    `sum(weight * value)` accumulated in `TERMS` order; zero-weight terms are skipped.
    """
    total = 0.0
    for term in TERMS:
        weight = weights.weightOf(term)
        if weight != 0.0:
            total += weight * values[term]
    return total

def combine(terms: Dict[str, LossTerm | float], weights: LossWeights) -> LossReport:
    """
    Weighted combination of loss terms and of their gradients.

    Gradients of different terms are summed when they share a role name.
    Terms with zero weight may be omitted.

    Args:
        terms (Dict[str, LossTerm | float]): Computed terms keyed by `TERMS` names.
        weights (LossWeights): Term weights.

    Returns:
        LossReport: Values, weighted total and weighted gradients.

    Raises:
        KeyError: If a term name is unknown, or a term with nonzero weight is missing.
    """
    for name in terms:
        if name not in TERMS:
            raise KeyError(f"Unknown loss term '{name}'.")

    missing = [term for term in TERMS if weights.weightOf(term) != 0.0 and term not in terms]
    if missing:
        raise KeyError(f"Loss term(s) {missing} have nonzero weight but were not computed.")

    values = {
        name: float(term.value if isinstance(term, LossTerm) else term)
        for name, term in ((t, terms[t]) for t in TERMS if t in terms)
    }

    gradients: Dict[str, np.ndarray] = {}
    gap = 0.0
    for term in TERMS:
        entry = terms.get(term)
        if not isinstance(entry, LossTerm):
            continue
        gap = max(gap, entry.gap)
        weight = weights.weightOf(term)
        if weight == 0.0:
            continue
        for role, gradient in entry.gradients.items():
            scaled = weight * np.asarray(gradient)
            gradients[role] = gradients[role] + scaled if role in gradients else scaled

    return LossReport(
        terms=values,
        total=weightedTotal(values, weights),
        gradients=gradients,
        weights=weights,
        gap=gap
    )
