from typing import Callable
import numpy as np
from MeshFlow.core import FLOAT, ShapeMismatchError
from .params import LossTerm, LpiConfig

def lpiLoss(
    decoderEval: Callable[[np.ndarray], np.ndarray],
    vertices,
    config: LpiConfig | None = None,
    base: np.ndarray | None = None
) -> LossTerm:
    """
    Local permutation invariant loss of an offset field F.

    For every shift delta of the config, the negative components of
    `F(V + delta) - F(V)` are penalized: the loss is
    `sum over shifts, vertices, components of -min(F(V + delta) - F(V), 0)`.
    With `includeDelta` the compared quantity is `delta + F(V + delta) - F(V)`.

    The decoder is evaluated once per shift, in the order of `config.axes`,
    and once at V unless `base` is given. Gradients are returned with respect
    to those evaluations, so a caller holding the decoder's own adjoint can
    finish the chain to its parameters:

    - **base** → (N, 3) gradient with respect to F(V).
    - **shifted** → (k, N, 3) gradient with respect to each F(V + delta_k).

    Args:
        decoderEval (Callable): Maps (N, 3) positions to (N, 3) offsets.
        vertices: (N, 3) positions.
        config (LpiConfig, optional): Shift magnitude, axes and variant.
        base (np.ndarray, optional): F(V) when the caller already has it.

    Returns:
        LossTerm: Value and the gradients above.
    """
    config = config or LpiConfig()
    positions = np.asarray(getattr(vertices, 'vertices', vertices), dtype=FLOAT).reshape(-1, 3)

    base = np.asarray(decoderEval(positions) if base is None else base, dtype=FLOAT)
    if base.shape != positions.shape:
        raise ShapeMismatchError(f"Got offsets of shape '{base.shape}' for positions '{positions.shape}'.")

    deltas = config.deltas()
    value = 0.0
    shiftedGradients = np.zeros((deltas.shape[0],) + positions.shape, dtype=FLOAT)
    for k, delta in enumerate(deltas):
        difference = np.asarray(decoderEval(positions + delta), dtype=FLOAT) - base
        if config.includeDelta:
            difference = difference + delta
        negative = difference < 0.0
        value += float(-np.sum(difference[negative]))
        shiftedGradients[k][negative] = -1.0

    return LossTerm(
        value=value,
        gradients={'base': -shiftedGradients.sum(axis=0), 'shifted': shiftedGradients}
    )
