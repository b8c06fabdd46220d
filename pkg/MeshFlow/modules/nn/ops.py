"""
Differentiable primitives.

Every operation computes its result with numpy and, when a tape is given,
records a vector-Jacobian product for `Tape.backward`. Without a tape the
same code runs as plain inference.
"""

from typing import Sequence, Tuple
import numpy as np
from MeshFlow.core import FLOAT, GeometryError, ShapeMismatchError
from MeshFlow.modules.sampling import SampleBatch, propagate, scatterGradients
from .tensor import Tensor
from .tape import Tape, VectorJacobian

def emit(tape: Tape | None, op: str, data: np.ndarray, inputs: Sequence[Tensor], vjp: VectorJacobian) -> Tensor:
    output = Tensor(data)
    if tape is None:
        return output
    return tape.record(op, output, inputs, vjp)

def constant(data) -> Tensor:
    return data if isinstance(data, Tensor) else Tensor(data)

def linear(x: Tensor, weight: Tensor, bias: Tensor, tape: Tape | None = None) -> Tensor:
    """
    Row-wise affine map `y = x W + b`.

    Args:
        x (Tensor): (N, D_in) rows.
        weight (Tensor): (D_in, D_out).
        bias (Tensor): (D_out,).

    Raises:
        ShapeMismatchError: If the dimensions do not chain.
    """
    if x.data.ndim != 2 or weight.data.ndim != 2 or x.shape[1] != weight.shape[0]:
        raise ShapeMismatchError(f"Cannot apply a '{weight.shape}' weight to rows of shape '{x.shape}'.")
    if bias.shape != (weight.shape[1],):
        raise ShapeMismatchError(f"Bias of shape '{bias.shape}' does not fit weight '{weight.shape}'.")

    def vjp(g):
        return g @ weight.data.T, x.data.T @ g, g.sum(axis=0)

    return emit(tape, 'linear', x.data @ weight.data + bias.data, (x, weight, bias), vjp)

def relu(x: Tensor, tape: Tape | None = None) -> Tensor:
    """Componentwise `max(x, 0)`; the derivative at 0 is 0."""
    mask = x.data > 0.0

    def vjp(g):
        return (np.where(mask, g, 0.0),)

    return emit(tape, 'relu', np.where(mask, x.data, 0.0), (x,), vjp)

def maxPoolPoints(x: Tensor, tape: Tape | None = None) -> Tuple[Tensor, np.ndarray]:
    """
    Columnwise maximum over the point (row) dimension.

    Returns:
        tuple: ((D,) tensor, (D,) argmax rows). Ties go to the lowest row.

    Raises:
        GeometryError: If there are no rows.
    """
    if x.data.ndim != 2:
        raise ShapeMismatchError(f"Max pooling needs (N, D) rows, got '{x.shape}'.")
    if x.shape[0] == 0:
        raise GeometryError("Cannot pool an empty point set.")

    argmax = np.argmax(x.data, axis=0)
    columns = np.arange(x.shape[1])

    def vjp(g):
        routed = np.zeros_like(x.data)
        routed[argmax, columns] = g
        return (routed,)

    return emit(tape, 'maxPool', x.data[argmax, columns], (x,), vjp), argmax

def concatFeatures(positions: Tensor, sourceFeature: Tensor, targetFeature: Tensor, tape: Tape | None = None) -> Tensor:
    """
    Rows `[x, y, z, sourceFeature, targetFeature]`, the features repeated on every row.
    """
    if positions.data.ndim != 2 or positions.shape[1] != 3:
        raise ShapeMismatchError(f"Positions must be (N, 3), got '{positions.shape}'.")
    if sourceFeature.data.ndim != 1 or targetFeature.data.ndim != 1:
        raise ShapeMismatchError("Global features must be vectors.")

    n = positions.shape[0]
    ds = sourceFeature.shape[0]
    data = np.concatenate([
        positions.data,
        np.broadcast_to(sourceFeature.data, (n, ds)),
        np.broadcast_to(targetFeature.data, (n, targetFeature.shape[0]))
    ], axis=1)

    def vjp(g):
        return g[:, :3], g[:, 3:3 + ds].sum(axis=0), g[:, 3 + ds:].sum(axis=0)

    return emit(tape, 'concat', data, (positions, sourceFeature, targetFeature), vjp)

def add(a: Tensor, b: Tensor, tape: Tape | None = None) -> Tensor:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"Cannot add shapes '{a.shape}' and '{b.shape}'.")
    return emit(tape, 'add', a.data + b.data, (a, b), lambda g: (g, g))

def scale(x: Tensor, factor: float, tape: Tape | None = None) -> Tensor:
    factor = float(factor)
    return emit(tape, 'scale', factor * x.data, (x,), lambda g: (factor * g,))

def sumAll(x: Tensor, tape: Tape | None = None) -> Tensor:
    return emit(tape, 'sum', np.sum(x.data), (x,), lambda g: (np.full_like(x.data, float(g)),))

def sumSquares(x: Tensor, tape: Tape | None = None) -> Tensor:
    return emit(tape, 'sumSquares', np.sum(x.data ** 2), (x,), lambda g: (2.0 * float(g) * x.data,))

def interpolate(batch: SampleBatch, vertices: Tensor, tape: Tape | None = None) -> Tensor:
    """
    Sample positions `w1 v1 + w2 v2 + w3 v3` of a batch on (N_V, D) vertex values.

    The adjoint is `scatterGradients`.
    """
    def vjp(g):
        return (scatterGradients(batch, g).gradients,)

    return emit(tape, 'interpolate', propagate(batch, vertices.data), (vertices,), vjp)

def external(inputs: Sequence[Tensor], value: float, gradients: Sequence[np.ndarray], tape: Tape | None = None) -> Tensor:
    """
    Scalar computed outside the tape with known gradients, such as a loss term.

    Args:
        inputs (Sequence[Tensor]): Tensors the value was computed from.
        value (float): The scalar.
        gradients (Sequence[np.ndarray]): d value / d input, one per input.
    """
    if len(inputs) != len(gradients):
        raise ShapeMismatchError(f"Got '{len(gradients)}' gradients for '{len(inputs)}' inputs.")
    for tensor, gradient in zip(inputs, gradients):
        if np.shape(gradient) != tensor.shape:
            raise ShapeMismatchError(f"Gradient of shape '{np.shape(gradient)}' for {tensor!r}.")

    def vjp(g):
        return tuple(float(g) * np.asarray(gradient, dtype=FLOAT) for gradient in gradients)

    return emit(tape, 'external', np.array(float(value)), tuple(inputs), vjp)

def reshape(x: Tensor, shape: Tuple[int, ...], tape: Tape | None = None) -> Tensor:
    original = x.shape
    return emit(tape, 'reshape', x.data.reshape(shape), (x,), lambda g: (np.reshape(g, original),))
