"""
Reverse-mode differentiation tape.

Operations append one record per primitive: the output tensor, the inputs it
read and a vector-Jacobian product that maps the output gradient to one
gradient per input. `backward` replays the records in reverse order and
accumulates input gradients by summation.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Sequence
import numpy as np
from MeshFlow.core import TapeError, DivergenceError
from MeshFlow.typing import privatemethod
from .tensor import Tensor

VectorJacobian = Callable[[np.ndarray], Sequence[np.ndarray | None]]

@dataclass(frozen=True, eq=False)
class Record:
    op: str
    output: Tensor
    inputs: tuple
    vjp: VectorJacobian

class GradientMap(dict):
    """
    Gradients keyed by tensor. Tensors the loss does not depend on read as zeros.
    """

    def of(self, tensor: Tensor) -> np.ndarray:
        gradient = self.get(tensor)
        return np.zeros_like(tensor.data) if gradient is None else gradient

    def collect(self, tensors: Iterable[Tensor]) -> List[np.ndarray]:
        return [self.of(tensor) for tensor in tensors]

class Tape:
    """
    Ordered record of the primitives of one forward pass.

    A tape is consumed by its first `backward`; run the forward pass again on
    a new tape to differentiate again.
    """

    def __init__(self) -> None:
        self.records: List[Record] = []
        self.outputs: set = set()
        self.consumed: bool = False

    def __len__(self) -> int:
        return len(self.records)

    def record(self, op: str, output: Tensor, inputs: Sequence[Tensor], vjp: VectorJacobian) -> Tensor:
        """
        Append a primitive to the tape.

        Raises:
            TapeError: If the tape was already consumed.
            DivergenceError: If the primitive produced non-finite values.
        """
        if self.consumed:
            raise TapeError("Cannot record on a tape after backward; run the forward pass on a new tape.")
        if not np.all(np.isfinite(output.data)):
            raise DivergenceError(f"Operation '{op}' produced non-finite values.")

        self.records.append(Record(op, output, tuple(inputs), vjp))
        self.outputs.add(id(output))
        return output

    def owns(self, tensor: Tensor) -> bool:
        return id(tensor) in self.outputs

    @privatemethod
    def accumulate(self, gradients: GradientMap, tensor: Tensor, gradient: np.ndarray) -> None:
        gradient = np.asarray(gradient, dtype=tensor.data.dtype).reshape(tensor.shape)
        if tensor in gradients:
            gradients[tensor] = gradients[tensor] + gradient
        else:
            gradients[tensor] = gradient

    def backward(self, loss: Tensor) -> GradientMap:
        """
        Gradients of a scalar output with respect to every tensor it depends on.

        Args:
            loss (Tensor): A single-element tensor recorded on this tape.

        Returns:
            GradientMap: Gradient of the loss per tensor, parameters and inputs included.

        Raises:
            TapeError: If the loss is not a scalar output of this tape, or the
                tape was already consumed.
        """
        if self.consumed:
            raise TapeError("Backward was already run on this tape; run the forward pass again.")
        if not self.owns(loss):
            raise TapeError(f"{loss!r} was not produced by an operation recorded on this tape.")
        if loss.size != 1:
            raise TapeError(f"Backward needs a scalar loss, got shape '{loss.shape}'.")

        self.consumed = True
        gradients = GradientMap()
        gradients[loss] = np.ones_like(loss.data)

        for record in reversed(self.records):
            outputGradient = gradients.get(record.output)
            if outputGradient is None:
                continue
            for tensor, gradient in zip(record.inputs, record.vjp(outputGradient)):
                if gradient is not None:
                    self.accumulate(gradients, tensor, gradient)

        return gradients

def backward(tape: Tape, loss: Tensor) -> GradientMap:
    """Run `tape.backward(loss)`."""
    return tape.backward(loss)
