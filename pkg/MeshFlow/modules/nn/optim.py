from typing import List, Sequence, Tuple
import numpy as np
from MeshFlow.core import FLOAT, ShapeMismatchError
from .tensor import Tensor

class Adam:
    """
    Adaptive moment estimation over a fixed list of tensors.

    Parameters are updated by replacing `tensor.data`; a learning rate of zero
    leaves every value bit-identical.

    Attributes:
        parameters (List[Tensor]): Updated tensors.
        learningRate (float): Step size, >= 0.
        betas (tuple): Moment decay rates.
        epsilon (float): Denominator offset.
        steps (int): Updates applied so far.
    """

    def __init__(
        self,
        parameters: Sequence[Tensor],
        learningRate: float = 1e-3,
        betas: Tuple[float, float] = (0.9, 0.999),
        epsilon: float = 1e-8
    ) -> None:
        if not learningRate >= 0.0:
            raise ValueError(f"Learning rate must be nonnegative, got '{learningRate}'.")
        if not all(0.0 <= beta < 1.0 for beta in betas):
            raise ValueError(f"Adam betas must lie in [0, 1), got '{betas}'.")

        self.parameters: List[Tensor] = list(parameters)
        self.learningRate = float(learningRate)
        self.betas = (float(betas[0]), float(betas[1]))
        self.epsilon = float(epsilon)
        self.steps = 0
        self.first = [np.zeros_like(p.data, dtype=FLOAT) for p in self.parameters]
        self.second = [np.zeros_like(p.data, dtype=FLOAT) for p in self.parameters]

    def step(self, gradients: Sequence[np.ndarray]) -> None:
        """
        Apply one update.

        Args:
            gradients (Sequence[np.ndarray]): One gradient per parameter, same order.

        Raises:
            ShapeMismatchError: If the gradients do not match the parameters.
        """
        if len(gradients) != len(self.parameters):
            raise ShapeMismatchError(f"Got '{len(gradients)}' gradients for '{len(self.parameters)}' parameters.")

        self.steps += 1
        beta1, beta2 = self.betas
        correction1 = 1.0 - beta1 ** self.steps
        correction2 = 1.0 - beta2 ** self.steps

        for k, (parameter, gradient) in enumerate(zip(self.parameters, gradients)):
            gradient = np.asarray(gradient, dtype=FLOAT)
            if gradient.shape != parameter.shape:
                raise ShapeMismatchError(f"Gradient of shape '{gradient.shape}' for {parameter!r}.")
            self.first[k] = beta1 * self.first[k] + (1.0 - beta1) * gradient
            self.second[k] = beta2 * self.second[k] + (1.0 - beta2) * gradient ** 2
            update = (self.first[k] / correction1) / (np.sqrt(self.second[k] / correction2) + self.epsilon)
            if self.learningRate != 0.0:
                parameter.data = parameter.data - self.learningRate * update
