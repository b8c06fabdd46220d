from dataclasses import dataclass
from typing import List, Literal, Sequence
import numpy as np
from MeshFlow.core import ShapeMismatchError
from .tensor import Tensor
from .tape import Tape
from .ops import linear, relu
from .params import LayerLayout, fingerprint

Activation = Literal['relu', 'linear']

@dataclass(eq=False)
class Layer:
    """
    One shared per-point layer: `activation(x W + b)`.

    Attributes:
        name (str): Unique name, used in checkpoints.
        weight (Tensor): (D_in, D_out).
        bias (Tensor): (D_out,).
        activation (str): 'relu' or 'linear'.
    """

    name: str
    weight: Tensor
    bias: Tensor
    activation: Activation = 'relu'

    def __post_init__(self):
        if self.activation not in ('relu', 'linear'):
            raise ValueError(f"Unknown activation '{self.activation}'.")
        if self.weight.data.ndim != 2 or self.bias.shape != (self.weight.shape[1],):
            raise ShapeMismatchError(
                f"Layer '{self.name}' has weight '{self.weight.shape}' and bias '{self.bias.shape}'."
            )
        self.weight.name = f'{self.name}.weight'
        self.bias.name = f'{self.name}.bias'

    def __call__(self, x: Tensor, tape: Tape | None = None) -> Tensor:
        y = linear(x, self.weight, self.bias, tape)
        return relu(y, tape) if self.activation == 'relu' else y

@dataclass(eq=False)
class MlpParams:
    """
    A stack of shared per-point layers (1x1 convolutions over a point set).

    Attributes:
        name (str): Prefix of the layer names.
        layers (List[Layer]): Layers in evaluation order.
    """

    name: str
    layers: List[Layer]

    def __post_init__(self):
        for previous, current in zip(self.layers, self.layers[1:]):
            if previous.weight.shape[1] != current.weight.shape[0]:
                raise ShapeMismatchError(
                    f"Layer '{current.name}' expects '{current.weight.shape[0]}' inputs, "
                    f"'{previous.name}' gives '{previous.weight.shape[1]}'."
                )

    @classmethod
    def create(
        cls,
        name: str,
        inputs: int,
        widths: Sequence[int],
        rng: np.random.Generator,
        outputActivation: Activation = 'relu',
        zeroLast: bool = False
    ) -> 'MlpParams':
        """
        Initialize an MLP with fan-in scaled uniform weights.

        Every weight and bias is drawn from `U(-1/sqrt(fanIn), 1/sqrt(fanIn))`,
        layer by layer, weight before bias.

        Args:
            name (str): Layer name prefix.
            inputs (int): Input width.
            widths (Sequence[int]): Output width of every layer.
            rng (np.random.Generator): Initialization stream.
            outputActivation (str): Activation of the last layer; hidden layers use relu.
            zeroLast (bool): Start the last layer at zero weights and bias.
        """
        layers = []
        fanIn = int(inputs)
        for index, width in enumerate(widths):
            last = index == len(widths) - 1
            bound = 1.0 / np.sqrt(fanIn)
            weight = rng.uniform(-bound, bound, size=(fanIn, width))
            bias = rng.uniform(-bound, bound, size=width)
            if last and zeroLast:
                weight = np.zeros_like(weight)
                bias = np.zeros_like(bias)
            layers.append(Layer(
                name=f'{name}.{index}',
                weight=Tensor(weight),
                bias=Tensor(bias),
                activation=outputActivation if last else 'relu'
            ))
            fanIn = width
        return cls(name, layers)

    @property
    def inputs(self) -> int:
        return self.layers[0].weight.shape[0]

    @property
    def outputs(self) -> int:
        return self.layers[-1].weight.shape[1]

    def parameters(self) -> List[Tensor]:
        return [tensor for layer in self.layers for tensor in (layer.weight, layer.bias)]

    def __call__(self, x: Tensor, tape: Tape | None = None) -> Tensor:
        for layer in self.layers:
            x = layer(x, tape)
        return x

    def layout(self) -> List[LayerLayout]:
        return [(layer.name, layer.weight.shape[0], layer.weight.shape[1], layer.activation) for layer in self.layers]

    def fingerprint(self) -> str:
        return fingerprint(self.layout())
