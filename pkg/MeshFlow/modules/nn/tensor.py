import numpy as np
from typing import Tuple
from MeshFlow.core import FLOAT

class Tensor:
    """
    A dense 64-bit float array that can take part in a recorded computation.

    Tensors compare and hash by identity, so they can key gradient maps.

    Attributes:
        data (np.ndarray): The values, row-major.
        name (str | None): Optional label, set on parameters.
    """

    def __init__(self, data, name: str | None = None) -> None:
        self.data: np.ndarray = np.array(data, dtype=FLOAT)
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return int(self.data.size)

    def flat(self) -> np.ndarray:
        """Row-major copy of the values as a 1-D array."""
        return self.data.ravel().copy()

    def item(self) -> float:
        return float(self.data.reshape(-1)[0]) if self.size == 1 else float('nan')

    def __repr__(self) -> str:
        label = f" '{self.name}'" if self.name else ''
        return f"Tensor{label}(shape={self.shape})"
