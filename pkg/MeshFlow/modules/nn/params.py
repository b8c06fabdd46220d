import hashlib
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

LayerLayout = Tuple[str, int, int, str]
"""(name, inputs, outputs, activation) of one layer."""

ENCODER_WIDTHS: Tuple[int, ...] = (64, 128, 256)
DECODER_WIDTHS: Tuple[int, ...] = (512, 256, 3)

@dataclass(frozen=True)
class ArchitectureParams:
    """
    Layer widths of the deformation network.

    Attributes:
        encoderWidths (tuple): Per-point MLP widths of each encoder; the last
            one is the global feature size.
        decoderWidths (tuple): Offset decoder widths; the last one must be 3.
    """

    encoderWidths: Tuple[int, ...] = ENCODER_WIDTHS
    decoderWidths: Tuple[int, ...] = DECODER_WIDTHS

    def __post_init__(self):
        object.__setattr__(self, 'encoderWidths', tuple(int(w) for w in self.encoderWidths))
        object.__setattr__(self, 'decoderWidths', tuple(int(w) for w in self.decoderWidths))
        if not self.encoderWidths or min(self.encoderWidths) < 1:
            raise ValueError(f"Encoder widths must be positive, got '{self.encoderWidths}'.")
        if not self.decoderWidths or min(self.decoderWidths) < 1 or self.decoderWidths[-1] != 3:
            raise ValueError(f"Decoder widths must be positive and end in 3, got '{self.decoderWidths}'.")

    @property
    def featureSize(self) -> int:
        return self.encoderWidths[-1]

    @property
    def decoderInputSize(self) -> int:
        return 3 + 2 * self.featureSize

    def layout(self) -> List[LayerLayout]:
        """Every layer of the network as (name, inputs, outputs, activation), in order."""
        entries: List[LayerLayout] = []
        for name in ('sourceEncoder', 'targetEncoder'):
            entries += mlpLayout(name, 3, self.encoderWidths, 'relu')
        entries += mlpLayout('decoder', self.decoderInputSize, self.decoderWidths, 'linear')
        return entries

    def fingerprint(self) -> str:
        return fingerprint(self.layout())

def mlpLayout(name: str, inputs: int, widths: Sequence[int], outputActivation: str) -> List[LayerLayout]:
    entries = []
    fanIn = inputs
    for index, width in enumerate(widths):
        activation = outputActivation if index == len(widths) - 1 else 'relu'
        entries.append((f'{name}.{index}', fanIn, width, activation))
        fanIn = width
    return entries

def fingerprint(layout: Iterable[LayerLayout]) -> str:
    """
    SHA-256 over every layer's name, weight shape and activation.
    """
    digest = hashlib.sha256()
    for name, inputs, outputs, activation in layout:
        digest.update(f'{name}:{inputs}x{outputs}:{activation};'.encode())
    return digest.hexdigest()
