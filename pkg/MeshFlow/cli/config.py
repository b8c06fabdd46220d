"""
Run configuration of the command line frontend.

A config file holds one `key = value` entry per line; `#` starts a comment and
blank lines are ignored. Keys are the field names of `RunConfig`. Every entry
is validated against the range or choices in the field's metadata, and any
problem is reported with its line number.
"""

import math
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, List, Tuple
from MeshFlow.builders import File
from MeshFlow.core import ConfigError
from MeshFlow.modules.losses import TERMS, ABLATIONS, LossWeights, LpiConfig, EXACTTHRESHOLD
from MeshFlow.modules.nn import ArchitectureParams
from MeshFlow.modules.deform import PipelineParams, TrainParams, AutoencoderParams
from MeshFlow.modules.metrics import VoxelParams

TRUE = ('true', 'yes', 'on', '1')
FALSE = ('false', 'no', 'off', '0')

def option(default, helpText: str, low=None, high=None, choices=None, positive: bool = False):
    return field(
        default=default,
        metadata={'help': helpText, 'low': low, 'high': high, 'choices': choices, 'positive': positive}
    )

@dataclass(frozen=True)
class RunConfig:
    """
    Every tunable of a cli run. Loss term weights use the term names.
    """

    cdMesh: float = option(1.0, 'Weight of the Chamfer loss on deformed mesh samples.', low=0.0)
    emdMesh: float = option(1.0, 'Weight of the EMD loss on deformed mesh samples.', low=0.0)
    cdPoints: float = option(1.0, 'Weight of the Chamfer loss on the point pass.', low=0.0)
    emdPoints: float = option(1.0, 'Weight of the EMD loss on the point pass.', low=0.0)
    sym: float = option(1.0, 'Weight of the symmetry loss.', low=0.0)
    lap: float = option(1.0, 'Weight of the Laplacian loss.', low=0.0)
    lpi: float = option(1.0, 'Weight of the local permutation invariant loss.', low=0.0)
    ablation: str = option('none', 'Regularizer to switch off.', choices=tuple(ABLATIONS))
    meshSamples: int = option(2048, 'Samples drawn on the deformed mesh.', low=1, high=1_000_000)
    pointSamples: int = option(2048, 'Source points of the point pass.', low=1, high=1_000_000)
    encodeSamples: int = option(2048, 'Points fed to each encoder.', low=1, high=1_000_000)
    evalSamples: int = option(2048, 'Surface samples per mesh for CD and EMD metrics.', low=1, high=1_000_000)
    iterations: int = option(500, 'Direct optimization iterations.', low=0, high=10_000_000)
    stepSize: float = option(1e-3, 'Adam step size of direct optimization.', positive=True)
    trainSteps: int = option(200, 'Training steps.', low=0, high=10_000_000)
    checkpointEvery: int = option(1, 'Epochs between training checkpoints; 0 keeps only the final one.', low=0, high=10_000_000)
    learningRate: float = option(1e-4, 'Adam step size of training.', low=0.0)
    seed: int = option(0, 'Run seed; --seed overrides it.', low=0, high=2 ** 63 - 1)
    plane: str = option('xz', 'Symmetry plane.', choices=('xz', 'xy', 'yz'))
    symmetrySamples: str = option('mesh', 'Deformed samples the symmetry loss sees.', choices=('mesh', 'points', 'both'))
    voxelResolution: int = option(32, 'Voxel cells per axis for IoU.', low=3, high=512)
    resample: bool = option(True, 'Draw fresh surface samples at every step.')
    lpiEpsilon: float = option(0.05, 'Shift of the local permutation invariant loss.', positive=True)
    lpiIncludeDelta: bool = option(False, 'Penalize delta + F(V + delta) - F(V) instead.')
    chamferBruteForce: bool = option(False, 'Exhaustive nearest neighbor search.')
    laplacianWeights: str = option('uniform', 'Laplacian edge weights.', choices=('uniform', 'cotangent'))
    exactThreshold: int = option(EXACTTHRESHOLD, 'Largest EMD problem solved exactly.', low=1, high=100_000)
    encoderWidths: Tuple[int, ...] = option((64, 128, 256), 'Encoder layer widths.', low=1, high=65536)
    decoderWidths: Tuple[int, ...] = option((512, 256), 'Hidden decoder widths; a 3-wide output layer follows.', low=1, high=65536)
    templateSamples: int = option(1024, 'Surface samples per template.', low=1, high=1_000_000)
    autoencoderSteps: int = option(200, 'Autoencoder training steps.', low=0, high=10_000_000)
    autoencoderLearningRate: float = option(1e-3, 'Autoencoder Adam step size.', low=0.0)

    def __post_init__(self):
        for item in fields(self):
            checkValue(item, getattr(self, item.name))

    def weights(self) -> LossWeights:
        return LossWeights(**{term: getattr(self, term) for term in TERMS}).ablate(self.ablation)

    def pipeline(self) -> PipelineParams:
        return PipelineParams(
            weights=self.weights(),
            meshSamples=self.meshSamples,
            pointSamples=self.pointSamples,
            encodeSamples=self.encodeSamples,
            plane=self.plane,
            symmetrySamples=self.symmetrySamples,
            lpi=LpiConfig(epsilon=self.lpiEpsilon, includeDelta=self.lpiIncludeDelta),
            laplacianWeights=self.laplacianWeights,
            bruteForce=self.chamferBruteForce,
            exactThreshold=self.exactThreshold
        )

    def architecture(self) -> ArchitectureParams:
        return ArchitectureParams(self.encoderWidths, self.decoderWidths + (3,))

    def training(self) -> TrainParams:
        return TrainParams(
            steps=self.trainSteps, learningRate=self.learningRate, seed=self.seed,
            resample=self.resample, pipeline=self.pipeline()
        )

    def autoencoder(self) -> AutoencoderParams:
        return AutoencoderParams(
            steps=self.autoencoderSteps, learningRate=self.autoencoderLearningRate,
            samples=self.templateSamples, outputPoints=self.templateSamples,
            encoderWidths=self.encoderWidths, seed=self.seed
        )

    def voxels(self) -> VoxelParams:
        return VoxelParams(resolution=self.voxelResolution)

    def withSeed(self, seed: int | None) -> 'RunConfig':
        return self if seed is None else replace(self, seed=seed)

def fieldTypes() -> Dict[str, type]:
    return {item.name: type(item.default) for item in fields(RunConfig)}

def checkValue(item, value: Any, lineNumber: int | None = None) -> None:
    """
    Raises:
        ConfigError: If the value lies outside the field's range or choices.
    """
    meta = item.metadata
    values = value if isinstance(value, tuple) else (value,)
    if isinstance(value, tuple) and not value:
        raise ConfigError(f"'{item.name}' needs at least one value.", lineNumber)

    for v in values:
        if isinstance(v, float) and not math.isfinite(v):
            raise ConfigError(f"'{item.name}' must be finite, got '{v}'.", lineNumber)
        if meta.get('choices') and v not in meta['choices']:
            raise ConfigError(f"'{item.name}' must be one of {list(meta['choices'])}, got '{v}'.", lineNumber)
        if meta.get('positive') and not v > 0:
            raise ConfigError(f"'{item.name}' must be positive, got '{v}'.", lineNumber)
        if meta.get('low') is not None and v < meta['low']:
            raise ConfigError(f"'{item.name}' must be at least '{meta['low']}', got '{v}'.", lineNumber)
        if meta.get('high') is not None and v > meta['high']:
            raise ConfigError(f"'{item.name}' must be at most '{meta['high']}', got '{v}'.", lineNumber)

def parseValue(name: str, kind: type, text: str, lineNumber: int | None = None) -> Any:
    try:
        if kind is bool:
            lowered = text.lower()
            if lowered in TRUE:
                return True
            if lowered in FALSE:
                return False
            raise ValueError(text)
        if kind is tuple:
            return tuple(int(part) for part in text.replace(' ', '').split(',') if part)
        return kind(text)
    except ValueError:
        raise ConfigError(f"Cannot read '{text}' as a {kind.__name__} value for '{name}'.", lineNumber)

def parseConfig(lines: List[str], base: RunConfig | None = None) -> RunConfig:
    """
    Build a config from `key = value` lines on top of `base` (the defaults).

    Raises:
        ConfigError: On a malformed line, an unknown or repeated key, an
            unreadable value or a value out of range; carries the line number.
    """
    items = {item.name: item for item in fields(RunConfig)}
    kinds = fieldTypes()
    values: Dict[str, Any] = {}

    for lineNumber, raw in enumerate(lines, start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"Expected 'key = value' at line {lineNumber}, got '{raw.strip()}'.", lineNumber)

        key, text = (part.strip() for part in line.split('=', 1))
        if key not in items:
            raise ConfigError(f"Unknown config key '{key}' at line {lineNumber}.", lineNumber)
        if key in values:
            raise ConfigError(f"Config key '{key}' is repeated at line {lineNumber}.", lineNumber)

        value = parseValue(key, kinds[key], text, lineNumber)
        checkValue(items[key], value, lineNumber)
        values[key] = value

    return replace(base or RunConfig(), **values)

def loadConfig(path) -> RunConfig:
    return parseConfig(File(path).readFile(lines=True))

def schemaLines() -> List[str]:
    """One line per key: name, type, default, range and help, tab separated."""
    lines = []
    for item in fields(RunConfig):
        meta = item.metadata
        if meta.get('choices'):
            bounds = '{' + ', '.join(meta['choices']) + '}'
        elif meta.get('positive'):
            bounds = '(0, inf)'
        elif meta.get('low') is not None or meta.get('high') is not None:
            low = meta.get('low')
            high = meta.get('high')
            bounds = f"[{'-inf' if low is None else low}, {'inf' if high is None else high}]"
        else:
            bounds = '{true, false}' if isinstance(item.default, bool) else '-'
        lines.append('\t'.join([item.name, type(item.default).__name__, formatDefault(item.default), bounds, meta['help']]))
    return lines

def formatDefault(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, tuple):
        return ','.join(map(str, value))
    return str(value)
