"""
Subcommand implementations. Each returns 0 on success and raises a MeshFlow
error (or a builtin I/O error) otherwise; `main` turns exceptions into exit codes.
"""

import os
from pathlib import Path
from typing import List
from MeshFlow.builders import File, Folder
from MeshFlow.core import ConfigError, DivergenceError, MeshFormatError, seeds
from MeshFlow.injectors import logger
from MeshFlow.modules.mesh import loadMesh, saveMesh, savePoints, loadShape, PointCloud
from MeshFlow.modules.sampling import sampleSurface
from MeshFlow.modules.losses import TERMS
from MeshFlow.modules.nn import NetworkParams, saveCheckpoint, loadCheckpoint, saveEncoder, loadEncoder
from MeshFlow.modules.deform import (
    DeformJob, optimizeDirect, forwardPipeline, train, trainAutoencoder, buildTemplateSet,
    selectTemplate, interpolateTargets
)
from MeshFlow.modules.metrics import evaluateShapes
from MeshFlow.stores import LossTrace
from .config import RunConfig
from .manifest import readManifest

def outputBase(path) -> str:
    """The output path without its extension, prefix of the side files."""
    return str(Path(path).with_suffix(''))

def writeTrace(trace: LossTrace | None, path) -> None:
    if trace is not None:
        File(path).writeLines(trace.toCsv())

def parseTimes(text: str) -> List[float]:
    """
    Raises:
        ValueError: On an unreadable entry or a value outside [0, 1].
    """
    try:
        values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ValueError(f"Cannot read the interpolation weights '{text}'.")
    if not values:
        raise ValueError("No interpolation weight given.")
    for t in values:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"Interpolation weight '{t}' is outside [0, 1].")
    return values

@logger()
class Commands:
    """
    The cli subcommands bound to one run configuration.

    Attributes:
        config (RunConfig): Validated configuration, seed included.
    """

    def __init__(self, config: RunConfig) -> None:
        self.config = config

    def sample(self, meshPath: str, count: int, out: str) -> int:
        mesh = loadMesh(meshPath)
        batch = sampleSurface(mesh, count, seeds.stream(self.config.seed, seeds.CLI_SAMPLE))
        savePoints(PointCloud(batch.points), out)
        self.Logger.info(f"Wrote {count} samples of '{meshPath}' to '{out}'.")
        return 0

    def deform(self, sourcePath: str, targetPath: str, mode: str, out: str, checkpoint: str | None = None) -> int:
        """
        Deform a source mesh toward a target and write the mesh, its loss
        trace (`<out>.trace.csv`) and its metrics (`<out>.metrics.json`).
        """
        config = self.config
        if mode == 'network' and checkpoint is None:
            raise ConfigError("Network mode needs a trained checkpoint: pass '--checkpoint <file>' written by 'train'.")

        source = loadMesh(sourcePath)
        target = loadShape(targetPath)
        base = outputBase(out)

        if mode == 'direct':
            job = DeformJob(
                source, target, config.pipeline(), iterations=config.iterations, stepSize=config.stepSize,
                seed=config.seed, mode='direct', resample=config.resample
            )
            try:
                result = optimizeDirect(job)
            except DivergenceError as e:
                writeTrace(e.trace, base + '.trace.csv')
                raise
            mesh, trace = result.mesh, result.trace
        elif mode == 'network':
            network = loadCheckpoint(checkpoint)
            result = forwardPipeline(source, target, network, config.seed, config.pipeline())
            trace = LossTrace(list(TERMS))
            trace.append(0, result.report.terms, result.report.total)
            mesh = result.mesh
        else:
            raise ConfigError(f"Unknown deformation mode '{mode}'.")

        saveMesh(mesh, out)
        writeTrace(trace, base + '.trace.csv')
        report = evaluateShapes(
            mesh, target, samples=config.evalSamples, seed=config.seed,
            voxels=config.voxels(), exactThreshold=config.exactThreshold
        )
        File(base + '.metrics.json').writeLines([report.line()])
        print(report.line())
        return 0

    def train(self, manifestPath: str, out: str) -> int:
        """
        Train on a manifest of pairs. Every epoch rewrites `<out>.trace.csv` and
        writes `<out>.epoch<k>.json`; the final parameters go to `out`.
        """
        config = self.config
        pairs = [(loadMesh(source), loadShape(target)) for source, target in readManifest(manifestPath)]
        network = NetworkParams.create(config.seed, config.architecture())
        base = outputBase(out)

        def onEpoch(epoch: int, network: NetworkParams, trace: LossTrace) -> None:
            if config.checkpointEvery and epoch % config.checkpointEvery == 0:
                saveCheckpoint(network, f'{base}.epoch{epoch}.json')
            writeTrace(trace, base + '.trace.csv')

        try:
            result = train(pairs, network, config.training(), onEpoch)
        except DivergenceError as e:
            writeTrace(e.trace, base + '.trace.csv')
            raise

        saveCheckpoint(result.network, out)
        writeTrace(result.trace, base + '.trace.csv')
        return 0

    def evaluate(self, pathA: str, pathB: str, csv: bool = False) -> int:
        config = self.config
        report = evaluateShapes(
            loadShape(pathA), loadShape(pathB), samples=config.evalSamples, seed=config.seed,
            voxels=config.voxels(), exactThreshold=config.exactThreshold
        )
        print('\n'.join([report.csvHeader(), report.csvRow()]) if csv else report.line())
        return 0

    def selectTemplate(
        self,
        targetPath: str,
        templateDir: str,
        mode: str,
        checkpoint: str | None = None,
        encoderOut: str | None = None
    ) -> int:
        """
        Print `<id>\\t<path>` of the template nearest to the target. Templates
        are the `.obj` files of the folder in name order; ids count from 0.
        """
        config = self.config
        paths = Folder(templateDir).listFiles('*.obj')
        if not paths:
            raise MeshFormatError(f"No '.obj' templates in '{templateDir}'.")
        meshes = [loadMesh(path) for path in paths]
        target = loadShape(targetPath)

        encoder = None
        if mode == 'embedding':
            encoder = loadEncoder(checkpoint) if checkpoint else trainAutoencoder(meshes, config.autoencoder())
            if encoderOut:
                saveEncoder(encoder, encoderOut)

        templates = buildTemplateSet(meshes, encoder, seed=config.seed, samples=config.templateSamples, names=paths)
        chosen = selectTemplate(target, templates, encoder, mode=mode, seed=config.seed)
        print(f'{chosen}\t{paths[chosen]}')
        return 0

    def interp(self, sourcePath: str, pathA: str, pathB: str, times: str, checkpoint: str, outDir: str) -> int:
        """
        Write one deformed mesh per interpolation weight, `<k>_t<t>.obj` in `outDir`.
        """
        config = self.config
        values = parseTimes(times)
        source = loadMesh(sourcePath)
        targetA = loadShape(pathA)
        targetB = loadShape(pathB)
        network = loadCheckpoint(checkpoint)

        Folder(outDir).create()
        for k, t in enumerate(values):
            mesh = interpolateTargets(source, targetA, targetB, t, network, config.seed, config.pipeline())
            saveMesh(mesh, os.path.join(outDir, f'{k:03d}_t{t:g}.obj'))
        self.Logger.info(f"Wrote {len(values)} interpolated meshes to '{outDir}'.")
        return 0
