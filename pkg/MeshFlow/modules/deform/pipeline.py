"""
Forward pass of the deformation network and its inference variants.

A pass encodes a source sample and a target sample into global features,
decodes one offset per source vertex, and scores the deformed mesh S' with the
shape losses on two sample sets: points drawn on S' itself (mesh pass) and
source surface points moved by their own decoded offsets (point pass). The
regularizers act on S' (Laplacian) and on the decoder around V (LPI).

Every random draw comes from a named seed stream indexed by the step, so a
pass is reproducible from `(seed, step)` alone.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence
import numpy as np
from MeshFlow.core import DivergenceError, ShapeMismatchError, seeds
from MeshFlow.modules.mesh import TriMesh, PointCloud
from MeshFlow.modules.sampling import SampleBatch, sampleSurface, sampleShape
from MeshFlow.modules.losses import (
    LossTerm, LossReport, LossWeights, chamfer, emd, symmetryLoss, laplacianLoss, lpiLoss, combine
)
from MeshFlow.modules.nn import (
    Tensor, Tape, NetworkParams, encodePointcloud, offsetDecoder, add, interpolate, external
)
from .params import PipelineParams, OffsetField

MESHROLE = 'meshSamples'
POINTROLE = 'pointSamples'
VERTEXROLE = 'vertices'

@dataclass(frozen=True, eq=False)
class TargetSamples:
    """Target points compared with the mesh pass and with the point pass."""
    mesh: np.ndarray
    points: np.ndarray

@dataclass(frozen=True, eq=False)
class PipelineResult:
    """
    Outcome of one forward pass.

    Attributes:
        mesh (TriMesh): Deformed mesh S'.
        points (PointCloud | None): Deformed point-pass samples, when computed.
        report (LossReport): Loss terms and total.
        offsets (OffsetField): Per-vertex offsets O.
        loss (Tensor | None): The total as a tape output, when a tape was given.
    """

    mesh: TriMesh
    points: PointCloud | None
    report: LossReport
    offsets: OffsetField
    loss: Tensor | None = None

def applyOffsets(source: TriMesh, offsets: OffsetField | np.ndarray) -> TriMesh:
    """
    Deformed mesh `(V + O, E)` with the source connectivity.

    Raises:
        ShapeMismatchError: If there is not one offset per vertex.
    """
    field = offsets if isinstance(offsets, OffsetField) else OffsetField(offsets)
    if len(field) != source.vertexCount:
        raise ShapeMismatchError(f"Expected '{source.vertexCount}' offsets, got '{len(field)}'.")
    return source.withVertices(source.vertices + field.offsets)

def deformedMeshOf(source: TriMesh, vertices: np.ndarray) -> TriMesh:
    if not np.all(np.isfinite(vertices)):
        raise DivergenceError("The deformed vertices are not finite.")
    return source.withVertices(vertices)

def encodeSource(source, network: NetworkParams, seed: int, params: PipelineParams, step: int = 0, tape: Tape | None = None) -> Tensor:
    cloud = sampleShape(source, params.encodeSamples, seeds.stream(seed, seeds.SOURCE_ENCODE, step))
    return encodePointcloud(cloud, network.sourceEncoder, tape)

def encodeTarget(target, network: NetworkParams, seed: int, params: PipelineParams, step: int = 0, tape: Tape | None = None) -> Tensor:
    cloud = sampleShape(target, params.encodeSamples, seeds.stream(seed, seeds.TARGET_ENCODE, step))
    return encodePointcloud(cloud, network.targetEncoder, tape)

def drawTargets(target, params: PipelineParams, seed: int, step: int = 0) -> TargetSamples:
    return TargetSamples(
        mesh=sampleShape(target, params.meshSamples, seeds.stream(seed, seeds.TARGET_SAMPLE, step, 0)).points,
        points=sampleShape(target, params.pointSamples, seeds.stream(seed, seeds.TARGET_SAMPLE, step, 1)).points
    )

def meshPassBatch(deformedMesh: TriMesh, params: PipelineParams, seed: int, step: int = 0) -> SampleBatch:
    return sampleSurface(deformedMesh, params.meshSamples, seeds.stream(seed, seeds.MESH_PASS, step))

def pointPassBatch(source: TriMesh, params: PipelineParams, seed: int, step: int = 0) -> SampleBatch:
    return sampleSurface(source, params.pointSamples, seeds.stream(seed, seeds.POINT_PASS, step))

def needsMeshPass(params: PipelineParams) -> bool:
    w = params.weights
    return bool(w.cdMesh or w.emdMesh or (w.sym and params.symmetrySamples != 'points'))

def needsPointPass(params: PipelineParams) -> bool:
    w = params.weights
    return bool(w.cdPoints or w.emdPoints or (w.sym and params.symmetrySamples != 'mesh'))

def mergeTerms(parts: Sequence[LossTerm]) -> LossTerm:
    gradients: Dict[str, np.ndarray] = {}
    for part in parts:
        for role, gradient in part.gradients.items():
            gradients[role] = gradients[role] + gradient if role in gradients else gradient
    return LossTerm(
        value=sum(part.value for part in parts),
        gradients=gradients,
        gap=max(part.gap for part in parts)
    )

def shapeTerms(
    meshSamples: Tensor | None,
    movedPoints: Tensor | None,
    targets: TargetSamples,
    params: PipelineParams
) -> Dict[str, LossTerm]:
    """
    Chamfer, EMD and symmetry terms of the two passes; zero-weight terms are skipped.
    """
    w = params.weights
    terms: Dict[str, LossTerm] = {}
    passes = [('Mesh', meshSamples, targets.mesh, MESHROLE), ('Points', movedPoints, targets.points, POINTROLE)]

    for suffix, samples, target, role in passes:
        if samples is None:
            continue
        if w.weightOf(f'cd{suffix}'):
            terms[f'cd{suffix}'] = chamfer(samples.data, target, bruteForce=params.bruteForce, role=role)
        if w.weightOf(f'emd{suffix}'):
            terms[f'emd{suffix}'] = emd(samples.data, target, exactThreshold=params.exactThreshold, role=role)

    if w.sym:
        chosen = {'mesh': passes[:1], 'points': passes[1:], 'both': passes}[params.symmetrySamples]
        terms['sym'] = mergeTerms([
            symmetryLoss(
                samples.data, target, plane=params.plane, exactThreshold=params.exactThreshold,
                bruteForce=params.bruteForce, role=role
            )
            for _, samples, target, role in chosen
        ])

    return terms

def combineTerms(
    terms: Dict[str, LossTerm],
    weights: LossWeights,
    roles: Dict[str, Tensor | List[Tensor] | None],
    tape: Tape | None = None
) -> tuple[LossReport, Tensor | None]:
    """
    Weighted total of the terms and, with a tape, the total as a recorded scalar
    whose inputs are the tensors named by the gradient roles.

    Raises:
        DivergenceError: If the total is not finite.
    """
    report = combine(terms, weights)
    if not math.isfinite(report.total):
        raise DivergenceError(f"The total loss is not finite: '{report.total}'.")
    if tape is None:
        return report, None

    inputs, gradients = [], []
    for role, gradient in report.gradients.items():
        tensors = roles[role]
        if isinstance(tensors, list):
            inputs += tensors
            gradients += list(gradient)
        else:
            inputs.append(tensors)
            gradients.append(gradient)
    return report, external(inputs, report.total, gradients, tape)

def forwardPipeline(
    source: TriMesh,
    target: PointCloud | TriMesh,
    network: NetworkParams,
    seed: int,
    params: PipelineParams | None = None,
    step: int = 0,
    tape: Tape | None = None
) -> PipelineResult:
    """
    Run the network on a (source, target) pair and score the deformation.

    Args:
        source (TriMesh): Source mesh S.
        target (PointCloud | TriMesh): Target shape; a mesh is surface sampled.
        network (NetworkParams): Encoders and decoder.
        seed (int): Run seed.
        params (PipelineParams, optional): Losses and sample counts.
        step (int): Index of the sample draw, for per-step resampling.
        tape (Tape, optional): Records the pass so `tape.backward(result.loss)`
            gives parameter gradients.

    Returns:
        PipelineResult: S', the deformed point-pass samples and the loss report.

    Raises:
        DivergenceError: If the pass produces non-finite values.
    """
    params = params or PipelineParams()
    weights = params.weights

    sourceFeature = encodeSource(source, network, seed, params, step, tape)
    targetFeature = encodeTarget(target, network, seed, params, step, tape)
    targets = drawTargets(target, params, seed, step)

    def decode(positions: Tensor) -> Tensor:
        return offsetDecoder(positions, sourceFeature, targetFeature, network.decoder, tape)

    vertices = Tensor(source.vertices)
    offsets = decode(vertices)
    deformed = add(vertices, offsets, tape)
    deformedMesh = deformedMeshOf(source, deformed.data)

    meshSamples = None
    if needsMeshPass(params):
        meshSamples = interpolate(meshPassBatch(deformedMesh, params, seed, step), deformed, tape)

    movedPoints = None
    if needsPointPass(params):
        positions = Tensor(pointPassBatch(source, params, seed, step).points)
        movedPoints = add(positions, decode(positions), tape)

    terms = shapeTerms(meshSamples, movedPoints, targets, params)
    roles = {MESHROLE: meshSamples, POINTROLE: movedPoints, VERTEXROLE: deformed, 'base': offsets, 'shifted': []}

    if weights.lap:
        terms['lap'] = laplacianLoss(source, deformed.data, weights=params.laplacianWeights, role=VERTEXROLE)
    if weights.lpi:
        def evaluateShifted(positions: np.ndarray) -> np.ndarray:
            shifted = decode(Tensor(positions))
            roles['shifted'].append(shifted)
            return shifted.data

        terms['lpi'] = lpiLoss(evaluateShifted, source.vertices, params.lpi, base=offsets.data)

    report, loss = combineTerms(terms, weights, roles, tape)
    return PipelineResult(
        mesh=deformedMesh,
        points=PointCloud(movedPoints.data) if movedPoints is not None else None,
        report=report,
        offsets=OffsetField(offsets.data),
        loss=loss
    )

def decodeMesh(source: TriMesh, sourceFeature: Tensor, targetFeature: Tensor, network: NetworkParams) -> TriMesh:
    offsets = offsetDecoder(Tensor(source.vertices), sourceFeature, targetFeature, network.decoder)
    return applyOffsets(source, offsets.data)

def deformMesh(
    source: TriMesh,
    target: PointCloud | TriMesh,
    network: NetworkParams,
    seed: int = 0,
    params: PipelineParams | None = None
) -> TriMesh:
    """
    Inference: the deformed mesh of `forwardPipeline` at step 0, without losses.
    """
    params = params or PipelineParams()
    return decodeMesh(
        source,
        encodeSource(source, network, seed, params),
        encodeTarget(target, network, seed, params),
        network
    )

def deformPointCloud(
    points,
    source: TriMesh,
    target: PointCloud | TriMesh,
    network: NetworkParams,
    seed: int = 0,
    params: PipelineParams | None = None
) -> PointCloud:
    """
    Move arbitrary points by the decoded offset field, `p + F(p)`.

    Args:
        points: (N, 3) positions or PointCloud to displace.
        source (TriMesh): Source shape the features are taken from.
        target (PointCloud | TriMesh): Target shape.
        network (NetworkParams): Trained parameters.
        seed (int): Run seed.
    """
    params = params or PipelineParams()
    positions = Tensor(getattr(points, 'points', points))
    offsets = offsetDecoder(
        positions,
        encodeSource(source, network, seed, params),
        encodeTarget(target, network, seed, params),
        network.decoder
    )
    return PointCloud(positions.data + offsets.data)

def interpolateTargets(
    source: TriMesh,
    targetA: PointCloud | TriMesh,
    targetB: PointCloud | TriMesh,
    t: float,
    network: NetworkParams,
    seed: int = 0,
    params: PipelineParams | None = None
) -> TriMesh:
    """
    Deform toward a blend of two targets: the target feature is
    `(1 - t) feat(A) + t feat(B)`.

    At t = 0 and t = 1 the endpoint feature is used as is, so the result equals
    `deformMesh` toward that target bit for bit.

    Raises:
        ValueError: If t is outside [0, 1].
    """
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"Interpolation weight must lie in [0, 1], got '{t}'.")

    params = params or PipelineParams()
    if t == 0.0:
        targetFeature = encodeTarget(targetA, network, seed, params)
    elif t == 1.0:
        targetFeature = encodeTarget(targetB, network, seed, params)
    else:
        featureA = encodeTarget(targetA, network, seed, params).data
        featureB = encodeTarget(targetB, network, seed, params).data
        targetFeature = Tensor((1.0 - t) * featureA + t * featureB)

    return decodeMesh(source, encodeSource(source, network, seed, params), targetFeature, network)
