"""
Direct offset optimization: the offsets O are free variables, without any
network. Each iteration scores S' = (V + O, E) with the shape losses on a
mesh-pass sample of S' and on source points moved by the interpolated offsets,
plus the Laplacian term, and takes one Adam step on O. The local permutation
invariant loss needs a decoder and is not used here.
"""

from dataclasses import dataclass, replace
import numpy as np
from MeshFlow.core import DivergenceError
from MeshFlow.injectors import logger
from MeshFlow.modules.mesh import TriMesh
from MeshFlow.modules.losses import TERMS, laplacianLoss, LaplacianOperator
from MeshFlow.modules.nn import Tensor, Tape, Adam, add, interpolate
from MeshFlow.stores import LossTrace
from .params import DeformJob, OffsetField
from .pipeline import (
    MESHROLE, POINTROLE, VERTEXROLE, applyOffsets, deformedMeshOf, drawTargets, meshPassBatch,
    pointPassBatch, needsMeshPass, needsPointPass, shapeTerms, combineTerms
)

@dataclass(frozen=True, eq=False)
class DirectResult:
    """
    Attributes:
        mesh (TriMesh): S' at the best iterate.
        trace (LossTrace): One row per evaluated iterate, K + 1 rows.
        offsets (OffsetField): O at the best iterate.
        bestStep (int): Index of the best iterate.
    """

    mesh: TriMesh
    trace: LossTrace
    offsets: OffsetField
    bestStep: int

@logger()
class DirectOptimizer:
    """
    Adam on free per-vertex offsets, started at O = 0.

    The loss is evaluated at iterates 0..K and O is updated after iterates
    0..K-1, so a budget of K iterations leaves K + 1 trace rows. The iterate
    with the lowest total (the earliest on ties) is returned.

    Attributes:
        job (DeformJob): The request, in 'direct' mode.
        trace (LossTrace): Filled while `run` proceeds; subscribe to stream rows.
    """

    def __init__(self, job: DeformJob) -> None:
        if job.mode != 'direct':
            raise ValueError(f"Direct optimization needs a 'direct' job, got '{job.mode}'.")

        self.job = job
        self.params = replace(job.pipeline, weights=replace(job.pipeline.weights, lpi=0.0))
        self.operator = LaplacianOperator.fromMesh(job.source, self.params.laplacianWeights)
        self.trace = LossTrace(list(TERMS))

    def evaluate(self, offsets: Tensor, step: int, tape: Tape | None):
        job, params = self.job, self.params
        draw = step if job.resample else 0

        vertices = Tensor(job.source.vertices)
        deformed = add(vertices, offsets, tape)
        deformedMesh = deformedMeshOf(job.source, deformed.data)

        meshSamples = None
        if needsMeshPass(params):
            meshSamples = interpolate(meshPassBatch(deformedMesh, params, job.seed, draw), deformed, tape)
        movedPoints = None
        if needsPointPass(params):
            movedPoints = interpolate(pointPassBatch(job.source, params, job.seed, draw), deformed, tape)

        terms = shapeTerms(meshSamples, movedPoints, drawTargets(job.target, params, job.seed, draw), params)
        if params.weights.lap:
            terms['lap'] = laplacianLoss(job.source, deformed.data, operator=self.operator, role=VERTEXROLE)

        roles = {MESHROLE: meshSamples, POINTROLE: movedPoints, VERTEXROLE: deformed}
        return combineTerms(terms, params.weights, roles, tape)

    def run(self) -> DirectResult:
        """
        Optimize and return the best iterate.

        Raises:
            DivergenceError: If a loss becomes non-finite; carries the trace so far.
        """
        job = self.job
        offsets = Tensor(np.zeros_like(job.source.vertices), name='offsets')
        optimizer = Adam([offsets], learningRate=job.stepSize)
        best = (np.inf, 0, offsets.data.copy())

        for step in range(job.iterations + 1):
            tape = Tape() if step < job.iterations else None
            try:
                report, loss = self.evaluate(offsets, step, tape)
            except DivergenceError as e:
                self.trace.append(step, {}, float('nan'))
                self.Logger.error(f"Direct optimization diverged at step {step}: {e}")
                raise DivergenceError(f"Direct optimization diverged at step {step}: {e}", trace=self.trace)

            self.trace.append(step, report.terms, report.total)
            self.Logger.debug(f"Step {step}: total '{report.total}'.")
            if report.total < best[0]:
                best = (report.total, step, offsets.data.copy())

            if tape is not None:
                gradients = tape.backward(loss)
                optimizer.step([gradients.of(offsets)])

        total, bestStep, bestOffsets = best
        self.Logger.info(
            f"Direct optimization finished: initial '{self.trace.rows[0].total}', best '{total}' at step {bestStep}."
        )
        return DirectResult(
            mesh=applyOffsets(job.source, bestOffsets),
            trace=self.trace,
            offsets=OffsetField(bestOffsets),
            bestStep=bestStep
        )

def optimizeDirect(job: DeformJob) -> DirectResult:
    """
    Optimize free vertex offsets toward the job's target; see `DirectOptimizer`.
    """
    return DirectOptimizer(job).run()
