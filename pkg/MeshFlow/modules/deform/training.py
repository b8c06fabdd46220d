from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple
from MeshFlow.core import DivergenceError
from MeshFlow.injectors import logger
from MeshFlow.modules.mesh import TriMesh, PointCloud
from MeshFlow.modules.losses import TERMS
from MeshFlow.modules.nn import Tape, Adam, NetworkParams
from MeshFlow.stores import LossTrace
from .params import TrainParams
from .pipeline import forwardPipeline

EpochCallback = Callable[[int, NetworkParams, LossTrace], None]

@dataclass(frozen=True, eq=False)
class TrainResult:
    network: NetworkParams
    trace: LossTrace

@logger()
class Trainer:
    """
    Fits the deformation network to a list of (source, target) pairs.

    Step k runs `forwardPipeline` on pair `k mod len(pairs)`, records the loss
    of the current parameters, backpropagates through the tape and takes one
    Adam step. An epoch ends after every full pass over the pairs and after the
    last step.

    Attributes:
        pairs (List[tuple]): Training pairs.
        network (NetworkParams): Updated in place.
        config (TrainParams): Loop options.
        trace (LossTrace): One row per step.
    """

    def __init__(self, pairs: Sequence[Tuple[TriMesh, PointCloud | TriMesh]], network: NetworkParams, config: TrainParams | None = None) -> None:
        if not pairs:
            raise ValueError("Training needs at least one (source, target) pair.")
        self.pairs = list(pairs)
        self.network = network
        self.config = config or TrainParams()
        self.trace = LossTrace(list(TERMS))

    def run(self, onEpoch: EpochCallback | None = None) -> TrainResult:
        """
        Train for `config.steps` steps.

        Args:
            onEpoch (Callable, optional): Called as `onEpoch(epoch, network, trace)`
                at the end of every epoch, e.g. to write a checkpoint.

        Raises:
            DivergenceError: If a loss becomes non-finite; carries the trace so far.
        """
        config = self.config
        optimizer = Adam(self.network.parameters(), learningRate=config.learningRate)
        epoch = 0

        for step in range(config.steps):
            source, target = self.pairs[step % len(self.pairs)]
            tape = Tape()
            try:
                result = forwardPipeline(
                    source, target, self.network, config.seed, config.pipeline,
                    step=step if config.resample else 0, tape=tape
                )
            except DivergenceError as e:
                self.trace.append(step, {}, float('nan'))
                self.Logger.error(f"Training diverged at step {step}: {e}")
                raise DivergenceError(f"Training diverged at step {step}: {e}", trace=self.trace)

            self.trace.append(step, result.report.terms, result.report.total)
            self.Logger.debug(f"Step {step}: total '{result.report.total}'.")

            gradients = tape.backward(result.loss)
            optimizer.step(gradients.collect(self.network.parameters()))

            if (step + 1) % len(self.pairs) == 0 or step + 1 == config.steps:
                epoch += 1
                self.Logger.info(f"Epoch {epoch} done at step {step}: total '{result.report.total}'.")
                if onEpoch is not None:
                    onEpoch(epoch, self.network, self.trace)

        return TrainResult(self.network, self.trace)

def train(
    pairs: Sequence[Tuple[TriMesh, PointCloud | TriMesh]],
    network: NetworkParams,
    config: TrainParams | None = None,
    onEpoch: EpochCallback | None = None
) -> TrainResult:
    """
    Train `network` in place on the pairs; see `Trainer`.

    Returns:
        TrainResult: The trained parameters and the per-step loss trace.
    """
    return Trainer(pairs, network, config).run(onEpoch)
