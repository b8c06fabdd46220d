from dataclasses import dataclass
from typing import Sequence
from MeshFlow.core import DivergenceError, seeds
from MeshFlow.injectors import logger
from MeshFlow.modules.mesh import TriMesh, PointCloud
from MeshFlow.modules.sampling import sampleShape
from MeshFlow.modules.losses import chamfer
from MeshFlow.modules.nn import Tensor, Tape, Adam, MlpParams, encodePointcloud, reshape, external
from MeshFlow.stores import LossTrace
from .params import AutoencoderParams

@dataclass(frozen=True, eq=False)
class AutoencoderResult:
    """
    Attributes:
        encoder (MlpParams): Embedding encoder, used with `encodePointcloud`.
        decoder (MlpParams): Feature to point-set decoder.
        trace (LossTrace): Reconstruction Chamfer loss per step.
    """

    encoder: MlpParams
    decoder: MlpParams
    trace: LossTrace

@logger()
class AutoencoderTrainer:
    """
    PointNet autoencoder whose encoder half embeds shapes for template retrieval.

    The decoder maps the global feature through one hidden relu layer to
    `outputPoints * 3` values read as a point set, and the pair is trained on
    the Chamfer loss between input sample and reconstruction.
    """

    def __init__(self, clouds: Sequence[PointCloud | TriMesh], config: AutoencoderParams | None = None) -> None:
        if not clouds:
            raise ValueError("The autoencoder needs at least one training shape.")
        self.clouds = list(clouds)
        self.config = config or AutoencoderParams()

        rng = seeds.stream(self.config.seed, seeds.AUTOENCODER)
        widths = tuple(self.config.encoderWidths)
        self.encoder = MlpParams.create('embedding', 3, widths, rng)
        self.decoder = MlpParams.create(
            'reconstruction', widths[-1], (self.config.hiddenWidth, self.config.outputPoints * 3), rng,
            outputActivation='linear'
        )
        self.trace = LossTrace(['chamfer'])

    def reconstruct(self, cloud, tape: Tape | None = None) -> Tensor:
        """(outputPoints, 3) reconstruction of a cloud."""
        feature = encodePointcloud(cloud, self.encoder, tape)
        row = reshape(feature, (1, feature.shape[0]), tape)
        return reshape(self.decoder(row, tape), (self.config.outputPoints, 3), tape)

    def run(self) -> AutoencoderResult:
        """
        Raises:
            DivergenceError: If the loss becomes non-finite; carries the trace so far.
        """
        config = self.config
        parameters = self.encoder.parameters() + self.decoder.parameters()
        optimizer = Adam(parameters, learningRate=config.learningRate)

        for step in range(config.steps):
            shape = self.clouds[step % len(self.clouds)]
            sample = sampleShape(shape, config.samples, seeds.stream(config.seed, seeds.AUTOENCODER, step))
            tape = Tape()
            try:
                reconstruction = self.reconstruct(sample, tape)
                term = chamfer(reconstruction.data, sample, role='reconstruction')
                loss = external([reconstruction], term.value, [term.gradients['reconstruction']], tape)
            except DivergenceError as e:
                self.trace.append(step, {}, float('nan'))
                self.Logger.error(f"Autoencoder training diverged at step {step}: {e}")
                raise DivergenceError(f"Autoencoder training diverged at step {step}: {e}", trace=self.trace)

            self.trace.append(step, {'chamfer': term.value}, term.value)
            self.Logger.debug(f"Autoencoder step {step}: chamfer '{term.value}'.")
            optimizer.step(tape.backward(loss).collect(parameters))

        if len(self.trace):
            self.Logger.info(
                f"Autoencoder trained: chamfer '{self.trace.rows[0].total}' -> '{self.trace.rows[-1].total}'."
            )
        return AutoencoderResult(self.encoder, self.decoder, self.trace)

def trainAutoencoder(clouds: Sequence[PointCloud | TriMesh], config: AutoencoderParams | None = None) -> MlpParams:
    """
    Train the embedding autoencoder and return its encoder half.
    """
    return AutoencoderTrainer(clouds, config).run().encoder
