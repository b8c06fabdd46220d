"""
Template retrieval: pick the source mesh to deform from a small library.

In embedding mode each template is represented by the global feature of a
surface sample under an autoencoder's encoder, and the target goes to its
nearest template in that space. Chamfer mode compares surface samples
directly. Either way, equal distances resolve to the lowest template id.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Sequence, Tuple
import numpy as np
from MeshFlow.core import FLOAT, ShapeMismatchError, seeds
from MeshFlow.modules.mesh import TriMesh, PointCloud
from MeshFlow.modules.sampling import sampleShape
from MeshFlow.modules.losses import chamfer
from MeshFlow.modules.nn import MlpParams, encodePointcloud

logger = logging.getLogger(__name__)

SelectionMode = Literal['embedding', 'chamfer']

@dataclass(frozen=True, eq=False)
class TemplateSet:
    """
    Template meshes with their cached samples and embeddings.

    Attributes:
        meshes (tuple): Template meshes; a template's id is its position.
        clouds (tuple): (n, 3) surface sample of every template.
        embeddings (np.ndarray | None): (k, D) encoder features, when built with an encoder.
        names (tuple): Display name of every template (file path in the cli).
        categories (tuple): Optional category label of every template.
        encoderFingerprint (str | None): Architecture of the embedding encoder.
    """

    meshes: Tuple[TriMesh, ...]
    clouds: Tuple[np.ndarray, ...]
    embeddings: np.ndarray | None = None
    names: Tuple[str, ...] = ()
    categories: Tuple[str | None, ...] = ()
    encoderFingerprint: str | None = None

    def __post_init__(self):
        count = len(self.meshes)
        if count == 0:
            raise ValueError("A template set needs at least one template.")
        if len(self.clouds) != count:
            raise ShapeMismatchError(f"Got '{len(self.clouds)}' samples for '{count}' templates.")
        if not self.names:
            object.__setattr__(self, 'names', tuple(str(k) for k in range(count)))
        if not self.categories:
            object.__setattr__(self, 'categories', (None,) * count)
        if len(self.names) != count or len(self.categories) != count:
            raise ShapeMismatchError("Template names and categories must match the template count.")
        if self.embeddings is not None:
            embeddings = np.asarray(self.embeddings, dtype=FLOAT)
            if embeddings.ndim != 2 or embeddings.shape[0] != count:
                raise ShapeMismatchError(f"Expected '{count}' embeddings of equal length, got '{embeddings.shape}'.")
            object.__setattr__(self, 'embeddings', embeddings)

    def __len__(self) -> int:
        return len(self.meshes)

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(range(len(self.meshes)))

def buildTemplateSet(
    meshes: Sequence[TriMesh],
    encoder: MlpParams | None = None,
    seed: int = 0,
    samples: int = 1024,
    names: Sequence[str] = (),
    categories: Sequence[str | None] = ()
) -> TemplateSet:
    """
    Sample every template and, with an encoder, cache its embedding.

    Template k is sampled from its own stream, so the cached data of a template
    does not depend on the others.
    """
    clouds = tuple(
        sampleShape(mesh, samples, seeds.stream(seed, seeds.TEMPLATES, k)).points for k, mesh in enumerate(meshes)
    )
    embeddings = None
    if encoder is not None and clouds:
        embeddings = np.stack([encodePointcloud(cloud, encoder).data for cloud in clouds])

    return TemplateSet(
        meshes=tuple(meshes),
        clouds=clouds,
        embeddings=embeddings,
        names=tuple(names),
        categories=tuple(categories),
        encoderFingerprint=encoder.fingerprint() if encoder is not None else None
    )

def selectTemplate(
    target: PointCloud | TriMesh,
    templates: TemplateSet,
    encoder: MlpParams | None = None,
    mode: SelectionMode = 'embedding',
    category: str | None = None,
    seed: int = 0
) -> int:
    """
    Id of the template nearest to the target.

    Args:
        target (PointCloud | TriMesh): Query shape.
        templates (TemplateSet): Candidates.
        encoder (MlpParams, optional): Encoder the embeddings were built with;
            required in embedding mode.
        mode (str): 'embedding' (Euclidean distance of features) or 'chamfer'.
        category (str, optional): Only consider templates of this category.
        seed (int): Seed of the target sample.

    Returns:
        int: The chosen template id; the lowest id among equally near templates.

    Raises:
        ValueError: If no template matches the category, or the mode is unknown
            or lacks its inputs.
    """
    candidates = [k for k in templates.ids if category is None or templates.categories[k] == category]
    if not candidates:
        raise ValueError(f"No template of category '{category}'.")

    samples = templates.clouds[0].shape[0]
    query = sampleShape(target, samples, seeds.stream(seed, seeds.TEMPLATES))

    if mode == 'embedding':
        if encoder is None or templates.embeddings is None:
            raise ValueError("Embedding mode needs an encoder and a template set built with it.")
        if encoder.fingerprint() != templates.encoderFingerprint:
            raise ShapeMismatchError("The encoder does not match the one the template set was built with.")
        feature = encodePointcloud(query, encoder).data
        distances = {k: float(np.linalg.norm(templates.embeddings[k] - feature)) for k in candidates}
    elif mode == 'chamfer':
        distances = {k: chamfer(query, templates.clouds[k]).value for k in candidates}
    else:
        raise ValueError(f"Unknown template selection mode '{mode}'.")

    chosen = min(candidates, key=lambda k: (distances[k], k))
    logger.info(f"Selected template {chosen} ('{templates.names[chosen]}') at distance '{distances[chosen]}'.")
    return chosen
