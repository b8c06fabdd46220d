"""
JSON checkpoints of network and encoder parameters.

A checkpoint stores an architecture fingerprint next to the layers, each with
its name, weight shape, activation and flat row-major weight and bias values.
Floats are written in shortest round-trip form, so a reloaded network computes
bit-identical outputs.
"""

import logging
from typing import Any, Dict, List
import numpy as np
from MeshFlow.builders import JSON
from MeshFlow.core import CheckpointError
from .tensor import Tensor
from .mlp import Layer, MlpParams
from .network import NetworkParams
from .params import ArchitectureParams, fingerprint

logger = logging.getLogger(__name__)

FORMAT = 'meshflow-checkpoint'
VERSION = 1

def layerEntry(layer: Layer) -> Dict[str, Any]:
    return {
        'name': layer.name,
        'shape': list(layer.weight.shape),
        'activation': layer.activation,
        'data': {'weight': layer.weight.flat().tolist(), 'bias': layer.bias.flat().tolist()}
    }

def parseLayer(entry: Dict[str, Any]) -> Layer:
    try:
        inputs, outputs = (int(v) for v in entry['shape'])
        weight = np.asarray(entry['data']['weight'], dtype=float)
        bias = np.asarray(entry['data']['bias'], dtype=float)
        if weight.size != inputs * outputs or bias.size != outputs:
            raise CheckpointError(f"Layer '{entry['name']}' data does not match its shape '{entry['shape']}'.")
        return Layer(
            name=str(entry['name']),
            weight=Tensor(weight.reshape(inputs, outputs)),
            bias=Tensor(bias),
            activation=entry['activation']
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, CheckpointError):
            raise
        raise CheckpointError(f"Malformed checkpoint layer: '{e}'.")

def writeDocument(path, kind: str, mlps: List[MlpParams]) -> None:
    layout = [entry for mlp in mlps for entry in mlp.layout()]
    JSON(path).write({
        'format': FORMAT,
        'version': VERSION,
        'kind': kind,
        'fingerprint': fingerprint(layout),
        'layers': [layerEntry(layer) for mlp in mlps for layer in mlp.layers]
    })
    logger.info(f"Wrote {kind} checkpoint '{path}'.")

def readDocument(path, kind: str) -> Dict[str, List[Layer]]:
    """
    Read a checkpoint and group its layers by MLP name, keeping file order.

    Raises:
        FileNotFoundError: If the file does not exist.
        CheckpointError: If the document is not a valid checkpoint of this kind,
            or its layers do not match the stored fingerprint.
    """
    try:
        document = JSON(path).read()
    except ValueError as e:
        raise CheckpointError(f"Checkpoint '{path}' is not valid JSON: '{e}'.")

    if not isinstance(document, dict) or document.get('format') != FORMAT:
        raise CheckpointError(f"'{path}' is not a MeshFlow checkpoint.")
    if document.get('version') != VERSION:
        raise CheckpointError(f"Unsupported checkpoint version '{document.get('version')}' in '{path}'.")
    if document.get('kind') != kind:
        raise CheckpointError(f"'{path}' holds a '{document.get('kind')}' checkpoint, expected '{kind}'.")

    groups: Dict[str, List[Layer]] = {}
    for entry in document.get('layers') or []:
        layer = parseLayer(entry)
        groups.setdefault(layer.name.rsplit('.', 1)[0], []).append(layer)

    layout = [entry for name, layers in groups.items() for entry in MlpParams(name, layers).layout()]
    if fingerprint(layout) != document.get('fingerprint'):
        raise CheckpointError(f"The layers of '{path}' do not match its architecture fingerprint.")
    return groups

def saveCheckpoint(network: NetworkParams, path) -> None:
    writeDocument(path, 'network', network.mlps())

def loadCheckpoint(path, expected: ArchitectureParams | None = None) -> NetworkParams:
    """
    Load a network checkpoint.

    Args:
        path: Checkpoint file.
        expected (ArchitectureParams, optional): Architecture the caller needs;
            a checkpoint of another architecture is rejected.

    Returns:
        NetworkParams: The stored parameters.

    Raises:
        CheckpointError: On a malformed file or an architecture mismatch.
    """
    groups = readDocument(path, 'network')
    try:
        mlps = [MlpParams(name, groups[name]) for name in ('sourceEncoder', 'targetEncoder', 'decoder')]
        architecture = ArchitectureParams(
            encoderWidths=tuple(layer.weight.shape[1] for layer in mlps[0].layers),
            decoderWidths=tuple(layer.weight.shape[1] for layer in mlps[2].layers)
        )
    except (KeyError, ValueError) as e:
        raise CheckpointError(f"'{path}' does not describe a deformation network: '{e}'.")

    network = NetworkParams(architecture, *mlps)
    if network.fingerprint() != architecture.fingerprint():
        raise CheckpointError(f"'{path}' does not describe a deformation network.")
    if expected is not None and expected.fingerprint() != network.fingerprint():
        raise CheckpointError(
            f"Checkpoint '{path}' has architecture {architecture}, expected {expected}."
        )
    return network

def saveEncoder(encoder: MlpParams, path) -> None:
    writeDocument(path, 'encoder', [encoder])

def loadEncoder(path) -> MlpParams:
    groups = readDocument(path, 'encoder')
    if len(groups) != 1:
        raise CheckpointError(f"'{path}' must hold exactly one encoder.")
    name, layers = next(iter(groups.items()))
    return MlpParams(name, layers)
