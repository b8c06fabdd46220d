"""
Seed splitting scheme.

A single integer seed drives every random choice. Each consumer draws from its
own named stream and loops that need a fresh draw per step add the step index.
The run seed is the `SeedSequence` entropy and `(stream, len(extra), *extra)`
is the spawn key. The key carries its own length, so `stream(s, 7)` and
`stream(s, 7, 0)` are distinct streams.
"""

import numpy as np

INIT = 0
SOURCE_ENCODE = 1
TARGET_ENCODE = 2
MESH_PASS = 3
POINT_PASS = 4
TARGET_SAMPLE = 5
AUTOENCODER = 6
TEMPLATES = 7
CLI_SAMPLE = 8

def streamKey(streamId: int, *extra: int) -> tuple:
    return (int(streamId), len(extra), *map(int, extra))

def stream(seed: int, streamId: int, *extra: int) -> np.random.Generator:
    """
    Build the generator of one named stream.

    Args:
        seed (int): The run seed, nonnegative.
        streamId (int): One of the stream constants of this module.
        *extra (int): Further nonnegative key words, usually a step index.

    Returns:
        np.random.Generator: A PCG64 generator owned by the caller.
    """
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=streamKey(streamId, *extra)))
