import numpy as np

FLOAT = np.float64
"""Floating point type of every geometry and tensor array in the package."""

INDEX = np.int64
"""Integer type of face, sample and vertex index arrays."""

BARYCENTRIC_TOLERANCE = 1e-12
"""Slack allowed on barycentric weight sums and point reconstruction."""
