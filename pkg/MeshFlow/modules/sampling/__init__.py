from .sampleBatch import SampleBatch, VertexGradients
from .dmso import (
    sampleSurface, samplesFromWeights, propagate, scatterGradients,
    subsamplePoints, sampleShape, barycentricWarp
)

__all__ = [
    'SampleBatch', 'VertexGradients', 'sampleSurface', 'samplesFromWeights',
    'propagate', 'scatterGradients', 'subsamplePoints', 'sampleShape', 'barycentricWarp'
]
