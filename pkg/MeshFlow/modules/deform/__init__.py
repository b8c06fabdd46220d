from .params import PipelineParams, DeformJob, OffsetField, TrainParams, AutoencoderParams
from .pipeline import (
    PipelineResult, applyOffsets, forwardPipeline, deformMesh, deformPointCloud, interpolateTargets,
    encodeSource, encodeTarget
)
from .direct import DirectOptimizer, DirectResult, optimizeDirect
from .training import Trainer, TrainResult, train
from .autoencoder import AutoencoderTrainer, AutoencoderResult, trainAutoencoder
from .templates import TemplateSet, buildTemplateSet, selectTemplate

__all__ = [
    'PipelineParams', 'DeformJob', 'OffsetField', 'TrainParams', 'AutoencoderParams',
    'PipelineResult', 'applyOffsets', 'forwardPipeline', 'deformMesh', 'deformPointCloud',
    'interpolateTargets', 'encodeSource', 'encodeTarget',
    'DirectOptimizer', 'DirectResult', 'optimizeDirect',
    'Trainer', 'TrainResult', 'train',
    'AutoencoderTrainer', 'AutoencoderResult', 'trainAutoencoder',
    'TemplateSet', 'buildTemplateSet', 'selectTemplate'
]
