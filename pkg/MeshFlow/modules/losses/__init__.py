from .params import TERMS, ABLATIONS, LossWeights, LpiConfig, LossTerm, LossReport
from .chamfer import chamfer, nearestNeighbors
from .assignment import exactAssignment, auctionAssignment, assignmentDuals
from .emd import emd, EXACTTHRESHOLD
from .symmetry import symmetryLoss
from .laplacian import LaplacianOperator, laplacianMatrix, laplacianLoss, edgeAdjacency
from .lpi import lpiLoss
from .combine import combine, weightedTotal

__all__ = [
    'TERMS', 'ABLATIONS', 'LossWeights', 'LpiConfig', 'LossTerm', 'LossReport',
    'chamfer', 'nearestNeighbors', 'exactAssignment', 'auctionAssignment', 'assignmentDuals',
    'emd', 'EXACTTHRESHOLD', 'symmetryLoss', 'LaplacianOperator', 'laplacianMatrix',
    'laplacianLoss', 'edgeAdjacency', 'lpiLoss', 'combine', 'weightedTotal'
]
