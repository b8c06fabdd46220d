import numpy as np
from scipy.spatial.distance import cdist
from MeshFlow.core import ShapeMismatchError
from .chamfer import pointArray
from .params import LossTerm
from .assignment import exactAssignment, auctionAssignment

EXACTTHRESHOLD = 512
"""Largest cloud size solved with the exact assignment."""

def emd(pc, pcTarget, exactThreshold: int = EXACTTHRESHOLD, role: str = 'points') -> LossTerm:
    """
    Earth Mover's loss: minimum over bijections of the summed (unsquared)
    Euclidean distances between matched points.

    The gradient with respect to a point is the unit vector from its matched
    partner to the point, zero when the two coincide.

    Args:
        pc: (n, 3) points or PointCloud, the differentiated set.
        pcTarget: (n, 3) points or PointCloud.
        exactThreshold (int): Clouds up to this size are matched exactly; larger
            ones use the auction, whose gap is reported on the term.
        role (str): Key of the gradient in the returned term.

    Returns:
        LossTerm: Value, `{role: (n, 3) gradient}`, matching and gap.

    Raises:
        GeometryError: If a cloud is empty.
        ShapeMismatchError: If the clouds differ in size.
    """
    source = pointArray(pc, 'pc')
    target = pointArray(pcTarget, 'pcTarget')
    if source.shape[0] != target.shape[0]:
        raise ShapeMismatchError(
            f"EMD needs clouds of equal size, got '{source.shape[0]}' and '{target.shape[0]}'."
        )

    cost = cdist(source, target)
    if source.shape[0] <= exactThreshold:
        matching, gap = exactAssignment(cost), 0.0
    else:
        matching, gap = auctionAssignment(cost)

    difference = source - target[matching]
    distance = np.linalg.norm(difference, axis=1)
    gradient = np.zeros_like(difference)
    moving = distance > 0.0
    gradient[moving] = difference[moving] / distance[moving, None]

    return LossTerm(value=float(distance.sum()), gradients={role: gradient}, matching=matching, gap=gap)
