from MeshFlow.modules.mesh import mirrorPoints, planeAxis
from .chamfer import chamfer, pointArray
from .emd import emd, EXACTTHRESHOLD
from .params import LossTerm

def symmetryLoss(
    pc,
    pcTarget,
    plane: str = 'xz',
    exactThreshold: int = EXACTTHRESHOLD,
    bruteForce: bool = False,
    role: str = 'points'
) -> LossTerm:
    """
    Shape loss between the mirrored cloud and the target:
    `chamfer(M(pc), pcTarget) + emd(M(pc), pcTarget)`.

    The gradient is pulled back through the reflection, which flips the sign of
    the mirrored coordinate.

    Args:
        pc: (n, 3) points or PointCloud, the differentiated set.
        pcTarget: (n, 3) points or PointCloud.
        plane (str): Reflection plane, 'xz' by default.
        exactThreshold (int): Passed to `emd`.
        bruteForce (bool): Passed to `chamfer`.
        role (str): Key of the gradient in the returned term.
    """
    mirrored = mirrorPoints(pointArray(pc, 'pc'), plane)
    shape = chamfer(mirrored, pcTarget, bruteForce=bruteForce, role=role)
    transport = emd(mirrored, pcTarget, exactThreshold=exactThreshold, role=role)

    gradient = shape.gradients[role] + transport.gradients[role]
    gradient[:, planeAxis(plane)] *= -1.0

    return LossTerm(
        value=shape.value + transport.value,
        gradients={role: gradient},
        matching=transport.matching,
        gap=transport.gap
    )
