"""Fifth-order WENO shock-capturing solvers and their verification harness."""

from wenokit.euler import GasModel, NonphysicalState
from wenokit.kernel import SchemeConfig
from wenokit.solver import EulerPhysics, Grid1D, Grid2D, LinearAdvection

__all__ = [
    "EulerPhysics",
    "GasModel",
    "Grid1D",
    "Grid2D",
    "LinearAdvection",
    "NonphysicalState",
    "SchemeConfig",
]
__version__ = "0.1.0"
