"""Two-orientation hard rods on the square lattice.

Exact partition polynomials, Mayer cluster series, coarse-grained contours,
certified contour bounds and grand-canonical Monte Carlo.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    ConfigError,
    DivisibilityError,
    HardRodsError,
    InvalidParams,
    MixedTile,
    NoBadStructure,
    NonUniformPeel,
    NotInThetaQ,
    SizeLimit,
)
from .lattice import H, V, ModelParams, Rod  # noqa: E402
from .polyz import PolyZ  # noqa: E402

__all__ = [
    "BudgetExceeded",
    "ConfigError",
    "DivisibilityError",
    "H",
    "HardRodsError",
    "InvalidParams",
    "MixedTile",
    "ModelParams",
    "NoBadStructure",
    "NonUniformPeel",
    "NotInThetaQ",
    "PolyZ",
    "Rod",
    "SizeLimit",
    "V",
    "__version__",
]
