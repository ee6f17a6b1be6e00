"""Max-plus trust computation. Matrices are lists of rows; -inf is eps."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    DomainError,
    DominanceFailure,
    IoError,
    MaxTrustError,
    NonConvergence,
    ParseError,
    ShapeError,
)

EPS = float("-inf")
