"""Faddeev-Green functions of the Laplacian in R^3 and of the Helmholtz
operator in a slab, evaluated through the complex exponential integral."""

from .complex_ei import Estimate, e1, e1_scaled, ei
from .errors import (BranchError, CausticError, ConstraintError, DomainError, FGError,
                     OrderError, QuadratureError, SingularityError, UnsupportedOrderError)
from .geometry import DirectionSpec, FieldPoint, make_direction
from .oracle import QuadratureSpec

__all__ = [
    "Estimate", "e1", "e1_scaled", "ei", "BranchError", "CausticError", "ConstraintError",
    "DomainError", "FGError", "OrderError", "QuadratureError", "SingularityError",
    "UnsupportedOrderError", "DirectionSpec", "FieldPoint", "make_direction", "QuadratureSpec",
]
