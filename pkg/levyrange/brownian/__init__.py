"""Brownian-with-drift xi: Riccati map, Frobenius series and theta-nesting."""

from levyrange.brownian.frobenius import FrobeniusSeries, dufresne_laplace, frobenius_solve
from levyrange.brownian.nesting import nesting_witness, scale_identity_check
from levyrange.brownian.riccati import (
    BmDriftParams,
    background_exponent_bounds,
    eta_exponent_upper_bound,
    k_from_nuX,
    ode_residual,
    psi_X_from_V,
    riccati_eta_from_X,
    riccati_exponent,
)

__all__ = [
    "BmDriftParams",
    "FrobeniusSeries",
    "background_exponent_bounds",
    "dufresne_laplace",
    "eta_exponent_upper_bound",
    "frobenius_solve",
    "k_from_nuX",
    "nesting_witness",
    "ode_residual",
    "psi_X_from_V",
    "riccati_eta_from_X",
    "riccati_exponent",
    "scale_identity_check",
]
