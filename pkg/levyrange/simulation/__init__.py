"""Monte Carlo oracles for exponential functionals and the GOU recursion."""

from levyrange.simulation.engine import (
    SampleSet,
    empirical_laplace,
    gou_marginal,
    simulate_functional,
    support_consistency,
    verify_fixed_point,
)
from levyrange.simulation.paths import PathGenerator, path_rng

__all__ = [
    "PathGenerator",
    "SampleSet",
    "empirical_laplace",
    "gou_marginal",
    "path_rng",
    "simulate_functional",
    "support_consistency",
    "verify_fixed_point",
]
