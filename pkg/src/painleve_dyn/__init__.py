"""Dynamics of the Painleve VI monodromy action on the Fricke cubic surface."""

from .errors import *  # noqa: F401,F403
from .params import (
    AParam, BParam, DynkinType, KappaParam, ThetaParam, WeylElement,
    b_to_theta, classify_stratum, discriminant, kappa_to_b, rh, table_type,
    wall_conditions, weyl_apply,
)
from .coxeter import LoopWord, SigmaWord, conjugate_to_AS, dynamical_degree, phi
from .cohomology import lefschetz_number, sigma_pullback, word_pullback
from .periodic import (
    CountReport, SolverConfig, find_periodic_points, formula_count, lefschetz_audit,
)

__version__ = "0.1.0"
