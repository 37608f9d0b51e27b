"""Exact piecewise-linear circle homeomorphisms over Thompson-Stein groups."""
from .arith import GroupContext, Q, bezout, check_independent, find_pi, in_dA, slope_decompose
from .conjugacy import has_D_property, orbit_partition, pi_invariant, to_boshernitzan, verify_linearization
from .constructions import (
    bs_equivalent, bs_witness, boshernitzan, bump_alpha, finite_order_element, finite_order_exists,
    free_abelian_witness, qindependence_check, realize_log_ratio, stein_family, transport,
)
from .errors import ConstructionError, PLError, ValidationError
from .plmap import (
    PLCircleMap, commute, compose, conjugate, equals, evaluate, identity, invert, jumps, membership,
    power, rotation,
)
from .rotnum import CertifiedInterval, LogRatio, RationalRho, exact_rational_rho, rho_bounds

__version__ = "0.1.0"
