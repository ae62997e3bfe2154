"""Random walks on free groups and their quotients.

Exact free-group arithmetic, step distributions with an exact rational
channel, coset enumeration, growth and cogrowth series, entropy and
drift (exact and Monte Carlo), the hitting measure on the boundary, and
finite partition lattices.  All entropies are in nats.
"""

from .boundary import (
    HittingMeasure,
    boundary_entropy,
    boundary_entropy_coefficient,
    cocycle_check,
    cylinder_mass_exact,
    proximality_sim,
    rn_derivative,
    rn_exponent,
    rn_integral,
)
from .entropy import (
    drift_mc,
    entropy_gap_check,
    exact_drift,
    exact_free_entropy,
    guivarch_check,
    quotient_entropy_dp,
    radial_entropy_exact,
    theorem_a_bound,
    theorem_a_coefficient,
)
from .errors import (
    ConvergenceError,
    CosetLimitError,
    GwelError,
    ParameterError,
    ParseError,
    ResourceGuardError,
)
from .growth import (
    ball_counts,
    critical_exponent,
    grigorchuk_delta,
    kernel_sphere_counts,
    sphere_counts,
)
from .lattice import (
    CondExpectation,
    FiniteAction,
    FiniteSpace,
    Partition,
    chain_rule_check,
    entropy_functional,
    invariant_closure,
    join,
    l2_distance,
    meet,
    monotone_chain_limit,
)
from .measures import Distribution, convolve, convolve_power, shannon_entropy, srw
from .parsing import parse_lattice_config, parse_quotient_spec, resolve_quotient_spec
from .quotients import (
    AbelianRep,
    PermRep,
    TrivialRep,
    coset_enumerate,
    from_point_permutations,
    pushforward,
)
from .words import FreeGroup, Word, ball_size, parse_word, sphere, sphere_size

__version__ = "0.1.0"

__all__ = [
    "AbelianRep",
    "CondExpectation",
    "ConvergenceError",
    "CosetLimitError",
    "Distribution",
    "FiniteAction",
    "FiniteSpace",
    "FreeGroup",
    "GwelError",
    "HittingMeasure",
    "ParameterError",
    "ParseError",
    "Partition",
    "PermRep",
    "ResourceGuardError",
    "TrivialRep",
    "Word",
    "ball_counts",
    "ball_size",
    "boundary_entropy",
    "boundary_entropy_coefficient",
    "chain_rule_check",
    "cocycle_check",
    "convolve",
    "convolve_power",
    "coset_enumerate",
    "critical_exponent",
    "cylinder_mass_exact",
    "drift_mc",
    "entropy_functional",
    "entropy_gap_check",
    "exact_drift",
    "exact_free_entropy",
    "from_point_permutations",
    "grigorchuk_delta",
    "guivarch_check",
    "invariant_closure",
    "join",
    "kernel_sphere_counts",
    "l2_distance",
    "meet",
    "monotone_chain_limit",
    "parse_lattice_config",
    "parse_quotient_spec",
    "parse_word",
    "proximality_sim",
    "pushforward",
    "quotient_entropy_dp",
    "radial_entropy_exact",
    "resolve_quotient_spec",
    "rn_derivative",
    "rn_exponent",
    "rn_integral",
    "shannon_entropy",
    "sphere",
    "sphere_counts",
    "sphere_size",
    "srw",
    "theorem_a_bound",
    "theorem_a_coefficient",
]
