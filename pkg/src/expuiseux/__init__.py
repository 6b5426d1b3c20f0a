"""Factorization invariants of exponential Puiseux semirings S_{r,N}."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    InsufficientCoefficient,
    MixedResidues,
    NotAMonoid,
    NotAtomic,
    NotClosed,
    NotCofinite,
    NotMember,
    PuiseuxError,
)
from .numonoid import NATURALS, NumericalMonoid, nm_from_generators, nm_from_small_elements, parse_monoid  # noqa: E402
from .semiring import (  # noqa: E402
    Direction,
    Extremal,
    Factorization,
    FactorizationSet,
    Semiring,
    SemiringClass,
    parse_element,
    parse_rational,
    sr_atom,
    sr_divides,
    sr_extremal,
    sr_factorizations,
    sr_is_extremal,
    sr_length_window,
    sr_member,
    sr_new,
    sr_pi,
    sr_rewrite,
)
