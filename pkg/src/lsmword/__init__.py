"""Fixed points of the substitutions L -> L^p S, S -> M, M -> L^(p-1) S.

Generation of the fixed point u^(p), sliding-window Parikh vectors,
Abelian complexity, per-letter balance spreads, explicit witness factors
and a verification harness with a brute-force oracle.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    FormulaInvalid,
    FrameViolation,
    Inconsistent,
    MembershipUnresolved,
    NotAnImage,
    NotFound,
    NotPresent,
    NotStabilizedWarning,
    ResourceLimitError,
)
from .parikh import (
    BalanceProfile,
    CandidateFrame,
    ParikhVector,
    ScanPolicy,
    WindowSpectrum,
    abelian_complexity,
    balance_profile,
    balance_spread,
    candidate_frame,
    excluded_difference_check,
    parikh,
    spectrum,
    window_vectors,
)
from .witnesses import (
    AC7Family,
    WitnessPair,
    ac7_family,
    ac_lower_bound_triple,
    balance_witness_pair,
    search_witness_pair,
)
from .words import (
    FixedPointStream,
    Letter,
    Substitution,
    prefix,
    prefix_codes,
    strip_prefix_power,
    strip_suffix_power,
)
