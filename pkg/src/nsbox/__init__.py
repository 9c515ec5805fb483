"""nsbox: exact-arithmetic analysis of no-signaling boxes.

Behaviors are exact rational conditional probability tables; every verdict
(validity, no-signaling, Hardy witnessing, local/TOBL membership, game
bounds, wired locality) is decided by exact arithmetic, with LP outcomes
carrying substitution-checkable certificates.
"""

__version__ = "0.1.0"

from .behavior import (
    Behavior,
    NoSignalingReport,
    PartyPermutation,
    Scenario,
    TRIPARTITE_BINARY,
    ValidationReport,
    is_no_signaling,
    marginal,
    mix,
    ns_dimension,
    permute,
    uniform_behavior,
    validate,
)
from .lp import (
    INFEASIBLE,
    LPOutcome,
    LinearProgram,
    OPTIMAL,
    UNBOUNDED,
    check_certificate,
    check_primal,
    make_lp,
    solve,
)
from .localmodels import (
    BACKWARD,
    Bipartition,
    DecompositionHalf,
    DeterministicStrategy,
    FORWARD,
    LocalMembership,
    MembershipCertificate,
    TOBLDecomposition,
    TOBLTerm,
    TimeOrderedPairStrategy,
    ToblMembership,
    canonical_bipartitions,
    enumerate_deterministic,
    half_pairing_violations,
    local_membership,
    pair_halves,
    reconstruct,
    strategy_behavior,
    tobl_membership,
    tobl_membership_all,
    validate_decomposition,
    verify_local_certificate,
    verify_tobl_certificate,
)
from .hardy import (
    HardyPattern,
    QUANTUM_SUCCESS_BOUND,
    WitnessVerdict,
    canonical_pattern,
    hardy_check,
    hardy_max,
)
from .games import (
    BellExpression,
    ClassicalMax,
    classical_max,
    evaluate,
    gyni_expression,
    no_signaling_max,
)
from .wirings import (
    Wiring,
    WiringScanReport,
    apply_wiring,
    enumerate_wirings,
    forward_only_wiring,
    wired_locality_scan,
)
from .tables import (
    Claim,
    ClaimReport,
    table1,
    table2,
    table23,
    table3,
    verify_paper_claims,
)

__all__ = [name for name in dir() if not name.startswith("_")]
