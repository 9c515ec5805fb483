"""Hardy-type nonlocality witness for the three-party binary scenario.

A Hardy pattern pins a handful of cells: one target cell that should carry
strictly positive probability and a set of cells that must vanish exactly.
Any local model compatible with the canonical zero set forces the target to
zero, so a strictly positive target certifies nonlocality without any
inequality.  The target value ("success") additionally witnesses post-quantum
behavior when it exceeds QUANTUM_SUCCESS_BOUND, the largest success any
quantum realization can reach in this scenario; that bound enters as a named
constant because its derivation needs Hilbert-space machinery, not LPs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .behavior import Behavior, Scenario, TRIPARTITE_BINARY, cell_index, validate
from .optimize import (
    PolytopeOptimum,
    max_over_local,
    max_over_no_signaling,
    max_over_tobl,
)
from .rational import Q, ZERO

QUANTUM_SUCCESS_BOUND = Q(1, 8)

LOCAL_SET = "local"
TOBL_SET = "tobl"
NO_SIGNALING_SET = "ns"


@dataclass(frozen=True)
class HardyPattern:
    """Target cell plus zero cells, all as (outputs, inputs) pairs."""

    scenario: Scenario
    target: tuple
    zeros: tuple

    def __post_init__(self):
        cell_index(self.scenario, *self.target)  # index validation
        for cell in self.zeros:
            cell_index(self.scenario, *cell)
        if self.target in self.zeros:
            raise ValueError("target cell cannot also be required to vanish")


def canonical_pattern() -> HardyPattern:
    """The standard three-party pattern in 0/1 notation.

    Target P(000|000) > 0; zeros P(000|001) = P(000|010) = P(000|100) =
    P(111|111) = 0.  The zero set is closed under party permutations.
    """
    zero = (0, 0, 0)
    return HardyPattern(
        TRIPARTITE_BINARY,
        (zero, zero),
        (
            (zero, (0, 0, 1)),
            (zero, (0, 1, 0)),
            (zero, (1, 0, 0)),
            ((1, 1, 1), (1, 1, 1)),
        ),
    )


@dataclass(frozen=True)
class WitnessVerdict:
    success: object
    residuals: tuple  # ((cell, exact value), ...) over the pattern's zeros
    zeros_satisfied: bool
    hardy: bool
    post_quantum: bool
    threshold: object


def hardy_check(behavior: Behavior, pattern: HardyPattern | None = None) -> WitnessVerdict:
    """Evaluate a Hardy pattern on a behavior, exactly.

    ``success`` is the target cell's value and ``residuals`` the exact values
    at the zero cells.  ``hardy`` requires all zeros and success > 0;
    ``post_quantum`` additionally requires success > 1/8.
    """
    if pattern is None:
        pattern = canonical_pattern()
    if pattern.scenario != behavior.scenario:
        raise ValueError("pattern and behavior live in different scenarios")
    report = validate(behavior)
    if not report.valid:
        raise ValueError("behavior is not a probability table")
    success = behavior.prob(*pattern.target)
    residuals = tuple((cell, behavior.prob(*cell)) for cell in pattern.zeros)
    zeros_ok = all(value == 0 for _, value in residuals)
    return WitnessVerdict(
        success=success,
        residuals=residuals,
        zeros_satisfied=zeros_ok,
        hardy=zeros_ok and success > 0,
        post_quantum=zeros_ok and success > QUANTUM_SUCCESS_BOUND,
        threshold=QUANTUM_SUCCESS_BOUND,
    )


def hardy_max(
    set_spec: str, pattern: HardyPattern | None = None, cuts=None
) -> PolytopeOptimum:
    """Maximize the pattern's target cell over a correlation set by LP.

    ``set_spec`` is "local", "tobl" or "ns"; the zero cells are pinned to
    zero in every case.  For "tobl" the scenario must be the three-party
    binary one and ``cuts`` selects bipartitions (default all three).
    Returns the exact optimum and a behavior achieving it.
    """
    if pattern is None:
        pattern = canonical_pattern()
    return _hardy_max(set_spec, pattern, tuple(cuts) if cuts is not None else None)


@lru_cache(maxsize=32)
def _hardy_max(set_spec, pattern, cuts) -> PolytopeOptimum:
    objective = {pattern.target: 1}
    if set_spec == LOCAL_SET:
        return max_over_local(pattern.scenario, objective, pattern.zeros)
    if set_spec == NO_SIGNALING_SET:
        return max_over_no_signaling(pattern.scenario, objective, pattern.zeros)
    if set_spec == TOBL_SET:
        if pattern.scenario != TRIPARTITE_BINARY:
            raise ValueError("TOBL maximization needs the 3-party binary scenario")
        return max_over_tobl(objective, pattern.zeros, cuts)
    raise ValueError(f"unknown set {set_spec!r} (expected local, tobl or ns)")
