"""Deterministic local wirings: gluing an ordered pair of parties into one
effective party, and the exhaustive wired-locality scan.

A wiring describes, separately for each composite input, how the merged
agent uses its two boxes: which box is queried first (the order may depend
on the composite input), with which input, how the first box's output picks
the second box's input, and how both outputs combine into the final output.
With binary inputs/outputs that is 256 branch choices per composite input,
65,536 wirings in total.  Stochastic wirings are convex mixtures of these,
and locality is closed under mixing, so the deterministic list decides the
question for all wirings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .behavior import Behavior, Scenario, TRIPARTITE_BINARY, cell_index
from .localmodels import (
    Bipartition,
    MembershipCertificate,
    _require_ns_behavior,
    local_membership,
)
from .rational import ZERO

BIPARTITE_BINARY = Scenario(2, 2, 2)


@dataclass(frozen=True)
class WiringBranch:
    """How the composite party treats one of its inputs.

    ``first`` picks the pair slot queried first (0 or 1, referring to the
    bipartition's pair order); ``second_input[o]`` is the second box's input
    when the first box answered o; ``output[o1][o2]`` is the final output.
    """

    first: int
    first_input: int
    second_input: tuple
    output: tuple


@dataclass(frozen=True)
class Wiring:
    branches: tuple  # one WiringBranch per composite input


def _branches():
    out = []
    for first, first_input in itertools.product((0, 1), (0, 1)):
        for second_input in itertools.product((0, 1), repeat=2):
            for bits in itertools.product((0, 1), repeat=4):
                output = (tuple(bits[:2]), tuple(bits[2:]))
                out.append(WiringBranch(first, first_input, second_input, output))
    return out


def enumerate_wirings():
    """All deterministic wirings, lexicographic (branch for input 0 major).

    The position in this list is the wiring's rank; scans report the lowest
    ranked counterexample.
    """
    branches = _branches()
    return [Wiring((b0, b1)) for b0, b1 in itertools.product(branches, repeat=2)]


def forward_only_wiring() -> Wiring:
    """The wiring that forwards the composite input to pair slot 0 and
    reports that box's output, querying the other box with input 0."""
    branches = []
    for w in (0, 1):
        branches.append(
            WiringBranch(
                first=0,
                first_input=w,
                second_input=(0, 0),
                output=((0, 0), (1, 1)),  # final output = first box's output
            )
        )
    return Wiring(tuple(branches))


def apply_wiring(behavior: Behavior, bipartition: Bipartition, wiring: Wiring) -> Behavior:
    """Collapse the bipartition's pair through the wiring.

    Returns the bipartite behavior whose party 0 is the solo party
    (unchanged input x and output a) and party 1 the composite agent (input
    w, output o).  Well-defined for no-signaling inputs: the first box's
    marginal does not depend on the second box's input, so feeding the
    second input adaptively is meaningful.
    """
    if behavior.scenario != TRIPARTITE_BINARY:
        raise ValueError("wirings are defined for the 3-party binary scenario")
    scenario = BIPARTITE_BINARY
    flat = [ZERO] * scenario.cell_count
    solo, pair = bipartition.solo, bipartition.pair
    for x in (0, 1):
        for w in (0, 1):
            branch = wiring.branches[w]
            first_party = pair[branch.first]
            second_party = pair[1 - branch.first]
            for o1 in (0, 1):
                v = branch.second_input[o1]
                for o2 in (0, 1):
                    o = branch.output[o1][o2]
                    ins = [0, 0, 0]
                    ins[solo] = x
                    ins[first_party] = branch.first_input
                    ins[second_party] = v
                    for a in (0, 1):
                        outs = [0, 0, 0]
                        outs[solo] = a
                        outs[first_party] = o1
                        outs[second_party] = o2
                        idx = cell_index(scenario, (a, o), (x, w))
                        flat[idx] += behavior.prob(tuple(outs), tuple(ins))
    return Behavior(scenario, tuple(flat))


@dataclass(frozen=True)
class WiringCounterexample:
    rank: int
    wiring: Wiring
    behavior: Behavior  # the nonlocal wired box
    certificate: MembershipCertificate


@dataclass(frozen=True)
class WiringScanReport:
    all_local: bool
    wirings_checked: int
    distinct_behaviors: int
    counterexample: WiringCounterexample | None = None


@lru_cache(maxsize=4)
def wired_locality_scan(behavior: Behavior, bipartition: Bipartition) -> WiringScanReport:
    """Apply every wiring and decide bipartite locality of each result.

    Each wired box is validated and no-signaling-checked before the
    membership LP runs (inside local_membership); wired boxes are
    deduplicated by their exact probability table, so the LP only runs once
    per distinct box.  The scan stops at the first (lowest rank)
    counterexample and surfaces its certificate.
    """
    _require_ns_behavior(behavior)
    seen = {}
    for rank, wiring in enumerate(enumerate_wirings()):
        wired = apply_wiring(behavior, bipartition, wiring)
        verdict = seen.get(wired.probs)
        if verdict is None:
            verdict = local_membership(wired)
            seen[wired.probs] = verdict
        if not verdict.feasible:
            return WiringScanReport(
                all_local=False,
                wirings_checked=rank + 1,
                distinct_behaviors=len(seen),
                counterexample=WiringCounterexample(
                    rank, wiring, wired, verdict.certificate
                ),
            )
    return WiringScanReport(
        all_local=True,
        wirings_checked=len(_branches()) ** 2,
        distinct_behaviors=len(seen),
    )
