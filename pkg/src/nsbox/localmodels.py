"""Local hidden-variable models and time-ordered bilocal (TOBL) decompositions.

Membership in the fully local polytope is decided by an exact LP over the
deterministic strategies.  TOBL membership for a bipartition such as A|BC is
decided by one coupled LP: a single weight per triple (solo strategy,
leader-to-follower pair strategy, follower-to-leader pair strategy) must
reproduce the behavior through the forward ordering and through the backward
ordering simultaneously, so both orderings share the same randomness and the
same solo-party assignments.

Index conventions: a pair strategy stores the leader's output per leader
input and the follower's output per (leader input, follower input); the
leader never sees the follower's input, so the directional marginal
condition holds by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .behavior import (
    Behavior,
    Scenario,
    TRIPARTITE_BINARY,
    cell_index,
    is_no_signaling,
    validate,
)
from .lp import make_lp, solve
from .rational import ONE, ZERO

FORWARD = "forward"
BACKWARD = "backward"

_PARTY_NAMES = "ABC"


# ---------------------------------------------------------------------------
# deterministic strategies and the local polytope


@dataclass(frozen=True)
class DeterministicStrategy:
    """One output function per party: assignments[party][input] -> output."""

    assignments: tuple

    def output(self, party: int, x: int) -> int:
        return self.assignments[party][x]

    def fired_outputs(self, inputs) -> tuple:
        return tuple(f[x] for f, x in zip(self.assignments, inputs))


def enumerate_deterministic(scenario: Scenario):
    """All deterministic strategies, lexicographic, party 0 most significant.

    Count is (outputs ** inputs) ** parties; the list order is the tie-break
    order used everywhere ("lowest strategy index wins").
    """
    per_party = tuple(
        itertools.product(range(scenario.outputs), repeat=scenario.inputs)
    )
    return [
        DeterministicStrategy(combo)
        for combo in itertools.product(per_party, repeat=scenario.parties)
    ]


def strategy_behavior(scenario: Scenario, strategy: DeterministicStrategy) -> Behavior:
    flat = [ZERO] * scenario.cell_count
    for ins in scenario.input_tuples():
        flat[cell_index(scenario, strategy.fired_outputs(ins), ins)] = ONE
    return Behavior(scenario, tuple(flat))


@dataclass(frozen=True)
class MembershipCertificate:
    """Farkas certificate with rows labelled by behavior cells.

    Reads as a Bell-type functional: every admissible model scores >= 0 on
    it while the tested behavior scores < 0 (possibly with mirrored signs).
    """

    entries: tuple  # ((label, value), ...), one per LP row

    def as_dict(self):
        return {label: value for label, value in self.entries}


def _require_ns_behavior(behavior: Behavior):
    report = validate(behavior)
    if not report.valid:
        raise ValueError(
            "behavior is not a probability table: "
            + "; ".join(v.describe() for v in report.violations[:3])
        )
    ns = is_no_signaling(behavior)
    if not ns.no_signaling:
        raise ValueError(
            "behavior is signaling: " + ns.violations[0].describe()
        )


def _cell_label(scenario, flat_index):
    n_out = scenario.outputs**scenario.parties
    ins = scenario.input_tuples()[flat_index // n_out]
    outs = scenario.output_tuples()[flat_index % n_out]
    return "".join(map(str, outs)) + "|" + "".join(map(str, ins))


@dataclass(frozen=True)
class LocalMembership:
    feasible: bool
    weights: tuple | None = None  # ((strategy, weight), ...) nonzero terms
    certificate: MembershipCertificate | None = None


@lru_cache(maxsize=32)
def local_membership(behavior: Behavior) -> LocalMembership:
    """Decide membership in the convex hull of deterministic strategies.

    Feasible: returns exact weights (nonnegative, summing to one) that
    reproduce every cell.  Infeasible: returns a cell-labelled certificate.
    Signaling or invalid behaviors are rejected up front.
    """
    _require_ns_behavior(behavior)
    scenario = behavior.scenario
    strategies = enumerate_deterministic(scenario)
    cells = scenario.cell_count
    columns = [[] for _ in strategies]
    for s_idx, strategy in enumerate(strategies):
        for ins in scenario.input_tuples():
            columns[s_idx].append(
                cell_index(scenario, strategy.fired_outputs(ins), ins)
            )
    equalities = [dict() for _ in range(cells)]
    for s_idx, fired in enumerate(columns):
        for idx in fired:
            equalities[idx][s_idx] = 1
    labels = [_cell_label(scenario, i) for i in range(cells)]
    lp = make_lp(
        len(strategies),
        [(equalities[i], behavior.probs[i]) for i in range(cells)],
        row_labels=tuple(labels),
    )
    outcome = solve(lp)
    if not outcome.feasible:
        cert = MembershipCertificate(tuple(zip(labels, outcome.certificate)))
        return LocalMembership(False, certificate=cert)
    weights = tuple(
        (strategies[j], w) for j, w in enumerate(outcome.primal) if w != 0
    )
    return LocalMembership(True, weights=weights)


def verify_local_certificate(behavior: Behavior, cert: MembershipCertificate) -> bool:
    """Independent check of a local-membership certificate.

    Uses nothing from the LP engine: scores every deterministic strategy and
    the behavior against the certificate functional by direct enumeration.
    """
    y = cert.as_dict()
    scenario = behavior.scenario
    behavior_score = ZERO
    for (outs, ins), p in behavior.cells():
        label = "".join(map(str, outs)) + "|" + "".join(map(str, ins))
        if p:
            behavior_score += y[label] * p
    if behavior_score == 0:
        return False
    sign = 1 if behavior_score < 0 else -1
    for strategy in enumerate_deterministic(scenario):
        score = ZERO
        for ins in scenario.input_tuples():
            outs = strategy.fired_outputs(ins)
            label = "".join(map(str, outs)) + "|" + "".join(map(str, ins))
            score += y[label]
        if sign * score < 0:
            return False
    return True


# ---------------------------------------------------------------------------
# bipartitions and time-ordered pair strategies


@dataclass(frozen=True)
class Bipartition:
    """A cut solo | (pair) of the three parties; pair order fixes who leads
    in the forward direction."""

    solo: int
    pair: tuple

    def __post_init__(self):
        if sorted((self.solo,) + self.pair) != [0, 1, 2]:
            raise ValueError(f"bipartition must cover parties 0,1,2: {self}")

    @property
    def name(self) -> str:
        return f"{_PARTY_NAMES[self.solo]}|{''.join(_PARTY_NAMES[p] for p in self.pair)}"

    @classmethod
    def from_name(cls, name: str) -> "Bipartition":
        text = name.strip().upper().replace(" ", "")
        try:
            solo_part, pair_part = text.split("|")
            solo = _PARTY_NAMES.index(solo_part)
            pair = tuple(_PARTY_NAMES.index(ch) for ch in pair_part)
        except (ValueError, IndexError):
            raise ValueError(f"not a bipartition name: {name!r} (expected e.g. 'A|BC')")
        return cls(solo, pair)

    def permuted(self, perm) -> "Bipartition":
        return Bipartition(
            perm.mapping[self.solo], tuple(perm.mapping[p] for p in self.pair)
        )


def canonical_bipartitions():
    """The three cuts A|BC, B|AC, C|AB (pair in ascending party order)."""
    return (
        Bipartition(0, (1, 2)),
        Bipartition(1, (0, 2)),
        Bipartition(2, (0, 1)),
    )


@dataclass(frozen=True)
class TimeOrderedPairStrategy:
    """Deterministic strategy of an ordered pair with one-way signaling.

    ``leader_outputs[u]`` is the leader's output on its input u;
    ``follower_outputs[u][v]`` is the follower's output on its input v when
    the leader got input u.  ``direction`` says which pair member leads:
    FORWARD = pair[0], BACKWARD = pair[1].
    """

    direction: str
    leader_outputs: tuple
    follower_outputs: tuple

    def __post_init__(self):
        if self.direction not in (FORWARD, BACKWARD):
            raise ValueError(f"unknown direction {self.direction!r}")

    def pair_outputs(self, first_input: int, second_input: int) -> tuple:
        """Outputs (pair[0] output, pair[1] output) for pair inputs."""
        if self.direction == FORWARD:
            lead_in, follow_in = first_input, second_input
            lead_out = self.leader_outputs[lead_in]
            follow_out = self.follower_outputs[lead_in][follow_in]
            return (lead_out, follow_out)
        lead_in, follow_in = second_input, first_input
        lead_out = self.leader_outputs[lead_in]
        follow_out = self.follower_outputs[lead_in][follow_in]
        return (follow_out, lead_out)


def enumerate_pair_strategies(direction: str):
    """All 64 deterministic one-way pair strategies for binary inputs/outputs."""
    strategies = []
    for leader in itertools.product((0, 1), repeat=2):
        for flat in itertools.product((0, 1), repeat=4):
            follower = (tuple(flat[:2]), tuple(flat[2:]))
            strategies.append(TimeOrderedPairStrategy(direction, leader, follower))
    return strategies


@dataclass(frozen=True)
class TOBLTerm:
    weight: object
    solo_outputs: tuple  # solo party's output per input
    forward: TimeOrderedPairStrategy
    backward: TimeOrderedPairStrategy


@dataclass(frozen=True)
class TOBLDecomposition:
    bipartition: Bipartition
    terms: tuple


@dataclass(frozen=True)
class DecompositionHalf:
    """One directional table of a TOBL model: weights, solo assignments and
    pair strategies for a single ordering."""

    direction: str
    rows: tuple  # ((weight, solo_outputs, pair_strategy), ...)


def half_pairing_violations(forward: DecompositionHalf, backward: DecompositionHalf):
    """Consistency conditions for pairing two halves into one model: same
    weight and same solo assignments term by term."""
    violations = []
    if forward.direction != FORWARD or backward.direction != BACKWARD:
        violations.append("halves have wrong directions")
        return violations
    if len(forward.rows) != len(backward.rows):
        violations.append(
            f"halves have {len(forward.rows)} vs {len(backward.rows)} terms"
        )
        return violations
    for k, (frow, brow) in enumerate(zip(forward.rows, backward.rows)):
        if frow[0] != brow[0]:
            violations.append(f"term {k + 1}: weights differ ({frow[0]} vs {brow[0]})")
        if frow[1] != brow[1]:
            violations.append(
                f"term {k + 1}: solo assignments differ ({frow[1]} vs {brow[1]})"
            )
    return violations


def pair_halves(
    forward: DecompositionHalf, backward: DecompositionHalf, bipartition: Bipartition
) -> TOBLDecomposition:
    violations = half_pairing_violations(forward, backward)
    if violations:
        raise ValueError("halves do not pair: " + "; ".join(violations))
    terms = tuple(
        TOBLTerm(frow[0], frow[1], frow[2], brow[2])
        for frow, brow in zip(forward.rows, backward.rows)
    )
    return TOBLDecomposition(bipartition, terms)


@dataclass(frozen=True)
class DecompositionReport:
    valid: bool
    violations: tuple


def validate_decomposition(decomp: TOBLDecomposition) -> DecompositionReport:
    """Itemized validity check of an explicit TOBL model.

    Weights must be nonnegative and sum to exactly one; each term must carry
    a forward and a backward pair strategy around one shared solo assignment
    (sharing is structural in this representation, as is the rule that a
    leader's output ignores the follower's input); all outputs must be bits.
    """
    violations = []
    total = ZERO
    for k, term in enumerate(decomp.terms):
        w = term.weight
        if w < 0:
            violations.append(f"term {k + 1}: negative weight {w}")
        total += w
        if term.forward.direction != FORWARD:
            violations.append(f"term {k + 1}: forward slot holds {term.forward.direction}")
        if term.backward.direction != BACKWARD:
            violations.append(f"term {k + 1}: backward slot holds {term.backward.direction}")
        for strat in (term.forward, term.backward):
            bits = list(strat.leader_outputs) + [
                v for row in strat.follower_outputs for v in row
            ]
            if len(strat.leader_outputs) != 2 or len(bits) != 6:
                violations.append(f"term {k + 1}: pair strategy has wrong arity")
            elif any(b not in (0, 1) for b in bits):
                violations.append(f"term {k + 1}: non-binary pair output")
        if len(term.solo_outputs) != 2 or any(
            b not in (0, 1) for b in term.solo_outputs
        ):
            violations.append(f"term {k + 1}: bad solo assignment {term.solo_outputs}")
    if total != ONE:
        violations.append(f"weights sum to {total}, not 1")
    return DecompositionReport(not violations, tuple(violations))


def reconstruct(decomp: TOBLDecomposition, direction: str) -> Behavior:
    """Mix the decomposition's deterministic terms along one time ordering.

    Returns sum over terms of weight * [solo fires] * [pair fires], as a
    behavior in the original party order.
    """
    report = validate_decomposition(decomp)
    if not report.valid:
        raise ValueError("invalid decomposition: " + "; ".join(report.violations))
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"unknown direction {direction!r}")
    scenario = TRIPARTITE_BINARY
    cut = decomp.bipartition
    flat = [ZERO] * scenario.cell_count
    for term in decomp.terms:
        pair_strat = term.forward if direction == FORWARD else term.backward
        for ins in scenario.input_tuples():
            outs = [0, 0, 0]
            outs[cut.solo] = term.solo_outputs[ins[cut.solo]]
            first_out, second_out = pair_strat.pair_outputs(
                ins[cut.pair[0]], ins[cut.pair[1]]
            )
            outs[cut.pair[0]] = first_out
            outs[cut.pair[1]] = second_out
            flat[cell_index(scenario, tuple(outs), ins)] += term.weight
    return Behavior(scenario, tuple(flat))


# ---------------------------------------------------------------------------
# TOBL membership LP


@lru_cache(maxsize=8)
def _tobl_columns(bipartition: Bipartition):
    """LP column supports for every (solo, forward, backward) strategy triple.

    For each triple: the flat cell indices it reproduces through the forward
    ordering and through the backward ordering (8 cells each, one per input
    tuple).  Variable order is solo-major, then forward, then backward, and
    is the tie-break order for reported decompositions.
    """
    scenario = TRIPARTITE_BINARY
    solo_strats = tuple(itertools.product((0, 1), repeat=2))
    fwd_strats = enumerate_pair_strategies(FORWARD)
    bwd_strats = enumerate_pair_strategies(BACKWARD)
    ins_list = scenario.input_tuples()

    def fired(solo_outs, pair_strat, ins):
        outs = [0, 0, 0]
        outs[bipartition.solo] = solo_outs[ins[bipartition.solo]]
        o1, o2 = pair_strat.pair_outputs(ins[bipartition.pair[0]], ins[bipartition.pair[1]])
        outs[bipartition.pair[0]] = o1
        outs[bipartition.pair[1]] = o2
        return cell_index(scenario, tuple(outs), ins)

    solo_fwd = {}
    solo_bwd = {}
    for solo in solo_strats:
        for f_idx, f in enumerate(fwd_strats):
            solo_fwd[(solo, f_idx)] = tuple(fired(solo, f, ins) for ins in ins_list)
        for g_idx, g in enumerate(bwd_strats):
            solo_bwd[(solo, g_idx)] = tuple(fired(solo, g, ins) for ins in ins_list)

    columns = []
    for solo in solo_strats:
        for f_idx in range(len(fwd_strats)):
            fwd_cells = solo_fwd[(solo, f_idx)]
            for g_idx in range(len(bwd_strats)):
                columns.append((fwd_cells, solo_bwd[(solo, g_idx)]))
    return solo_strats, fwd_strats, bwd_strats, columns


@dataclass(frozen=True)
class ToblMembership:
    feasible: bool
    decomposition: TOBLDecomposition | None = None
    certificate: MembershipCertificate | None = None


@lru_cache(maxsize=16)
def tobl_membership(behavior: Behavior, bipartition: Bipartition) -> ToblMembership:
    """Decide TOBL membership for one bipartition by the coupled LP.

    Variables: one weight per (solo strategy, forward pair strategy,
    backward pair strategy) triple, 4*64*64 = 16384 columns.  Constraints:
    the weighted forward terms reproduce every cell, and the weighted
    backward terms reproduce every cell, with the same weights, which
    encodes the shared randomness and shared solo assignments of the two
    orderings.  Feasible outcomes are reconstruct-verified both ways before
    being returned; infeasible outcomes carry a cell-labelled certificate.
    """
    _require_ns_behavior(behavior)
    if behavior.scenario != TRIPARTITE_BINARY:
        raise ValueError("TOBL membership is defined for the 3-party binary scenario")
    solo_strats, fwd_strats, bwd_strats, columns = _tobl_columns(bipartition)
    cells = behavior.scenario.cell_count
    fwd_rows = [dict() for _ in range(cells)]
    bwd_rows = [dict() for _ in range(cells)]
    for v, (fwd_cells, bwd_cells) in enumerate(columns):
        for idx in fwd_cells:
            fwd_rows[idx][v] = 1
        for idx in bwd_cells:
            bwd_rows[idx][v] = 1
    labels = [
        "fwd:" + _cell_label(behavior.scenario, i) for i in range(cells)
    ] + ["bwd:" + _cell_label(behavior.scenario, i) for i in range(cells)]
    equalities = [(fwd_rows[i], behavior.probs[i]) for i in range(cells)] + [
        (bwd_rows[i], behavior.probs[i]) for i in range(cells)
    ]
    outcome = solve(make_lp(len(columns), equalities, row_labels=tuple(labels)))
    if not outcome.feasible:
        cert = MembershipCertificate(tuple(zip(labels, outcome.certificate)))
        return ToblMembership(False, certificate=cert)

    n_f, n_g = len(fwd_strats), len(bwd_strats)
    terms = []
    for v, w in enumerate(outcome.primal):
        if w == 0:
            continue
        solo = solo_strats[v // (n_f * n_g)]
        f = fwd_strats[(v // n_g) % n_f]
        g = bwd_strats[v % n_g]
        terms.append(TOBLTerm(w, solo, f, g))
    decomp = TOBLDecomposition(bipartition, tuple(terms))
    for direction in (FORWARD, BACKWARD):
        if reconstruct(decomp, direction) != behavior:
            raise RuntimeError("internal error: TOBL witness failed reconstruction")
    return ToblMembership(True, decomposition=decomp)


def tobl_membership_all(behavior: Behavior):
    """TOBL membership on each of the three cuts; {cut name: ToblMembership}."""
    return {
        cut.name: tobl_membership(behavior, cut) for cut in canonical_bipartitions()
    }


def verify_tobl_certificate(
    behavior: Behavior, bipartition: Bipartition, cert: MembershipCertificate
) -> bool:
    """Independent check of a TOBL infeasibility certificate.

    Scores every strategy triple against the forward + backward functionals
    by direct enumeration; a valid certificate puts all triples on one side
    of zero and the behavior strictly on the other.
    """
    y = cert.as_dict()
    scenario = behavior.scenario
    behavior_score = ZERO
    for i, p in enumerate(behavior.probs):
        label = _cell_label(scenario, i)
        behavior_score += (y["fwd:" + label] + y["bwd:" + label]) * p
    if behavior_score == 0:
        return False
    sign = 1 if behavior_score < 0 else -1
    _, _, _, columns = _tobl_columns(bipartition)
    fwd_y = [y["fwd:" + _cell_label(scenario, i)] for i in range(scenario.cell_count)]
    bwd_y = [y["bwd:" + _cell_label(scenario, i)] for i in range(scenario.cell_count)]
    for fwd_cells, bwd_cells in columns:
        score = sum((fwd_y[i] for i in fwd_cells), ZERO) + sum(
            (bwd_y[i] for i in bwd_cells), ZERO
        )
        if sign * score < 0:
            return False
    return True
