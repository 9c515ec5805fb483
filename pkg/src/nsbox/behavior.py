"""Scenarios and behaviors: exact conditional probability tables P(outputs|inputs).

A behavior ("box") stores one exact rational per cell.  Cells are addressed
as (output tuple, input tuple), mirroring the conditional notation
P(abc|xyz); tuples are ordered with party 0 most significant, so for the
three-party binary scenario the rows and columns run 000, 001, ..., 111.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .rational import ONE, ZERO, Q, as_rational


@dataclass(frozen=True)
class Scenario:
    """Symmetric Bell scenario: each party has the same input/output count."""

    parties: int
    inputs: int
    outputs: int

    def __post_init__(self):
        if self.parties < 1 or self.inputs < 1 or self.outputs < 1:
            raise ValueError(f"scenario counts must be positive, got {self}")

    @property
    def cell_count(self) -> int:
        return (self.inputs**self.parties) * (self.outputs**self.parties)

    def input_tuples(self):
        return _tuples(self.inputs, self.parties)

    def output_tuples(self):
        return _tuples(self.outputs, self.parties)

    def cells(self):
        """All (outputs, inputs) cells in canonical (input-major) order."""
        for ins in self.input_tuples():
            for outs in self.output_tuples():
                yield (outs, ins)


TRIPARTITE_BINARY = Scenario(3, 2, 2)


@lru_cache(maxsize=None)
def _tuples(base: int, length: int) -> tuple:
    return tuple(itertools.product(range(base), repeat=length))


def cell_index(scenario: Scenario, outputs, inputs) -> int:
    """Flat index of a cell in canonical order (inputs major, outputs minor)."""
    i = 0
    for x in inputs:
        if not 0 <= x < scenario.inputs:
            raise ValueError(f"input index {x} out of range")
        i = i * scenario.inputs + x
    o = 0
    for a in outputs:
        if not 0 <= a < scenario.outputs:
            raise ValueError(f"output index {a} out of range")
        o = o * scenario.outputs + a
    if len(inputs) != scenario.parties or len(outputs) != scenario.parties:
        raise ValueError("cell arity does not match scenario")
    return i * scenario.outputs**scenario.parties + o


@dataclass(frozen=True)
class Behavior:
    """Exact conditional probability table over a scenario.

    The flat ``probs`` tuple is in canonical cell order; use ``prob`` /
    ``from_cells`` rather than indexing it directly.
    """

    scenario: Scenario
    probs: tuple

    def __post_init__(self):
        if len(self.probs) != self.scenario.cell_count:
            raise ValueError(
                f"behavior needs {self.scenario.cell_count} cells, got {len(self.probs)}"
            )

    @classmethod
    def from_cells(cls, scenario: Scenario, table) -> "Behavior":
        """Build from a mapping {(outputs, inputs): rational}.

        Every cell of the scenario must be present exactly once; a missing or
        alien cell is a structural error, distinct from probability-value
        violations (those are ``validate``'s business).
        """
        flat = [None] * scenario.cell_count
        for (outs, ins), value in table.items():
            idx = cell_index(scenario, outs, ins)
            if flat[idx] is not None:
                raise ValueError(f"duplicate cell {outs}|{ins}")
            flat[idx] = as_rational(value)
        missing = [i for i, v in enumerate(flat) if v is None]
        if missing:
            raise ValueError(f"table is missing {len(missing)} cells (structural error)")
        return cls(scenario, tuple(flat))

    @classmethod
    def from_rows(cls, scenario: Scenario, rows) -> "Behavior":
        """Build from {input tuple: sequence of probabilities in output order}."""
        table = {}
        outs_order = scenario.output_tuples()
        for ins, values in rows.items():
            if len(values) != len(outs_order):
                raise ValueError(f"row {ins} has {len(values)} entries")
            for outs, value in zip(outs_order, values):
                table[(outs, ins)] = value
        return cls.from_cells(scenario, table)

    def prob(self, outputs, inputs):
        return self.probs[cell_index(self.scenario, outputs, inputs)]

    def row(self, inputs):
        """The distribution over output tuples for one input tuple."""
        base = cell_index(self.scenario, (0,) * self.scenario.parties, inputs)
        n = self.scenario.outputs**self.scenario.parties
        return dict(zip(self.scenario.output_tuples(), self.probs[base : base + n]))

    def cells(self):
        return zip(self.scenario.cells(), self.probs)


def uniform_behavior(scenario: Scenario) -> Behavior:
    p = Q(1, scenario.outputs**scenario.parties)
    return Behavior(scenario, (p,) * scenario.cell_count)


def mix(weighted_behaviors) -> Behavior:
    """Convex (or affine) combination of behaviors with exact weights."""
    items = [(as_rational(w), b) for w, b in weighted_behaviors]
    if not items:
        raise ValueError("nothing to mix")
    scenario = items[0][1].scenario
    flat = [ZERO] * scenario.cell_count
    for w, b in items:
        if b.scenario != scenario:
            raise ValueError("cannot mix behaviors over different scenarios")
        for i, p in enumerate(b.probs):
            flat[i] += w * p
    return Behavior(scenario, tuple(flat))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str  # "entry-range" | "row-sum"
    inputs: tuple
    outputs: tuple | None
    value: object

    def describe(self) -> str:
        where = "".join(map(str, self.inputs))
        if self.kind == "entry-range":
            cell = "".join(map(str, self.outputs))
            return f"P({cell}|{where}) = {self.value} is outside [0,1]"
        return f"row {where} sums to {self.value}, not 1"


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple


def validate(behavior: Behavior) -> ValidationReport:
    """Check entries lie in [0,1] and every input row sums to exactly 1."""
    violations = []
    for ins in behavior.scenario.input_tuples():
        total = ZERO
        for outs, p in behavior.row(ins).items():
            if p < 0 or p > 1:
                violations.append(Violation("entry-range", ins, outs, p))
            total += p
        if total != ONE:
            violations.append(Violation("row-sum", ins, None, total))
    return ValidationReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# marginals and no-signaling


def marginal(behavior: Behavior, parties, inputs, remote_inputs):
    """Marginal distribution of a party subset, other parties summed out.

    ``parties`` is an ordered tuple of party indices, ``inputs`` their input
    assignment, ``remote_inputs`` the inputs of the complement (in increasing
    party order).  Returns {output tuple on subset: probability}.
    """
    s = behavior.scenario
    parties = tuple(parties)
    if len(set(parties)) != len(parties) or any(
        not 0 <= p < s.parties for p in parties
    ):
        raise ValueError(f"invalid party subset {parties}")
    if len(inputs) != len(parties):
        raise ValueError("inputs must match the party subset")
    complement = tuple(p for p in range(s.parties) if p not in parties)
    if len(remote_inputs) != len(complement):
        raise ValueError("remote_inputs must cover the complement")

    full_inputs = [0] * s.parties
    for p, x in zip(parties, inputs):
        full_inputs[p] = x
    for p, x in zip(complement, remote_inputs):
        full_inputs[p] = x
    full_inputs = tuple(full_inputs)

    result = {outs: ZERO for outs in _tuples(s.outputs, len(parties))}
    for full_outs, p in behavior.row(full_inputs).items():
        sub = tuple(full_outs[i] for i in parties)
        result[sub] += p
    return result


@dataclass(frozen=True)
class SignalingWitness:
    parties: tuple
    inputs: tuple
    remote_a: tuple
    remote_b: tuple

    def describe(self) -> str:
        return (
            f"marginal of parties {self.parties} at inputs {self.inputs} "
            f"differs between remote inputs {self.remote_a} and {self.remote_b}"
        )


@dataclass(frozen=True)
class NoSignalingReport:
    no_signaling: bool
    violations: tuple


def is_no_signaling(behavior: Behavior) -> NoSignalingReport:
    """Exact no-signaling check over every proper party subset.

    For each proper nonempty subset and each of its input assignments, the
    marginal must be identical for every input assignment of the remaining
    parties.  Comparison is exact; any mismatch is reported as a witness
    (subset, subset inputs, pair of remote assignments).
    """
    s = behavior.scenario
    violations = []
    for size in range(1, s.parties):
        for parties in itertools.combinations(range(s.parties), size):
            remotes = _tuples(s.inputs, s.parties - size)
            for ins in _tuples(s.inputs, size):
                reference = marginal(behavior, parties, ins, remotes[0])
                for other in remotes[1:]:
                    if marginal(behavior, parties, ins, other) != reference:
                        violations.append(
                            SignalingWitness(parties, ins, remotes[0], other)
                        )
    return NoSignalingReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# party permutations


@dataclass(frozen=True)
class PartyPermutation:
    """Bijection on party indices; ``mapping[i]`` is the new position of party i."""

    mapping: tuple

    def __post_init__(self):
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError(f"not a permutation: {self.mapping}")

    @classmethod
    def identity(cls, parties: int) -> "PartyPermutation":
        return cls(tuple(range(parties)))

    @classmethod
    def swap(cls, parties: int, i: int, j: int) -> "PartyPermutation":
        m = list(range(parties))
        m[i], m[j] = m[j], m[i]
        return cls(tuple(m))

    @classmethod
    def all(cls, parties: int):
        return [cls(p) for p in itertools.permutations(range(parties))]

    def inverse(self) -> "PartyPermutation":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return PartyPermutation(tuple(inv))

    def apply(self, values) -> tuple:
        """Permute a per-party tuple: entry of party i moves to position mapping[i]."""
        moved = [None] * len(self.mapping)
        for i, v in zip(self.mapping, values):
            moved[i] = v
        return tuple(moved)


def permute(behavior: Behavior, perm: PartyPermutation) -> Behavior:
    """Relabel parties: cell (π(outputs)|π(inputs)) takes the value of (outputs|inputs)."""
    s = behavior.scenario
    if len(perm.mapping) != s.parties:
        raise ValueError(
            f"permutation over {len(perm.mapping)} parties does not fit {s.parties}-party scenario"
        )
    flat = [None] * s.cell_count
    for (outs, ins), p in behavior.cells():
        flat[cell_index(s, perm.apply(outs), perm.apply(ins))] = p
    return Behavior(s, tuple(flat))


# ---------------------------------------------------------------------------
# polytope equality constraints and affine dimension


def normalization_rows(scenario: Scenario):
    """One row per input tuple: probabilities of that row sum to 1.

    Rows are sparse {flat cell index: integer coefficient} with rhs 1.
    """
    rows = []
    n_out = scenario.outputs**scenario.parties
    for i in range(scenario.inputs**scenario.parties):
        rows.append(({i * n_out + o: 1 for o in range(n_out)}, ONE))
    return rows


def no_signaling_rows(scenario: Scenario):
    """Generating family of no-signaling equalities (rhs 0) over cell space.

    For each party j, each input assignment of the others, each adjacent pair
    of j's inputs and each output assignment of the others: the sum over j's
    outputs must agree between the two inputs of j.  Single-party changes
    generate the full subset-marginal conditions.
    """
    s = scenario
    rows = []
    for j in range(s.parties):
        others = [p for p in range(s.parties) if p != j]
        for other_ins in _tuples(s.inputs, len(others)):
            for xj in range(s.inputs - 1):
                for other_outs in _tuples(s.outputs, len(others)):
                    row = {}
                    for sign, x in ((1, xj), (-1, xj + 1)):
                        ins = [0] * s.parties
                        for p, v in zip(others, other_ins):
                            ins[p] = v
                        ins[j] = x
                        for aj in range(s.outputs):
                            outs = [0] * s.parties
                            for p, v in zip(others, other_outs):
                                outs[p] = v
                            outs[j] = aj
                            idx = cell_index(s, tuple(outs), tuple(ins))
                            row[idx] = row.get(idx, 0) + sign
                    rows.append(({k: v for k, v in row.items() if v}, ZERO))
    return rows


def _integer_rank(rows, width: int) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    mat = [list(r) for r in rows]
    rank = 0
    prev_pivot = 1
    for col in range(width):
        pivot_row = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pivot = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            if mat[r][col] == 0 and prev_pivot == 1:
                continue
            row = mat[r]
            head = row[col]
            for c in range(col, width):
                row[c] = (pivot * row[c] - head * mat[rank][c]) // prev_pivot
        prev_pivot = pivot
        rank += 1
        if rank == len(mat):
            break
    return rank


def ns_dimension(scenario: Scenario) -> int:
    """Affine dimension of the no-signaling set.

    Computed as cell count minus the exact rank of the combined
    normalization + no-signaling equality system.  All coefficients are
    integers, so the rank uses fraction-free elimination.
    """
    width = scenario.cell_count
    dense = []
    for sparse, _ in normalization_rows(scenario) + no_signaling_rows(scenario):
        row = [0] * width
        for idx, coeff in sparse.items():
            row[idx] = int(coeff)
        dense.append(row)
    return width - _integer_rank(dense, width)
