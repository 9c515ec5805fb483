"""Exact maximization of linear functionals over correlation sets.

One LP formulation per set: the no-signaling polytope (cell variables under
normalization and no-signaling equalities), the local polytope (weights over
deterministic strategies), and the TOBL set (behavior cells coupled to one
decomposition-variable block per requested bipartition, every block required
to reproduce the same behavior).  Each call returns the exact optimum plus a
witnessing behavior, which is re-checked for validity and no-signaling
before being handed back.
"""

from __future__ import annotations

from dataclasses import dataclass

from .behavior import (
    Behavior,
    Scenario,
    TRIPARTITE_BINARY,
    cell_index,
    is_no_signaling,
    mix,
    no_signaling_rows,
    normalization_rows,
    validate,
)
from .localmodels import (
    _tobl_columns,
    canonical_bipartitions,
    enumerate_deterministic,
    strategy_behavior,
)
from .lp import make_lp, solve
from .rational import ONE, ZERO


@dataclass(frozen=True)
class PolytopeOptimum:
    value: object
    behavior: Behavior


def _objective_indices(scenario: Scenario, objective):
    sparse = {}
    for (outs, ins), coeff in objective.items():
        sparse[cell_index(scenario, outs, ins)] = coeff
    return sparse


def _checked(value, behavior: Behavior) -> PolytopeOptimum:
    if not validate(behavior).valid or not is_no_signaling(behavior).no_signaling:
        raise RuntimeError("internal error: optimizer witness is not a valid box")
    return PolytopeOptimum(value, behavior)


def max_over_no_signaling(scenario: Scenario, objective, zeros=()) -> PolytopeOptimum:
    """Maximize sum(coeff * P(cell)) over no-signaling behaviors, with the
    given cells pinned to zero."""
    obj = _objective_indices(scenario, objective)
    equalities = list(normalization_rows(scenario)) + list(no_signaling_rows(scenario))
    for outs, ins in zeros:
        equalities.append(({cell_index(scenario, outs, ins): 1}, ZERO))
    outcome = solve(make_lp(scenario.cell_count, equalities, objective=obj))
    behavior = Behavior(scenario, outcome.primal)
    return _checked(outcome.objective_value, behavior)


def max_over_local(scenario: Scenario, objective, zeros=()) -> PolytopeOptimum:
    """Maximize over the local polytope via weights on deterministic
    strategies (zero cells become equality constraints on the weights)."""
    strategies = enumerate_deterministic(scenario)
    fired = [
        {
            cell_index(scenario, s.fired_outputs(ins), ins)
            for ins in scenario.input_tuples()
        }
        for s in strategies
    ]
    obj_cells = _objective_indices(scenario, objective)
    cost = {
        j: total
        for j, cells in enumerate(fired)
        if (total := sum((obj_cells.get(i, ZERO) for i in cells), ZERO)) != 0
    }
    equalities = [({j: 1 for j in range(len(strategies))}, ONE)]
    for outs, ins in zeros:
        idx = cell_index(scenario, outs, ins)
        hitting = {j: 1 for j, cells in enumerate(fired) if idx in cells}
        equalities.append((hitting, ZERO))
    outcome = solve(make_lp(len(strategies), equalities, objective=cost))
    witness = mix(
        (w, strategy_behavior(scenario, strategies[j]))
        for j, w in enumerate(outcome.primal)
        if w != 0
    )
    return _checked(outcome.objective_value, witness)


def max_over_tobl(objective, zeros=(), cuts=None) -> PolytopeOptimum:
    """Maximize over behaviors admitting a coupled TOBL model on every
    requested cut (default: all three), zero cells pinned.

    Variables are the 64 behavior cells plus one 16384-column decomposition
    block per cut; each block must reproduce the behavior cells through both
    orderings, so the cuts constrain one shared behavior.
    """
    scenario = TRIPARTITE_BINARY
    if cuts is None:
        cuts = canonical_bipartitions()
    cuts = tuple(cuts)
    if not cuts:
        raise ValueError("need at least one bipartition")
    n_cells = scenario.cell_count
    block = []  # (offset, columns) per cut
    total_vars = n_cells
    per_cut_cols = []
    for cut in cuts:
        _, _, _, columns = _tobl_columns(cut)
        per_cut_cols.append(columns)
        block.append(total_vars)
        total_vars += len(columns)

    equalities = []
    for row, rhs in normalization_rows(scenario):
        equalities.append((dict(row), rhs))
    for outs, ins in zeros:
        equalities.append(({cell_index(scenario, outs, ins): 1}, ZERO))
    for offset, columns in zip(block, per_cut_cols):
        fwd_rows = [dict() for _ in range(n_cells)]
        bwd_rows = [dict() for _ in range(n_cells)]
        for v, (fwd_cells, bwd_cells) in enumerate(columns):
            for idx in fwd_cells:
                fwd_rows[idx][offset + v] = 1
            for idx in bwd_cells:
                bwd_rows[idx][offset + v] = 1
        for i in range(n_cells):
            fwd_rows[i][i] = -1
            bwd_rows[i][i] = -1
            equalities.append((fwd_rows[i], ZERO))
            equalities.append((bwd_rows[i], ZERO))

    obj = _objective_indices(scenario, objective)
    outcome = solve(make_lp(total_vars, equalities, objective=obj))
    behavior = Behavior(scenario, tuple(outcome.primal[:n_cells]))
    return _checked(outcome.objective_value, behavior)
