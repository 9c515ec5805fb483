"""Correlator parametrization of the no-signaling set for binary outcomes.

For n parties with two inputs and two outputs each, a table is no-signaling
exactly when it can be written as

    P(a|x) = 2^-n * (1 + sum over nonempty subsets S of chi_S(a) E_S(x_S))

with chi_S(a) = (-1)^(sum of a_i over S) and one free parity expectation
E_S per subset and per input restriction x_S.  The E variables number
3^n - 1 and are unconstrained except through positivity of the cells, so
maximization over the no-signaling set becomes an LP in this coordinate
system.  This route shares no code or constraint matrix with the cell-space
formulation and serves as its independent cross-check.
"""

from __future__ import annotations

import itertools

from .behavior import Scenario, cell_index
from .lp import make_lp, solve
from .rational import ONE, ZERO, as_rational


def correlator_variables(scenario: Scenario):
    """Descriptors (subset, inputs-on-subset) in deterministic order."""
    if scenario.inputs != 2 or scenario.outputs != 2:
        raise ValueError("correlator parametrization needs binary inputs and outputs")
    n = scenario.parties
    variables = []
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            for ins in itertools.product((0, 1), repeat=size):
                variables.append((subset, ins))
    return variables


def max_over_ns_correlators(scenario: Scenario, objective, zeros=()):
    """Maximize sum(coeff * P(cell)) over no-signaling behaviors, in
    correlator coordinates; returns the exact optimum only.

    Free correlators are split into positive and negative parts; every
    unpinned cell gets a slack variable that literally equals its
    probability, so the objective reads directly off the slacks.
    """
    variables = correlator_variables(scenario)
    n = scenario.parties
    n_var = len(variables)
    zero_idx = {cell_index(scenario, outs, ins) for outs, ins in zeros}

    # variable layout: E+ block, E- block, then one slack per unpinned cell
    slack_of = {}
    for ins in scenario.input_tuples():
        for outs in scenario.output_tuples():
            idx = cell_index(scenario, outs, ins)
            if idx not in zero_idx:
                slack_of[idx] = 2 * n_var + len(slack_of)
    total_vars = 2 * n_var + len(slack_of)

    equalities = []
    for ins in scenario.input_tuples():
        for outs in scenario.output_tuples():
            idx = cell_index(scenario, outs, ins)
            row = {}
            for k, (subset, sub_ins) in enumerate(variables):
                if tuple(ins[p] for p in subset) != sub_ins:
                    continue
                chi = -1 if sum(outs[p] for p in subset) % 2 else 1
                row[k] = chi
                row[n_var + k] = -chi
            if idx in zero_idx:
                # 1 + sum chi E = 0  for pinned cells
                equalities.append((row, -ONE))
            else:
                # 2^n * P(cell) = 1 + sum chi E, slack holds P(cell)
                row[slack_of[idx]] = -(2**n)
                equalities.append((row, -ONE))

    cost = {}
    for (outs, ins), coeff in objective.items():
        idx = cell_index(scenario, outs, ins)
        if idx in slack_of:
            value = as_rational(coeff)
            if value != 0:
                cost[slack_of[idx]] = value
    outcome = solve(make_lp(total_vars, equalities, objective=cost))
    if not outcome.feasible:
        raise RuntimeError("no-signaling set cannot be empty")
    return outcome.objective_value
