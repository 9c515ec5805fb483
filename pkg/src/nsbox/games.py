"""Bell expressions and game values: exact evaluation and exact bounds.

A Bell expression assigns a rational coefficient to each behavior cell; its
value on a behavior is the corresponding linear functional.  Classical
maxima come from exhaustive enumeration of deterministic strategies (ties
broken toward the lowest strategy index), no-signaling maxima from an exact
LP over the no-signaling polytope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .behavior import Behavior, Scenario, TRIPARTITE_BINARY, cell_index
from .localmodels import DeterministicStrategy, enumerate_deterministic
from .optimize import PolytopeOptimum, max_over_no_signaling
from .rational import Q, ZERO, as_rational


@dataclass(frozen=True)
class BellExpression:
    """Sparse rational coefficients over cells; unspecified cells are 0."""

    scenario: Scenario
    coefficients: tuple  # (((outputs, inputs), coeff), ...) in canonical order

    @classmethod
    def from_cells(cls, scenario: Scenario, cells) -> "BellExpression":
        entries = []
        for (outs, ins), coeff in cells.items():
            idx = cell_index(scenario, outs, ins)
            value = as_rational(coeff)
            if value != 0:
                entries.append((idx, ((tuple(outs), tuple(ins)), value)))
        entries.sort(key=lambda item: item[0])
        if len({idx for idx, _ in entries}) != len(entries):
            raise ValueError("duplicate cell in expression")
        return cls(scenario, tuple(entry for _, entry in entries))

    def coefficient(self, outputs, inputs):
        cell_index(self.scenario, outputs, inputs)
        for cell, value in self.coefficients:
            if cell == (tuple(outputs), tuple(inputs)):
                return value
        return ZERO

    def as_dict(self):
        return {cell: value for cell, value in self.coefficients}


def gyni_expression() -> BellExpression:
    """The canonical three-party guess-your-neighbour's-input game.

    Inputs are promised to satisfy x + y + z = 0 (mod 2), each of the four
    allowed input tuples drawn with prior 1/4; the parties win when every
    output matches the right neighbour's input (a = y, b = z, c = x).  The
    prior is folded into the coefficients, so classical strategies are
    bounded by 1/4.
    """
    scenario = TRIPARTITE_BINARY
    cells = {}
    for x, y, z in scenario.input_tuples():
        if (x + y + z) % 2 == 0:
            cells[((y, z, x), (x, y, z))] = Q(1, 4)
    return BellExpression.from_cells(scenario, cells)


def evaluate(expression: BellExpression, behavior: Behavior):
    """Exact value of the expression on the behavior."""
    if expression.scenario != behavior.scenario:
        raise ValueError("expression and behavior live in different scenarios")
    total = ZERO
    for (outs, ins), coeff in expression.coefficients:
        total += coeff * behavior.prob(outs, ins)
    return total


@dataclass(frozen=True)
class ClassicalMax:
    value: object
    strategy: DeterministicStrategy


def classical_max(expression: BellExpression) -> ClassicalMax:
    """Exact maximum over deterministic strategies, by exhaustion.

    Shared randomness cannot beat the best deterministic strategy on a
    linear functional, so this is the local bound.  The first strategy (in
    enumeration order) achieving the maximum is returned.
    """
    scenario = expression.scenario
    by_input = {}
    for (outs, ins), coeff in expression.coefficients:
        by_input.setdefault(ins, {})[outs] = coeff
    best = None
    best_strategy = None
    for strategy in enumerate_deterministic(scenario):
        value = ZERO
        for ins, winning in by_input.items():
            coeff = winning.get(strategy.fired_outputs(ins))
            if coeff is not None:
                value += coeff
        if best is None or value > best:
            best = value
            best_strategy = strategy
    return ClassicalMax(best, best_strategy)


def no_signaling_max(expression: BellExpression) -> PolytopeOptimum:
    """Exact maximum over the no-signaling polytope, with optimizer."""
    return max_over_no_signaling(expression.scenario, expression.as_dict())
