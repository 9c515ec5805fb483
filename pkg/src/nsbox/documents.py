"""JSON interchange formats for behaviors, patterns, expressions and models.

Cells are written "abc|xyz" (outputs left of the bar, inputs right, party 0
first); probabilities and coefficients are exact rational strings such as
"1/5" or "2" (plain JSON integers are accepted, floats are not).  A behavior
document must list every cell of its scenario: omitted cells are a format
error, not implicit zeros.
"""

from __future__ import annotations

from .behavior import Behavior, Scenario
from .hardy import HardyPattern
from .games import BellExpression
from .localmodels import (
    BACKWARD,
    FORWARD,
    TOBLDecomposition,
    TOBLTerm,
    TimeOrderedPairStrategy,
)
from .rational import as_rational, rational_str


class FormatError(ValueError):
    """Malformed interchange document."""


def _digits(values) -> str:
    return "".join(str(v) for v in values)


def _parse_digits(text: str, count: int, base: int, what: str):
    if len(text) != count or not text.isdigit():
        raise FormatError(f"bad {what} {text!r}: expected {count} digits")
    values = tuple(int(ch) for ch in text)
    if any(v >= base for v in values):
        raise FormatError(f"bad {what} {text!r}: digit out of range (base {base})")
    return values


def cell_to_str(outputs, inputs) -> str:
    return _digits(outputs) + "|" + _digits(inputs)


def cell_from_str(scenario: Scenario, text: str):
    try:
        outs_text, ins_text = text.split("|")
    except ValueError:
        raise FormatError(f"bad cell {text!r}: expected 'outputs|inputs'")
    outs = _parse_digits(outs_text, scenario.parties, scenario.outputs, "output tuple")
    ins = _parse_digits(ins_text, scenario.parties, scenario.inputs, "input tuple")
    return (outs, ins)


def _rational_from_doc(value, where: str):
    if isinstance(value, bool) or isinstance(value, float):
        raise FormatError(f"{where}: probabilities must be exact rational strings")
    try:
        return as_rational(value)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: {exc}") from exc


# ---------------------------------------------------------------------------
# behaviors


def scenario_from_document(doc) -> Scenario:
    try:
        return Scenario(int(doc["parties"]), int(doc["inputs"]), int(doc["outputs"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad scenario block: {exc}") from exc


def scenario_to_document(scenario: Scenario) -> dict:
    return {
        "parties": scenario.parties,
        "inputs": scenario.inputs,
        "outputs": scenario.outputs,
    }


def behavior_from_document(doc) -> Behavior:
    if not isinstance(doc, dict) or "scenario" not in doc or "table" not in doc:
        raise FormatError("behavior document needs 'scenario' and 'table'")
    scenario = scenario_from_document(doc["scenario"])
    table = {}
    for ins_text, row in doc["table"].items():
        ins = _parse_digits(ins_text, scenario.parties, scenario.inputs, "input tuple")
        if not isinstance(row, dict):
            raise FormatError(f"row {ins_text!r} must map output tuples to rationals")
        for outs_text, value in row.items():
            outs = _parse_digits(
                outs_text, scenario.parties, scenario.outputs, "output tuple"
            )
            table[(outs, ins)] = _rational_from_doc(value, f"cell {outs_text}|{ins_text}")
    try:
        return Behavior.from_cells(scenario, table)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def behavior_to_document(behavior: Behavior) -> dict:
    table = {}
    for ins in behavior.scenario.input_tuples():
        table[_digits(ins)] = {
            _digits(outs): rational_str(p) for outs, p in behavior.row(ins).items()
        }
    return {"scenario": scenario_to_document(behavior.scenario), "table": table}


# ---------------------------------------------------------------------------
# Hardy patterns


def pattern_from_document(doc, scenario: Scenario) -> HardyPattern:
    if not isinstance(doc, dict) or "target" not in doc or "zeros" not in doc:
        raise FormatError("pattern document needs 'target' and 'zeros'")
    target = cell_from_str(scenario, doc["target"])
    zeros = tuple(cell_from_str(scenario, z) for z in doc["zeros"])
    try:
        return HardyPattern(scenario, target, zeros)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def pattern_to_document(pattern: HardyPattern) -> dict:
    return {
        "target": cell_to_str(*pattern.target),
        "zeros": [cell_to_str(*cell) for cell in pattern.zeros],
    }


# ---------------------------------------------------------------------------
# Bell expressions


def expression_from_document(doc, scenario: Scenario) -> BellExpression:
    if not isinstance(doc, dict) or "cells" not in doc:
        raise FormatError("expression document needs 'cells'")
    cells = {}
    for text, coeff in doc["cells"].items():
        cell = cell_from_str(scenario, text)
        cells[cell] = _rational_from_doc(coeff, f"coefficient of {text}")
    try:
        return BellExpression.from_cells(scenario, cells)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def expression_to_document(expression: BellExpression) -> dict:
    return {
        "cells": {
            cell_to_str(*cell): rational_str(v) for cell, v in expression.coefficients
        }
    }


# ---------------------------------------------------------------------------
# TOBL decompositions
#
# Term layout matches the published tables for the cut A|BC: "a" is the solo
# assignment (a0, a1); forward holds b_y and c_yz (leader-input major);
# backward holds c_z and b_yz, written own-input major exactly as printed,
# so parsing transposes it into the internal leader-major layout.


def _bits(values, count, where):
    try:
        bits = tuple(int(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: {exc}") from exc
    if len(bits) != count or any(b not in (0, 1) for b in bits):
        raise FormatError(f"{where}: expected {count} bits")
    return bits


def decomposition_from_document(doc, bipartition) -> TOBLDecomposition:
    if not isinstance(doc, list):
        raise FormatError("decomposition document must be a list of terms")
    terms = []
    for k, item in enumerate(doc):
        where = f"term {k + 1}"
        try:
            weight = _rational_from_doc(item["weight"], where)
            a = _bits(item["a"], 2, where + " a")
            fb = _bits(item["forward"]["b"], 2, where + " forward b")
            fc = _bits(item["forward"]["c"], 4, where + " forward c")
            bc = _bits(item["backward"]["c"], 2, where + " backward c")
            bb = _bits(item["backward"]["b"], 4, where + " backward b")
        except (KeyError, TypeError) as exc:
            raise FormatError(f"{where}: missing field {exc}") from exc
        forward = TimeOrderedPairStrategy(FORWARD, fb, (fc[:2], fc[2:]))
        backward = TimeOrderedPairStrategy(
            BACKWARD, bc, ((bb[0], bb[2]), (bb[1], bb[3]))
        )
        terms.append(TOBLTerm(weight, a, forward, backward))
    return TOBLDecomposition(bipartition, tuple(terms))


def decomposition_to_document(decomp: TOBLDecomposition) -> list:
    doc = []
    for term in decomp.terms:
        fwd, bwd = term.forward, term.backward
        doc.append(
            {
                "weight": rational_str(term.weight),
                "a": list(term.solo_outputs),
                "forward": {
                    "b": list(fwd.leader_outputs),
                    "c": list(fwd.follower_outputs[0]) + list(fwd.follower_outputs[1]),
                },
                "backward": {
                    "c": list(bwd.leader_outputs),
                    "b": [
                        bwd.follower_outputs[0][0],
                        bwd.follower_outputs[1][0],
                        bwd.follower_outputs[0][1],
                        bwd.follower_outputs[1][1],
                    ],
                },
            }
        )
    return doc
