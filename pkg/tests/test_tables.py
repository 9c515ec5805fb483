import pytest

from nsbox import (
    Behavior,
    is_no_signaling,
    table1,
    table2,
    table23,
    table3,
    validate,
    verify_paper_claims,
)
from nsbox.behavior import cell_index
from nsbox.rational import Q
from nsbox.tables import shipped_table1, shipped_table23


class TestEmbeddedData:
    def test_table1_spot_cells(self, box):
        assert box.prob((0, 0, 0), (0, 0, 0)) == Q(1, 5)
        assert box.prob((1, 1, 1), (1, 1, 1)) == 0
        assert box.prob((0, 0, 1), (1, 1, 0)) == Q(2, 5)
        assert box.prob((0, 0, 0), (1, 1, 1)) == Q(2, 5)

    def test_table1_valid_and_no_signaling(self, box):
        assert validate(box).valid
        assert is_no_signaling(box).no_signaling

    def test_table2_spot_rows(self):
        rows = table2().rows
        assert len(rows) == 9
        weight, solo, pair = rows[4]  # the heavy term
        assert weight == Q(1, 5)
        assert solo == (1, 0)
        assert pair.leader_outputs == (1, 0)

    def test_table3_spot_rows(self):
        rows = table3().rows
        assert len(rows) == 9
        weight, solo, pair = rows[8]
        assert weight == Q(1, 10)
        assert solo == (1, 1)
        assert pair.leader_outputs == (0, 1)  # leader is the second pair member

    def test_weights_sum_to_one(self):
        for half in (table2(), table3()):
            assert sum((row[0] for row in half.rows), Q(0)) == 1


class TestShippedFiles:
    def test_behavior_file_round_trip(self, box):
        assert shipped_table1() == box

    def test_decomposition_file_round_trip(self):
        assert shipped_table23() == table23()


def renormalized_defect(box) -> Behavior:
    """The published box with cell (000|001) bumped to 1/100, row rescaled."""
    probs = list(box.probs)
    idx = cell_index(box.scenario, (0, 0, 0), (0, 0, 1))
    probs[idx] = Q(1, 100)
    row_start = (idx // 8) * 8
    total = sum(probs[row_start : row_start + 8], Q(0))
    for i in range(row_start, row_start + 8):
        probs[i] /= total
    return Behavior(box.scenario, tuple(probs))


class TestClaims:
    def test_all_claims_pass_on_table1(self):
        report = verify_paper_claims()
        assert len(report.claims) == 11
        failing = [c for c in report.claims if not c.passed]
        assert report.all_passed, failing
        assert report.summary() == "11/11 claims pass"

    def test_deterministic_and_pure(self):
        first = verify_paper_claims()
        second = verify_paper_claims.__wrapped__()  # bypass the cache
        assert first == second

    def test_injected_defect_fails_hardy_claim(self, box):
        bad = renormalized_defect(box)
        assert validate(bad).valid
        report = verify_paper_claims(bad)
        by_id = {c.claim_id: c for c in report.claims}
        assert not by_id["hardy-success"].passed
        # the decomposition tables themselves are untouched
        assert by_id["forward-reconstruction"].passed
        assert by_id["backward-reconstruction"].passed
        assert by_id["shared-assignments"].passed
        assert not report.all_passed

    def test_uniform_behavior_claims(self):
        from nsbox import TRIPARTITE_BINARY, uniform_behavior

        report = verify_paper_claims(uniform_behavior(TRIPARTITE_BINARY))
        by_id = {c.claim_id: c for c in report.claims}
        assert by_id["valid-no-signaling"].passed
        assert not by_id["hardy-success"].passed
        assert not by_id["post-quantum"].passed
        assert not by_id["not-local"].passed  # uniform is local
        assert by_id["tobl-all-cuts"].passed
        assert by_id["wirings-local"].passed
        assert by_id["gyni-satisfied"].passed
        assert by_id["party-symmetric"].passed
