import random

import pytest

from nsbox import (
    BACKWARD,
    Bipartition,
    FORWARD,
    PartyPermutation,
    Scenario,
    TRIPARTITE_BINARY,
    canonical_bipartitions,
    enumerate_deterministic,
    half_pairing_violations,
    is_no_signaling,
    local_membership,
    mix,
    pair_halves,
    permute,
    reconstruct,
    strategy_behavior,
    table1,
    table2,
    table23,
    table3,
    tobl_membership,
    tobl_membership_all,
    uniform_behavior,
    validate,
    validate_decomposition,
    verify_local_certificate,
    verify_tobl_certificate,
)
from nsbox.localmodels import DecompositionHalf, TOBLDecomposition, TOBLTerm
from nsbox.rational import Q


class TestEnumeration:
    def test_counts(self):
        assert len(enumerate_deterministic(TRIPARTITE_BINARY)) == 64
        assert len(enumerate_deterministic(Scenario(2, 2, 2))) == 16

    def test_no_duplicates(self):
        strategies = enumerate_deterministic(TRIPARTITE_BINARY)
        assert len(set(strategies)) == 64

    def test_strategy_behaviors_no_signaling(self):
        for s in enumerate_deterministic(TRIPARTITE_BINARY)[::7]:
            b = strategy_behavior(TRIPARTITE_BINARY, s)
            assert validate(b).valid
            assert is_no_signaling(b).no_signaling


class TestLocalMembership:
    def test_table1_infeasible_with_verified_certificate(self, box):
        result = local_membership(box)
        assert not result.feasible
        assert verify_local_certificate(box, result.certificate)

    def test_uniform_feasible(self):
        result = local_membership(uniform_behavior(TRIPARTITE_BINARY))
        assert result.feasible
        total = sum((w for _, w in result.weights), Q(0))
        assert total == 1

    def test_single_strategy_weight_one(self):
        strategy = enumerate_deterministic(TRIPARTITE_BINARY)[13]
        b = strategy_behavior(TRIPARTITE_BINARY, strategy)
        result = local_membership(b)
        assert result.feasible
        assert result.weights == ((strategy, Q(1)),)

    def test_weights_reconstruct(self):
        rng = random.Random(4)
        strategies = enumerate_deterministic(TRIPARTITE_BINARY)
        picks = rng.sample(range(64), 5)
        b = mix(
            (Q(1, 5), strategy_behavior(TRIPARTITE_BINARY, strategies[i]))
            for i in picks
        )
        result = local_membership(b)
        assert result.feasible
        again = mix(
            (w, strategy_behavior(TRIPARTITE_BINARY, s)) for s, w in result.weights
        )
        assert again == b

    def test_signaling_rejected(self):
        s = TRIPARTITE_BINARY
        table = {}
        for ins in s.input_tuples():
            for outs in s.output_tuples():
                hit = outs == (ins[1], 0, 0)
                table[(outs, ins)] = 1 if hit else 0
        from nsbox import Behavior

        signaling = Behavior.from_cells(s, table)
        with pytest.raises(ValueError, match="signaling"):
            local_membership(signaling)


class TestToblMembership:
    def test_table1_feasible_all_cuts_with_round_trip(self, box):
        results = tobl_membership_all(box)
        assert set(results) == {"A|BC", "B|AC", "C|AB"}
        for result in results.values():
            assert result.feasible
            decomp = result.decomposition
            assert reconstruct(decomp, FORWARD) == box
            assert reconstruct(decomp, BACKWARD) == box

    def test_pr_embedding_infeasible_with_verified_certificate(
        self, pr_embedding, cut_a_bc
    ):
        result = tobl_membership(pr_embedding, cut_a_bc)
        assert not result.feasible
        assert verify_tobl_certificate(pr_embedding, cut_a_bc, result.certificate)

    def test_single_strategy_single_term(self, cut_a_bc):
        strategy = enumerate_deterministic(TRIPARTITE_BINARY)[37]
        b = strategy_behavior(TRIPARTITE_BINARY, strategy)
        result = tobl_membership(b, cut_a_bc)
        assert result.feasible
        assert len(result.decomposition.terms) == 1
        assert result.decomposition.terms[0].weight == 1

    def test_uniform_feasible_all_cuts(self):
        results = tobl_membership_all(uniform_behavior(TRIPARTITE_BINARY))
        assert all(r.feasible for r in results.values())

    def test_local_subset_of_tobl(self):
        # random local behaviors are TOBL on every cut
        rng = random.Random(17)
        strategies = enumerate_deterministic(TRIPARTITE_BINARY)
        for trial in range(2):
            picks = rng.sample(range(64), 4)
            b = mix(
                (Q(1, 4), strategy_behavior(TRIPARTITE_BINARY, strategies[i]))
                for i in picks
            )
            assert local_membership(b).feasible
            cut = canonical_bipartitions()[trial % 3]
            assert tobl_membership(b, cut).feasible

    def test_permutation_coherence(self, box):
        # verdict is stable under relabeling the parties and the cut together
        perm = PartyPermutation((1, 2, 0))
        cut = Bipartition(0, (1, 2))
        direct = tobl_membership(box, cut).feasible
        moved = tobl_membership(permute(box, perm), cut.permuted(perm)).feasible
        assert direct == moved

    def test_wrong_scenario_rejected(self, pr_box, cut_a_bc):
        with pytest.raises(ValueError, match="3-party"):
            tobl_membership(pr_box, cut_a_bc)


class TestDecompositions:
    def test_published_tables_pair_and_validate(self):
        assert half_pairing_violations(table2(), table3()) == []
        report = validate_decomposition(table23())
        assert report.valid

    def test_weights(self):
        halves = [table2(), table3()]
        for half in halves:
            weights = [row[0] for row in half.rows]
            assert sum(weights) == 1
            assert weights[4] == Q(1, 5)  # the heavy term
            assert weights.count(Q(1, 10)) == 8

    def test_reconstruction_matches_table1_both_ways(self, box):
        assert reconstruct(table23(), FORWARD) == box
        assert reconstruct(table23(), BACKWARD) == box

    def test_reconstructions_no_signaling(self):
        for direction in (FORWARD, BACKWARD):
            b = reconstruct(table23(), direction)
            assert validate(b).valid
            assert is_no_signaling(b).no_signaling

    def test_flipped_solo_assignment_detected(self):
        fwd = table2()
        rows = list(fwd.rows)
        weight, solo, pair = rows[2]  # third term has solo (1, 0)
        rows[2] = (weight, (0, solo[1]), pair)
        tampered = DecompositionHalf(FORWARD, tuple(rows))
        violations = half_pairing_violations(tampered, table3())
        assert any("solo assignments differ" in v for v in violations)
        with pytest.raises(ValueError, match="do not pair"):
            pair_halves(tampered, table3(), Bipartition(0, (1, 2)))

    def test_rescaled_weights_invalid(self):
        decomp = table23()
        terms = tuple(
            TOBLTerm(t.weight * Q(9, 10), t.solo_outputs, t.forward, t.backward)
            for t in decomp.terms
        )
        report = validate_decomposition(TOBLDecomposition(decomp.bipartition, terms))
        assert not report.valid
        assert any("sum" in v for v in report.violations)

    def test_negative_weight_invalid(self):
        decomp = table23()
        terms = list(decomp.terms)
        t = terms[0]
        terms[0] = TOBLTerm(t.weight - 1, t.solo_outputs, t.forward, t.backward)
        terms.append(TOBLTerm(Q(1), t.solo_outputs, t.forward, t.backward))
        report = validate_decomposition(
            TOBLDecomposition(decomp.bipartition, tuple(terms))
        )
        assert not report.valid
        assert any("negative" in v for v in report.violations)

    def test_single_term_reconstruction(self):
        decomp = table23()
        term = decomp.terms[4]
        single = TOBLDecomposition(
            decomp.bipartition,
            (TOBLTerm(Q(1), term.solo_outputs, term.forward, term.backward),),
        )
        b = reconstruct(single, FORWARD)
        assert validate(b).valid
        # deterministic: one unit cell per input row
        for ins in TRIPARTITE_BINARY.input_tuples():
            assert sorted(b.row(ins).values()) == [0] * 7 + [1]

    def test_swapped_directions_invalid(self):
        decomp = table23()
        t = decomp.terms[0]
        bad = TOBLDecomposition(
            decomp.bipartition,
            (TOBLTerm(Q(1), t.solo_outputs, t.backward, t.forward),),
        )
        report = validate_decomposition(bad)
        assert not report.valid
