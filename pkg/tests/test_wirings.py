import random

from nsbox import (
    Bipartition,
    TRIPARTITE_BINARY,
    apply_wiring,
    enumerate_deterministic,
    enumerate_wirings,
    forward_only_wiring,
    is_no_signaling,
    local_membership,
    marginal,
    mix,
    strategy_behavior,
    table1,
    uniform_behavior,
    validate,
    verify_local_certificate,
    wired_locality_scan,
)
from nsbox.rational import Q
from nsbox.wirings import Wiring, WiringBranch


class TestEnumeration:
    def test_total_count(self):
        wirings = enumerate_wirings()
        assert len(wirings) == 65536
        assert len(set(wirings)) == 65536

    def test_fixed_order_count(self):
        wirings = enumerate_wirings()
        fixed = [
            w for w in wirings if all(b.first == 0 for b in w.branches)
        ]
        assert len(fixed) == 16384

    def test_forward_only_wiring_is_enumerated(self):
        assert forward_only_wiring() in enumerate_wirings()


class TestApply:
    def test_forward_only_equals_pair_marginal(self, box, cut_a_bc):
        wired = apply_wiring(box, cut_a_bc, forward_only_wiring())
        for x in (0, 1):
            for w in (0, 1):
                pair_marginal = marginal(box, (0, 1), (x, w), (0,))
                for a in (0, 1):
                    for o in (0, 1):
                        assert wired.prob((a, o), (x, w)) == pair_marginal[(a, o)]

    def test_uniform_rows_normalized(self, cut_a_bc):
        u = uniform_behavior(TRIPARTITE_BINARY)
        for wiring in enumerate_wirings()[:: 4096]:
            wired = apply_wiring(u, cut_a_bc, wiring)
            assert validate(wired).valid

    def test_constant_output_wiring(self, box, cut_a_bc):
        branch = WiringBranch(
            first=0, first_input=1, second_input=(0, 1), output=((0, 0), (0, 0))
        )
        wired = apply_wiring(box, cut_a_bc, Wiring((branch, branch)))
        for x in (0, 1):
            for w in (0, 1):
                assert wired.prob((0, 0), (x, w)) + wired.prob((1, 0), (x, w)) == 1

    def test_no_signaling_preserved(self, box, cut_a_bc):
        rng = random.Random(12)
        wirings = enumerate_wirings()
        for _ in range(25):
            wired = apply_wiring(box, cut_a_bc, wirings[rng.randrange(65536)])
            assert validate(wired).valid
            assert is_no_signaling(wired).no_signaling


class TestScan:
    def test_table1_all_wirings_local(self, box, cut_a_bc):
        report = wired_locality_scan(box, cut_a_bc)
        assert report.all_local
        assert report.wirings_checked == 65536
        assert report.counterexample is None

    def test_scan_deterministic(self, box, cut_a_bc):
        first = wired_locality_scan(box, cut_a_bc)
        second = wired_locality_scan.__wrapped__(box, cut_a_bc)  # bypass cache
        assert first == second

    def test_pr_embedding_has_nonlocal_wiring(self, pr_embedding, cut_a_bc):
        report = wired_locality_scan(pr_embedding, cut_a_bc)
        assert not report.all_local
        ce = report.counterexample
        assert ce is not None
        assert report.wirings_checked == ce.rank + 1
        assert verify_local_certificate(ce.behavior, ce.certificate)
        # the reported wiring really induces that nonlocal box
        assert (
            apply_wiring(pr_embedding, cut_a_bc, ce.wiring) == ce.behavior
        )

    def test_deterministic_behavior_all_local(self, cut_a_bc):
        strategy = enumerate_deterministic(TRIPARTITE_BINARY)[29]
        b = strategy_behavior(TRIPARTITE_BINARY, strategy)
        report = wired_locality_scan(b, cut_a_bc)
        assert report.all_local
        # wired deterministic boxes are deterministic: very few distinct ones
        assert report.distinct_behaviors <= 64

    def test_tobl_mixture_sample_wired_local(self, box):
        # behaviors built inside the TOBL set stay local under wirings; spot
        # check a stride sample on a nontrivial mixture and a different cut
        mixture = mix([(Q(2, 3), box), (Q(1, 3), uniform_behavior(TRIPARTITE_BINARY))])
        cut = Bipartition(1, (0, 2))
        seen = {}
        for wiring in enumerate_wirings()[::257]:
            wired = apply_wiring(mixture, cut, wiring)
            verdict = seen.get(wired.probs)
            if verdict is None:
                verdict = local_membership(wired).feasible
                seen[wired.probs] = verdict
            assert verdict
