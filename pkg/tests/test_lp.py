import itertools
import random

import pytest

from nsbox import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    check_certificate,
    check_primal,
    make_lp,
    solve,
)
from nsbox.lp import LPError
from nsbox.rational import Q, ZERO


def exact_solve_subset(rows, rhs, cols):
    """Solve the square-ish system restricted to ``cols`` by exact Gaussian
    elimination; returns the unique solution dict or None (inconsistent or
    underdetermined)."""
    m = len(rows)
    k = len(cols)
    aug = [[Q(rows[i].get(j, 0)) for j in cols] + [Q(rhs[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(k):
        pivot = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pivot is None:
            return None  # underdetermined in this column set
        aug[r], aug[pivot] = aug[pivot], aug[r]
        aug[r] = [v / aug[r][c] for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if r < k:
        return None
    for i in range(r, m):
        if aug[i][k] != 0:
            return None  # inconsistent
    return {cols[c]: aug[pivots.index(c)][k] for c in range(k)}


def basic_solutions(lp):
    """All basic feasible solutions by subset enumeration (oracle)."""
    rows = [dict(r) for r in lp.rows]
    found = []
    if all(b == 0 for b in lp.rhs):
        found.append({})
    for size in range(1, min(lp.num_vars, len(lp.rows)) + 1):
        for cols in itertools.combinations(range(lp.num_vars), size):
            sol = exact_solve_subset(rows, lp.rhs, list(cols))
            if sol is not None and all(v >= 0 for v in sol.values()):
                found.append(sol)
    return found


def oracle_value(lp):
    """Max objective over basic feasible solutions (valid for bounded LPs)."""
    best = None
    for sol in basic_solutions(lp):
        value = sum((c * sol.get(j, ZERO) for j, c in lp.objective), ZERO)
        if best is None or value > best:
            best = value
    return best


class TestExamples:
    def test_simple_optimum(self):
        lp = make_lp(2, [({0: 1, 1: 1}, "1/5")], objective={0: 1})
        out = solve(lp)
        assert out.status == OPTIMAL
        assert out.objective_value == Q(1, 5)
        assert out.primal[0] == Q(1, 5)

    def test_contradiction_certified(self):
        lp = make_lp(1, [({0: 1}, 1), ({0: 1}, 0)])
        out = solve(lp)
        assert out.status == INFEASIBLE
        assert check_certificate(lp, out.certificate)

    def test_pr_box_outside_local_polytope(self, pr_box):
        # Oracle: the PR box wins the CHSH game outright while deterministic
        # strategies cap at 3/4, and the game value is linear, so no mixture
        # of strategies reproduces the box.
        from nsbox.localmodels import enumerate_deterministic, local_membership

        def chsh_value(prob):
            total = ZERO
            for x, y in itertools.product((0, 1), repeat=2):
                for a, b in itertools.product((0, 1), repeat=2):
                    if (a ^ b) == (x & y):
                        total += Q(1, 4) * prob((a, b), (x, y))
            return total

        assert chsh_value(pr_box.prob) == 1
        best = max(
            chsh_value(lambda o, i, s=s: Q(1 if s.fired_outputs(i) == o else 0))
            for s in enumerate_deterministic(pr_box.scenario)
        )
        assert best == Q(3, 4)

        result = local_membership(pr_box)
        assert not result.feasible

    def test_unbounded(self):
        assert solve(make_lp(1, [], objective={0: 1})).status == UNBOUNDED
        lp = make_lp(2, [({0: 1, 1: -1}, 0)], objective={0: 1})
        assert solve(lp).status == UNBOUNDED

    def test_zero_variables(self):
        assert solve(make_lp(0, [({}, 0)])).status == OPTIMAL
        out = solve(make_lp(0, [({}, 1)]))
        assert out.status == INFEASIBLE
        assert check_certificate(make_lp(0, [({}, 1)]), out.certificate)

    def test_degenerate_duplicate_columns(self):
        # dedup must not change feasibility or the optimum
        lp = make_lp(
            4,
            [({0: 1, 1: 1, 2: 1, 3: 1}, 1), ({0: 1, 1: 1}, "1/2")],
            objective={0: 2, 1: 2, 2: 1},
        )
        out = solve(lp)
        assert out.status == OPTIMAL
        assert out.objective_value == Q(3, 2)

    def test_malformed(self):
        with pytest.raises(LPError):
            make_lp(2, [({5: 1}, 0)])
        with pytest.raises(LPError):
            make_lp(1, [({0: 1}, 0)], row_labels=("a", "b"))


def random_lp(rng, with_objective, force_bounded=False):
    n = rng.randint(1, 6)
    m = rng.randint(1, 4)
    equalities = []
    for _ in range(m):
        coeffs = {
            j: rng.randint(-3, 3) for j in range(n) if rng.random() < 0.7
        }
        equalities.append((coeffs, rng.randint(-4, 4)))
    if force_bounded:
        equalities.append(({j: 1 for j in range(n)}, rng.randint(0, 6)))
    objective = None
    if with_objective:
        objective = {j: rng.randint(-3, 3) for j in range(n)}
    return make_lp(n, equalities, objective=objective)


class TestCertificateSoundness:
    def test_randomized_instances(self):
        rng = random.Random(2024)
        infeasible = 0
        for _ in range(400):
            lp = random_lp(rng, with_objective=False)
            out = solve(lp)
            if out.status == INFEASIBLE:
                infeasible += 1
                assert check_certificate(lp, out.certificate)
            else:
                assert check_primal(lp, out.primal)
        assert infeasible > 50  # the generator must actually exercise both paths


class TestOracleAgreement:
    def test_feasibility_and_value_agree_with_enumeration(self):
        rng = random.Random(99)
        statuses = {OPTIMAL: 0, INFEASIBLE: 0}
        for _ in range(150):
            lp = random_lp(rng, with_objective=True, force_bounded=True)
            out = solve(lp)
            assert out.status in statuses
            statuses[out.status] += 1
            basics = basic_solutions(lp)
            if out.status == INFEASIBLE:
                assert not basics
                assert check_certificate(lp, out.certificate)
            else:
                assert basics
                assert out.objective_value == oracle_value(lp)
        assert statuses[OPTIMAL] > 20 and statuses[INFEASIBLE] > 20

    def test_feasibility_only_agrees(self):
        rng = random.Random(123)
        for _ in range(100):
            lp = random_lp(rng, with_objective=False)
            out = solve(lp)
            if len(lp.rows) <= 3 and lp.num_vars <= 5:
                has_bfs = bool(basic_solutions(lp))
                assert (out.status == OPTIMAL) == has_bfs


class TestDeterminism:
    def test_identical_outcomes(self):
        rng = random.Random(5)
        for _ in range(25):
            lp = random_lp(rng, with_objective=True, force_bounded=True)
            first = solve(lp)
            second = solve(lp)
            assert first == second
