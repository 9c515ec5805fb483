"""Exact rational linear programming with verifiable certificates.

Standard form: equality constraints A x = b with x >= 0 and an optional
linear objective.  Solved by two-phase primal simplex over exact rationals
(revised form, basis inverse maintained explicitly), so statuses are exact
and need no tolerances.

Floating point appears in exactly one place and decides nothing: candidate
entering columns are ranked by a vectorized float estimate of their reduced
costs, then each candidate is admitted only after its exact reduced cost is
confirmed negative, and a claim of optimality is always re-established by a
full exact pricing pass.  Anti-cycling comes from the lexicographic leaving
rule, with Bland's rule as an unconditional backstop in phase 2.

Outcomes carry proof material:

* feasible-optimal: an exact primal assignment (re-verified against every
  equality before it is returned);
* infeasible: a Farkas certificate y, one rational per equality row, with
  yA >= 0 componentwise and y.b < 0 (or the mirrored signs), checkable by
  plain substitution via ``check_certificate``.

Before the simplex runs, two reductions are applied.  A presolve repeatedly
fixes variables to zero using rows whose surviving coefficients share one
sign and whose right-hand side is zero (such rows force their whole support
to zero); certificates for the reduced system are lifted back to the
original rows by exact back-substitution over the eliminated rows, so caller
visible certificates always refer to the caller's own constraints.  Then
duplicate columns (same constraint column, same objective coefficient) are
merged and the witness is expanded afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rational import ONE, ZERO, Q, as_rational

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# Pricing tuning; values only affect speed, never results' correctness,
# but they do pin down which optimizer/certificate is returned, so they are
# constants rather than knobs (identical inputs must yield identical output).
_PRICE_CHUNK = 2048
_FLOAT_PRICING_MIN_COLS = 512
_FLOAT_CANDIDATES = 64
_DEGENERATE_LIMIT = 200


class LPError(ValueError):
    """Malformed linear program (dimension or index mismatch)."""


@dataclass(frozen=True)
class LinearProgram:
    """Equality-form LP over nonnegative variables.

    ``rows[i]`` is a sparse coefficient row ((column, coefficient), ...) and
    ``rhs[i]`` its right-hand side.  ``objective`` is a sparse row or None
    for pure feasibility problems.  Use ``make_lp`` to build one.
    """

    num_vars: int
    rows: tuple
    rhs: tuple
    objective: tuple | None = None
    maximize: bool = True
    row_labels: tuple | None = None


def _sparse_row(coeffs, num_vars):
    if isinstance(coeffs, dict):
        items = coeffs.items()
    else:
        items = enumerate(coeffs)
    row = []
    for j, c in items:
        if not 0 <= j < num_vars:
            raise LPError(f"column {j} out of range for {num_vars} variables")
        c = as_rational(c)
        if c != 0:
            row.append((j, c))
    row.sort()
    if len({j for j, _ in row}) != len(row):
        raise LPError("duplicate column in coefficient row")
    return tuple(row)


def make_lp(num_vars, equalities, objective=None, maximize=True, row_labels=None):
    """Normalize raw data into a LinearProgram.

    ``equalities`` is an iterable of (coefficients, rhs); coefficients may be
    a {column: value} mapping or a dense sequence.
    """
    if num_vars < 0:
        raise LPError("negative variable count")
    rows = []
    rhs = []
    for coeffs, b in equalities:
        rows.append(_sparse_row(coeffs, num_vars))
        rhs.append(as_rational(b))
    obj = _sparse_row(objective, num_vars) if objective is not None else None
    labels = tuple(row_labels) if row_labels is not None else None
    if labels is not None and len(labels) != len(rows):
        raise LPError("row_labels length does not match equalities")
    return LinearProgram(num_vars, tuple(rows), tuple(rhs), obj, maximize, labels)


@dataclass(frozen=True)
class LPOutcome:
    status: str
    primal: tuple | None = None
    objective_value: object = None
    certificate: tuple | None = None

    @property
    def feasible(self) -> bool:
        return self.status == OPTIMAL


def check_primal(lp: LinearProgram, primal) -> bool:
    """Exact substitution check: x >= 0 and every equality holds."""
    if len(primal) != lp.num_vars:
        return False
    if any(x < 0 for x in primal):
        return False
    for row, b in zip(lp.rows, lp.rhs):
        total = ZERO
        for j, c in row:
            if primal[j]:
                total += c * primal[j]
        if total != b:
            return False
    return True


def check_certificate(lp: LinearProgram, certificate) -> bool:
    """Verify a Farkas infeasibility certificate by direct arithmetic.

    Accepts either orientation: yA >= 0 with y.b < 0, or yA <= 0 with
    y.b > 0.
    """
    if len(certificate) != len(lp.rows):
        return False
    combo = [ZERO] * lp.num_vars
    total = ZERO
    for y, row, b in zip(certificate, lp.rows, lp.rhs):
        if y:
            for j, c in row:
                combo[j] += y * c
            total += y * b
    if total < 0:
        return all(v >= 0 for v in combo)
    if total > 0:
        return all(v <= 0 for v in combo)
    return False


def objective_value(lp: LinearProgram, primal):
    if lp.objective is None:
        return None
    return sum((c * primal[j] for j, c in lp.objective), ZERO)


# ---------------------------------------------------------------------------
# presolve


class _Presolve:
    """Zero-fixing reduction with enough bookkeeping to lift certificates."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        self.alive_row = [True] * len(lp.rows)
        self.alive_col = [True] * lp.num_vars
        self.events = []  # (row, sign, fixed columns) in chronological order
        self.infeasible_unit = None  # (row, sign) making y.b < 0 on its own

        changed = True
        while changed and self.infeasible_unit is None:
            changed = False
            for r, row in enumerate(lp.rows):
                if not self.alive_row[r]:
                    continue
                entries = [(j, c) for j, c in row if self.alive_col[j]]
                b = lp.rhs[r]
                if not entries:
                    if b == 0:
                        self.alive_row[r] = False
                        changed = True
                    else:
                        self.infeasible_unit = (r, -1 if b > 0 else 1)
                        break
                    continue
                if all(c > 0 for _, c in entries):
                    sign = 1
                elif all(c < 0 for _, c in entries):
                    sign = -1
                else:
                    continue
                if b == 0:
                    fixed = tuple(j for j, _ in entries)
                    for j in fixed:
                        self.alive_col[j] = False
                    self.alive_row[r] = False
                    self.events.append((r, sign, fixed))
                    changed = True
                elif (sign > 0) != (b > 0):
                    # one-row contradiction, e.g. nonnegative combination = negative
                    self.infeasible_unit = (r, sign)
                    break

    def lift_certificate(self, reduced_cert):
        """Extend a certificate over surviving rows to all original rows.

        Eliminated rows receive multipliers, chosen backwards through the
        elimination order, large enough to restore yA >= 0 on the columns
        they fixed; they have zero rhs so y.b is untouched.
        """
        rows = self.lp.rows
        y = dict(reduced_cert)
        fixed_cols = {j for _, _, cols in self.events for j in cols}
        value = {}
        for r, yr in y.items():
            if yr:
                for j, c in rows[r]:
                    if j in fixed_cols:
                        value[j] = value.get(j, ZERO) + yr * c
        for r, sign, cols in reversed(self.events):
            mult = ZERO
            coeff = dict(rows[r])
            for j in cols:
                short = -value.get(j, ZERO)
                if short > 0:
                    candidate = short / (sign * coeff[j])
                    if candidate > mult:
                        mult = candidate
            yr = sign * mult
            y[r] = yr
            if yr:
                for j, c in rows[r]:
                    value[j] = value.get(j, ZERO) + yr * c
        return tuple(y.get(r, ZERO) for r in range(len(rows)))


# ---------------------------------------------------------------------------
# revised simplex on the reduced system


class _Simplex:
    def __init__(self, columns, rhs):
        # Orient rows so the right-hand side is nonnegative; remember flips
        # to translate certificates back.
        self.m = len(rhs)
        self.n = len(columns)
        self.flip = [1] * self.m
        b = list(rhs)
        for i in range(self.m):
            if b[i] < 0:
                b[i] = -b[i]
                self.flip[i] = -1
        self.cols = [
            tuple((i, c if self.flip[i] > 0 else -c) for i, c in col)
            for col in columns
        ]
        self.b = b
        self.basis = [self.n + i for i in range(self.m)]  # artificials
        self.binv = [
            [ONE if i == k else ZERO for k in range(self.m)] for i in range(self.m)
        ]
        self.xb = list(b)
        self.in_basis = [False] * self.n
        self.cursor = 0
        self._setup_float_pricing()

    def _setup_float_pricing(self):
        # Column data mirrored as float arrays for candidate ranking only;
        # any value that does not fit a float disables the fast path.
        self.float_pricing = self.n >= _FLOAT_PRICING_MIN_COLS
        if not self.float_pricing:
            return
        width = max((len(col) for col in self.cols), default=0)
        idx = np.full((self.n, width), self.m, dtype=np.int64)
        coef = np.zeros((self.n, width), dtype=np.float64)
        try:
            for j, col in enumerate(self.cols):
                for t, (i, c) in enumerate(col):
                    idx[j, t] = i
                    coef[j, t] = float(c)
        except (OverflowError, ValueError):
            self.float_pricing = False
            return
        self._f_idx = idx
        self._f_coef = coef
        self._f_basic = np.zeros(self.n, dtype=bool)

    # -- linear algebra helpers

    def _dual(self, cost_of_basic):
        y = [ZERO] * self.m
        for r in range(self.m):
            cb = cost_of_basic(self.basis[r])
            if cb:
                row = self.binv[r]
                for k in range(self.m):
                    if row[k]:
                        y[k] += cb * row[k]
        return y

    def _direction(self, j):
        d = [ZERO] * self.m
        for i, c in self.cols[j]:
            column = c
            binv = self.binv
            for r in range(self.m):
                if binv[r][i]:
                    d[r] += binv[r][i] * column
        return d

    def _reduced_cost(self, j, y, cost):
        rc = cost[j] if cost is not None else ZERO
        for i, c in self.cols[j]:
            if y[i]:
                rc -= y[i] * c
        return rc

    def _pivot(self, row, j, d, theta):
        m = self.m
        binv = self.binv
        xb = self.xb
        pivot = d[row]
        prow = binv[row]
        if pivot != 1:
            inv = ONE / pivot
            for k in range(m):
                if prow[k]:
                    prow[k] *= inv
        xb[row] = theta
        for i in range(m):
            if i == row:
                continue
            di = d[i]
            if di:
                target = binv[i]
                for k in range(m):
                    if prow[k]:
                        target[k] -= di * prow[k]
                if theta:
                    xb[i] -= theta * di
        leaving = self.basis[row]
        if leaving < self.n:
            self.in_basis[leaving] = False
            if self.float_pricing:
                self._f_basic[leaving] = False
        self.basis[row] = j
        self.in_basis[j] = True
        if self.float_pricing:
            self._f_basic[j] = True

    # -- pricing; artificials are basis-only identifiers (>= n), so the
    # candidate pool is exactly the structural columns

    def _enter_bland(self, y, cost):
        for j in range(self.n):
            if self.in_basis[j]:
                continue
            if self._reduced_cost(j, y, cost) < 0:
                return j
        return None

    def _enter_partial(self, y, cost):
        n = self.n
        offset = self.cursor
        scanned = 0
        while scanned < n:
            best = None
            best_rc = None
            limit = min(scanned + _PRICE_CHUNK, n)
            while scanned < limit:
                j = offset + scanned
                if j >= n:
                    j -= n
                scanned += 1
                if self.in_basis[j]:
                    continue
                rc = self._reduced_cost(j, y, cost)
                if rc < 0 and (best_rc is None or rc < best_rc):
                    best, best_rc = j, rc
            if best is not None:
                self.cursor = best + 1 if best + 1 < n else 0
                return best
        return None

    def _enter_float_ranked(self, y, cost, cost_float):
        """Rank candidates by float reduced costs; admit only on an exact
        negative reduced cost, falling back to an exact full pass."""
        y_ext = np.empty(self.m + 1, dtype=np.float64)
        try:
            for i in range(self.m):
                y_ext[i] = float(y[i])
        except OverflowError:
            return self._enter_partial(y, cost)
        y_ext[self.m] = 0.0
        estimate = cost_float - (self._f_coef * y_ext[self._f_idx]).sum(axis=1)
        estimate[self._f_basic] = np.inf
        take = min(_FLOAT_CANDIDATES, self.n)
        order = np.argpartition(estimate, take - 1)[:take]
        order = order[np.argsort(estimate[order], kind="stable")]
        for j in order:
            if estimate[j] >= 0.0:
                break
            j = int(j)
            if not self.in_basis[j] and self._reduced_cost(j, y, cost) < 0:
                return j
        # Float ranking found nothing verifiable; decide exactly.
        return self._enter_partial(y, cost)

    # -- main loop

    def _lex_leaving(self, tied, d):
        # Lexicographic tie-break: smallest B^-1 row scaled by the pivot
        # element.  Rows of B^-1 are independent, so ties always resolve.
        candidates = tied
        for k in range(self.m):
            best = None
            kept = []
            for i in candidates:
                v = self.binv[i][k] / d[i]
                if best is None or v < best:
                    best = v
                    kept = [i]
                elif v == best:
                    kept.append(i)
            candidates = kept
            if len(candidates) == 1:
                break
        return candidates[0]

    def run(self, cost, cost_of_basic, pin_artificials=False, bland_limit=None):
        """Minimize; returns "optimal" or "unbounded".

        ``cost`` is a dense structural cost vector or None for all-zero;
        ``cost_of_basic`` prices basis members (handles artificials).  With
        ``pin_artificials``, basic artificials are held at zero: a direction
        that would grow one triggers a degenerate pivot removing it instead.

        Leaving choice uses the lexicographic rule, which by itself
        guarantees termination as long as every pivot element is positive
        (phase 1 runs from an identity basis and satisfies this, so it sets
        no ``bland_limit``).  Phase 2 may inherit zero-valued artificials
        whose removal pivots can be negative, voiding the lexicographic
        invariant, so it additionally switches to Bland's rule (entering and
        leaving) after ``bland_limit`` consecutive degenerate pivots; that
        backstop guarantees termination unconditionally.
        """
        bland = False
        degenerate_run = 0
        n = self.n
        self.iterations = 0
        cost_float = None
        if self.float_pricing:
            try:
                cost_float = np.array(
                    [0.0 if cost is None else float(c) for c in cost or [0.0] * n],
                    dtype=np.float64,
                )
            except (OverflowError, ValueError):
                cost_float = None
        while True:
            self.iterations += 1
            y = self._dual(cost_of_basic)
            if bland:
                j = self._enter_bland(y, cost)
            elif cost_float is not None:
                j = self._enter_float_ranked(y, cost, cost_float)
            else:
                j = self._enter_partial(y, cost)
            if j is None:
                return OPTIMAL
            d = self._direction(j)
            theta = None
            tied = []
            for i in range(self.m):
                if d[i] > 0:
                    ratio = self.xb[i] / d[i]
                    if theta is None or ratio < theta:
                        theta = ratio
                        tied = [i]
                    elif ratio == theta:
                        tied.append(i)
            blocked = None
            if pin_artificials and (theta is None or theta > 0):
                for i in range(self.m):
                    if d[i] < 0 and self.basis[i] >= n:
                        blocked = i
                        break
            if blocked is not None:
                row, theta = blocked, ZERO
            elif theta is None:
                return UNBOUNDED
            elif len(tied) == 1:
                row = tied[0]
            elif bland:
                row = min(tied, key=lambda i: self.basis[i])
            else:
                row = self._lex_leaving(tied, d)
            if theta == 0:
                degenerate_run += 1
                if bland_limit is not None and degenerate_run > bland_limit:
                    bland = True
            else:
                degenerate_run = 0
                bland = False
            self._pivot(row, j, d, theta)

    # -- phases

    def phase1(self):
        """Drive artificials to zero; returns (status, farkas_over_oriented_rows)."""
        n = self.n

        def basic_cost(var):
            return ONE if var >= n else ZERO

        status = self.run(None, basic_cost)
        assert status == OPTIMAL, "phase 1 objective is bounded below by zero"
        infeasibility = sum(
            (self.xb[r] for r in range(self.m) if self.basis[r] >= n), ZERO
        )
        if infeasibility > 0:
            y = self._dual(basic_cost)
            # Dual prices of the phase-1 optimum: y.a_j <= 0 for structurals
            # and y.b equals the positive infeasibility, so -y certifies.
            cert = [-y[i] * self.flip[i] for i in range(self.m)]
            return INFEASIBLE, cert
        self._evict_artificials()
        return OPTIMAL, None

    def _row_dot_col(self, u, j):
        total = ZERO
        for i, c in self.cols[j]:
            if u[i]:
                total += u[i] * c
        return total

    def _evict_artificials(self):
        # Replace basic artificials (all at value zero now) by structural
        # columns where possible; rows that admit none are redundant and the
        # zero artificial parks there harmlessly (its row of B^-1 A is zero,
        # so no later pivot can move it off zero).  Columns touching the
        # artificial's own row are tried first; that almost always yields a
        # pivot without scanning the whole column set.
        support = [[] for _ in range(self.m)]
        for j, col in enumerate(self.cols):
            for i, _ in col:
                support[i].append(j)
        for r in range(self.m):
            if self.basis[r] < self.n:
                continue
            u = self.binv[r]
            found = None
            for j in support[r]:
                if not self.in_basis[j] and self._row_dot_col(u, j) != 0:
                    found = j
                    break
            if found is None:
                for j in range(self.n):
                    if not self.in_basis[j] and self._row_dot_col(u, j) != 0:
                        found = j
                        break
            if found is not None:
                d = self._direction(found)
                self._pivot(r, found, d, ZERO)

    def phase2(self, cost):
        n = self.n

        def basic_cost(var):
            return cost[var] if var < n else ZERO

        return self.run(
            cost, basic_cost, pin_artificials=True, bland_limit=_DEGENERATE_LIMIT
        )

    def primal(self):
        x = [ZERO] * self.n
        for r in range(self.m):
            if self.basis[r] < self.n:
                x[self.basis[r]] = self.xb[r]
        return x


# ---------------------------------------------------------------------------
# driver


def solve(lp: LinearProgram) -> LPOutcome:
    """Decide an exact LP; see module docstring for guarantees."""
    if not isinstance(lp, LinearProgram):
        raise LPError("solve expects a LinearProgram (use make_lp)")
    for row in lp.rows:
        for j, _ in row:
            if not 0 <= j < lp.num_vars:
                raise LPError("coefficient column out of range")

    pres = _Presolve(lp)
    if pres.infeasible_unit is not None:
        r, sign = pres.infeasible_unit
        cert = pres.lift_certificate({r: Q(sign)})
        if not check_certificate(lp, cert):
            raise RuntimeError("internal error: presolve certificate failed check")
        return LPOutcome(INFEASIBLE, certificate=cert)

    kept_rows = [r for r in range(len(lp.rows)) if pres.alive_row[r]]
    alive_cols = [j for j in range(lp.num_vars) if pres.alive_col[j]]
    col_pos = {j: k for k, j in enumerate(alive_cols)}
    row_pos = {r: k for k, r in enumerate(kept_rows)}

    # column view of the reduced system
    reduced_cols = [[] for _ in alive_cols]
    for r in kept_rows:
        for j, c in lp.rows[r]:
            if pres.alive_col[j]:
                reduced_cols[col_pos[j]].append((row_pos[r], c))
    reduced_rhs = [lp.rhs[r] for r in kept_rows]

    obj = dict(lp.objective) if lp.objective is not None else None

    # merge duplicate columns (identical constraint column and cost)
    groups = {}
    rep_cols = []
    rep_orig = []
    for k, j in enumerate(alive_cols):
        key = (tuple(reduced_cols[k]), obj.get(j, ZERO) if obj is not None else ZERO)
        if key in groups:
            continue
        groups[key] = len(rep_cols)
        rep_cols.append(tuple(reduced_cols[k]))
        rep_orig.append(j)

    simplex = _Simplex(rep_cols, reduced_rhs)
    status, cert_reduced = simplex.phase1()
    if status == INFEASIBLE:
        cert = pres.lift_certificate(
            {kept_rows[i]: v for i, v in enumerate(cert_reduced)}
        )
        if not check_certificate(lp, cert):
            raise RuntimeError("internal error: infeasibility certificate failed check")
        return LPOutcome(INFEASIBLE, certificate=cert)

    if lp.objective is not None:
        cost = [ZERO] * len(rep_cols)
        for k, j in enumerate(rep_orig):
            c = obj.get(j, ZERO)
            cost[k] = -c if lp.maximize else c
        status = simplex.phase2(cost)
        if status == UNBOUNDED:
            return LPOutcome(UNBOUNDED)

    x = [ZERO] * lp.num_vars
    for k, value in enumerate(simplex.primal()):
        x[rep_orig[k]] = value
    x = tuple(x)
    if not check_primal(lp, x):
        raise RuntimeError("internal error: primal solution failed substitution check")
    return LPOutcome(OPTIMAL, primal=x, objective_value=objective_value(lp, x))
