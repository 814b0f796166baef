"""Exact rational linear programming with self-checking certificates.

A dense two-phase simplex over exact rationals with a Dantzig/lexicographic
pivot rule and a Bland fallback, so runs are deterministic and never cycle.
Larger programs first run a fast floating-point simplex whose only job is to
propose an optimal basis; the basis is then refactorized in exact arithmetic
and priced exactly, and any discrepancy falls back to the pure rational path.
Every optimal solve carries a primal assignment and a dual vector;
verify_certificates re-derives feasibility, sign conditions and the
strong-duality equation from scratch, so no float and no solver bug can
silently produce a wrong bound.

Rows may be given densely or as {index: coeff} dicts; relations are '<=',
'=', '>='.  Variables are nonnegative unless listed in free_vars.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .rationals import Rational, rat_str

try:
    import numpy as _np
except ImportError:
    _np = None

LE, EQ, GE = "<=", "=", ">="
_RELS = (LE, EQ, GE)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_FLOAT_GUIDE_MIN_ROWS = 40


class LpError(ValueError):
    """Malformed program or certificate."""


class LinearProgram:
    """Immutable LP: optimize objective . x subject to rows and sign bounds."""

    __slots__ = ("num_vars", "sense", "objective", "rows", "free_vars")

    def __init__(self, num_vars: int, sense: str, objective,
                 rows: Iterable[tuple] = (), free_vars: Iterable[int] = ()):
        if sense not in ("max", "min"):
            raise LpError(f"sense must be 'max' or 'min', got {sense!r}")
        if num_vars < 0:
            raise LpError("num_vars must be nonnegative")
        obj = _as_dense(objective, num_vars, "objective")
        frozen_rows = []
        for k, row in enumerate(rows):
            try:
                coeffs, rel, rhs = row
            except (TypeError, ValueError):
                raise LpError(f"row {k} must be (coeffs, relation, rhs)") from None
            if rel not in _RELS:
                raise LpError(f"row {k} has unknown relation {rel!r}")
            frozen_rows.append((_as_sparse(coeffs, num_vars, f"row {k}"), rel, Rational(rhs)))
        free = frozenset(free_vars)
        if any(j < 0 or j >= num_vars for j in free):
            raise LpError("free variable index out of range")
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "sense", sense)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", tuple(frozen_rows))
        object.__setattr__(self, "free_vars", free)

    def __setattr__(self, name, value):
        raise AttributeError("LinearProgram is immutable")

    def restricted(self, row_indices: Sequence[int]) -> "LinearProgram":
        """Same variables and objective, only the selected rows."""
        sub = LinearProgram.__new__(LinearProgram)
        object.__setattr__(sub, "num_vars", self.num_vars)
        object.__setattr__(sub, "sense", self.sense)
        object.__setattr__(sub, "objective", self.objective)
        object.__setattr__(sub, "rows", tuple(self.rows[i] for i in row_indices))
        object.__setattr__(sub, "free_vars", self.free_vars)
        return sub

    def row_value(self, i: int, x: Sequence) -> "Rational":
        coeffs, _, _ = self.rows[i]
        return sum((c * x[j] for j, c in coeffs), Rational(0))


class LpSolution:
    """Outcome of a solve: status plus exact certificates when optimal."""

    __slots__ = ("status", "objective", "primal", "dual")

    def __init__(self, status, objective=None, primal=None, dual=None):
        self.status = status
        self.objective = objective
        self.primal = tuple(primal) if primal is not None else None
        self.dual = tuple(dual) if dual is not None else None

    def __repr__(self):
        if self.status != OPTIMAL:
            return f"LpSolution({self.status})"
        return f"LpSolution(optimal, objective={rat_str(self.objective)})"


def _as_dense(coeffs, num_vars, what):
    if isinstance(coeffs, Mapping):
        dense = [Rational(0)] * num_vars
        for j, c in coeffs.items():
            if not 0 <= j < num_vars:
                raise LpError(f"{what}: variable index {j} out of range")
            dense[j] = Rational(c)
        return tuple(dense)
    dense = tuple(Rational(c) for c in coeffs)
    if len(dense) != num_vars:
        raise LpError(f"{what}: expected {num_vars} coefficients, got {len(dense)}")
    return dense


def _as_sparse(coeffs, num_vars, what):
    if isinstance(coeffs, Mapping):
        items = sorted(coeffs.items())
        for j, _ in items:
            if not 0 <= j < num_vars:
                raise LpError(f"{what}: variable index {j} out of range")
        return tuple((j, Rational(c)) for j, c in items if c)
    dense = _as_dense(coeffs, num_vars, what)
    return tuple((j, c) for j, c in enumerate(dense) if c)


# -- solver -------------------------------------------------------------------

def solve(lp: LinearProgram, check: bool = True) -> LpSolution:
    """Exact solve.  With check=True (the default) an optimal outcome is
    revalidated through verify_certificates before it is returned."""
    sol = _solve_core(lp)
    if check and sol.status == OPTIMAL:
        ok, why = verify_certificates(lp, sol)
        if not ok:
            raise LpError(f"internal certificate check failed: {why}")
    return sol


def _solve_core(lp: LinearProgram) -> LpSolution:
    if _np is not None and len(lp.rows) >= _FLOAT_GUIDE_MIN_ROWS:
        sol = _guided(lp)
        if sol is not None:
            return sol
    return _simplex(lp)


class _Setup:
    """Standard-form view shared by the exact and float paths: flipped rows,
    internal max-sense costs, mirror columns for free variables, and the
    slack/artificial column layout."""

    __slots__ = ("maximize", "mirror", "ncols_struct", "cost", "body", "flip",
                 "slack_col", "slack_sign", "art_col", "id_col", "art_cols",
                 "ncols")


def _standardize(lp: LinearProgram) -> _Setup:
    s = _Setup()
    s.maximize = lp.sense == "max"
    nv = lp.num_vars
    s.mirror = {}
    ncols_struct = nv
    for j in sorted(lp.free_vars):
        s.mirror[j] = ncols_struct
        ncols_struct += 1
    s.ncols_struct = ncols_struct

    obj = [c if s.maximize else -c for c in lp.objective]
    cost = [Rational(0)] * ncols_struct
    for j in range(nv):
        cost[j] = obj[j]
    for j, mj in s.mirror.items():
        cost[mj] = -obj[j]
    s.cost = cost

    m = len(lp.rows)
    s.flip = [False] * m
    body = []
    for i, (coeffs, rel, rhs) in enumerate(lp.rows):
        row = [Rational(0)] * ncols_struct
        for j, c in coeffs:
            row[j] = c
            if j in s.mirror:
                row[s.mirror[j]] = -c
        if rhs < 0:
            row = [-c for c in row]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
            s.flip[i] = True
        body.append((row, rel, rhs))
    s.body = body

    # Column layout: structural | slack or surplus per inequality | artificials.
    s.slack_col = [-1] * m
    s.slack_sign = [1] * m
    s.art_col = [-1] * m
    at = ncols_struct
    for i, (_, rel, _) in enumerate(body):
        if rel != EQ:
            s.slack_col[i] = at
            s.slack_sign[i] = 1 if rel == LE else -1
            at += 1
    arts = []
    for i, (_, rel, _) in enumerate(body):
        if rel != LE:
            s.art_col[i] = at
            arts.append(at)
            at += 1
    s.art_cols = arts
    s.ncols = at
    s.id_col = [s.slack_col[i] if body[i][1] == LE else s.art_col[i]
                for i in range(m)]
    return s


def _entry(s: _Setup, i: int, j: int) -> Rational:
    """Exact standard-form matrix entry for row i, column j."""
    if j < s.ncols_struct:
        return s.body[i][0][j]
    if j == s.slack_col[i]:
        return Rational(s.slack_sign[i])
    if j == s.art_col[i]:
        return Rational(1)
    return Rational(0)


def _build_tableau(s: _Setup):
    zero = Rational(0)
    one = Rational(1)
    tableau = []
    basis = []
    pad = s.ncols - s.ncols_struct
    for i, (row, _, rhs) in enumerate(s.body):
        full = row + [zero] * pad + [rhs]
        if s.slack_col[i] >= 0:
            full[s.slack_col[i]] = one if s.slack_sign[i] == 1 else -one
        if s.art_col[i] >= 0:
            full[s.art_col[i]] = one
        tableau.append(full)
        basis.append(s.id_col[i])
    return tableau, basis


def _simplex(lp: LinearProgram) -> LpSolution:
    s = _standardize(lp)
    m = len(s.body)
    ncols = s.ncols
    zero = Rational(0)
    tableau, basis = _build_tableau(s)
    art_set = frozenset(s.art_cols)
    alive = [True] * m

    if s.art_cols:
        phase1 = [zero] * (ncols + 1)
        for c in s.art_cols:
            phase1[c] = -Rational(1)
        red = _reduced_costs(phase1, tableau, basis, ncols)
        status = _iterate(tableau, basis, red, ncols, alive, blocked=frozenset())
        if status != OPTIMAL or red[ncols] != 0:
            # red[ncols] tracks the phase objective (= -sum of artificials).
            return LpSolution(INFEASIBLE)
        _evict_artificials(tableau, basis, ncols, art_set, alive)

    full_cost = [zero] * (ncols + 1)
    for j, c in enumerate(s.cost):
        full_cost[j] = c
    red = _reduced_costs(full_cost, tableau, basis, ncols)
    status = _iterate(tableau, basis, red, ncols, alive, blocked=art_set)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED)

    x_int = [zero] * ncols
    for i in range(m):
        if alive[i]:
            x_int[basis[i]] = tableau[i][ncols]
    primal = []
    for j in range(lp.num_vars):
        val = x_int[j]
        if j in s.mirror:
            val = val - x_int[s.mirror[j]]
        primal.append(val)

    # Each row's dual is read off its identity column (slack for <=, the
    # artificial for = and >=): reduced cost there is exactly -y_i.
    sense_sign = 1 if s.maximize else -1
    dual = []
    for i in range(m):
        y = -red[s.id_col[i]] if alive[i] else zero
        if s.flip[i]:
            y = -y
        dual.append(sense_sign * y)

    value = sum((lp.objective[j] * primal[j] for j in range(lp.num_vars)), zero)
    return LpSolution(OPTIMAL, value, primal, dual)


def _reduced_costs(cost, tableau, basis, ncols):
    """Row of c_j - c_B B^-1 A_j values plus the current objective at the end."""
    red = list(cost)
    for i, b in enumerate(basis):
        cb = cost[b]
        if cb:
            row = tableau[i]
            for j in range(ncols + 1):
                if row[j]:
                    red[j] -= cb * row[j]
    # red[ncols] now holds -objective; store objective positively.
    red[ncols] = -red[ncols]
    return red


def _iterate(tableau, basis, red, ncols, alive, blocked):
    # Entering rule: Dantzig (largest reduced cost, lowest index on ties),
    # with lexicographic ratio tie-breaks against degenerate wandering.  A
    # long stall switches to Bland's rule, which cannot cycle, so the
    # iteration always terminates.
    m = len(tableau)
    stall = 0
    bland = False
    last_obj = red[ncols]
    while True:
        pcol = -1
        if bland:
            for j in range(ncols):
                if j not in blocked and red[j] > 0:
                    pcol = j
                    break
        else:
            best_red = None
            for j in range(ncols):
                if j in blocked:
                    continue
                rj = red[j]
                if rj > 0 and (best_red is None or rj > best_red):
                    best_red = rj
                    pcol = j
        if pcol < 0:
            return OPTIMAL
        best = None
        ties = []
        for i in range(m):
            if not alive[i]:
                continue
            a = tableau[i][pcol]
            if a > 0:
                ratio = tableau[i][ncols] / a
                if best is None or ratio < best:
                    best = ratio
                    ties = [i]
                elif ratio == best:
                    ties.append(i)
        if best is None:
            return UNBOUNDED
        if bland:
            prow = min(ties, key=lambda i: basis[i])
        else:
            prow = ties[0]
            for i in ties[1:]:
                if _lex_smaller(tableau[i], tableau[prow], pcol, ncols):
                    prow = i
        _pivot(tableau, basis, red, prow, pcol, ncols)
        if red[ncols] != last_obj:
            last_obj = red[ncols]
            stall = 0
            bland = False
        else:
            stall += 1
            if stall > 100 + 10 * m:
                bland = True


def _lex_smaller(row_a, row_b, pcol, ncols):
    """Lexicographic ratio tie-break: compare the candidate rows scaled by
    their pivot-column entries.  Cross-multiplied to stay division-free."""
    pa = row_a[pcol]
    pb = row_b[pcol]
    for j in range(ncols):
        lhs = row_a[j] * pb
        rhs = row_b[j] * pa
        if lhs != rhs:
            return lhs < rhs
    return False


def _pivot(tableau, basis, red, prow, pcol, ncols):
    row = tableau[prow]
    piv = row[pcol]
    if piv != 1:
        inv = 1 / piv
        row = [c * inv for c in row]
        tableau[prow] = row
    for i, other in enumerate(tableau):
        if i == prow:
            continue
        f = other[pcol]
        if f:
            tableau[i] = [a - f * b for a, b in zip(other, row)]
    f = red[pcol]
    if f:
        for j in range(ncols):
            if row[j]:
                red[j] -= f * row[j]
        red[ncols] += f * row[ncols]
        red[pcol] = Rational(0)
    basis[prow] = pcol


def _evict_artificials(tableau, basis, ncols, art_set, alive):
    """Pivot basic artificials (necessarily at value 0) out, or mark their
    rows redundant when the row has no structural coefficients left."""
    for i in range(len(tableau)):
        if not alive[i] or basis[i] not in art_set:
            continue
        row = tableau[i]
        pcol = -1
        for j in range(ncols):
            if j not in art_set and row[j]:
                pcol = j
                break
        if pcol < 0:
            alive[i] = False
            continue
        zero_red = [Rational(0)] * (ncols + 1)
        _pivot(tableau, basis, zero_red, i, pcol, ncols)


# -- float-guided path ----------------------------------------------------------

def _guided(lp: LinearProgram) -> LpSolution | None:
    """Run a floating-point simplex to propose an optimal basis, then rebuild
    and certify that basis in exact arithmetic.  Returns None whenever
    anything is off, deferring to the exact simplex; only OPTIMAL outcomes
    are ever produced here, so infeasibility and unboundedness always come
    from the exact path."""
    s = _standardize(lp)
    if not s.body:
        return None
    basis = _float_basis(s)
    if basis is None:
        return None
    return _exact_from_basis(lp, s, basis)


def _float_basis(s: _Setup):
    np = _np
    m = len(s.body)
    ncols = s.ncols
    tol = 1e-9
    T = np.zeros((m, ncols + 1))
    for i, (row, _, rhs) in enumerate(s.body):
        for j, c in enumerate(row):
            if c:
                T[i, j] = float(c)
        if s.slack_col[i] >= 0:
            T[i, s.slack_col[i]] = float(s.slack_sign[i])
        if s.art_col[i] >= 0:
            T[i, s.art_col[i]] = 1.0
        T[i, ncols] = float(rhs)
    bas = list(s.id_col)
    limit = 80 * m + 800

    def run(costvec, blocked) -> bool:
        for _ in range(limit):
            red = costvec[:ncols] - costvec[bas] @ T[:, :ncols]
            if blocked is not None:
                red[blocked] = -1.0
            pcol = int(np.argmax(red))
            if red[pcol] <= tol:
                return True
            col = T[:, pcol]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(col > tol, T[:, ncols] / col, np.inf)
            prow = int(np.argmin(ratios))
            if not np.isfinite(ratios[prow]):
                return False
            T[prow] /= T[prow, pcol]
            lift = T[:, pcol].copy()
            lift[prow] = 0.0
            np.subtract(T, np.outer(lift, T[prow]), out=T)
            bas[prow] = pcol
        return False

    art_idx = np.array(s.art_cols, dtype=int) if s.art_cols else None
    if s.art_cols:
        cost1 = np.zeros(ncols)
        cost1[art_idx] = -1.0
        if not run(cost1, None):
            return None
        if cost1[bas] @ T[:, ncols] < -1e-7:
            return None
    cost2 = np.zeros(ncols)
    for j, c in enumerate(s.cost):
        if c:
            cost2[j] = float(c)
    if not run(cost2, art_idx):
        return None
    return bas


def _exact_from_basis(lp: LinearProgram, s: _Setup, basis) -> LpSolution | None:
    """Exact refactorization of a candidate basis: solve for the basic values
    and the dual multipliers, then price every column.  Any failed exact
    check rejects the basis."""
    m = len(s.body)
    if len(basis) != m or len(set(basis)) != m:
        return None
    zero = Rational(0)
    bmat = [[_entry(s, i, basis[k]) for k in range(m)] for i in range(m)]
    z = _solve_linear(bmat, [s.body[i][2] for i in range(m)])
    if z is None or any(v < 0 for v in z):
        return None
    art_set = set(s.art_cols)
    for k, j in enumerate(basis):
        if j in art_set and z[k] != 0:
            return None
    cb = [s.cost[j] if j < s.ncols_struct else zero for j in basis]
    w = _solve_linear([[bmat[i][k] for i in range(m)] for k in range(m)], cb)
    if w is None:
        return None
    basis_set = set(basis)
    for j in range(s.ncols):
        if j in basis_set or j in art_set:
            continue
        red = (s.cost[j] if j < s.ncols_struct else zero) \
            - sum((w[i] * _entry(s, i, j) for i in range(m)), zero)
        if red > 0:
            return None

    x_int = [zero] * s.ncols
    for k, j in enumerate(basis):
        x_int[j] = z[k]
    primal = []
    for j in range(lp.num_vars):
        val = x_int[j]
        if j in s.mirror:
            val = val - x_int[s.mirror[j]]
        primal.append(val)
    sense_sign = 1 if s.maximize else -1
    dual = []
    for i in range(m):
        y = w[i]
        if s.flip[i]:
            y = -y
        dual.append(sense_sign * y)
    value = sum((lp.objective[j] * primal[j] for j in range(lp.num_vars)), zero)
    return LpSolution(OPTIMAL, value, primal, dual)


def _solve_linear(rows, rhs):
    """Solve a square exact system by Gaussian elimination; None if singular."""
    n = len(rows)
    mat = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        prow = -1
        for i in range(col, n):
            if mat[i][col]:
                prow = i
                break
        if prow < 0:
            return None
        if prow != col:
            mat[col], mat[prow] = mat[prow], mat[col]
        piv_row = mat[col]
        inv = 1 / piv_row[col]
        if inv != 1:
            piv_row = [c * inv for c in piv_row]
            mat[col] = piv_row
        for i in range(col + 1, n):
            f = mat[i][col]
            if f:
                mat[i] = [a - f * b for a, b in zip(mat[i], piv_row)]
    out = [Rational(0)] * n
    for i in range(n - 1, -1, -1):
        acc = mat[i][n]
        row = mat[i]
        for j in range(i + 1, n):
            if row[j]:
                acc -= row[j] * out[j]
        out[i] = acc
    return out


# -- certificates ---------------------------------------------------------------

def verify_certificates(lp: LinearProgram, sol: LpSolution) -> tuple[bool, str]:
    """First-principles optimality check: primal feasibility, dual sign and
    stationarity conditions, and exact equality of the two objectives."""
    if sol.status != OPTIMAL:
        return False, f"no certificates for status {sol.status}"
    x, y = sol.primal, sol.dual
    if x is None or y is None or len(x) != lp.num_vars or len(y) != len(lp.rows):
        return False, "certificate vectors missing or mis-sized"
    for j in range(lp.num_vars):
        if j not in lp.free_vars and x[j] < 0:
            return False, f"primal variable {j} negative"
    for i, (coeffs, rel, rhs) in enumerate(lp.rows):
        lhs = lp.row_value(i, x)
        if rel == LE and lhs > rhs:
            return False, f"row {i} violated"
        if rel == GE and lhs < rhs:
            return False, f"row {i} violated"
        if rel == EQ and lhs != rhs:
            return False, f"row {i} violated"
    maximize = lp.sense == "max"
    for i, (_, rel, _) in enumerate(lp.rows):
        if rel == LE and (y[i] < 0 if maximize else y[i] > 0):
            return False, f"dual sign wrong on row {i}"
        if rel == GE and (y[i] > 0 if maximize else y[i] < 0):
            return False, f"dual sign wrong on row {i}"
    d = [Rational(0)] * lp.num_vars
    for i, (coeffs, _, _) in enumerate(lp.rows):
        yi = y[i]
        if yi:
            for j, c in coeffs:
                d[j] += yi * c
    for j in range(lp.num_vars):
        cj = lp.objective[j]
        if j in lp.free_vars:
            if d[j] != cj:
                return False, f"dual stationarity fails on free variable {j}"
        elif maximize and d[j] < cj:
            return False, f"dual stationarity fails on variable {j}"
        elif not maximize and d[j] > cj:
            return False, f"dual stationarity fails on variable {j}"
    primal_obj = sum((lp.objective[j] * x[j] for j in range(lp.num_vars)), Rational(0))
    dual_obj = sum((y[i] * lp.rows[i][2] for i in range(len(lp.rows))), Rational(0))
    if primal_obj != dual_obj:
        return False, "duality gap is nonzero"
    if sol.objective != primal_obj:
        return False, "reported objective mismatches the primal point"
    return True, "ok"


def solve_with_lazy_rows(lp: LinearProgram, seed_rows: Iterable[int],
                         check: bool = True) -> LpSolution:
    """Solve lp by row generation: start from seed_rows, repeatedly solve the
    restricted program and pull in every violated row until none remain.

    The seed must make the restriction bounded (callers seed enough structure
    for that); the final solution is optimal for the full program, with zero
    duals on rows that never became active.
    """
    m = len(lp.rows)
    active = sorted(set(seed_rows))
    active_set = set(active)
    while True:
        sol = _solve_core(lp.restricted(active))
        if sol.status == INFEASIBLE:
            return LpSolution(INFEASIBLE)
        if sol.status == UNBOUNDED:
            raise LpError("lazy row generation needs a bounding seed")
        x = sol.primal
        fresh = []
        for i in range(m):
            if i in active_set:
                continue
            coeffs, rel, rhs = lp.rows[i]
            lhs = sum((c * x[j] for j, c in coeffs), Rational(0))
            if (rel == LE and lhs > rhs) or (rel == GE and lhs < rhs) or (rel == EQ and lhs != rhs):
                fresh.append(i)
        if not fresh:
            dual = [Rational(0)] * m
            for k, i in enumerate(active):
                dual[i] = sol.dual[k]
            full = LpSolution(OPTIMAL, sol.objective, sol.primal, dual)
            if check:
                ok, why = verify_certificates(lp, full)
                if not ok:
                    raise LpError(f"internal certificate check failed: {why}")
            return full
        active.extend(fresh)
        active.sort()
        active_set.update(fresh)
