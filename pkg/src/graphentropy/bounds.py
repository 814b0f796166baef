"""Lower and upper bounds on the entropy of a graph or digraph.

The lower side comes from packing structure into the graph: a matching, a
clique cover, or its fractional relaxation (n minus the fractional clique
cover number is the strongest of the three).  The upper side removes
structure: a minimum transversal (vertices meeting every directed cycle) and
the subset-entropy linear program.  entropy_bracket strips loops, splits into
components, and combines the strongest sides with machine-checkable
witnesses; a collapsed bracket pins the entropy exactly.
"""

from __future__ import annotations

from .graphs import (
    CapExceededError,
    Graph,
    automorphisms,
    bits_of,
    connected_components,
    induced_subgraph,
    loops,
    permute_mask,
)
from .lp import (
    EQ,
    GE,
    LE,
    OPTIMAL,
    LinearProgram,
    LpError,
    LpSolution,
    solve,
    verify_certificates,
)
from .rationals import Rational

_MATCHING_COMPONENT_CAP = 24


class MatchingResult:
    """A maximum matching on the mutual-arc edges: size, edge list, and the
    mask of matched vertices."""

    __slots__ = ("size", "edges", "vertices")

    def __init__(self, size: int, edges: tuple[tuple[int, int], ...]):
        self.size = size
        self.edges = edges
        m = 0
        for u, v in edges:
            m |= 1 << u | 1 << v
        self.vertices = m

    def __repr__(self):
        return f"MatchingResult(size={self.size}, edges={list(self.edges)})"


def max_matching(g: Graph) -> MatchingResult:
    """Maximum matching among mutual pairs (the edges, for undirected g).

    Exact subset dynamic programming per connected component; deterministic
    witness (lowest vertex matched first).
    """
    mut = [g.mutual_row(u) for u in range(g.n)]
    edges: list[tuple[int, int]] = []
    total = 0
    for comp in connected_components(g):
        if comp.bit_count() > _MATCHING_COMPONENT_CAP:
            raise CapExceededError(
                f"matching on a component with {comp.bit_count()} vertices "
                f"exceeds the {_MATCHING_COMPONENT_CAP}-vertex cap")
        memo: dict[int, int] = {0: 0}

        def nu(mask: int) -> int:
            got = memo.get(mask)
            if got is not None:
                return got
            low = mask & -mask
            v = low.bit_length() - 1
            rest = mask ^ low
            best = nu(rest)
            for u in bits_of(mut[v] & rest):
                cand = 1 + nu(rest ^ (1 << u))
                if cand > best:
                    best = cand
            memo[mask] = best
            return best

        total += nu(comp)
        mask = comp
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            rest = mask ^ low
            if nu(rest) == nu(mask):
                mask = rest
                continue
            for u in bits_of(mut[v] & rest):
                if 1 + nu(rest ^ (1 << u)) == nu(mask):
                    edges.append((v, u))
                    mask = rest ^ (1 << u)
                    break
    return MatchingResult(total, tuple(edges))


def maximal_cliques(g: Graph) -> tuple[int, ...]:
    """All maximal cliques of the mutual-arc relation, as sorted masks.

    Bron-Kerbosch with pivoting; a clique in a digraph is a set of vertices
    joined pairwise by arcs in both directions, so loops never matter and a
    lone vertex is a (maximal) clique when nothing extends it.
    """
    mut = [g.mutual_row(u) for u in range(g.n)]
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot = -1
        best = -1
        for u in bits_of(p | x):
            d = (p & mut[u]).bit_count()
            if d > best:
                best = d
                pivot = u
        for v in bits_of(p & ~mut[pivot]):
            bit = 1 << v
            expand(r | bit, p & mut[v], x & mut[v])
            p ^= bit
            x |= bit

    if g.n:
        expand(0, g.vertex_mask, 0)
    return tuple(sorted(out))


def clique_cover_number(g: Graph) -> tuple[int, tuple[int, ...]]:
    """Minimum number of cliques covering every vertex, with one witness cover.

    Branch and bound over maximal cliques (any optimal cover can be enlarged
    to maximal cliques).  Deterministic: branches on the uncovered vertex
    with the fewest usable cliques, lowest index first.
    """
    n = g.n
    if n == 0:
        return 0, ()
    cliques = maximal_cliques(g)
    containing = [[c for c in cliques if c >> v & 1] for v in range(n)]
    largest = max(c.bit_count() for c in cliques)
    best_count = n + 1
    best_cover: tuple[int, ...] = ()

    def rec(uncovered: int, chosen: list[int]) -> None:
        nonlocal best_count, best_cover
        if not uncovered:
            if len(chosen) < best_count:
                best_count = len(chosen)
                best_cover = tuple(chosen)
            return
        bound = len(chosen) + (uncovered.bit_count() + largest - 1) // largest
        if bound >= best_count:
            return
        v = -1
        fewest = None
        for u in bits_of(uncovered):
            k = len(containing[u])
            if fewest is None or k < fewest:
                fewest = k
                v = u
        for c in containing[v]:
            chosen.append(c)
            rec(uncovered & ~c, chosen)
            chosen.pop()

    rec(g.vertex_mask, [])
    return best_count, best_cover


class CliqueFamily:
    """Weighted family of cliques; validate() checks the fractional cover
    conditions exactly against a host graph."""

    __slots__ = ("cliques", "weights")

    def __init__(self, cliques, weights):
        self.cliques = tuple(cliques)
        self.weights = tuple(Rational(w) for w in weights)
        if len(self.cliques) != len(self.weights):
            raise ValueError("one weight per clique required")

    def total(self) -> Rational:
        return sum(self.weights, Rational(0))

    def validate(self, g: Graph) -> None:
        for c in self.cliques:
            for u in bits_of(c):
                if c & ~(g.mutual_row(u) | 1 << u):
                    raise ValueError(f"{sorted(bits_of(c))} is not a clique")
        for w in self.weights:
            if w < 0:
                raise ValueError("negative clique weight")
        for v in range(g.n):
            level = sum((w for c, w in zip(self.cliques, self.weights) if c >> v & 1),
                        Rational(0))
            if level < 1:
                raise ValueError(f"vertex {v} covered only to level {level}")


def build_fractional_cover_lp(g: Graph) -> tuple[LinearProgram, tuple[int, ...]]:
    """The covering LP behind the fractional clique cover number.

    One nonnegative weight per maximal clique, minimized subject to every
    vertex reaching total weight at least one.  Returns the program and the
    clique masks its variables refer to.
    """
    cliques = maximal_cliques(g)
    k = len(cliques)
    rows = []
    for v in range(g.n):
        coeffs = {i: 1 for i, c in enumerate(cliques) if c >> v & 1}
        rows.append((coeffs, GE, 1))
    return LinearProgram(k, "min", [1] * k, rows), cliques


def fractional_clique_cover_number(g: Graph) -> tuple[Rational, CliqueFamily]:
    """Optimal fractional clique cover via an exact LP over maximal cliques.

    Restricting to maximal cliques loses nothing: weight on any clique can be
    moved to a maximal superset.  The returned family revalidates exactly.
    """
    if g.n == 0:
        return Rational(0), CliqueFamily((), ())
    lp, cliques = build_fractional_cover_lp(g)
    sol = solve(lp)
    family = CliqueFamily(cliques, sol.primal)
    family.validate(g)
    return sol.objective, family


def transversal_number(g: Graph) -> tuple[int, int]:
    """Minimum number of vertices meeting every directed cycle, with witness.

    Loops force their vertex into the transversal.  For undirected graphs
    every edge is a two-cycle, so after the loops this is a minimum vertex
    cover; for digraphs a branch and bound hits lazily discovered cycles.
    """
    lp = loops(g)
    if not g.directed:
        keep = g.vertex_mask & ~lp
        sub_rows = [g.rows[u] & keep & ~(1 << u) if keep >> u & 1 else 0
                    for u in range(g.n)]
        size, cover = _vertex_cover(sub_rows, keep)
        return size + lp.bit_count(), cover | lp
    return _feedback_vertex_set(g)


def _vertex_cover(rows, alive: int) -> tuple[int, int]:
    best_size = alive.bit_count() + 1
    best_mask = 0

    def degree(v: int, mask: int) -> int:
        return (rows[v] & mask).bit_count()

    def rec(mask: int, chosen: int, count: int) -> None:
        nonlocal best_size, best_mask
        if count >= best_size:
            return
        v = -1
        dmax = 0
        for u in bits_of(mask):
            d = degree(u, mask)
            if d > dmax:
                dmax = d
                v = u
        if v < 0:
            best_size = count
            best_mask = chosen
            return
        bit = 1 << v
        rec(mask ^ bit, chosen | bit, count + 1)
        nb = rows[v] & mask
        rec(mask & ~(nb | bit), chosen | nb, count + nb.bit_count())

    rec(alive, 0, 0)
    return best_size, best_mask


def _feedback_vertex_set(g: Graph) -> tuple[int, int]:
    n = g.n
    best_size = n + 1
    best_mask = 0

    def find_cycle(removed: int):
        alive = g.vertex_mask & ~removed
        for v in bits_of(alive):
            if g.rows[v] >> v & 1:
                return [v]
        # BFS from every vertex for a shortest cycle through it.
        shortest = None
        for s in bits_of(alive):
            parent = {s: -1}
            queue = [s]
            while queue:
                nxt = []
                for u in queue:
                    for w in bits_of(g.rows[u] & alive):
                        if w == s:
                            cycle = [u]
                            while parent[cycle[-1]] != -1:
                                cycle.append(parent[cycle[-1]])
                            cycle.reverse()
                            if shortest is None or len(cycle) < len(shortest):
                                shortest = cycle
                            nxt = []
                            queue = []
                            break
                        if w not in parent:
                            parent[w] = u
                            nxt.append(w)
                    else:
                        continue
                    break
                queue = nxt
            if shortest is not None and len(shortest) == 2:
                break
        return shortest

    def rec(removed: int, count: int) -> None:
        nonlocal best_size, best_mask
        if count >= best_size:
            return
        cycle = find_cycle(removed)
        if cycle is None:
            best_size = count
            best_mask = removed
            return
        for w in cycle:
            rec(removed | 1 << w, count + 1)

    rec(0, 0)
    return best_size, best_mask


# -- subset-entropy linear program ---------------------------------------------


def closure_map(g: Graph) -> list[int]:
    """cl[m] for every vertex mask m: repeatedly absorb any vertex whose whole
    in-neighbourhood already lies inside.  Absorbed vertices carry no fresh
    information, which is what lets the LP identify h(m) with h(cl[m])."""
    n = g.n
    cols = g.cols
    cl = [0] * (g.vertex_mask + 1)
    order = sorted(range(g.vertex_mask + 1), key=int.bit_count)
    for m in order:
        cur = cl[m & (m - 1)] | m if m else 0
        # Seeding with the closure of a submask is sound (closures are
        # monotone) and usually leaves little to do.
        changed = True
        while changed:
            changed = False
            for v in range(n):
                bit = 1 << v
                if not cur & bit and cols[v] & ~cur == 0:
                    cur |= bit
                    changed = True
        cl[m] = cur
    return cl


def build_shannon_lp(g: Graph) -> LinearProgram:
    """The full defining LP on one variable per vertex subset.

    Variable index == subset mask.  Rows: h(empty)=0, h(v)<=1, monotonicity
    at the top, the elemental submodular inequalities (which generate every
    monotonicity and submodularity constraint), and one functional equality
    per vertex tying h(N(v)+v) to h(N(v)).  This is what lp-dump prints; the
    solver works on the closure-collapsed equivalent.
    """
    n = g.n
    full = g.vertex_mask
    nvars = 1 << n
    rows = [({0: 1}, EQ, 0)]
    for v in range(n):
        rows.append(({1 << v: 1}, LE, 1))
    for v in range(n):
        drop = full ^ (1 << v)
        rows.append(({drop: 1, full: -1} if drop else {full: -1}, LE, 0))
    for i in range(n):
        for j in range(i + 1, n):
            pair = 1 << i | 1 << j
            rest = full & ~pair
            sub = rest
            while True:
                coeffs: dict[int, int] = {}
                for mask, c in ((sub | pair, 1), (sub, 1), (sub | 1 << i, -1), (sub | 1 << j, -1)):
                    coeffs[mask] = coeffs.get(mask, 0) + c
                rows.append(({m: c for m, c in coeffs.items() if c}, LE, 0))
                if sub == 0:
                    break
                sub = (sub - 1) & rest
    cols = g.cols
    for v in range(n):
        nv = cols[v]
        if nv >> v & 1:
            continue
        rows.append(({nv | 1 << v: 1, nv: -1} if nv else {1 << v: 1}, EQ, 0))
    objective = {full: 1}
    return LinearProgram(nvars, "max", objective, rows)


class ShannonResult:
    """Optimal value of the subset-entropy LP plus a fully validated witness.

    h is indexed by vertex mask (length 2^n) and satisfies, exactly: h of the
    empty set is 0, singletons at most 1, monotone, submodular on every pair
    of subsets, and the per-vertex functional equalities.
    """

    __slots__ = ("theta", "h", "lp", "solution")

    def __init__(self, theta, h, lp, solution):
        self.theta = theta
        self.h = h
        self.lp = lp
        self.solution = solution


def shannon_entropy(g: Graph, cap: int = 10) -> ShannonResult:
    """Solve the subset-entropy LP exactly.

    Works on the closure-collapsed formulation (variables only for closed
    vertex sets) with lazy generation of submodular rows, then expands the
    optimum back to all subsets and revalidates every defining constraint.
    Equality of the two formulations follows from the closure identity
    h(S) = h(cl(S)), which the final validation re-certifies from scratch.
    """
    n = g.n
    if n > cap:
        raise CapExceededError(
            f"subset-entropy LP on {n} vertices exceeds the cap of {cap}; "
            f"raise it explicitly if you really want 2^{n} subset variables")
    zero = Rational(0)
    if n == 0:
        return ShannonResult(zero, (zero,), None, None)
    full = g.vertex_mask
    cl = closure_map(g)
    pinned = cl[0]
    closed = sorted({c for c in cl})
    if full == pinned:
        h = tuple(zero for _ in range(full + 1))
        return ShannonResult(zero, h, None, None)

    # Vertex symmetries identify variables: averaging any feasible h over the
    # automorphism group keeps it feasible (the constraint families are
    # permutation-closed) without moving the objective, so one variable per
    # orbit of closed sets loses nothing.  The expanded optimum is still
    # re-validated against every defining constraint below.
    rep = {c: c for c in closed}
    perms = automorphisms(g) if n <= 8 else ()
    if len(perms) > 1 and len(perms) * len(closed) * n <= 2_000_000:
        for c in closed:
            if rep[c] != c:
                continue
            orbit = {permute_mask(p, c) for p in perms}
            low = min(orbit)
            for s in orbit:
                rep[s] = low
    var_of = {}
    for c in closed:
        if rep[c] == c and c != pinned:
            var_of[c] = len(var_of)

    rows = []
    row_index: set[tuple] = set()

    def add(pairs, rhs: int) -> None:
        # Closure can map distinct subsets to the same variable, so merge by
        # variable here rather than trusting callers' keys to stay distinct.
        items: dict[int, int] = {}
        for mask, c in pairs:
            r = rep[mask]
            if r == pinned:
                continue
            j = var_of[r]
            items[j] = items.get(j, 0) + c
        items = {j: c for j, c in items.items() if c}
        if not items:
            return
        key = (tuple(sorted(items.items())), rhs)
        if key not in row_index:
            row_index.add(key)
            rows.append((items, LE, rhs))

    for v in range(n):
        add([(cl[1 << v], 1)], 1)
    for v in range(n):
        add([(cl[full ^ (1 << v)], 1), (full, -1)], 0)
    for i in range(n):
        for j in range(i + 1, n):
            pair = 1 << i | 1 << j
            rest = full & ~pair
            sub = rest
            while True:
                add([(cl[sub | pair], 1), (cl[sub], 1),
                     (cl[sub | 1 << i], -1), (cl[sub | 1 << j], -1)], 0)
                if sub == 0:
                    break
                sub = (sub - 1) & rest

    lp = LinearProgram(len(var_of), "max", {var_of[full]: 1}, rows)
    sol = _solve_via_dual(lp, var_of[full])
    values = sol.primal
    h = tuple(zero if rep[cl[m]] == pinned else values[var_of[rep[cl[m]]]]
              for m in range(full + 1))
    ok, why = validate_entropy_function(g, h)
    if not ok:
        raise AssertionError(f"entropy witness failed validation: {why}")
    return ShannonResult(h[full], h, lp, sol)


def _solve_via_dual(lp: LinearProgram, obj_var: int):
    """Solve max {x_obj : Ax <= b, x >= 0} through its dual.

    These programs have many more rows than variables, so pivoting on the
    dual's small tableau is much faster.  No trust is transferred: the dual's
    own certificates are checked inside solve(), and the recovered primal
    point plus dual vector are re-verified against the original program.
    """
    nrows = len(lp.rows)
    dual_rows = []
    for j in range(lp.num_vars):
        dual_rows.append(({}, LE, -1 if j == obj_var else 0))
    for i, (coeffs, _, _) in enumerate(lp.rows):
        for j, c in coeffs:
            dual_rows[j][0][i] = -c
    b = [rhs for _, _, rhs in lp.rows]
    dual_lp = LinearProgram(nrows, "min", b, dual_rows)
    dsol = solve(dual_lp)
    if dsol.status != OPTIMAL:
        raise LpError(f"dual of the entropy program came back {dsol.status}")
    x = tuple(-v for v in dsol.dual)
    sol = LpSolution(OPTIMAL, dsol.objective, x, dsol.primal)
    ok, why = verify_certificates(lp, sol)
    if not ok:
        raise LpError(f"primal recovered from the dual failed verification: {why}")
    return sol


def validate_entropy_function(g: Graph, h) -> tuple[bool, str]:
    """Exhaustively re-check the four defining constraint families (plus the
    zero normalization) for a subset function h indexed by mask."""
    n = g.n
    full = g.vertex_mask
    if len(h) != full + 1:
        return False, "h must have one value per vertex subset"
    if h[0] != 0:
        return False, "h(empty) must be 0"
    for v in range(n):
        if h[1 << v] > 1:
            return False, f"h exceeds 1 on vertex {v}"
    for t in range(full + 1):
        ht = h[t]
        s = (t - 1) & t
        while True:
            if h[s] > ht:
                return False, f"monotonicity fails on {s:b} <= {t:b}"
            if s == 0:
                break
            s = (s - 1) & t
    for s in range(full + 1):
        hs = h[s]
        for t in range(s + 1, full + 1):
            if h[s | t] + h[s & t] > hs + h[t]:
                return False, f"submodularity fails on {s:b}, {t:b}"
    cols = g.cols
    for v in range(n):
        nv = cols[v]
        if h[nv | 1 << v] != h[nv]:
            return False, f"functional equality fails at vertex {v}"
    return True, "ok"


# -- bracket assembly ------------------------------------------------------------


class EntropyBracket:
    """Certified interval [lower, upper] containing the graph entropy.

    exact means the interval is a point.  Each side carries a witness
    (tag, payload); composite graphs nest the witnesses of their parts.
    """

    __slots__ = ("lower", "upper", "exact", "lower_witness", "upper_witness")

    def __init__(self, lower, upper, lower_witness, upper_witness):
        self.lower = Rational(lower)
        self.upper = Rational(upper)
        if self.lower > self.upper:
            raise AssertionError(f"crossed bracket [{self.lower}, {self.upper}]")
        self.exact = self.lower == self.upper
        self.lower_witness = lower_witness
        self.upper_witness = upper_witness

    def shifted(self, k: int, lower_witness, upper_witness) -> "EntropyBracket":
        return EntropyBracket(self.lower + k, self.upper + k, lower_witness, upper_witness)

    def as_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
        }

    def __repr__(self):
        return f"EntropyBracket([{self.lower}, {self.upper}], exact={self.exact})"


def _vertices(mask: int) -> list[int]:
    return list(bits_of(mask))


def entropy_bracket(g: Graph, shannon_cap: int = 10, lazy_theta: bool = False) -> EntropyBracket:
    """Best certified bracket for the entropy of g.

    Pipeline: strip looped vertices (each contributes exactly 1), split into
    weakly connected components (entropy adds over disjoint unions), then per
    component take lower = n - fractional clique cover number (never worse
    than the matching or integral cover bounds) and upper = min(transversal,
    LP).  With lazy_theta the LP is skipped whenever the transversal already
    meets the lower bound.
    """
    lp_mask = loops(g)
    if lp_mask:
        sub, verts = induced_subgraph(g, g.vertex_mask & ~lp_mask)
        inner = entropy_bracket(sub, shannon_cap, lazy_theta)
        k = lp_mask.bit_count()
        looped = _vertices(lp_mask)
        return inner.shifted(
            k,
            ("loop-reduction", {"loops": looped, "inner": inner.lower_witness}),
            ("loop-reduction", {"loops": looped, "inner": inner.upper_witness}),
        )
    comps = connected_components(g)
    if len(comps) > 1:
        lower = Rational(0)
        upper = Rational(0)
        lows = []
        ups = []
        comp_lists = []
        for comp in comps:
            sub, _ = induced_subgraph(g, comp)
            b = entropy_bracket(sub, shannon_cap, lazy_theta)
            lower += b.lower
            upper += b.upper
            lows.append(b.lower_witness)
            ups.append(b.upper_witness)
            comp_lists.append(_vertices(comp))
        return EntropyBracket(
            lower, upper,
            ("union-additivity", {"components": comp_lists, "inner": lows}),
            ("union-additivity", {"components": comp_lists, "inner": ups}),
        )
    return _component_bracket(g, shannon_cap, lazy_theta)


def _component_bracket(g: Graph, shannon_cap: int, lazy_theta: bool) -> EntropyBracket:
    n = g.n
    if n == 0:
        empty = ("union-additivity", {"components": [], "inner": []})
        return EntropyBracket(0, 0, empty, empty)
    matching = max_matching(g)
    cc, cover = clique_cover_number(g)
    kappa_f, family = fractional_clique_cover_number(g)
    tau, removed = transversal_number(g)
    lower = n - kappa_f
    assert Rational(matching.size) <= Rational(n - cc) <= lower
    if matching.size == lower:
        low_wit = ("matching", {"edges": [list(e) for e in matching.edges]})
    elif n - cc == lower:
        low_wit = ("clique-cover", {"cliques": [_vertices(c) for c in cover]})
    else:
        low_wit = ("fractional-clique-cover", {
            "cliques": [_vertices(c) for c in family.cliques],
            "weights": list(family.weights),
            "value": kappa_f,
        })
    tau_r = Rational(tau)
    if lazy_theta and tau_r == lower:
        return EntropyBracket(lower, tau_r, low_wit,
                              ("transversal", {"removed": _vertices(removed)}))
    theta = shannon_entropy(g, cap=shannon_cap).theta
    if tau_r <= theta:
        up_wit = ("transversal", {"removed": _vertices(removed)})
        upper = tau_r
    else:
        up_wit = ("shannon-lp", {"theta": theta})
        upper = theta
    return EntropyBracket(lower, upper, low_wit, up_wit)


def shannon_theta(g: Graph, cap: int = 10) -> Rational:
    """Value of the subset-entropy LP for g, computed loop-stripped and
    componentwise (both reductions are exact for this LP, not just bounds)."""
    lp_mask = loops(g)
    if lp_mask:
        sub, _ = induced_subgraph(g, g.vertex_mask & ~lp_mask)
        return Rational(lp_mask.bit_count()) + shannon_theta(sub, cap)
    comps = connected_components(g)
    if len(comps) > 1:
        total = Rational(0)
        for comp in comps:
            sub, _ = induced_subgraph(g, comp)
            total += shannon_theta(sub, cap)
        return total
    return shannon_entropy(g, cap=cap).theta
