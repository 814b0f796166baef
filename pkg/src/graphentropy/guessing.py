"""Exact guessing numbers via word-level compatibility.

Every vertex of a digraph guesses its own symbol from the symbols on its
in-neighbours.  A single profile of guessing functions fixes a set of words
exactly when those words are pairwise compatible: whenever two of them agree
on the whole in-neighbourhood of a vertex they also agree at that vertex.
So the largest simultaneously fixable word set is a maximum clique in the
compatibility relation over all q**n words, and the guessing number is its
base-q logarithm.  Everything here is exact: the clique search is a full
branch and bound, and codes revalidate themselves against the definition.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

from .graphs import (
    CapExceededError,
    Graph,
    GraphError,
    bits_of,
    co_neighborhood_set,
    induced_subgraph,
)

DEFAULT_WORD_CAP = 4096


def _all_words(n: int, q: int) -> list[tuple[int, ...]]:
    return [tuple(w) for w in itertools.product(range(q), repeat=n)]


class CompatibilityGraph:
    """Compatibility relation on all q**n words of a guessing game.

    Words are kept in lexicographic order; rows[i] is the bitmask of words
    compatible with word i (i itself excluded).  The graph can be far larger
    than the 64-vertex host cap, which is why it is its own type rather than
    a Graph.
    """

    __slots__ = ("host", "q", "words", "rows")

    def __init__(self, host: Graph, q: int, words: list[tuple[int, ...]], rows: list[int]):
        self.host = host
        self.q = q
        self.words = words
        self.rows = rows

    def __len__(self) -> int:
        return len(self.words)

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def max_clique_mask(self) -> int:
        return _max_clique(self.rows)

    def __repr__(self) -> str:
        return f"CompatibilityGraph(q={self.q}, words={len(self.words)})"


def compatibility_graph(g: Graph, q: int, cap: int = DEFAULT_WORD_CAP) -> CompatibilityGraph:
    """Build the word-level compatibility graph of g over alphabet {0..q-1}.

    Two distinct words are adjacent unless some vertex separates them: they
    agree on its in-neighbourhood but differ at the vertex itself.  Built one
    vertex at a time by bucketing words on their in-neighbourhood restriction,
    so the cost is n * q**n mask operations rather than all-pairs work.
    """
    if q < 2:
        raise GraphError("alphabet needs at least two symbols")
    total = q**g.n
    if total > cap:
        raise CapExceededError(f"word space {q}**{g.n} = {total} exceeds the cap of {cap}")
    words = _all_words(g.n, q)
    bad = [0] * total
    cols = g.cols
    for v in range(g.n):
        key_at = list(bits_of(cols[v]))
        buckets: dict[tuple[int, ...], dict[int, int]] = {}
        for i, w in enumerate(words):
            per_digit = buckets.setdefault(tuple(w[u] for u in key_at), {})
            per_digit[w[v]] = per_digit.get(w[v], 0) | 1 << i
        for per_digit in buckets.values():
            if len(per_digit) < 2:
                continue
            union = 0
            for m in per_digit.values():
                union |= m
            for m in per_digit.values():
                others = union & ~m
                for i in bits_of(m):
                    bad[i] |= others
    full = (1 << total) - 1
    rows = [full & ~(bad[i] | 1 << i) for i in range(total)]
    return CompatibilityGraph(g, q, words, rows)


def _max_clique(rows: list[int]) -> int:
    """Mask of a maximum clique, by branch and bound with greedy colouring.

    Candidates are coloured greedily (each colour class an independent set)
    and explored from the highest colour down, so the colour count bounds
    every remaining branch.  Deterministic: lowest word index first at every
    choice point.
    """
    n = len(rows)
    if n == 0:
        return 0
    best_mask = 0
    best_size = 0

    def color_order(cand: int) -> list[tuple[int, int]]:
        out = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                out.append((v, color))
                rest ^= low
                avail = avail & ~low & ~rows[v]
        return out

    def expand(clique: int, size: int, cand: int) -> None:
        nonlocal best_mask, best_size
        order = color_order(cand)
        for v, color in reversed(order):
            if size + color <= best_size:
                return
            bit = 1 << v
            inner = cand & rows[v]
            if inner:
                expand(clique | bit, size + 1, inner)
            elif size + 1 > best_size:
                best_size = size + 1
                best_mask = clique | bit
            cand &= ~bit

    expand(0, 0, (1 << n) - 1)
    return best_mask


class GuessingValue:
    """A guessing number held exactly as (q, code_size).

    The value itself is log_q(code_size); comparisons go through code_size so
    nothing is ever rounded.  Mixing alphabet sizes in a comparison is a bug,
    not a conversion, and raises.
    """

    __slots__ = ("q", "code_size")

    def __init__(self, q: int, code_size: int):
        if q < 2 or code_size < 1:
            raise GraphError("guessing value needs q >= 2 and a positive code size")
        self.q = q
        self.code_size = code_size

    def log_string(self) -> str:
        return f"log_{self.q}({self.code_size})"

    def as_float(self) -> float:
        return math.log(self.code_size, self.q)

    def exact_integer(self) -> int | None:
        """The value as an int when code_size is a perfect power of q."""
        k, rest = 0, self.code_size
        while rest % self.q == 0:
            rest //= self.q
            k += 1
        return k if rest == 1 else None

    def _check(self, other) -> "GuessingValue":
        if not isinstance(other, GuessingValue):
            raise TypeError("can only compare against another GuessingValue")
        if other.q != self.q:
            raise GraphError("guessing values over different alphabets are not comparable")
        return other

    def __eq__(self, other) -> bool:
        if not isinstance(other, GuessingValue):
            return NotImplemented
        return self.q == other.q and self.code_size == other.code_size

    def __lt__(self, other) -> bool:
        return self.code_size < self._check(other).code_size

    def __le__(self, other) -> bool:
        return self.code_size <= self._check(other).code_size

    def __hash__(self) -> int:
        return hash((self.q, self.code_size))

    def __repr__(self) -> str:
        return f"GuessingValue({self.log_string()})"


class GuessingCode:
    """A set of words some strategy profile fixes simultaneously.

    Words are distinct full-length tuples over {0..q-1}, stored sorted.
    validate() re-checks the defining pairwise condition straight off the
    host graph, independent of whatever search produced the code.
    """

    __slots__ = ("host", "q", "words")

    def __init__(self, host: Graph, q: int, words: Iterable[tuple[int, ...]]):
        self.host = host
        self.q = q
        ws = sorted(tuple(w) for w in words)
        for w in ws:
            if len(w) != host.n or any(not 0 <= d < q for d in w):
                raise GraphError(f"word {w} does not fit {host.n} vertices over {q} symbols")
        if any(ws[i] == ws[i + 1] for i in range(len(ws) - 1)):
            raise GraphError("code words must be distinct")
        self.words = tuple(ws)

    def __len__(self) -> int:
        return len(self.words)

    def value(self) -> GuessingValue:
        return GuessingValue(self.q, len(self.words))

    def validate(self) -> None:
        if not validate_code(self.host, self.q, self.words):
            raise GraphError("code violates the compatibility condition")

    def word_strings(self) -> list[str]:
        sep = "" if self.q <= 10 else ","
        return [sep.join(str(d) for d in w) for w in self.words]

    def __repr__(self) -> str:
        return f"GuessingCode(q={self.q}, size={len(self.words)})"


def validate_code(g: Graph, q: int, words: Sequence[tuple[int, ...]]) -> bool:
    """Whether every pair of words is compatible on g.

    Direct definition, one pair and one vertex at a time; kept free of the
    bucketing trick in compatibility_graph so the two can cross-check.
    """
    cols = g.cols
    in_lists = [list(bits_of(cols[v])) for v in range(g.n)]
    for a in range(len(words)):
        x = words[a]
        if len(x) != g.n or any(not 0 <= d < q for d in x):
            return False
        for b in range(a + 1, len(words)):
            y = words[b]
            for v in range(g.n):
                if x[v] != y[v] and all(x[u] == y[u] for u in in_lists[v]):
                    return False
    return True


def max_guessing(g: Graph, q: int, cap: int = DEFAULT_WORD_CAP) -> tuple[GuessingValue, GuessingCode]:
    """Exact guessing number of g over q symbols, with an optimal code.

    Solves the maximum clique problem on the full compatibility graph, so the
    result is optimal, not a bound.  The returned code has revalidated itself
    against the definition.
    """
    comp = compatibility_graph(g, q, cap)
    mask = comp.max_clique_mask()
    code = GuessingCode(g, q, [comp.words[i] for i in bits_of(mask)])
    code.validate()
    return code.value(), code


def extend_code(code: GuessingCode, matching: Sequence[tuple[int, int]], g: Graph) -> GuessingCode:
    """Lift a code on g minus d(S) back to g along an S-saturating matching.

    matching lists (outer, inner) edges of g: the inner endpoints form S, the
    outer ones lie in c(S), the set of vertices outside S with every
    neighbour inside it.  d(S) = S together with c(S).  Each old word gains
    q**|S| extensions: every matched pair carries one shared free symbol,
    unmatched c(S) vertices sit at 0, all other vertices keep their old
    value.  The result is validated before it is returned.
    """
    if not g.is_simple():
        raise GraphError("code extension needs a loopless undirected host")
    if not matching:
        raise GraphError("matching must be nonempty")
    outer = [c for c, _ in matching]
    inner = [s for _, s in matching]
    if len(set(outer)) != len(outer) or len(set(inner)) != len(inner):
        raise GraphError("matching endpoints must be distinct")
    s_mask = 0
    for s in inner:
        s_mask |= 1 << s
    c_mask = co_neighborhood_set(g, s_mask)
    for c, s in matching:
        if not c_mask >> c & 1:
            raise GraphError(f"vertex {c} keeps neighbours outside the inner set")
        if not g.has_arc(c, s):
            raise GraphError(f"matching pair {c}-{s} is not an edge")
    d_mask = s_mask | c_mask
    remainder, verts = induced_subgraph(g, g.vertex_mask & ~d_mask)
    if code.host != remainder:
        raise GraphError("code host does not match the graph minus d(S)")
    q = code.q
    pairs = sorted(matching, key=lambda cs: cs[1])
    blank_outer = [c for c in bits_of(c_mask) if not any(c == oc for oc, _ in pairs)]
    new_words = []
    for w in code.words:
        base = [0] * g.n
        for i, v in enumerate(verts):
            base[v] = w[i]
        for symbols in itertools.product(range(q), repeat=len(pairs)):
            word = list(base)
            for (c, s), sym in zip(pairs, symbols):
                word[c] = sym
                word[s] = sym
            for c in blank_outer:
                word[c] = 0
            new_words.append(tuple(word))
    out = GuessingCode(g, q, new_words)
    if len(out) != len(code) * q ** len(pairs):
        raise GraphError("extension lost words, the input code was malformed")
    out.validate()
    return out
