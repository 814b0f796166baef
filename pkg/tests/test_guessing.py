import pytest

from graphentropy.bounds import transversal_number
from graphentropy.graphs import (
    CapExceededError,
    Graph,
    GraphError,
    disjoint_union,
    i_reduction,
    induced_subgraph,
    is_acyclic,
    loops,
)
from graphentropy.guessing import (
    GuessingCode,
    GuessingValue,
    compatibility_graph,
    extend_code,
    max_guessing,
    validate_code,
)
from graphentropy.structure import find_reducible_set

from _oracles import clique_code_size, profile_code_size, words_compatible
from conftest import c5, random_digraph, random_graph


def test_compatibility_graph_base_cases():
    comp = compatibility_graph(Graph.empty(1), 2, cap=4096)
    assert len(comp.words) == 2
    assert comp.edge_count() == 0

    comp = compatibility_graph(Graph.complete(2), 2, cap=4096)
    idx = {w: i for i, w in enumerate(comp.words)}
    assert comp.has_edge(idx[(0, 0)], idx[(1, 1)])
    assert not comp.has_edge(idx[(0, 0)], idx[(0, 1)])

    looped = Graph.from_arcs(1, [(0, 0)])
    comp = compatibility_graph(looped, 2, cap=4096)
    assert comp.has_edge(0, 1)


def test_compatibility_matches_definition(rng):
    for _ in range(100):
        g = random_digraph(rng, rng.randint(1, 4), loop_p=0.2)
        q = rng.choice([2, 2, 3])
        comp = compatibility_graph(g, q, cap=4096)
        words = comp.words
        for i in range(len(words)):
            for j in range(i + 1, len(words)):
                assert comp.has_edge(i, j) == words_compatible(g, q, words[i], words[j])


def test_complete_graph_codes():
    for n in range(2, 6):
        value, code = max_guessing(Graph.complete(n), 2)
        assert value.code_size == 2 ** (n - 1)
        code.validate()


def test_pentagon_code_size_matches_oracles():
    value, code = max_guessing(c5(), 2)
    assert value.code_size == 5
    assert clique_code_size(c5(), 2) == 5
    assert profile_code_size(c5(), 2) == 5
    assert value.log_string() == "log_2(5)"
    assert 2 < value.as_float() < 2.5


def test_triangle_code_size_matches_profile_oracle():
    value, _ = max_guessing(Graph.complete(3), 2)
    assert value.code_size == profile_code_size(Graph.complete(3), 2) == 4


def test_double_loop_reduction_example():
    both = Graph.from_arcs(2, [(0, 0), (1, 1)])
    value, _ = max_guessing(both, 2)
    assert value.code_size == 4
    assert value.exact_integer() == 2


def test_validate_code_examples():
    assert validate_code(c5(), 2, [(0,) * 5, (1,) * 5])
    assert not validate_code(Graph.complete(2), 2, [(0, 0), (0, 1)])
    with pytest.raises(GraphError):
        GuessingCode(Graph.complete(2), 2, [(0, 0), (0, 1)]).validate()


def test_guessing_value_ordering():
    a = GuessingValue(2, 4)
    b = GuessingValue(2, 5)
    assert a < b and a <= b and a != b
    assert GuessingValue(2, 4) == GuessingValue(2, 4)
    with pytest.raises(ValueError):
        _ = GuessingValue(2, 4) < GuessingValue(3, 4)


def test_word_cap():
    with pytest.raises(CapExceededError):
        max_guessing(Graph.empty(13), 2)
    max_guessing(Graph.empty(13), 2, cap=1 << 13)


def test_loop_reduction_exact(rng):
    cases = 0
    while cases < 50:
        g = random_digraph(rng, rng.randint(1, 4), loop_p=0.5)
        loop_mask = loops(g)
        if not loop_mask:
            continue
        cases += 1
        stripped, _ = induced_subgraph(g, g.vertex_mask & ~loop_mask)
        whole, _ = max_guessing(g, 2)
        part, _ = max_guessing(stripped, 2)
        k = bin(loop_mask).count("1")
        assert whole.code_size == 2 ** k * part.code_size


def test_tau_upper_bound(rng):
    for _ in range(100):
        g = random_digraph(rng, rng.randint(1, 5), loop_p=0.2)
        value, _ = max_guessing(g, 2)
        assert value.code_size <= 2 ** transversal_number(g)[0]


def test_subgraph_monotonicity(rng):
    for _ in range(100):
        g = random_digraph(rng, rng.randint(1, 5), loop_p=0.2)
        kept = [a for a in g.arcs() if rng.random() < 0.7]
        sub = Graph.from_arcs(g.n, kept)
        small, _ = max_guessing(sub, 2)
        large, _ = max_guessing(g, 2)
        assert small.code_size <= large.code_size


def test_i_reduction_soundness(rng):
    cases = 0
    while cases < 100:
        g = random_digraph(rng, rng.randint(2, 5), loop_p=0.1)
        masks = [m for m in range(1, 1 << g.n)
                 if m != g.vertex_mask and is_acyclic(induced_subgraph(g, m)[0])]
        if not masks:
            continue
        cases += 1
        i_mask = rng.choice(masks)
        reduced, _ = i_reduction(g, i_mask)
        before, _ = max_guessing(g, 2)
        after, _ = max_guessing(reduced, 2)
        assert before.code_size <= 2 ** bin(i_mask).count("1") * after.code_size


def test_extend_code_pendant_pair():
    base = GuessingCode(Graph.empty(0), 2, [()])
    out = extend_code(base, [(1, 0)], Graph.complete(2))
    assert out.words == ((0, 0), (1, 1))


def test_extend_code_across_union():
    g = disjoint_union(c5(), Graph.complete(2))
    _, pent_code = max_guessing(c5(), 2)

    lifted = extend_code(pent_code, [(6, 5)], g)
    assert len(lifted.words) == 10
    for i, w in enumerate(lifted.words):
        for x in lifted.words[i + 1:]:
            assert words_compatible(g, 2, w, x)

    four = GuessingCode(c5(), 2, pent_code.words[:4])
    four.validate()
    assert len(extend_code(four, [(6, 5)], g).words) == 8


def test_extend_code_size_identity(rng):
    cases = 0
    while cases < 40:
        host = random_graph(rng, rng.randint(2, 5))
        d = find_reducible_set(host)
        if d is None:
            continue
        cases += 1
        _, base = max_guessing(d.remainder, 2)
        lifted = extend_code(base, list(d.matching), host)
        assert len(lifted.words) == len(base.words) * 2 ** len(d.matching)


def test_isolated_vertex_adds_nothing():
    g = disjoint_union(c5(), Graph.empty(1))
    value, _ = max_guessing(g, 2)
    assert value.code_size == 5
