import random

from graphentropy.bounds import entropy_bracket
from graphentropy.enumeration import (
    KNOWN_CLASS_COUNTS,
    KNOWN_CONNECTED_COUNTS,
    BracketCache,
    bracket_with_fallback,
    brute_force_classes,
    canonical_form,
    enumerate_graphs,
    g_family,
    isomorphism_classes,
    pentagon_apex,
    survey_entropy_values,
    verify_g_family,
    verify_small_theorems,
    verify_wheel_lemma,
)
from graphentropy.graphs import Graph, disjoint_union, mask_of, render_graph
from graphentropy.rationals import rat

from _oracles import labeled_class_count, perm_class_key
from conftest import c5, g1, random_graph


def test_class_counts():
    for n, expected in enumerate(KNOWN_CLASS_COUNTS, start=1):
        assert len(isomorphism_classes(n)) == expected
    assert KNOWN_CLASS_COUNTS == (1, 2, 4, 11, 34, 156, 1044)
    assert KNOWN_CONNECTED_COUNTS == (1, 1, 2, 6, 21, 112, 853)


def test_class_counts_against_permutation_oracle():
    for n in range(1, 6):
        assert len(isomorphism_classes(n)) == labeled_class_count(n)
        assert brute_force_classes(n) == labeled_class_count(n)


def test_connected_filter():
    sixes = enumerate_graphs(4, connected_only=True)
    by_n = {}
    for g in sixes:
        by_n.setdefault(g.n, []).append(g)
    assert [len(by_n[n]) for n in range(1, 5)] == [1, 1, 2, 6]


def test_representatives_are_canonical_and_distinct():
    for n in range(1, 6):
        reps = isomorphism_classes(n)
        keys = {canonical_form(g).key() for g in reps}
        assert len(keys) == len(reps)
        for g in reps:
            assert canonical_form(g).graph() == g


def test_canonical_form_permutation_invariant():
    rng = random.Random(7)
    for n in range(1, 8):
        for _ in range(100):
            g = random_graph(rng, n)
            perm = list(range(n))
            rng.shuffle(perm)
            h = Graph.undirected(n, [(perm[u], perm[v]) for u, v in g.edges()])
            assert canonical_form(g).bits == canonical_form(h).bits


def test_canonical_graph6_values():
    assert canonical_form(c5()).graph6() == "DLo"
    assert canonical_form(g1()).graph6() == "FFHKW"
    assert render_graph(canonical_form(c5()).graph(), "graph6") == "DLo"


def test_canonical_respects_isomorphism_oracle():
    rng = random.Random(11)
    seen = {}
    for _ in range(60):
        g = random_graph(rng, 4)
        key = perm_class_key(g)
        bits = canonical_form(g).bits
        if key in seen:
            assert seen[key] == bits
        seen[key] = bits


def test_component_additivity(rng):
    cases = 0
    while cases < 50:
        a = random_graph(rng, rng.randint(1, 4))
        b = random_graph(rng, rng.randint(1, 3))
        g = disjoint_union(a, b)
        cases += 1
        whole = entropy_bracket(g)
        pa, pb = entropy_bracket(a), entropy_bracket(b)
        assert whole.lower == pa.lower + pb.lower
        assert whole.upper == pa.upper + pb.upper


def test_bracket_with_fallback_never_widens(rng):
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 6))
        plain = entropy_bracket(g)
        filled = bracket_with_fallback(g)
        assert filled.lower >= plain.lower
        assert filled.upper <= plain.upper


def test_survey_small_values():
    survey = survey_entropy_values(5)
    assert len(survey.records) == 1 + 2 + 4 + 11 + 34
    assert survey.unresolved == []
    low = [v for v in survey.values if v <= 3]
    assert low == [rat(0), rat(1), rat(2), rat("5/2"), rat(3)]
    empty = [r for r in survey.records if r.graph.n == 1]
    assert empty[0].bracket.lower == 0


def test_survey_connected_only():
    survey = survey_entropy_values(4, connected_only=True)
    assert len(survey.records) == 1 + 1 + 2 + 6
    assert all(r.connected for r in survey.records)


def test_survey_cache_roundtrip(tmp_path):
    first = survey_entropy_values(4, cache_dir=str(tmp_path))
    assert list(tmp_path.iterdir())
    second = survey_entropy_values(4, cache_dir=str(tmp_path))
    assert [(r.graph6(), r.bracket.lower, r.bracket.upper) for r in first.records] == \
           [(r.graph6(), r.bracket.lower, r.bracket.upper) for r in second.records]
    cached = [r for r in second.records if r.connected and r.graph.n > 1]
    assert any(r.bracket.lower_witness[0] == "cached" for r in cached)


def test_bracket_cache_store_load(tmp_path):
    cache = BracketCache(str(tmp_path))
    bracket = entropy_bracket(c5())
    cache.store("pentagon", bracket)
    loaded = cache.load("pentagon")
    assert loaded is not None
    assert (loaded.lower, loaded.upper) == (bracket.lower, bracket.upper)
    assert cache.load("missing") is None


def test_pentagon_apex_masks():
    lonely = pentagon_apex(0)
    assert lonely.n == 6
    assert len(lonely.edges()) == 5
    assert len(pentagon_apex(mask_of([0, 1, 2])).edges()) == 8


def test_wheel_lemma_all_32_cases():
    report = verify_wheel_lemma()
    assert report.ok
    cases = {tuple(entry["apex_neighbors"]): entry for entry in report.details["cases"]}
    assert len(cases) == 32
    assert cases[()]["lower"] == rat("5/2")
    assert cases[(0, 1, 2)]["lower"] == rat("7/2")
    assert cases[(0, 2)]["lower"] == rat(3)
    assert all(entry["ok"] for entry in cases.values())


def test_g_family_suite():
    report = verify_g_family()
    assert report.ok
    first = report.details["cases"][0]
    assert first["lower"] == rat("11/3")
    assert first["fractional_cover"] == rat("10/3")
    assert "10/13" in first["cross_check"]
    rest = report.details["cases"][1:]
    assert len(rest) == 5
    assert all(entry["lower"] == rat("7/2") for entry in rest)
    assert perm_class_key(g_family()[0]) == perm_class_key(g1())


def test_small_theorem_suite():
    report = verify_small_theorems()
    assert report.ok
    details = report.details
    assert details["connected_5/2_witnesses"] == ["DLo"]
    assert details["connected_11/3_witnesses"] == ["FFHKW"]
    assert details["window_violations"] == []
    assert details["gap_counterexamples"] == []
    assert details["unresolved"] == []
