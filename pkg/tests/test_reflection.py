"""Tests for incidence bigraph construction and transposition folds."""

import itertools
from math import comb

import pytest

from sidlab.bigraph import (
    amalgamate_left,
    graphs_isomorphic,
    is_color_edge_transitive,
)
from sidlab.folds import check_fold, enumerate_folds
from sidlab.reflection import (
    IncidenceBigraph,
    TypeAReflectionSystem,
    build_incidence,
    parse_right_id,
    reflection_fold,
    reflection_fold_pool,
)


def test_build_incidence_small_counts():
    for ks, v2, e in [([1], 4, 4), ([2], 6, 12), ([3], 4, 12), ([2, 3], 10, 24)]:
        h = build_incidence(4, ks)
        assert (h.graph.v1, h.graph.v2, h.graph.e) == (4, v2, e)


def test_build_incidence_k1_is_matching():
    g = build_incidence(4, [1]).graph
    assert all(g.degree(v) == 1 for v in g.vertices())


def test_build_incidence_general_counts():
    for n in range(1, 6):
        for ks in itertools.chain(itertools.combinations(range(1, n + 1), 1),
                                  itertools.combinations(range(1, n + 1), 2)):
            h = build_incidence(n, list(ks))
            assert h.graph.v1 == n
            assert h.graph.v2 == sum(comb(n, k) for k in ks)
            assert h.graph.e == sum(k * comb(n, k) for k in ks)
            assert h.is_right_uniform()


def test_build_incidence_out_of_range():
    with pytest.raises(ValueError):
        build_incidence(4, [5])
    with pytest.raises(ValueError):
        build_incidence(4, [0])


def test_incidence_is_left_amalgamation_of_slices():
    joint = build_incidence(4, [2, 3]).graph
    pairs = build_incidence(4, [2]).graph
    triples = build_incidence(4, [3]).graph
    relabeled = [(l, r.replace("@1", "@2")) for l, r in triples.edges]
    triples2 = type(triples)(triples.left,
                             [r.replace("@1", "@2") for r in triples.right],
                             relabeled)
    assert amalgamate_left([pairs, triples2]) == joint
    assert graphs_isomorphic(amalgamate_left([pairs, triples2]), joint)


def test_natural_coloring_properties():
    h = build_incidence(4, [2, 3])
    assert h.is_right_uniform()
    assert h.color_set() == (1, 2)
    assert h.edge_count(1) == 12 and h.edge_count(2) == 12
    assert h.is_left_color_regular()
    assert is_color_edge_transitive(h)


def test_reflection_fold_fix_and_left():
    ib = IncidenceBigraph(4, [2])
    fold = reflection_fold(ib, 1, 2)
    assert fold.fixed == frozenset({"3", "4", "{1,2}@1", "{3,4}@1"})
    assert fold.left == frozenset({"1", "{1,3}@1", "{1,4}@1"})
    check_fold(ib.graph, fold)


def test_reflection_fold_bad_indices():
    ib = IncidenceBigraph(4, [2])
    with pytest.raises(ValueError):
        reflection_fold(ib, 2, 2)
    with pytest.raises(ValueError):
        reflection_fold(ib, 3, 1)
    with pytest.raises(ValueError):
        reflection_fold(ib, 1, 5)


def test_reflection_fold_matching_n2():
    ib = IncidenceBigraph(2, [1])
    fold = reflection_fold(ib, 1, 2)
    # empty fixed set: the graph itself is disconnected, the empty cut qualifies
    assert fold.fixed == frozenset()
    check_fold(ib.graph, fold)
    phi = fold.phi
    assert phi["{1}@1"] == "{2}@1" and phi["{2}@1"] == "{1}@1"


def test_reflection_fold_pool_sizes_and_validity():
    for n in (2, 3, 4, 5):
        ib = IncidenceBigraph(n, [2] if n >= 2 else [1])
        pool = reflection_fold_pool(ib)
        assert len(pool) == comb(n, 2)
        for fold in pool:
            check_fold(ib.graph, fold)


def test_reflection_pool_matches_enumeration_k42():
    ib = IncidenceBigraph(4, [2])
    pool = reflection_fold_pool(ib)
    enumerated = enumerate_folds(ib.graph)
    assert sorted(pool, key=lambda f: sorted(f.left)) == \
        sorted(enumerated, key=lambda f: sorted(f.left))
    assert len(enumerated) == 6


def test_reflection_folds_are_canonical_completions():
    # for single-digit point ids the chamber side rule and the generic
    # smallest-id canonicalization pick the same left side
    from sidlab.folds import complete_to_fold

    for n, ks in [(3, [1]), (3, [2]), (3, [3]), (3, [1, 2]), (4, [2]),
                  (4, [3]), (4, [2, 3]), (4, [4])]:
        ib = IncidenceBigraph(n, ks)
        for fold in reflection_fold_pool(ib):
            assert complete_to_fold(ib.graph, fold.phi) == fold


def test_natural_coloring_invariant_under_transpositions():
    ib = IncidenceBigraph(4, [2, 3])
    h = ib.colored
    colors = h.colors
    for fold in reflection_fold_pool(ib):
        phi = fold.phi
        assert all(colors[(phi[l], phi[r])] == c for (l, r), c in h.edge_colors)


def test_from_bigraph_round_trip():
    ib = IncidenceBigraph(4, [2, 3])
    back = IncidenceBigraph.from_bigraph(ib.graph)
    assert back == ib
    with pytest.raises(ValueError):
        IncidenceBigraph.from_bigraph(build_incidence(3, [2]).graph.without_vertices(["1"]))


def test_parse_right_id():
    assert parse_right_id("{1,3}@2") == (frozenset({1, 3}), 2)
    with pytest.raises(ValueError):
        parse_right_id("nope")


def test_type_a_system():
    sys4 = TypeAReflectionSystem(4)
    assert len(sys4.reflections()) == 6
    assert sys4.simple_reflections() == [(1, 2), (2, 3), (3, 4)]
    assert sys4.subset_choice(2) == [(1, 2), (3, 4)]
    for n in (2, 3, 4):
        sysn = TypeAReflectionSystem(n)
        for k in range(1, n + 1):
            assert sysn.coset_subset_bijection_holds(k)
