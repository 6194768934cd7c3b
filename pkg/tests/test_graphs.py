from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import load
from largeness.abelian import FiniteAbelianGroup
from largeness.chains import build_chain
from largeness.coset_enum import todd_coxeter
from largeness.errors import PreconditionError, ResourceLimitError
from largeness.graphs import (CayleyGraph, DegenerateBoundError, abelian_cayley_graph,
                              cayley_graph, character_ordering, chain_ordering,
                              cheeger_from_width_bound, composite_ordering, exact_cheeger,
                              exact_cutwidth, lemma34_bound, make_ordering, ordering_width)


def cycle(n: int) -> CayleyGraph:
    return CayleyGraph(n, tuple((i, (i + 1) % n, 0) for i in range(n)))


def complete(n: int) -> CayleyGraph:
    return CayleyGraph(n, tuple((u, v, 0) for u, v in itertools.combinations(range(n), 2)))


def brute_cutwidth(g: CayleyGraph) -> int:
    return min(ordering_width(g, o) for o in itertools.permutations(range(g.vertex_count)))


def brute_cheeger(g: CayleyGraph) -> Fraction:
    n = g.vertex_count
    best = None
    for k in range(1, n // 2 + 1):
        for S in itertools.combinations(range(n), k):
            s = set(S)
            cut = sum(1 for u, v, _ in g.edges if (u in s) != (v in s))
            val = Fraction(cut, k)
            best = val if best is None or val < best else best
    return best


multigraphs = st.integers(2, 7).flatmap(lambda n: st.builds(
    lambda es: CayleyGraph(n, tuple((u, v, 0) for u, v in es)),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=14)))


def test_six_cycle():
    g = cycle(6)
    assert ordering_width(g, range(6)) == 2
    assert exact_cutwidth(g)[0] == 2
    assert exact_cheeger(g) == Fraction(2, 3)
    assert cheeger_from_width_bound(g, make_ordering(g, range(6))) == Fraction(2, 3)


def test_complete_four():
    g = complete(4)
    assert {ordering_width(g, o) for o in itertools.permutations(range(4))} == {4}
    assert exact_cutwidth(g)[0] == 4
    assert exact_cheeger(g) == 2


def test_path_and_edgeless():
    path = CayleyGraph(5, tuple((i, i + 1, 0) for i in range(4)))
    assert exact_cutwidth(path)[0] == 1
    assert exact_cutwidth(CayleyGraph(3, ()))[0] == 0
    assert exact_cheeger(CayleyGraph(2, ((0, 0, 0), (1, 1, 0)))) == 0


def test_exact_limit_enforced():
    with pytest.raises(ResourceLimitError):
        exact_cutwidth(cycle(8), limit=6)


@settings(max_examples=60, deadline=None)
@given(multigraphs)
def test_exact_cutwidth_matches_permutations(g):
    w, o = exact_cutwidth(g)
    assert w == brute_cutwidth(g) == o.width
    # the returned ordering is the lexicographically least optimal one
    best = min(p for p in itertools.permutations(range(g.vertex_count)) if ordering_width(g, p) == w)
    assert o.order == best


@settings(max_examples=60, deadline=None)
@given(multigraphs)
def test_exact_cheeger_matches_subsets(g):
    assert exact_cheeger(g) == brute_cheeger(g)


def test_cayley_graph_shapes():
    t = todd_coxeter(load("cyclic6"))
    g = cayley_graph(t)
    assert g.vertex_count == 6 and sorted((u, v) for u, v, _ in g.edges) == [
        (0, 1), (1, 3), (2, 0), (3, 5), (4, 2), (5, 4)]
    bouquet = cayley_graph(todd_coxeter(load("free2"), [(1,), (2,)]))
    assert bouquet.edges == ((0, 0, 0), (0, 0, 1))
    k4 = abelian_cayley_graph(FiniteAbelianGroup((2, 2)), [(1, 0), (0, 1)], "ab")
    assert k4.vertex_count == 4 and len(k4.edges) == 8
    assert 'label="a"' in k4.to_dot()


def test_non_normal_rejected():
    with pytest.raises(PreconditionError):
        cayley_graph(todd_coxeter(load("s3"), [(1,)]))


def test_lemma34_bound_values():
    assert lemma34_bound(101, 1) == Fraction(606, 100)
    assert lemma34_bound(2, 5) == 60
    with pytest.raises(DegenerateBoundError):
        lemma34_bound(1, 1)


def test_character_ordering_cyclic():
    co = character_ordering(FiniteAbelianGroup((101,)), [(1,)])
    assert co.arcs == 100 and co.width == 2 and co.width <= co.bound
    co5 = character_ordering(FiniteAbelianGroup((5,)), [(1,)])
    assert co5.width == 2
    co2 = character_ordering(FiniteAbelianGroup((2,)), [(1,), (1,)])
    assert co2.bound == 24


def test_character_ordering_needs_generating_set():
    with pytest.raises(PreconditionError):
        character_ordering(FiniteAbelianGroup((2, 2)), [(1, 0)])


@pytest.mark.parametrize("inv, sigma", [
    ((12,), [(1,), (5,)]), ((2, 6), [(1, 0), (0, 1)]), ((3, 3), [(1, 0), (0, 1), (1, 1)]),
    ((2, 2, 2), [(1, 0, 0), (0, 1, 0), (0, 0, 1)]), ((5, 5), [(1, 2), (0, 1)]),
])
def test_character_ordering_dominates_exact(inv, sigma):
    A = FiniteAbelianGroup(inv)
    co = character_ordering(A, sigma)
    if A.order <= 16:
        assert co.width >= exact_cutwidth(co.graph)[0]
    assert co.width <= co.bound


def test_composite_with_h_equal_g():
    p = load("free2")
    chain = build_chain(p, 3)
    co = chain_ordering(chain, 2)
    assert co.width <= co.lemma33_limit == co.inner_width + 4
    assert co.width >= exact_cutwidth(cayley_graph(chain[2].table))[0]


def test_composite_with_j_equal_h():
    """One tree holds every coset; the order is the transversal order."""
    from largeness.coset_enum import schreier_data
    from largeness.graphs import VertexOrdering
    t = todd_coxeter(load("s3"))
    sd = schreier_data(t)
    single = VertexOrdering((0,), (0, 0))
    o = composite_ordering(t, single, sd.transversal, list(range(6)))
    assert o.order == tuple(range(6))
    assert o.width <= 2 * t.rank * t.index


def test_chain_ordering_levels():
    chain = build_chain(load("free2"), 4)
    widths = []
    for pos in range(4):
        co = chain_ordering(chain, pos)
        assert co.width <= co.lemma33_limit
        widths.append((co.width, co.inner_width, co.lemma33_limit))
    assert widths == [(0, 0, 4), (0, 0, 4), (4, 4, 8), (244, 242, 258)]
