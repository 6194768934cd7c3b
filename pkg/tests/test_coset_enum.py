from __future__ import annotations

import itertools

import pytest
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from conftest import CORPUS, load
from largeness.coset_enum import (CosetTable, is_normal, schreier_data, schreier_generator,
                                  table_from_json, todd_coxeter)
from largeness.errors import ResourceLimitError
from largeness.presentation import Presentation


def sympy_index(p: Presentation, subgroup) -> int:
    """Independent oracle: sympy's own coset enumeration."""
    F, *gens = free_group(" ".join(p.generators))

    def to_elem(w):
        out = F.identity
        for x in w:
            out = out * (gens[abs(x) - 1] ** (1 if x > 0 else -1))
        return out

    G = FpGroup(F, [to_elem(r) for r in p.relators])
    return len(G.coset_table([to_elem(w) for w in subgroup]))


def test_cyclic_trivial_subgroup():
    t = todd_coxeter(load("cyclic3"))
    assert t.index == 3
    assert schreier_data(t).transversal == ((), (1,), (-1,))
    assert t.word_action((1, 1), 0) == 2


def test_free_group_trivial_subgroup_hits_limit():
    with pytest.raises(ResourceLimitError):
        todd_coxeter(Presentation.build("a"), (), max_cosets=100)


def test_index_one_table():
    p = load("free2")
    t = todd_coxeter(p, [(1,), (2,)])
    sd = schreier_data(t)
    assert t.index == 1 and sd.transversal == ((),) and not sd.tree


def test_derived_mod2_subgroup_of_f2():
    p = load("free2")
    # the five Schreier generators of [F,F]F^2 (frozen from the kernel table)
    gens = [(2, 1, -2, -1), (2, 2), (1, 1), (1, 2, 1, -2), (1, 2, 2, -1)]
    t = todd_coxeter(p, gens)
    assert t.index == 4 == sympy_index(p, gens)
    # oracle: the explicit action of a, b on exponent vectors mod 2
    vecs = [(0, 0), (1, 0), (0, 1), (1, 1)]
    word_to_vec = {0: (0, 0)}
    sd0 = schreier_data(t)
    for c, w in enumerate(sd0.transversal):
        word_to_vec[c] = (sum(1 for x in w if abs(x) == 1) % 2, sum(1 for x in w if abs(x) == 2) % 2)
    assert sorted(word_to_vec.values()) == sorted(vecs)
    for c in range(4):
        va, vb = word_to_vec[c]
        assert word_to_vec[t.action[0][c]] == ((va + 1) % 2, vb)
        assert word_to_vec[t.action[1][c]] == (va, (vb + 1) % 2)
    sd = schreier_data(t)
    assert len(sd.tree) == 3 and len(sd.non_tree) == 5
    assert is_normal(t)


@pytest.mark.parametrize("name", [k for k, (_, o) in CORPUS.items() if o])
def test_group_orders_match_sympy(name):
    p = load(name)
    t = todd_coxeter(p)
    assert t.index == CORPUS[name][1] == sympy_index(p, [])
    t.check(p)


@pytest.mark.parametrize("name, subgroup", [
    ("s3", [(1,)]), ("s3", [(2,)]), ("a4", [(1,)]), ("a4", [(2,)]), ("dihedral4", [(2,)]),
    ("quaternion", [(1,)]), ("klein", [(1, 2)]), ("z3xz3", [(1, 2)]),
])
def test_subgroup_index_matches_sympy(name, subgroup):
    p = load(name)
    t = todd_coxeter(p, subgroup)
    assert t.index == sympy_index(p, subgroup)
    t.check(p)


def _brute_normal(p, t, order):
    """Normality by conjugating with every element of the finite group."""
    reg = todd_coxeter(p)
    elems = {(): 0}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for x in (1, 2, -1, -2)[: 2 * p.rank]:
                v = w + (x,)
                c = reg.word_action(v, 0)
                if c not in elems.values():
                    elems[v] = c
                    nxt.append(v)
        frontier = nxt
    assert len(elems) == order
    sd = schreier_data(t)
    from largeness.presentation import inverse
    for i, g in sd.non_tree:
        h = schreier_generator(t, sd, i, g)
        for w in elems:
            if t.word_action(inverse(w) + h + w, 0) != 0:
                return False
    return True


@pytest.mark.parametrize("name, subgroup, expected", [
    ("s3", [(1,)], False), ("s3", [(2,)], True), ("a4", [(1,)], False),
    ("dihedral4", [(1,)], True), ("dihedral4", [(2,)], False), ("quaternion", [(2,)], True),
])
def test_is_normal_against_conjugation(name, subgroup, expected):
    p = load(name)
    t = todd_coxeter(p, subgroup)
    assert is_normal(t) is expected
    assert _brute_normal(p, t, CORPUS[name][1]) is expected


def test_index_two_always_normal():
    t = todd_coxeter(load("s3"), [(2,)])
    assert t.index == 2 and is_normal(t)


def test_schreier_generators_lie_in_subgroup():
    p = load("a4")
    t = todd_coxeter(p, [(2,)])
    sd = schreier_data(t)
    for i, g in sd.non_tree:
        assert t.word_action(schreier_generator(t, sd, i, g), 0) == 0


def test_word_action_laws():
    t = todd_coxeter(load("a4"))
    for w in itertools.product((1, -1, 2, -2), repeat=3):
        inv = tuple(-x for x in reversed(w))
        for c in range(t.index):
            assert t.word_action(w + inv, c) == c
    assert all(t.word_action((), c) == c for c in range(t.index))


def test_standardization_is_deterministic():
    p = load("a4")
    assert todd_coxeter(p) == todd_coxeter(p)


def test_json_round_trip():
    t = todd_coxeter(load("s3"))
    assert table_from_json(t.to_json()).action == t.action
