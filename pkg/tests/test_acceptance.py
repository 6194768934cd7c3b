"""Acceptance gate: criteria 1-10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from conftest import ACCEPTANCE_LINES, CORPUS, load
from largeness.abelian import FiniteAbelianGroup, subgroup_generated
from largeness.certify import prop61_check, theorem42_check
from largeness.chains import build_chain, kernel_coset_table, mod_n_abelianization
from largeness.coset_enum import todd_coxeter
from largeness.graphs import (CayleyGraph, cayley_graph, chain_ordering, character_ordering,
                              exact_cheeger, exact_cutwidth, make_ordering, ordering_width)
from largeness.rewriting import reidemeister_schreier
from largeness.witness import (INCONCLUSIVE, SUCCESS, cover_complex, largeness_witness,
                               presentation_complex, scan_levels)


@contextmanager
def criterion(number: int, title: str, budget: float | None = None):
    """Record one PASS/FAIL line; ``details`` collects a short explanation."""
    details: list[str] = []
    start = time.perf_counter()
    ok = False
    try:
        yield details
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        if ok and budget is not None and elapsed >= budget:
            ok = False
            details.append(f"over the {budget:g} s budget")
        tail = f" ({'; '.join(details)})" if details else ""
        line = f"{'PASS' if ok else 'FAIL'} {number:>2}. {title} [{elapsed:.2f} s]{tail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert ok, line


def _check(cond: bool, details: list[str], message: str) -> None:
    if not cond:
        details.append(message)
        raise AssertionError(message)


# 1 ------------------------------------------------------------------------

def test_criterion_01_rank_formula():
    with criterion(1, "free rank formula along the F2 chain up to index 1000", 10) as det:
        f2 = load("free2")
        chain = build_chain(f2, 4)
        indices = [lv.index for lv in chain]
        _check(indices == [1, 1, 4, 972], det, f"unexpected indices {indices}")
        for lv in chain:
            gens = len(reidemeister_schreier(f2, lv.table).generators)
            _check(gens == (f2.rank - 1) * lv.index + 1, det,
                   f"level {lv.level}: {gens} generators at index {lv.index}")
        det.append(f"indices {indices}")


# 2 ------------------------------------------------------------------------

def test_criterion_02_quotient_structure():
    with criterion(2, "L_i/L_i+1 = (Z/i)^d(L_i) for i = 2, 3 on F2") as det:
        f2 = load("free2")
        chain = build_chain(f2, 3)
        for i in (2, 3):
            lv = chain[i - 1]
            rank = len(reidemeister_schreier(f2, lv.table).generators)
            got = lv.quotient.group.invariant_factors
            _check(lv.modulus == i and got == (i,) * rank, det,
                   f"i={i}: invariant factors {got}, d(L_i) = {rank}")
            det.append(f"i={i}: (Z/{i})^{rank}")


# 3 ------------------------------------------------------------------------

def abelian_corpus(limit: int = 2000):
    """Invariant-factor lists with one, two or three factors and order <= limit."""
    for n in range(2, limit + 1):
        yield (n,)
    for a in range(2, int(limit ** 0.5) + 1):
        for b in range(a, limit // a + 1, a):
            yield (a, b)
    for a in range(2, int(limit ** (1 / 3)) + 1):
        for b in range(a, limit // (a * a) + 1, a):
            for c in range(b, limit // (a * b) + 1, b):
                yield (a, b, c)


def test_criterion_03_character_ordering_bound():
    with criterion(3, "character-ordering width <= 6|S||A|/floor((|A|-1)^(1/|S|))", 60) as det:
        rng = random.Random(3)
        count = 0
        for inv in abelian_corpus():
            A = FiniteAbelianGroup(inv)
            m = rng.randint(len(inv), 3)
            while True:
                sigma = [tuple(rng.randrange(d) for d in inv) for _ in range(m)]
                if subgroup_generated(A, sigma).order == A.order:
                    break
            co = character_ordering(A, sigma)
            _check(co.bound is not None and co.width <= co.bound, det,
                   f"A={inv} Sigma={sigma}: width {co.width} > {co.bound}")
            count += 1
        det.append(f"{count} (A, Sigma) pairs")


# 4 ------------------------------------------------------------------------

def random_multigraph(rng: random.Random) -> CayleyGraph:
    n = rng.randint(2, 14)
    m = rng.randint(0, 3 * n)
    return CayleyGraph(n, tuple((rng.randrange(n), rng.randrange(n), 0) for _ in range(m)))


def constructed_orders(g: CayleyGraph, rng: random.Random):
    n = g.vertex_count
    yield list(range(n))
    for _ in range(3):
        perm = list(range(n))
        rng.shuffle(perm)
        yield perm
    # breadth-first from vertex 0, then the rest
    adj, seen, queue = g.neighbours(), [0], [0]
    for u in queue:
        for v in adj[u]:
            if v not in seen:
                seen.append(v)
                queue.append(v)
    yield seen + [v for v in range(n) if v not in seen]


def test_criterion_04_oracle_dominance():
    with criterion(4, "constructed widths dominate exact cutwidth; h <= w/floor(|V|/2)") as det:
        rng = random.Random(4)
        graphs = [random_multigraph(rng) for _ in range(220)]
        for g in graphs:
            exact, _ = exact_cutwidth(g, 14)
            h = exact_cheeger(g, 14)
            for order in constructed_orders(g, rng):
                w = ordering_width(g, order)
                _check(w >= exact, det, f"width {w} below exact {exact}")
                _check(h <= Fraction(w, g.vertex_count // 2), det, f"h={h} above w={w} bound")
        det.append(f"{len(graphs)} graphs, 5 orderings each")


# 5 ------------------------------------------------------------------------

def test_criterion_05_composite_width():
    with criterion(5, "composite width <= inner width + 2|S|[G:H] on the F2 chain") as det:
        chain = build_chain(load("free2"), 4)
        for pos in (1, 2, 3):
            co = chain_ordering(chain, pos)
            measured = ordering_width(cayley_graph(chain[pos].table), co.ordering.order)
            limit = co.inner_width + 2 * co.rank * co.h_index
            _check(measured <= limit, det, f"J=G_{pos + 1}: {measured} > {limit}")
            det.append(f"[G:H]={co.h_index} [G:J]={chain[pos].index}: {measured} <= {limit}")


# 6 ------------------------------------------------------------------------

def test_criterion_06_threshold_evaluator():
    with criterion(6, "threshold examples exact; 1000 monotonicity checks") as det:
        r = theorem42_check(2, 4, 1, 10**6, 200)
        _check(r.root == 999 and r.first_term == Fraction(384, 999) + Fraction(128, 10**6)
               and r.threshold == 160 and r.passed, det, "example 1")
        r = theorem42_check(2, 4, 1, 2, 10**6)
        _check(r.first_term == 448 and r.second_term == 160 and r.threshold == 448 and r.passed,
               det, "example 2")
        _check(all(not theorem42_check(2, 1, h, hj, 0).passed and
                   theorem42_check(2, 1, h, hj, 0).threshold >= 40
                   for h in (1, 2, 5) for hj in (2, 3, 10**4)), det, "example 3")
        rng = random.Random(6)
        for _ in range(1000):
            S, L, h = rng.randint(1, 4), rng.randint(1, 12), rng.randint(1, 4)
            hj, d = rng.randint(2, 10**7), rng.randint(0, 10**4)
            base = theorem42_check(S, L, h, hj, d)
            more_d = theorem42_check(S, L, h, hj, d + rng.randint(1, 10**4))
            more_hj = theorem42_check(S, L, h, hj + rng.randint(1, 10**7), d)
            _check(not base.passed or more_d.passed, det, "passed flipped with larger d")
            if base.first_term is not None and more_hj.first_term is not None:
                _check(more_hj.first_term <= base.first_term, det, "term A grew with [H:J]")
            elif base.first_term is not None:
                raise AssertionError("term A became vacuous with larger [H:J]")


# 7 ------------------------------------------------------------------------

def test_criterion_07_abelianisation_bound():
    with criterion(7, "|H/H'| infinite or <= c^(d[G:H]) on chain subgroups of index <= 16") as det:
        checked = 0
        for name in CORPUS:
            p = load(name)
            for rule in ("derived_power", "primes_above:2"):
                chain = build_chain(p, 5, rule, max_cosets=64)
                for lv in chain:
                    if lv.index > 16:
                        continue
                    rep = prop61_check(p, lv.table)
                    _check(rep.infinite or rep.abelianization.order <= rep.bound, det,
                           f"{name} index {lv.index}")
                    checked += 1
        rep = prop61_check(load("cyclic3"), todd_coxeter(load("cyclic3"), [(1,)]))
        _check(rep.abelianization.order == rep.bound == 3, det, "cyclic3 equality")
        det.append(f"{len(CORPUS)} presentations, {checked} subgroups; cyclic3: 3 = 3")


# 8 ------------------------------------------------------------------------

GENUS2_INDEX2 = [(1,), (2,), (3,), (4, 4), (4, 1, -4), (4, 2, -4), (4, 3, -4)]


def witness_corpus():
    f2, torus, g2 = load("free2"), load("torus"), load("genus2")
    yield "free2", f2, build_chain(f2, 3)[2].table, 2
    yield "torus", torus, build_chain(torus, 3)[2].table, 2
    yield "torus", torus, build_chain(torus, 3)[2].table, 3
    yield "genus2", g2, todd_coxeter(g2, GENUS2_INDEX2), 2
    yield "s3", load("s3"), todd_coxeter(load("s3"), [(2,)]), 3
    yield "a4", load("a4"), todd_coxeter(load("a4"), [(1,), (2, 1, -2)]), 2
    yield "cyclic3", load("cyclic3"), todd_coxeter(load("cyclic3")), 2
    yield "cyclic6", load("cyclic6"), todd_coxeter(load("cyclic6"), [(1, 1, 1)]), 2
    yield "quaternion", load("quaternion"), todd_coxeter(load("quaternion"), [(1,)]), 2


def test_criterion_08_counting_invariants():
    with criterion(8, "sweep counting invariants on every corpus sweep", 120) as det:
        sweeps = 0
        literal_failures = []
        for name, p, t, n in witness_corpus():
            base = presentation_complex(p)
            cover = cover_complex(base, t)
            q = mod_n_abelianization(p, t, n)
            k_cover = cover_complex(base, kernel_coset_table(t, q.group, q.schreier_map, p))
            orders = [range(cover.vertex_count)]
            if cover.vertex_count <= 12:
                orders.append(exact_cutwidth(cover.one_skeleton(), 12)[1].order)
            L, S, d = p.relator_length_sum, p.rank, q.group.d
            for order in orders:
                results = scan_levels(p, cover, make_ordering(cover.one_skeleton(), order),
                                      q, k_cover)
                for r in results:
                    rec = r.record
                    sweeps += 1
                    where = f"{name} mod {n} level {rec.level}"
                    _check(rec.zero_cells == rec.boundary, det, f"{where}: zero-cells")
                    _check(2 * rec.one_cells <= rec.boundary * L, det, f"{where}: one-cells")
                    _check(d <= rec.wt_A + rec.wt_B + rec.e_components, det,
                           f"{where}: generation (component count)")
                    _check(rec.step is None or rec.step <= 2 * S + L * L, det, f"{where}: step")
                    _check(rec.fibres_ok and rec.chi_lift == rec.chi_from_fibres, det,
                           f"{where}: fibre claim")
                    if d > rec.wt_A + rec.wt_B + rec.one_cells:
                        literal_failures.append(where)
        det.append(f"{sweeps} sweeps")
        # The inequality as literally stated counts one-cells of A_n cap B_n.
        # It is evaluated faithfully; on face-free covers it cannot hold.
        _check(not literal_failures, det,
               f"d(J/K) <= wt(A)+wt(B)+|one-cells| fails at {len(literal_failures)} sweeps, "
               f"first {literal_failures[0] if literal_failures else ''}; "
               "the component-count form holds at all sweeps")


# 9 ------------------------------------------------------------------------

def test_criterion_09_end_to_end_witness():
    with criterion(9, "F2 witness SUCCESS with chi < 0; cyclic3 INCONCLUSIVE at all levels") as det:
        f2 = load("free2")
        report = largeness_witness(f2, build_chain(f2, 3)[2].table, 2)
        _check(report.verdict == SUCCESS and report.chi < 0 and report.lift.fibres_ok, det,
               f"F2 verdict {report.verdict}")
        y = report.lift.graph
        _check(y.vertex_count > 0 and all(a < y.a_count <= b < y.vertex_count
                                          for a, b in y.edges), det, "malformed lift graph")
        det.append(f"F2 chi = {report.chi} at level {report.level}")
        c3 = load("cyclic3")
        for t in (todd_coxeter(c3), todd_coxeter(c3, [(1,)])):
            rep = largeness_witness(c3, t, 3)
            _check(rep.verdict == INCONCLUSIVE, det, "cyclic3 not inconclusive")
            _check(all(r.chi_lift is None or r.chi_lift >= 0 for r in rep.levels), det,
                   "cyclic3 has a level with chi < 0")
        det.append("cyclic3 chi >= 0 everywhere")


# 10 -----------------------------------------------------------------------

def test_criterion_10_width_ratio_trend():
    with criterion(10, "constructed width / [G:J_i] non-increasing on the F2 chain") as det:
        chain = build_chain(load("free2"), 4)
        ratios = []
        for i in (2, 3, 4):
            pos = i  # J_i is chain level i + 1
            if pos >= len(chain):
                det.append(f"i={i} not computable (J index beyond reach)")
                continue
            co = chain_ordering(chain, pos)
            ratios.append(Fraction(co.width, chain[pos].index))
            det.append(f"i={i}: {co.width}/{chain[pos].index}")
        _check(len(ratios) >= 2 and all(a >= b for a, b in zip(ratios, ratios[1:])), det,
               "ratio increased")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
