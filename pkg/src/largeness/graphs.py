"""Cayley graphs of finite quotients, vertex orderings, widths and Cheeger constants.

Graphs are labelled multigraphs with one edge per (vertex, generator).
Loops are kept but never cross a cut.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .abelian import (DEFAULT_CHARACTER_BOUND, FiniteAbelianGroup, Vector, characters,
                      integer_root, subgroup_generated)
from .coset_enum import CosetTable, is_normal
from .errors import PreconditionError, ResourceLimitError
from .presentation import Word, inverse

DEFAULT_EXACT_LIMIT = 20


class DegenerateBoundError(PreconditionError):
    """``floor((|A| - 1) ** (1 / |Sigma|))`` is zero, so the width bound is vacuous."""


@dataclass(frozen=True)
class CayleyGraph:
    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    labels: tuple[str, ...] = ()

    def neighbours(self) -> list[list[int]]:
        adj = [[] for _ in range(self.vertex_count)]
        for u, v, _ in self.edges:
            if u != v:
                adj[u].append(v)
                adj[v].append(u)
        return adj

    def to_dot(self, name: str = "X") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f"  {v};" for v in range(self.vertex_count)]
        for u, v, s in self.edges:
            label = self.labels[s] if s < len(self.labels) else str(s)
            lines.append(f'  {u} -> {v} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VertexOrdering:
    order: tuple[int, ...]
    cut_profile: tuple[int, ...]

    @property
    def width(self) -> int:
        return max(self.cut_profile)

    def to_json(self) -> list[int]:
        return list(self.order)


def cayley_graph(t: CosetTable, check_normal: bool = True) -> CayleyGraph:
    """``X(G/N; S)`` from the coset table of a normal subgroup ``N``."""
    if check_normal and not is_normal(t):
        raise PreconditionError("Cayley graphs need a normal subgroup")
    edges = tuple((i, t.action[g][i], g) for g in range(t.rank) for i in range(t.index))
    return CayleyGraph(t.index, edges, t.generators)


def abelian_cayley_graph(A: FiniteAbelianGroup, sigma: Sequence[Sequence[int]],
                         labels: Sequence[str] = ()) -> CayleyGraph:
    """``X(A; Sigma)``; vertex ``k`` is ``A.element(k)``."""
    elements = list(A.elements())
    edges = []
    for s, v in enumerate(sigma):
        for a in elements:
            edges.append((A.index_of(a), A.index_of([x + y for x, y in zip(a, v)]), s))
    return CayleyGraph(len(elements), tuple(edges), tuple(labels))


def make_ordering(g: CayleyGraph, order: Sequence[int]) -> VertexOrdering:
    n = g.vertex_count
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise PreconditionError("ordering is not a permutation of the vertices")
    pos = [0] * n
    for k, v in enumerate(order):
        pos[v] = k
    diff = [0] * (n + 2)
    for u, v, _ in g.edges:
        a, b = sorted((pos[u], pos[v]))
        if a != b:
            # edge crosses the cut after n vertices for a < n <= b
            diff[a + 1] += 1
            diff[b + 1] -= 1
    profile, running = [], 0
    for k in range(n + 1):
        running += diff[k]
        profile.append(running)
    return VertexOrdering(order, tuple(profile))


def ordering_width(g: CayleyGraph, o: VertexOrdering | Sequence[int]) -> int:
    if not isinstance(o, VertexOrdering):
        o = make_ordering(g, o)
    return o.width


def _cut_table(g: CayleyGraph, limit: int) -> np.ndarray:
    n = g.vertex_count
    if n > limit:
        raise ResourceLimitError(f"{n} vertices exceeds the exact-oracle limit {limit}")
    w = np.zeros((n, n), dtype=np.int64)
    for u, v, _ in g.edges:
        if u != v:
            w[u, v] += 1
            w[v, u] += 1
    deg = w.sum(axis=1)
    cut = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        rest = np.arange(1 << v, dtype=np.int64)
        inner = np.zeros(1 << v, dtype=np.int64)
        for u in range(v):
            if w[v, u]:
                inner += w[v, u] * ((rest >> u) & 1)
        cut[(1 << v):(2 << v)] = cut[:1 << v] + deg[v] - 2 * inner
    return cut


def _popcount(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    count = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        count += (masks >> v) & 1
    return count


def exact_cutwidth(g: CayleyGraph, limit: int = DEFAULT_EXACT_LIMIT) -> tuple[int, VertexOrdering]:
    """Minimum width over all orderings by dynamic programming over vertex subsets.

    Returns the lexicographically least optimal ordering.
    """
    n = g.vertex_count
    cut = _cut_table(g, limit)
    if n == 0:
        return 0, VertexOrdering((), (0,))
    full = (1 << n) - 1
    best_prefix = np.full(1 << n, np.iinfo(np.int64).max, dtype=np.int64)
    best_prefix[0] = 0
    pop = _popcount(n)
    by_size = np.argsort(pop, kind="stable")
    bounds = np.searchsorted(pop[by_size], np.arange(n + 2))
    inf = np.iinfo(np.int64).max
    for k in range(1, n + 1):
        masks = by_size[bounds[k]:bounds[k + 1]]
        best = np.full(len(masks), inf, dtype=np.int64)
        for v in range(n):
            bit = 1 << v
            has = (masks & bit) != 0
            cand = np.where(has, best_prefix[masks ^ bit], inf)
            np.minimum(best, cand, out=best)
        best_prefix[masks] = np.maximum(best, cut[masks])
    opt = int(best_prefix[full])
    order, prefix = [], 0
    for _ in range(n):
        for v in range(n):
            q = prefix | (1 << v)
            if q != prefix and best_prefix[full ^ q] <= opt:
                order.append(v)
                prefix = q
                break
    o = make_ordering(g, order)
    assert o.width == opt
    return opt, o


def exact_cheeger(g: CayleyGraph, limit: int = DEFAULT_EXACT_LIMIT) -> Fraction:
    """``min |dA| / |A|`` over nonempty ``A`` with ``|A| <= |V|/2``, by subset enumeration."""
    n = g.vertex_count
    if n < 2:
        raise PreconditionError("the Cheeger constant needs at least two vertices")
    cut = _cut_table(g, limit)
    pop = _popcount(n)
    return min(Fraction(int(cut[pop == s].min()), s) for s in range(1, n // 2 + 1))


def cheeger_from_width_bound(g: CayleyGraph, o: VertexOrdering) -> Fraction:
    if g.vertex_count < 2:
        raise PreconditionError("needs at least two vertices")
    return Fraction(o.width, g.vertex_count // 2)


def lemma34_bound(order: int, sigma_size: int) -> Fraction:
    """``6 |Sigma| |A| / floor((|A| - 1) ** (1 / |Sigma|))`` with an exact integer root."""
    if sigma_size < 1 or order < 1:
        raise PreconditionError("needs |A| >= 1 and |Sigma| >= 1")
    c = integer_root(order - 1, sigma_size)
    if c == 0:
        raise DegenerateBoundError("floor((|A|-1)^(1/|Sigma|)) = 0; the bound is vacuous")
    return Fraction(6 * sigma_size * order, c)


@dataclass(frozen=True)
class CharacterOrdering:
    """Ordering of ``X(A; Sigma)`` by the cosets of the kernel of a character ``phi``."""

    ordering: VertexOrdering
    graph: CayleyGraph
    arcs: int                     # c = floor((|A|-1)^(1/|Sigma|))
    phi: Vector | None            # None when c = 0 (natural order used)
    phi_order: int                # N = |A / ker phi|
    bound: Fraction | None

    @property
    def width(self) -> int:
        return self.ordering.width


def character_ordering(A: FiniteAbelianGroup, sigma: Sequence[Sequence[int]],
                       bound: int = DEFAULT_CHARACTER_BOUND) -> CharacterOrdering:
    """Pigeonhole two characters into one box of ``(circle / c arcs)^|Sigma|``,
    take their quotient ``phi``, and list ``ker phi``, ``phi^-1(sigma)``,
    ``phi^-1(sigma^2)``, ... with each coset in lexicographic order.
    """
    sigma = [A.reduce(s) for s in sigma]
    size = A.order
    if size < 2:
        raise PreconditionError("character ordering needs |A| >= 2")
    m = len(sigma)
    graph = abelian_cayley_graph(A, sigma)
    if subgroup_generated(A, sigma).order != size:
        raise PreconditionError("Sigma must generate A")
    c = integer_root(size - 1, m) if m else 0
    if c == 0:
        o = make_ordering(graph, range(size))
        return CharacterOrdering(o, graph, 0, None, 1, None)
    inv = A.invariant_factors
    e = inv[-1]
    scale = [e // d for d in inv]

    def turns(k: Sequence[int], v: Sequence[int]) -> int:
        # arg/2pi as x/e with x in (-e/2, e/2]
        x = sum(a * b * s for a, b, s in zip(k, v, scale)) % e
        return x - e if 2 * x > e else x

    def cell(x: int) -> int:
        # arcs (-1/2 + j/c, -1/2 + (j+1)/c]; a boundary goes to the lower arc
        num = (2 * x + e) * c
        return -(-num // (2 * e)) - 1

    boxes: dict[tuple[int, ...], Vector] = {}
    phi = None
    for chi in characters(A, bound):
        key = tuple(cell(turns(chi.components, s)) for s in sigma)
        other = boxes.get(key)
        if other is not None:
            phi = tuple((a - b) % d for a, b, d in zip(chi.components, other, inv))
            break
        boxes[key] = chi.components
    assert phi is not None and any(phi), "pigeonhole failed"
    N = math.lcm(*(d // math.gcd(d, k) for d, k in zip(inv, phi)))
    for s in sigma:
        assert abs(turns(phi, s)) * c <= e, "phi moves a generator by more than one arc"

    def level(a: Vector) -> int:
        return (sum(x * k * sc for x, k, sc in zip(a, phi, scale)) % e) * N // e

    verts = sorted(range(size), key=lambda idx: (level(A.element(idx)), idx))
    o = make_ordering(graph, verts)
    b = Fraction(6 * m * size, c)
    assert o.width <= b, f"width {o.width} exceeds the bound {b}"
    return CharacterOrdering(o, graph, c, phi, N, b)


def composite_ordering(outer: CosetTable, inner_order: VertexOrdering,
                       transversal: Sequence[Word], projection: Sequence[int],
                       base_vertex: Mapping[int, int] | None = None) -> VertexOrdering:
    """Order ``X(G/J; S)`` tree by tree, following an ordering of ``X(H/J; Sigma)``.

    ``projection[c]`` is the ``H``-coset below ``J``-coset ``c`` and
    ``transversal`` the Schreier transversal of ``H``.  The tree through ``c``
    is named by the ``J``-coset ``c * t^-1`` lying over ``H``-coset 0, which
    ``base_vertex`` maps to a vertex of the inner graph (identity by default).
    Within a tree, vertices follow the transversal index.
    """
    h_index = len(transversal)
    back = [inverse(t) for t in transversal]
    position = {v: k for k, v in enumerate(inner_order.order)}
    keys = []
    for c in range(outer.index):
        i = projection[c]
        b = outer.word_action(back[i], c)
        if projection[b] != 0:
            raise PreconditionError("inconsistent coset data: transversal does not return to H")
        tree = base_vertex[b] if base_vertex is not None else b
        if tree not in position:
            raise PreconditionError(f"inconsistent coset data: no inner vertex for coset {b}")
        keys.append((position[tree], i, c))
    counts: dict[int, set] = {}
    for pos, i, _ in keys:
        counts.setdefault(pos, set()).add(i)
    if any(len(v) != h_index for v in counts.values()):
        raise PreconditionError("inconsistent coset data: a tree misses some H-coset")
    graph = cayley_graph(outer, check_normal=False)
    o = make_ordering(graph, [c for _, _, c in sorted(keys)])
    limit = inner_order.width + 2 * outer.rank * h_index
    assert o.width <= limit, f"composite width {o.width} exceeds {limit}"
    return o


@dataclass(frozen=True)
class ConstructedOrdering:
    """Ordering of ``X(G/J; S)`` built from ``H``, the previous chain level."""

    ordering: VertexOrdering
    inner: CharacterOrdering | None
    inner_width: int
    h_index: int
    rank: int

    @property
    def width(self) -> int:
        return self.ordering.width

    @property
    def lemma33_limit(self) -> int:
        return self.inner_width + 2 * self.rank * self.h_index


def chain_ordering(chain, pos: int) -> ConstructedOrdering:
    """Composite ordering of ``X(G/G_i; S)`` for ``chain[pos]`` with ``H = chain[pos - 1]``."""
    j_level = chain[pos]
    graph = cayley_graph(j_level.table, check_normal=False)
    if pos == 0:
        o = make_ordering(graph, range(graph.vertex_count))
        return ConstructedOrdering(o, None, 0, 1, j_level.table.rank)
    h_level = chain[pos - 1]
    quotient = h_level.quotient
    A = quotient.group
    size = A.order
    sigma = [quotient.edge_label(i, g) for i, g in quotient.subgroup.generators]
    if size >= 2:
        inner = character_ordering(A, sigma)
        inner_order = inner.ordering
    else:
        inner = None
        inner_order = VertexOrdering((0,), (0, 0))
    projection = [c // size for c in range(j_level.index)]
    o = composite_ordering(j_level.table, inner_order, h_level.schreier.transversal, projection)
    return ConstructedOrdering(o, inner, inner_order.width, h_level.index, j_level.table.rank)
