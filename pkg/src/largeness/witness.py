"""Sweep decompositions of covering 2-complexes and free-quotient witnesses.

A vertex ordering of the ``J``-cover ``C`` of the presentation complex cuts
``C`` into an ``A`` side (the first ``n`` vertices plus their face regions)
and a ``B`` side.  Inside a face the two sides meet along chords: each
maximal arc of the boundary lying on the ``B`` side is cut off by a single
chord, and everything else in the face belongs to ``A``.  The quotient
graph ``Y`` has one vertex per side component and one edge per component of
the intersection.  Pulling the decomposition back to the ``K``-cover gives
``Y~``; when ``chi(Y~) < 0``, ``K`` maps onto the free group ``pi_1(Y~)``.

Edge labels take values in the abelian group ``J/K``.  Each Cayley edge
carries its label on the half next to its ``A`` endpoint, so a chord
measured inside ``B`` has the label sum of the arc it cuts off, and the
same chord seen from ``A`` picks up the two crossing edges as well.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .abelian import FiniteAbelianGroup, Vector, subgroup_generated
from .chains import ModularAbelianization, kernel_coset_table, mod_n_abelianization
from .coset_enum import CosetTable, is_normal
from .errors import PreconditionError, ResourceLimitError
from .graphs import (DEFAULT_EXACT_LIMIT, CayleyGraph, VertexOrdering, exact_cutwidth,
                     make_ordering)
from .presentation import Presentation

log = logging.getLogger(__name__)

DEFAULT_MAX_K_COSETS = 10**4

SUCCESS = "SUCCESS"
INCONCLUSIVE = "INCONCLUSIVE"


# ---------------------------------------------------------------------------
# 2-complexes


@dataclass(frozen=True)
class TwoComplex:
    """A 2-complex with one directed edge per ``(vertex, generator)``.

    Edge ``e = v * rank + g`` runs from ``v`` to ``targets[e]``.  A face is
    a closed walk of signed edge references: ``e + 1`` traverses ``e``
    forwards and ``-(e + 1)`` backwards.  ``face_origin[f]`` is the
    ``(start vertex, relator index)`` the face was lifted from.
    """

    vertex_count: int
    generators: tuple[str, ...]
    targets: tuple[int, ...]
    faces: tuple[tuple[int, ...], ...]
    face_origin: tuple[tuple[int, int], ...]

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def edge_count(self) -> int:
        return len(self.targets)

    def edge(self, e: int) -> tuple[int, int, int]:
        """``(source, target, generator)`` of edge ``e``."""
        return e // self.rank, self.targets[e], e % self.rank

    def traverse(self, ref: int) -> tuple[int, int, int]:
        """``(from, to, edge)`` for a signed edge reference."""
        e = abs(ref) - 1
        u, v, _ = self.edge(e)
        return (u, v, e) if ref > 0 else (v, u, e)

    def face_vertices(self, f: int) -> list[int]:
        """Vertices ``v_0, ..., v_{m-1}`` visited by face ``f`` (``v_k`` starts step ``k``)."""
        return [self.traverse(ref)[0] for ref in self.faces[f]]

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + len(self.faces)

    def traversal_counts(self) -> list[int]:
        counts = [0] * self.edge_count
        for walk in self.faces:
            for ref in walk:
                counts[abs(ref) - 1] += 1
        return counts

    def one_skeleton(self) -> CayleyGraph:
        return CayleyGraph(self.vertex_count,
                           tuple(self.edge(e) for e in range(self.edge_count)),
                           self.generators)

    def check(self) -> None:
        for f, walk in enumerate(self.faces):
            if not walk:
                raise AssertionError(f"face {f} has an empty boundary")
            for a, b in zip(walk, walk[1:] + walk[:1]):
                if self.traverse(a)[1] != self.traverse(b)[0]:
                    raise AssertionError(f"face {f} boundary is not a closed walk")


def presentation_complex(p: Presentation) -> TwoComplex:
    """One vertex, one loop per generator, one face per relator."""
    faces = tuple(tuple(r) for r in p.relators)
    return TwoComplex(1, p.generators, (0,) * p.rank, faces,
                      tuple((0, j) for j in range(len(p.relators))))


def cover_complex(c: TwoComplex, t: CosetTable) -> TwoComplex:
    """The cover of the one-vertex complex ``c`` given by the coset table ``t``.

    Every relator is lifted at every coset and kept as a full-length walk,
    even when the lift goes round a shorter closed walk several times.
    """
    if c.vertex_count != 1:
        raise PreconditionError("cover_complex expects a one-vertex complex")
    if c.generators != t.generators:
        raise PreconditionError("coset table and complex use different generators")
    rank = c.rank
    targets = tuple(t.action[g][v] for v in range(t.index) for g in range(rank))
    inv = t.inverse_action
    faces, origin = [], []
    for v0 in range(t.index):
        for j, word in enumerate(c.faces):
            walk, v = [], v0
            for x in word:
                g = abs(x) - 1
                if x > 0:
                    walk.append(v * rank + g + 1)
                    v = t.action[g][v]
                else:
                    v = inv[g][v]
                    walk.append(-(v * rank + g + 1))
            if v != v0:
                raise PreconditionError(f"relator {j} does not close at coset {v0}")
            faces.append(tuple(walk))
            origin.append((v0, j))
    return TwoComplex(t.index, c.generators, targets, tuple(faces), tuple(origin))


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class Chord:
    """A one-cell of ``A cap B`` cutting off the ``B`` arc of face ``face``
    between boundary steps ``exit_step`` (``A`` to ``B``) and ``entry_step``
    (``B`` to ``A``)."""

    face: int
    exit_step: int
    entry_step: int
    exit_edge: int
    entry_edge: int
    a_from: int
    a_to: int


@dataclass(frozen=True)
class SweepDecomposition:
    level: int | None
    inside: tuple[bool, ...]
    boundary_edges: tuple[int, ...]
    face_crossings: tuple[tuple[int, ...], ...]
    chords: tuple[Chord, ...]
    a_component: dict[int, int]
    b_component: dict[int, int]
    e_component: dict[int, int]

    @property
    def zero_cells(self) -> tuple[int, ...]:
        """One zero-cell per boundary edge, named by the edge."""
        return self.boundary_edges

    @property
    def one_cells(self) -> int:
        return len(self.chords)

    @property
    def a_count(self) -> int:
        return len(set(self.a_component.values()))

    @property
    def b_count(self) -> int:
        return len(set(self.b_component.values()))

    @property
    def e_count(self) -> int:
        return len(set(self.e_component.values()))


def _components(nodes: Iterable[int], edges: Sequence[tuple[int, int, object]],
                group: FiniteAbelianGroup | None = None,
                ) -> tuple[dict[int, int], list[list[Vector]]]:
    """Connected components by BFS, numbered in order of their least node.

    When ``group`` is given, edge values are elements of it and the second
    result lists, per component, the values of the fundamental cycles of
    the BFS forest; they generate the image of the component's ``pi_1``.
    """
    nodes = sorted(set(nodes))
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in nodes}
    for k, (u, v, _) in enumerate(edges):
        adj[u].append((v, k, 1))
        if u != v:
            adj[v].append((u, k, -1))
    comp: dict[int, int] = {}
    pot: dict[int, Vector] = {}
    tree: set[int] = set()
    zero = group.zero() if group is not None else None
    ncomp = 0
    for s in nodes:
        if s in comp:
            continue
        cid = ncomp
        ncomp += 1
        comp[s] = cid
        if group is not None:
            pot[s] = zero
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, k, sign in adj[u]:
                if v in comp:
                    continue
                comp[v] = cid
                tree.add(k)
                if group is not None:
                    val = edges[k][2]
                    pot[v] = group.reduce([a + sign * b for a, b in zip(pot[u], val)])
                queue.append(v)
    gens: list[list[Vector]] = [[] for _ in range(ncomp)]
    if group is not None:
        for k, (u, v, val) in enumerate(edges):
            if k in tree:
                continue
            cyc = group.reduce([a + b - c for a, b, c in zip(pot[u], val, pot[v])])
            if any(cyc):
                gens[comp[u]].append(cyc)
    return comp, gens


def sweep_mask(cover: TwoComplex, inside: Sequence[bool], level: int | None = None,
               labels: Callable[[int], Vector] | None = None,
               group: FiniteAbelianGroup | None = None,
               ) -> tuple[SweepDecomposition, dict[str, list[list[Vector]]]]:
    """Decompose ``cover`` with ``A`` spanned by the vertices flagged in ``inside``.

    ``labels(ref)`` gives the group value of a signed edge traversal; with
    ``labels`` and ``group`` set, the second result holds the cycle values
    of every ``A``, ``B`` and intersection component.
    """
    inside = tuple(bool(x) for x in inside)
    if len(inside) != cover.vertex_count:
        raise PreconditionError("membership mask has the wrong length")
    boundary = []
    a_edges, b_edges = [], []
    weighted = labels is not None and group is not None
    for e in range(cover.edge_count):
        u, v, _ = cover.edge(e)
        val = labels(e + 1) if weighted else None
        if inside[u] and inside[v]:
            a_edges.append((u, v, val))
        elif not inside[u] and not inside[v]:
            b_edges.append((u, v, val))
        else:
            boundary.append(e)
    boundary_set = set(boundary)

    crossings_all = []
    chords = []
    for f, walk in enumerate(cover.faces):
        verts = cover.face_vertices(f)
        m = len(walk)
        cross = tuple(k for k in range(m) if inside[verts[k]] != inside[verts[(k + 1) % m]])
        assert len(cross) % 2 == 0, f"face {f} has an odd number of side changes"
        for k in cross:
            assert abs(walk[k]) - 1 in boundary_set
        crossings_all.append(cross)
        exits = [k for k in cross if inside[verts[k]]]
        for k in exits:
            # the matching entry is the next crossing round the circle
            j = cross[(cross.index(k) + 1) % len(cross)]
            chords.append(Chord(f, k, j, abs(walk[k]) - 1, abs(walk[j]) - 1,
                                verts[k], verts[(j + 1) % m]))

    chord_a, chord_e = [], []
    for ch in chords:
        walk = cover.faces[ch.face]
        m = len(walk)
        if weighted:
            arc = []
            k = (ch.exit_step + 1) % m
            while k != ch.entry_step:
                arc.append(walk[k])
                k = (k + 1) % m
            b_val = group.zero()
            for ref in arc:
                b_val = group.add(b_val, labels(ref))
            a_val = group.add(group.add(labels(walk[ch.exit_step]), b_val),
                              labels(walk[ch.entry_step]))
        else:
            a_val = b_val = None
        chord_a.append((ch.a_from, ch.a_to, a_val))
        chord_e.append((ch.exit_edge, ch.entry_edge, b_val))

    a_nodes = [v for v in range(cover.vertex_count) if inside[v]]
    b_nodes = [v for v in range(cover.vertex_count) if not inside[v]]
    g = group if weighted else None
    a_comp, a_gens = _components(a_nodes, a_edges + chord_a, g)
    b_comp, b_gens = _components(b_nodes, b_edges, g)
    e_comp, e_gens = _components(boundary, chord_e, g)
    d = SweepDecomposition(level, inside, tuple(boundary), tuple(crossings_all), tuple(chords),
                           a_comp, b_comp, e_comp)
    _check_counts(cover, d)
    return d, {"A": a_gens, "B": b_gens, "E": e_gens}


def _check_counts(cover: TwoComplex, d: SweepDecomposition) -> None:
    assert len(d.zero_cells) == len(d.boundary_edges)
    assert 2 * d.one_cells == sum(len(c) for c in d.face_crossings)


def sweep(cover: TwoComplex, o: VertexOrdering | Sequence[int], n: int,
          labels: Callable[[int], Vector] | None = None,
          group: FiniteAbelianGroup | None = None):
    """Sweep decomposition with ``D_n`` the first ``n`` vertices of ``o``."""
    order = o.order if isinstance(o, VertexOrdering) else tuple(o)
    if not 1 <= n <= cover.vertex_count - 1:
        raise PreconditionError(f"level {n} outside 1..{cover.vertex_count - 1}")
    inside = [False] * cover.vertex_count
    for v in order[:n]:
        inside[v] = True
    return sweep_mask(cover, inside, n, labels, group)


# ---------------------------------------------------------------------------
# the quotient graph Y


@dataclass(frozen=True)
class YGraph:
    """Vertices ``0 .. a_count-1`` are ``A`` components, the rest ``B`` components.

    Edge ``k`` is intersection component ``k`` joining ``edges[k] = (a, b)``.
    Image orders are the orders of the ``pi_1`` images in ``J/K``; weights
    are their minimal generator counts.
    """

    a_count: int
    b_count: int
    edges: tuple[tuple[int, int], ...]
    vertex_weights: tuple[int, ...] = ()
    edge_weights: tuple[int, ...] = ()
    vertex_image_orders: tuple[int, ...] = ()
    edge_image_orders: tuple[int, ...] = ()

    @property
    def vertex_count(self) -> int:
        return self.a_count + self.b_count

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - len(self.edges)

    @property
    def wt_A(self) -> int:
        return sum(self.vertex_weights[: self.a_count])

    @property
    def wt_B(self) -> int:
        return sum(self.vertex_weights[self.a_count:])

    def g_values(self) -> list[int]:
        g = list(self.vertex_weights)
        for (a, b), w in zip(self.edges, self.edge_weights):
            g[a] -= w
            g[b] -= w
        return g

    def valences(self) -> list[int]:
        val = [0] * self.vertex_count
        for a, b in self.edges:
            val[a] += 1
            val[b] += 1
        return val

    def components(self) -> list[tuple[list[int], list[int]]]:
        """``(vertices, edges)`` of each connected component."""
        comp, _ = _components(range(self.vertex_count), [(a, b, None) for a, b in self.edges])
        out: list[tuple[list[int], list[int]]] = [([], []) for _ in set(comp.values())]
        for v in range(self.vertex_count):
            out[comp[v]][0].append(v)
        for k, (a, _) in enumerate(self.edges):
            out[comp[a]][1].append(k)
        return out

    def name(self, v: int) -> str:
        return f"A{v}" if v < self.a_count else f"B{v - self.a_count}"

    def to_dot(self, name: str = "Y") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.vertex_count):
            attrs = f'label="{self.name(v)}'
            if self.vertex_weights:
                attrs += f" wt={self.vertex_weights[v]}"
            lines.append(f'  {self.name(v)} [{attrs}"];')
        for k, (a, b) in enumerate(self.edges):
            label = f' [label="{self.edge_weights[k]}"]' if self.edge_weights else ""
            lines.append(f"  {self.name(a)} -- {self.name(b)}{label};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"A_vertices": self.a_count, "B_vertices": self.b_count,
                "edges": [[self.name(a), self.name(b)] for a, b in self.edges],
                "vertex_weights": list(self.vertex_weights),
                "edge_weights": list(self.edge_weights)}


def _y_shape(d: SweepDecomposition, cover: TwoComplex) -> tuple[int, int, list[tuple[int, int]]]:
    a_count, b_count = d.a_count, d.b_count
    ends: dict[int, tuple[int, int]] = {}
    for z in d.boundary_edges:
        u, v, _ = cover.edge(z)
        a_v, b_v = (u, v) if d.inside[u] else (v, u)
        pair = (d.a_component[a_v], a_count + d.b_component[b_v])
        k = d.e_component[z]
        if ends.setdefault(k, pair) != pair:
            raise AssertionError("an intersection component touches two A or two B components")
    return a_count, b_count, [ends[k] for k in range(d.e_count)]


def build_Y(d: SweepDecomposition, cycles: dict[str, list[list[Vector]]], cover: TwoComplex,
            group: FiniteAbelianGroup) -> YGraph:
    a_count, b_count, edges = _y_shape(d, cover)
    vw, vo, ew, eo = [], [], [], []
    for key, w, o in (("A", vw, vo), ("B", vw, vo), ("E", ew, eo)):
        for gens in cycles[key]:
            img = subgroup_generated(group, gens)
            w.append(img.d)
            o.append(img.order)
    y = YGraph(a_count, b_count, tuple(edges), tuple(vw), tuple(ew), tuple(vo), tuple(eo))
    # generation: J/K is generated by the A and B images plus one class per
    # independent cycle of Y, and Y has at most as many cycles as edges
    assert group.d <= y.wt_A + y.wt_B + len(y.edges), "generation inequality fails"
    return y


def component_weight(group: FiniteAbelianGroup, cycle_values: Iterable[Sequence[int]]) -> int:
    """``d`` of the subgroup of ``J/K`` generated by a component's cycle values."""
    return subgroup_generated(group, cycle_values).d


# ---------------------------------------------------------------------------
# lifting to the K-cover


@dataclass(frozen=True)
class Lift:
    """``Y~`` for one sweep, with the projection ``Y~ -> Y``."""

    graph: YGraph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]
    chi: int
    chi_from_fibres: int
    fibres_ok: bool

    def components(self) -> list[dict]:
        out = []
        for verts, edges in self.graph.components():
            out.append({"vertices": len(verts), "edges": len(edges),
                        "chi": len(verts) - len(edges)})
        return out


def lift_Y(d: SweepDecomposition, y: YGraph, j_cover: TwoComplex, k_cover: TwoComplex,
           fibre_size: int) -> Lift:
    """Pull the decomposition back along ``k_cover -> j_cover`` and rebuild ``Y``.

    Vertex ``c`` of ``k_cover`` lies over ``c // fibre_size``.  Components
    upstairs are found from scratch, so the fibre counts are an
    independent check of ``|J/K| / |image|``.
    """
    if k_cover.vertex_count != j_cover.vertex_count * fibre_size:
        raise PreconditionError("K-cover size is not [G:J] * |J/K|")
    rank = j_cover.rank
    inside = [d.inside[c // fibre_size] for c in range(k_cover.vertex_count)]
    up, _ = sweep_mask(k_cover, inside, d.level)
    a_count, b_count, edges = _y_shape(up, k_cover)
    lifted = YGraph(a_count, b_count, tuple(edges))

    def down_edge(e: int) -> int:
        return (e // rank // fibre_size) * rank + e % rank

    vmap = [0] * lifted.vertex_count
    for c, k in up.a_component.items():
        vmap[k] = d.a_component[c // fibre_size]
    for c, k in up.b_component.items():
        vmap[a_count + k] = y.a_count + d.b_component[c // fibre_size]
    emap = [0] * len(edges)
    for z, k in up.e_component.items():
        emap[k] = d.e_component[down_edge(z)]
    for k, (a, b) in enumerate(edges):
        assert y.edges[emap[k]] == (vmap[a], vmap[b]), "lift does not cover Y"

    fibres_ok = True
    v_count = [0] * y.vertex_count
    for v in vmap:
        v_count[v] += 1
    e_count = [0] * len(y.edges)
    for k in emap:
        e_count[k] += 1
    for cnt, order in zip(v_count + e_count, y.vertex_image_orders + y.edge_image_orders):
        if cnt * order != fibre_size:
            fibres_ok = False
    chi_f = (sum(fibre_size // o for o in y.vertex_image_orders)
             - sum(fibre_size // o for o in y.edge_image_orders))
    return Lift(lifted, tuple(vmap), tuple(emap), lifted.euler_characteristic, chi_f, fibres_ok)


def path_valence_check(y: YGraph, lift: Lift) -> dict | None:
    """Secondary diagnostic on a path ``P`` in ``Y`` between the two largest
    ``g``-values: valences of its preimage ``P~`` in ``Y~``."""
    g = y.g_values()
    if y.vertex_count < 2:
        return None
    ranked = sorted(range(y.vertex_count), key=lambda v: (-g[v], v))
    u, v = ranked[0], ranked[1]
    adj: dict[int, list[tuple[int, int]]] = {x: [] for x in range(y.vertex_count)}
    for k, (a, b) in enumerate(y.edges):
        adj[a].append((b, k))
        adj[b].append((a, k))
    prev: dict[int, tuple[int, int] | None] = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w, k in adj[x]:
            if w not in prev:
                prev[w] = (x, k)
                queue.append(w)
    if v not in prev:
        return {"u": y.name(u), "v": y.name(v), "connected": False}
    p_verts, p_edges, x = {v}, set(), v
    while prev[x] is not None:
        x, k = prev[x]
        p_verts.add(x)
        p_edges.add(k)
    up_v = [i for i, t in enumerate(lift.vertex_map) if t in p_verts]
    up_e = [k for k, t in enumerate(lift.edge_map) if t in p_edges]
    val = {i: 0 for i in up_v}
    for k in up_e:
        a, b = lift.graph.edges[k]
        val[a] += 1
        val[b] += 1
    return {"u": y.name(u), "v": y.name(v), "g_u": g[u], "g_v": g[v], "connected": True,
            "path_length": len(p_edges), "chi": len(up_v) - len(up_e),
            "min_valence": min(val.values()) if val else 0,
            "valence_at_least_three": sum(1 for x in val.values() if x >= 3)}


# ---------------------------------------------------------------------------
# level scan and the end-to-end witness


@dataclass
class LevelRecord:
    level: int
    boundary: int
    zero_cells: int
    one_cells: int
    one_cell_bound: Fraction
    a_components: int
    b_components: int
    e_components: int
    wt_A: int
    wt_B: int
    wt_E: int
    d_JK: int
    chi_Y: int
    step: int | None = None
    step_bound: int | None = None
    balanced: bool = False
    chi_lift: int | None = None
    chi_from_fibres: int | None = None
    fibres_ok: bool | None = None

    @property
    def generation_holds(self) -> bool:
        """``d(J/K) <= wt(A) + wt(B) + (number of intersection components)``."""
        return self.d_JK <= self.wt_A + self.wt_B + self.e_components

    @property
    def one_cell_form_holds(self) -> bool:
        """The same inequality with the chord count in place of the component count."""
        return self.d_JK <= self.wt_A + self.wt_B + self.one_cells

    @property
    def step_ok(self) -> bool | None:
        return None if self.step is None else abs(self.step) <= self.step_bound

    def to_json(self) -> dict:
        return {"level": self.level, "boundary": self.boundary, "zero_cells": self.zero_cells,
                "one_cells": self.one_cells, "one_cell_bound": str(self.one_cell_bound),
                "A_components": self.a_components, "B_components": self.b_components,
                "intersection_components": self.e_components,
                "wt_A": self.wt_A, "wt_B": self.wt_B, "wt_E": self.wt_E,
                "generation_holds": self.generation_holds,
                "one_cell_form_holds": self.one_cell_form_holds,
                "step": self.step, "step_ok": self.step_ok, "balanced": self.balanced,
                "chi_Y": self.chi_Y, "chi_Y_lift": self.chi_lift,
                "chi_Y_lift_from_fibres": self.chi_from_fibres, "fibres_ok": self.fibres_ok}


@dataclass
class LevelResult:
    record: LevelRecord
    decomposition: SweepDecomposition
    y: YGraph
    lift: Lift | None = None


@dataclass
class WitnessReport:
    verdict: str
    j_index: int
    k_index: int | None
    quotient: FiniteAbelianGroup
    modulus: int
    ordering: VertexOrdering
    ordering_source: str
    ell: Fraction
    balanced_level: int | None
    levels: list[LevelRecord] = field(default_factory=list)
    level: int | None = None
    y: YGraph | None = None
    lift: Lift | None = None
    path_check: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def chi(self) -> int | None:
        return None if self.lift is None else self.lift.chi

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict, "index_G_J": self.j_index, "index_G_K": self.k_index,
            "J_mod_K": self.quotient.to_json(), "modulus": self.modulus,
            "ordering": self.ordering.to_json(), "ordering_source": self.ordering_source,
            "ordering_width": self.ordering.width,
            "ell": f"{self.ell.numerator}/{self.ell.denominator}",
            "balanced_level": self.balanced_level, "levels": [r.to_json() for r in self.levels],
            "witness_level": self.level, "chi_Y_lift": self.chi, "notes": list(self.notes),
        }
        if self.y is not None:
            out["Y"] = self.y.to_json()
            out["Y_dot"] = self.y.to_dot("Y")
        if self.lift is not None:
            out["Y_lift_dot"] = self.lift.graph.to_dot("Ylift")
            out["Y_lift_components"] = self.lift.components()
            out["rank_of_free_quotient"] = 1 - self.lift.chi if self.lift.chi < 0 else None
        if self.path_check is not None:
            out["path_check"] = self.path_check
        return out

    def to_dot(self) -> str:
        parts = []
        if self.y is not None:
            parts.append(self.y.to_dot("Y"))
        if self.lift is not None:
            parts.append(self.lift.graph.to_dot("Ylift"))
        return "".join(parts)


def _edge_labeller(cover: TwoComplex, q: ModularAbelianization) -> Callable[[int], Vector]:
    group = q.group
    rank = cover.rank
    cache = {}
    for e in range(cover.edge_count):
        v = q.edge_label(e // rank, e % rank)
        cache[e + 1] = group.reduce(v)
        cache[-(e + 1)] = group.reduce([-x for x in v])
    return cache.__getitem__


def find_balanced_level(results: Sequence[LevelResult], ell: Fraction, j_index: int) -> int | None:
    """First level with both weights at least ``ell [G:J] / 4``."""
    if ell <= 0:
        raise PreconditionError("ell must be positive")
    need = ell * j_index / 4
    for r in results:
        if r.record.wt_A >= need and r.record.wt_B >= need:
            return r.record.level
    return None


def scan_levels(p: Presentation, cover: TwoComplex, order: VertexOrdering,
                q: ModularAbelianization, k_cover: TwoComplex | None = None,
                ) -> list[LevelResult]:
    """Sweep at every level ``1 .. |V| - 1`` and lift when a K-cover is given."""
    group = q.group
    labels = _edge_labeller(cover, q)
    step_bound = 2 * p.rank + p.relator_length_sum ** 2
    L = p.relator_length_sum
    results: list[LevelResult] = []
    prev_wt = None
    for n in range(1, cover.vertex_count):
        d, cycles = sweep(cover, order, n, labels, group)
        y = build_Y(d, cycles, cover, group)
        rec = LevelRecord(n, len(d.boundary_edges), len(d.zero_cells), d.one_cells,
                          Fraction(len(d.boundary_edges) * L, 2), d.a_count, d.b_count,
                          d.e_count, y.wt_A, y.wt_B, sum(y.edge_weights), group.d,
                          y.euler_characteristic)
        assert rec.zero_cells == rec.boundary
        assert rec.one_cells <= rec.one_cell_bound, "too many one-cells"
        if prev_wt is not None:
            rec.step, rec.step_bound = y.wt_A - prev_wt, step_bound
        prev_wt = y.wt_A
        res = LevelResult(rec, d, y)
        if k_cover is not None:
            lift = lift_Y(d, y, cover, k_cover, group.order)
            rec.chi_lift, rec.chi_from_fibres, rec.fibres_ok = (
                lift.chi, lift.chi_from_fibres, lift.fibres_ok)
            res.lift = lift
        else:
            rec.chi_from_fibres = (sum(group.order // o for o in y.vertex_image_orders)
                                   - sum(group.order // o for o in y.edge_image_orders))
        results.append(res)
    return results


def default_ordering(cover: TwoComplex, limit_exact: int = DEFAULT_EXACT_LIMIT,
                     ) -> tuple[VertexOrdering, str]:
    graph = cover.one_skeleton()
    if graph.vertex_count <= limit_exact:
        _, o = exact_cutwidth(graph, limit_exact)
        return o, "exact cutwidth"
    return make_ordering(graph, range(graph.vertex_count)), "coset order"


def largeness_witness(p: Presentation, j_table: CosetTable, modulus: int = 2,
                      ordering: VertexOrdering | Sequence[int] | None = None,
                      ordering_source: str = "given",
                      limit_exact: int = DEFAULT_EXACT_LIMIT,
                      max_k_cosets: int = DEFAULT_MAX_K_COSETS,
                      ell: Fraction | None = None) -> WitnessReport:
    """Search the sweeps of the ``J``-cover for a lift with ``chi(Y~) < 0``.

    ``K`` is the kernel of ``J -> J/[J,J]J^modulus``.  The balanced level is
    tried first, then every level in order.  The verdict is SUCCESS only
    with an explicit ``Y~`` built from the ``K``-cover.
    """
    if not is_normal(j_table):
        raise PreconditionError("J must be normal in G")
    base = presentation_complex(p)
    cover = cover_complex(base, j_table)
    cover.check()
    q = mod_n_abelianization(p, j_table, modulus)
    group = q.group
    notes: list[str] = []
    if ordering is None:
        order, source = default_ordering(cover, limit_exact)
    else:
        order = ordering if isinstance(ordering, VertexOrdering) else make_ordering(
            cover.one_skeleton(), ordering)
        source = ordering_source
    if ell is None:
        ell = Fraction(max(group.d, 1), j_table.index)
    k_cover = None
    k_index = j_table.index * group.order
    try:
        k_table = kernel_coset_table(j_table, group, q.schreier_map, p, max_cosets=max_k_cosets)
        k_cover = cover_complex(base, k_table)
    except ResourceLimitError as exc:
        notes.append(f"K-cover not built: {exc}; chi(Y~) reported from fibre counts only")
    report = WitnessReport(INCONCLUSIVE, j_table.index, k_index, group, modulus, order, source,
                           ell, None, notes=notes)
    if cover.vertex_count < 2:
        notes.append("the J-cover has one vertex, so there is no sweep level")
        return report
    results = scan_levels(p, cover, order, q, k_cover)
    report.levels = [r.record for r in results]
    report.balanced_level = find_balanced_level(results, ell, j_table.index)
    for r in results:
        r.record.balanced = r.record.level == report.balanced_level
    candidates = sorted(results, key=lambda r: (r.record.level != report.balanced_level,
                                                r.record.level))
    for r in candidates:
        if r.lift is not None and r.lift.chi < 0:
            assert r.lift.fibres_ok and r.lift.chi == r.lift.chi_from_fibres
            report.verdict = SUCCESS
            report.level, report.y, report.lift = r.record.level, r.y, r.lift
            report.path_check = path_valence_check(r.y, r.lift)
            break
    else:
        if report.balanced_level is None:
            notes.append("no balanced level")
        if k_cover is None and any(r.record.chi_from_fibres < 0 for r in results):
            notes.append("the fibre formula gives chi < 0 at some level; "
                         "raise the K-coset limit for an explicit witness")
        pick = next((r for r in results if r.record.level == report.balanced_level), results[0])
        report.level, report.y, report.lift = pick.record.level, pick.y, pick.lift
    return report
