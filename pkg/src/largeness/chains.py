"""Normal subgroup chains ``G_{i+1} = [G_i, G_i] G_i^n`` and their kernel tables.

Cosets of a kernel table built from ``(H-table, A)`` are numbered
``i * |A| + A.index_of(a)`` for the pair ``(H-coset i, a in A)``, so the
projection to ``H`` is ``c // |A|``.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .abelian import (FiniteAbelianGroup, IntMatrix, Vector, abelian_quotient)
from .coset_enum import (DEFAULT_MAX_COSETS, CosetTable, SchreierData, is_normal,
                         schreier_data, todd_coxeter)
from .errors import LargenessError, PreconditionError, ResourceLimitError
from .presentation import Presentation, Word, proper_power
from .rewriting import (SubgroupPresentation, abelianized_matrix, exponent_sums,
                        reidemeister_schreier, rewrite_from)

log = logging.getLogger(__name__)


class InconsistentLabellingError(LargenessError):
    """An edge labelling does not kill some relator; indicates an upstream bug."""


@dataclass(frozen=True)
class ModularAbelianization:
    """``H / [H,H] H^n`` with the image of every Schreier generator of ``H``."""

    group: FiniteAbelianGroup
    schreier_map: dict[tuple[int, int], Vector]
    subgroup: SubgroupPresentation
    modulus: int

    def edge_label(self, i: int, g: int) -> Vector:
        """Image in the quotient of the Cayley edge ``(i, g)``; zero on tree edges."""
        return self.schreier_map.get((i, g), self.group.zero())


def mod_n_abelianization(p: Presentation, t: CosetTable, n: int,
                         sd: SchreierData | None = None) -> ModularAbelianization:
    if n < 1:
        raise PreconditionError("modulus must be positive")
    sp = reidemeister_schreier(p, t, sd)
    quotient = abelian_quotient(abelianized_matrix(sp), n)
    return ModularAbelianization(quotient.group, dict(zip(sp.generators, quotient.images)), sp, n)


def kernel_coset_table(t: CosetTable, A: FiniteAbelianGroup,
                       schreier_map: dict[tuple[int, int], Vector],
                       p: Presentation | None = None,
                       max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Coset table of the kernel of ``H -> A`` acting on pairs ``(i, a)``.

    ``(i, a) * s = (i * s, a + v(i, s))`` where ``v`` is ``schreier_map`` on
    non-tree edges and zero on tree edges.  When ``p`` is given, every
    relator is checked to act trivially.
    """
    if not A.is_finite:
        raise PreconditionError("kernel tables need a finite quotient")
    size = A.order
    if t.index * size > max_cosets:
        total = t.index * size
        shown = str(total) if total < 10**12 else f"about 10^{len(str(total)) - 1}"
        raise ResourceLimitError(f"kernel table would have {shown} cosets (limit {max_cosets})")
    zero = A.zero()
    elements = list(A.elements())
    action = []
    for g in range(t.rank):
        col = []
        for i in range(t.index):
            v = schreier_map.get((i, g), zero)
            j = t.action[g][i]
            base = j * size
            if any(v):
                col.extend(base + A.index_of([x + y for x, y in zip(a, v)]) for a in elements)
            else:
                col.extend(range(base, base + size))
        action.append(tuple(col))
    k = CosetTable(t.generators, tuple(action))
    if p is not None:
        for r in p.relators:
            for c in range(k.index):
                if k.word_action(r, c) != c:
                    raise InconsistentLabellingError(
                        f"relator {p.format(r)} moves coset {c} of the kernel table")
    return k


@dataclass
class ChainLevel:
    """Level ``i`` of a chain: the table of ``G_i`` and the step to ``G_{i+1}``."""

    level: int
    table: CosetTable
    schreier: SchreierData
    modulus: int | None = None
    quotient: ModularAbelianization | None = None

    @property
    def index(self) -> int:
        return self.table.index

    @property
    def noop(self) -> bool:
        """True when the step to the next level is trivial (``n = 1``)."""
        return self.quotient is not None and self.quotient.group.order == 1

    def quotient_json(self) -> dict | None:
        if self.quotient is None:
            return None
        return self.quotient.group.to_json()


@dataclass
class Chain:
    presentation: Presentation
    rule: str
    levels: list[ChainLevel] = field(default_factory=list)
    truncated: str | None = None

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    def __iter__(self):
        return iter(self.levels)

    def to_json(self) -> dict:
        from .certify import chain_diagnostics

        diag = {row.level: row for row in chain_diagnostics(self)}
        out = []
        for lv in self.levels:
            entry = {"level": lv.level, "index": lv.index, "modulus": lv.modulus}
            if lv.quotient is not None:
                g = lv.quotient.group
                entry.update(invariant_factors=list(g.invariant_factors), d=g.d,
                             order=str(g.order), noop=lv.noop)
                row = diag.get(lv.level)
                if row is not None:
                    entry.update(log_ratio=row.log_ratio_str, d_ratio=str(row.d_ratio))
            out.append(entry)
        return {"presentation": str(self.presentation), "rule": self.rule,
                "levels": out, "truncated": self.truncated}


def primes_above(q: int) -> Iterator[int]:
    n = q + 1
    while True:
        if n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1)):
            yield n
        n += 1


def exponent_sequence(rule: str) -> Iterator[int]:
    """Exponents ``n_1, n_2, ...``: ``derived_power`` gives ``n_i = i``;
    ``primes_above:q`` gives the i-th prime bigger than ``q``."""
    if rule == "derived_power":
        return itertools.count(1)
    name, _, arg = rule.partition(":")
    if name == "primes_above" and arg.isdigit():
        return primes_above(int(arg))
    raise PreconditionError(f"unknown exponent rule {rule!r}")


def build_chain(p: Presentation, depth: int, rule: str = "derived_power",
                max_cosets: int = DEFAULT_MAX_COSETS) -> Chain:
    """Levels ``G_1 = G, ..., G_depth`` with every quotient ``G_i / G_{i+1}``.

    If a kernel table exceeds ``max_cosets`` the chain stops early and
    ``truncated`` records why.
    """
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    chain = Chain(p, rule)
    exponents = exponent_sequence(rule)
    table = todd_coxeter(p, [(g + 1,) for g in range(p.rank)], max_cosets)
    for i in range(1, depth + 1):
        sd = schreier_data(table)
        n = next(exponents)
        level = ChainLevel(i, table, sd, n)
        level.quotient = mod_n_abelianization(p, table, n, sd)
        chain.levels.append(level)
        log.debug("level %d: index %d, quotient %s", i, table.index, level.quotient.group)
        if i == depth:
            break
        if level.noop:
            continue
        try:
            table = kernel_coset_table(table, level.quotient.group, level.quotient.schreier_map,
                                       max_cosets=max_cosets)
        except ResourceLimitError as exc:
            chain.truncated = f"level {i + 1}: {exc}"
            break
    return chain


def check_level(p: Presentation, level: ChainLevel) -> None:
    """Assert normality and trivial relator action for a level's table."""
    level.table.check(p)
    assert is_normal(level.table, level.schreier), f"level {level.level} is not normal"


def find_power_relator(p: Presentation) -> tuple[int, Word, int] | None:
    """First relator that is a proper power ``w^q``, as ``(index, w, q)`` with ``q`` prime.

    ``w`` absorbs the cofactor, so ``relator == w * q`` exactly.
    """
    for idx, r in enumerate(p.relators):
        root, k = proper_power(r)
        if k >= 2:
            q = next(d for d in range(2, k + 1) if k % d == 0)
            return idx, root * (k // q), q
    return None


@dataclass(frozen=True)
class PowerBranch:
    """Which case of the proper-power argument applies at one level."""

    level: int
    in_subgroup: bool
    order: int | float | None
    branch: str


def power_relator_branch(p: Presentation, level: ChainLevel, relator_index: int,
                         root: Word) -> PowerBranch:
    """Order of the image of ``root`` in the abelianized level subgroup with the
    lifts of the power relator left out.

    This decides only the order in that abelian group, not in the group itself.
    """
    sp = level.quotient.subgroup if level.quotient else reidemeister_schreier(
        p, level.table, level.schreier)
    rw, end = rewrite_from(sp, root, 0)
    if end != 0:
        return PowerBranch(level.level, False, None, "root not in subgroup")
    nr = len(p.relators)
    rows = [exponent_sums(r, len(sp.generators)) for j, r in enumerate(sp.relators)
            if j % nr != relator_index]
    q = abelian_quotient(IntMatrix.from_rows(rows, cols=len(sp.generators)))
    img = [0] * q.group.dimension
    for x in rw:
        v = q.images[abs(x) - 1]
        sign = 1 if x > 0 else -1
        img = [a + sign * b for a, b in zip(img, v)]
    order = q.group.element_order(q.group.reduce(img))
    if order == math.inf:
        branch = "infinite order: large by the cited Baumslag-Pride lemma (not constructed)"
    else:
        branch = "finite order: rank bound d(G_i/G_i+1) >= [G:G_i] + 1 applies"
    return PowerBranch(level.level, True, order, branch)
