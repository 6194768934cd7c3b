"""Reidemeister-Schreier rewriting for finite-index subgroups."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .abelian import IntMatrix
from .coset_enum import CosetTable, SchreierData, schreier_data, schreier_generator
from .errors import PreconditionError
from .presentation import Presentation, Word, free_reduce


class NotInSubgroupError(PreconditionError):
    pass


@dataclass(frozen=True)
class SubgroupPresentation:
    """Presentation of the subgroup on the Schreier generators.

    Generator ``j`` of the subgroup is the non-tree Cayley edge
    ``generators[j] = (coset, gen)``; words over these use the same signed
    1-based letter encoding as parent words.  Relator ``i * |R| + r`` is the
    rewrite of ``t_i * R[r] * t_i^-1``.
    """

    generators: tuple[tuple[int, int], ...]
    relators: tuple[Word, ...]
    presentation: Presentation
    table: CosetTable
    schreier: SchreierData

    @cached_property
    def _column(self) -> dict[tuple[int, int], int]:
        return {edge: j for j, edge in enumerate(self.generators)}

    def letter(self, i: int, g: int) -> int | None:
        """Subgroup letter of the Cayley edge ``(i, g)``; None for tree edges."""
        j = self._column.get((i, g))
        return None if j is None else j + 1

    def generator_word(self, j: int) -> Word:
        i, g = self.generators[j]
        return schreier_generator(self.table, self.schreier, i, g)


def rewrite_from(sp: SubgroupPresentation, w: Sequence[int], start: int) -> tuple[Word, int]:
    """Rewrite ``w`` read from coset ``start``; returns (subgroup word, end coset).

    The result is the rewrite of ``t_start * w * t_end^-1``.
    """
    t = sp.table
    out = []
    c = start
    for x in w:
        if x > 0:
            s = sp.letter(c, x - 1)
            if s is not None:
                out.append(s)
            c = t.action[x - 1][c]
        else:
            d = t.inverse_action[-x - 1][c]
            s = sp.letter(d, -x - 1)
            if s is not None:
                out.append(-s)
            c = d
    return free_reduce(out), c


def reidemeister_schreier(p: Presentation, t: CosetTable,
                          sd: SchreierData | None = None) -> SubgroupPresentation:
    sd = sd or schreier_data(t)
    sp = SubgroupPresentation(sd.non_tree, (), p, t, sd)
    relators = []
    for i in range(t.index):
        for r in p.relators:
            rw, end = rewrite_from(sp, r, i)
            if end != i:
                raise PreconditionError("relator does not act trivially on the coset table")
            relators.append(rw)
    object.__setattr__(sp, "relators", tuple(relators))
    return sp


def rewrite_in_subgroup(sp: SubgroupPresentation, w: Sequence[int]) -> Word:
    rw, end = rewrite_from(sp, w, 0)
    if end != 0:
        raise NotInSubgroupError("word does not lie in the subgroup (it moves coset 0)")
    return rw


def exponent_sums(w: Sequence[int], n: int) -> list[int]:
    row = [0] * n
    for x in w:
        row[abs(x) - 1] += 1 if x > 0 else -1
    return row


def abelianized_matrix(sp: SubgroupPresentation) -> IntMatrix:
    """One row per subgroup relator, one column per Schreier generator."""
    n = len(sp.generators)
    return IntMatrix.from_rows([exponent_sums(r, n) for r in sp.relators], cols=n)
