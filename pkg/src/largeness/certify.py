"""Exact certificate evaluation and chain diagnostics.

Every pass/fail decision here compares exact integers or fractions.
Logarithms only appear in the diagnostic rows of ``chain_diagnostics``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from .abelian import FiniteAbelianGroup, cokernel, integer_root
from .coset_enum import CosetTable
from .errors import PreconditionError
from .presentation import Presentation
from .rewriting import abelianized_matrix, reidemeister_schreier

LOG_PRECISION = 30


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


@dataclass(frozen=True)
class CertificateReport:
    """Evaluation of ``d(J/K) > max(A, B)`` for one triple ``H >= J >= K``.

    ``first_term`` is ``48 L |S| / floor(([H:J]-1)^(1/([G:H]|S|))) + 16 L |S| / [H:J]``
    (``None`` when the floor is zero) and ``second_term`` is ``16 |S| + 8 L^2``.
    """

    S_size: int
    L: int
    idx_H: int
    idx_HJ: int
    d_JK: int
    root: int
    first_term: Fraction | None
    second_term: Fraction
    threshold: Fraction | None
    passed: bool
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        def render(x):
            if x is None:
                return None
            return {"exact": fraction_str(x), "decimal": decimal_str(x)}

        return {
            "inputs": {"S": self.S_size, "L": self.L, "index_G_H": self.idx_H,
                       "index_H_J": self.idx_HJ, "d_J_K": self.d_JK},
            "floor_root": self.root,
            "first_term": render(self.first_term),
            "second_term": render(self.second_term),
            "threshold": render(self.threshold),
            "passed": self.passed,
            "notes": list(self.notes),
        }


def theorem42_check(S_size: int, L: int, idx_H: int, idx_HJ: int, d_JK: int) -> CertificateReport:
    for name, value in (("S_size", S_size), ("L", L), ("idx_H", idx_H),
                        ("idx_HJ", idx_HJ), ("d_JK", d_JK)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise PreconditionError(f"{name} must be a natural number")
    if L < 1:
        raise PreconditionError("the relator length sum L must be at least one")
    if S_size < 1 or idx_H < 1:
        raise PreconditionError("need |S| >= 1 and [G:H] >= 1")
    if idx_HJ < 2:
        raise PreconditionError("need [H:J] >= 2")
    root = integer_root(idx_HJ - 1, idx_H * S_size)
    second = Fraction(16 * S_size + 8 * L * L)
    notes = []
    if root == 0:
        first, threshold, passed = None, None, False
        notes.append("floor is zero: first term vacuous, certificate fails closed")
    else:
        first = Fraction(48 * L * S_size, root) + Fraction(16 * L * S_size, idx_HJ)
        threshold = max(first, second)
        passed = d_JK > threshold
    return CertificateReport(S_size, L, idx_H, idx_HJ, d_JK, root, first, second,
                             threshold, passed, tuple(notes))


@dataclass(frozen=True)
class Prop61Report:
    index: int
    abelianization: FiniteAbelianGroup
    max_relator_length: int
    generator_count: int
    infinite: bool
    bound: int | None            # c ** (d [G:H])
    sharp_bound: int | None      # c ** ((d-1) [G:H] + 1)
    holds: bool

    def to_json(self) -> dict:
        return {"index": self.index, "abelianization": self.abelianization.to_json(),
                "c": self.max_relator_length, "d": self.generator_count,
                "infinite": self.infinite,
                "bound": None if self.bound is None else str(self.bound),
                "sharp_bound": None if self.sharp_bound is None else str(self.sharp_bound),
                "holds": self.holds}


def prop61_check(p: Presentation, t: CosetTable) -> Prop61Report:
    """Either ``H/H'`` is infinite or ``|H/H'| <= c^(d [G:H])``."""
    sp = reidemeister_schreier(p, t)
    ab = cokernel(abelianized_matrix(sp))
    c, d, n = p.max_relator_length, p.rank, t.index
    if not ab.is_finite:
        return Prop61Report(n, ab, c, d, True, None, None, True)
    bound = c ** (d * n)
    sharp = c ** ((d - 1) * n + 1)
    holds = ab.order <= bound
    if not holds:
        raise AssertionError(f"|H/H'| = {ab.order} exceeds c^(d[G:H]) = {bound}")
    return Prop61Report(n, ab, c, d, False, bound, sharp, holds)


@dataclass(frozen=True)
class DiagnosticRow:
    level: int
    index: int
    quotient_order: int
    d: int
    log_ratio: Decimal
    d_ratio: Fraction

    @property
    def log_ratio_str(self) -> str:
        return str(self.log_ratio)


@dataclass
class ChainDiagnostics:
    rows: list[DiagnosticRow] = field(default_factory=list)
    precision: int = LOG_PRECISION

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    @property
    def log_ratio_growing(self) -> bool:
        return all(a.log_ratio < b.log_ratio for a, b in zip(self.rows, self.rows[1:]))

    @property
    def d_ratio_min(self) -> Fraction | None:
        return min((r.d_ratio for r in self.rows), default=None)

    @property
    def d_ratio_bounded_below(self) -> bool:
        return bool(self.rows) and self.d_ratio_min > 0

    def to_json(self) -> dict:
        return {
            "log_precision": self.precision,
            "rows": [{"level": r.level, "index": r.index, "quotient_order": str(r.quotient_order),
                      "d": r.d, "log_ratio": str(r.log_ratio), "d_ratio": fraction_str(r.d_ratio)}
                     for r in self.rows],
            "log_ratio_growing": self.log_ratio_growing,
            "d_ratio_min": None if self.d_ratio_min is None else fraction_str(self.d_ratio_min),
            "d_ratio_bounded_below": self.d_ratio_bounded_below,
        }


def chain_diagnostics(chain, precision: int = LOG_PRECISION) -> ChainDiagnostics:
    """Per level ``(i, [G:G_i], log|G_i/G_i+1| / [G:G_i], d(G_i/G_i+1) / [G:G_i])``.

    Trivial (no-op) steps are skipped.  A chain with fewer than two levels
    yields no rows.
    """
    out = ChainDiagnostics(precision=precision)
    if len(chain) < 2:
        return out
    for lv in chain:
        if lv.quotient is None or lv.noop:
            continue
        g = lv.quotient.group
        with localcontext() as ctx:
            ctx.prec = precision
            log_ratio = Decimal(g.order).ln() / Decimal(lv.index)
        out.rows.append(DiagnosticRow(lv.level, lv.index, g.order, g.d, log_ratio,
                                      Fraction(g.d, lv.index)))
    return out


@dataclass(frozen=True)
class DeficiencyRow:
    level: int
    index: int
    d: int
    lower_bound: int
    holds: bool


def deficiency_bounds(chain) -> list[DeficiencyRow]:
    """``d(G_i/G_i+1) >= (|X| - 1 - |R|)[G:G_i] + 1`` at every non-trivial level."""
    p = chain.presentation
    deficiency = p.rank - len(p.relators)
    rows = []
    for lv in chain:
        if lv.quotient is None or lv.modulus == 1:
            continue
        bound = (deficiency - 1) * lv.index + 1
        d = lv.quotient.group.d
        rows.append(DeficiencyRow(lv.level, lv.index, d, bound, d >= bound))
    return rows


def log_lower_bound_holds(row: DiagnosticRow, modulus: int) -> bool:
    """``log|Q| / [G:G_i] >= log n`` checked exactly as ``|Q| >= n^[G:G_i]``."""
    return row.quotient_order >= modulus ** row.index


def prop61_constant(p: Presentation) -> int:
    return p.max_relator_length ** p.rank

