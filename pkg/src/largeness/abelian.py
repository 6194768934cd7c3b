"""Exact integer linear algebra and finitely generated abelian groups.

Everything here is exact: Python ints for matrix entries and
``fractions.Fraction`` for character arguments.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import PreconditionError, ResourceLimitError

DEFAULT_CHARACTER_BOUND = 10**6

Vector = tuple[int, ...]


def integer_root(x: int, k: int) -> int:
    """Largest ``m >= 0`` with ``m**k <= x``."""
    if x < 0 or k < 1:
        raise PreconditionError("integer_root needs x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    lo, hi = 1, 1 << (x.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise PreconditionError("matrix dimensions do not match entries")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        if cols is None:
            if not rows:
                raise PreconditionError("column count needed for a matrix with no rows")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple(tuple(diag[i] if i == j and i < len(diag) else 0
                                           for j in range(cols)) for i in range(rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise PreconditionError("incompatible matrix shapes")
        cols_t = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols_t) for row in self.entries))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def diagonal_entries(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]


class SmithForm(NamedTuple):
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix


def _snf(A: list[list[int]], nrows: int, ncols: int, want_u: bool = True, want_v: bool = True):
    # Smallest-absolute-value pivot; clear the pivot column, then the pivot
    # row; repeat until both are clear and the pivot divides the remainder.
    U = [[int(i == j) for j in range(nrows)] for i in range(nrows)] if want_u else None
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)] if want_v else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        a_src, a_dst = A[src], A[dst]
        for j in range(ncols):
            if a_src[j]:
                a_dst[j] += q * a_src[j]
        if U is not None:
            u_src, u_dst = U[src], U[dst]
            for j in range(nrows):
                if u_src[j]:
                    u_dst[j] += q * u_src[j]

    def add_col(dst, src, q):
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            row = A[i]
            for j in range(t, ncols):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, ncols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                cand = [(abs(A[i][t]), 0, i) for i in range(t + 1, nrows) if A[i][t]]
                cand += [(abs(A[t][j]), 1, j) for j in range(t + 1, ncols) if A[t][j]]
                _, kind, idx = min(cand)
                if kind == 0:
                    swap_rows(idx, t)
                else:
                    swap_cols(idx, t)
                continue
            bad = next((i for i in range(t + 1, nrows)
                        if any(A[i][j] % p for j in range(t + 1, ncols))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        t += 1
    return A, U, V


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Return ``(D, U, V)`` with ``U @ m @ V == D`` and ``d1 | d2 | ...`` on the diagonal."""
    A, U, V = _snf([list(r) for r in m.entries], m.rows, m.cols)
    return SmithForm(IntMatrix.from_rows(A, m.cols),
                     IntMatrix.from_rows(U, m.rows), IntMatrix.from_rows(V, m.cols))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``Z/d1 + ... + Z/dk + Z^free_rank`` with ``d1 | d2 | ... | dk`` and each ``dj >= 2``.

    Elements are integer vectors of length ``k + free_rank``.
    """

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in inv):
            raise PreconditionError("invariant factors must be at least 2")
        if any(b % a for a, b in zip(inv, inv[1:])):
            raise PreconditionError("invariant factors must form a divisibility chain")
        if self.free_rank < 0:
            raise PreconditionError("free rank must be non-negative")
        object.__setattr__(self, "invariant_factors", inv)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | float:
        """Group order; ``math.inf`` when the free rank is positive."""
        return math.prod(self.invariant_factors) if self.is_finite else math.inf

    @property
    def d(self) -> int:
        """Minimal number of generators."""
        return len(self.invariant_factors) + self.free_rank

    @property
    def dimension(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    def zero(self) -> Vector:
        return (0,) * self.dimension

    def reduce(self, v: Sequence[int]) -> Vector:
        inv = self.invariant_factors
        return tuple(x % inv[j] if j < len(inv) else x for j, x in enumerate(v))

    def add(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return self.reduce([a + b for a, b in zip(u, v)])

    def _require_finite(self):
        if not self.is_finite:
            raise PreconditionError("operation needs a finite abelian group")

    def index_of(self, v: Sequence[int]) -> int:
        """Mixed-radix position of ``v`` in lexicographic element order."""
        self._require_finite()
        idx = 0
        for x, d in zip(v, self.invariant_factors):
            idx = idx * d + x % d
        return idx

    def element(self, idx: int) -> Vector:
        self._require_finite()
        out = []
        for d in reversed(self.invariant_factors):
            idx, x = divmod(idx, d)
            out.append(x)
        return tuple(reversed(out))

    def elements(self) -> Iterator[Vector]:
        self._require_finite()
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def element_order(self, v: Sequence[int]) -> int | float:
        inv = self.invariant_factors
        if any(x for x in v[len(inv):]):
            return math.inf
        return math.lcm(1, *(d // math.gcd(d, x) for d, x in zip(inv, v)))

    def standard_generators(self) -> list[Vector]:
        n = self.dimension
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank,
                "d": self.d, "order": str(self.order) if self.is_finite else "infinite"}

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "1"


class AbelianQuotient(NamedTuple):
    """A cokernel together with the images of the standard basis vectors."""

    group: FiniteAbelianGroup
    images: tuple[Vector, ...]


def abelian_quotient(m: IntMatrix, modulus: int | None = None) -> AbelianQuotient:
    """``Z^cols / (row space of m [+ modulus * Z^cols])`` and the image of each basis vector."""
    if modulus is not None and modulus < 1:
        raise PreconditionError("modulus must be positive")
    entries = [list(r) for r in m.entries]
    if modulus is not None:
        entries = [[v % modulus for v in r] for r in entries]
    D, _, V = _snf(entries, m.rows, m.cols, want_u=False)
    diag = [D[i][i] for i in range(min(m.rows, m.cols))] + [0] * max(0, m.cols - m.rows)
    keep, moduli = [], []
    for j, d in enumerate(diag):
        q = (math.gcd(d, modulus) if modulus is not None else d)
        if q == 1:
            continue
        keep.append(j)
        moduli.append(q)
    finite = [(j, q) for j, q in zip(keep, moduli) if q != 0]
    free = [j for j, q in zip(keep, moduli) if q == 0]
    group = FiniteAbelianGroup(tuple(q for _, q in finite), len(free))
    images = []
    for row in V:
        images.append(tuple([row[j] % q for j, q in finite] + [row[j] for j in free]))
    return AbelianQuotient(group, tuple(images))


def cokernel(m: IntMatrix, modulus: int | None = None) -> FiniteAbelianGroup:
    return abelian_quotient(m, modulus).group


def subgroup_generated(A: FiniteAbelianGroup, gens: Iterable[Sequence[int]]) -> FiniteAbelianGroup:
    """Invariant factors of the subgroup of finite ``A`` generated by ``gens``."""
    A._require_finite()
    gens = [A.reduce(g) for g in gens]
    gens = [g for g in gens if any(g)]
    if not gens:
        return FiniteAbelianGroup()
    k = len(A.invariant_factors)
    m = len(gens)
    # left kernel of [gens; diag(A)] projected onto the gens coordinates
    # is the relation module of the subgroup
    stacked = [list(g) for g in gens] + [[d if i == j else 0 for j in range(k)]
                                         for i, d in enumerate(A.invariant_factors)]
    S, U, _ = _snf(stacked, m + k, k, want_v=False)
    rank = sum(1 for i in range(min(m + k, k)) if S[i][i])
    relations = [row[:m] for row in U[rank:]]
    return cokernel(IntMatrix.from_rows(relations, cols=m))


@dataclass(frozen=True)
class Character:
    """Homomorphism ``A -> C^x`` sending standard generator j to ``exp(2 pi i k_j / d_j)``."""

    group: FiniteAbelianGroup
    components: Vector

    def is_trivial(self) -> bool:
        return not any(self.components)


def characters(A: FiniteAbelianGroup, bound: int = DEFAULT_CHARACTER_BOUND) -> Iterator[Character]:
    """All ``|A|`` characters, trivial first, then lexicographic."""
    A._require_finite()
    if A.order > bound:
        raise ResourceLimitError(f"group of order {A.order} exceeds the character bound {bound}")
    for comps in A.elements():
        yield Character(A, comps)


def wrap_half(x: Fraction) -> Fraction:
    """Reduce mod 1 into ``(-1/2, 1/2]``."""
    x = x - math.floor(x)
    return x - 1 if x > Fraction(1, 2) else x


def character_value_arg(chi: Character, v: Sequence[int]) -> Fraction:
    """``arg(chi(v)) / 2 pi`` as an exact rational in ``(-1/2, 1/2]``."""
    total = sum((Fraction(k * x, d) for k, x, d in
                 zip(chi.components, v, chi.group.invariant_factors)), Fraction(0))
    return wrap_half(total)
