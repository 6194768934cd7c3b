"""Todd-Coxeter coset enumeration and coset-table utilities.

Cosets are right cosets and generators act on the right: coset ``i`` times
letter ``x`` is ``t.act(i, x)``.  Coset 0 is the subgroup itself.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import PreconditionError, ResourceLimitError
from .presentation import Presentation, Word, free_reduce, inverse

DEFAULT_MAX_COSETS = 10**6


@dataclass(frozen=True)
class CosetTable:
    """Complete permutation action of the generators on the cosets."""

    generators: tuple[str, ...]
    action: tuple[tuple[int, ...], ...]
    subgroup_words: tuple[Word, ...] = ()

    @property
    def index(self) -> int:
        return len(self.action[0]) if self.action else 1

    @property
    def rank(self) -> int:
        return len(self.generators)

    @cached_property
    def inverse_action(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for perm in self.action:
            inv = [0] * len(perm)
            for i, j in enumerate(perm):
                inv[j] = i
            out.append(tuple(inv))
        return tuple(out)

    def act(self, i: int, x: int) -> int:
        if x > 0:
            return self.action[x - 1][i]
        return self.inverse_action[-x - 1][i]

    def word_action(self, w: Sequence[int], i: int) -> int:
        for x in w:
            i = self.act(i, x)
        return i

    def check(self, p: Presentation | None = None) -> None:
        """Raise ``AssertionError`` unless the table is a valid transitive action."""
        n = self.index
        for perm in self.action:
            assert sorted(perm) == list(range(n)), "generator column is not a permutation"
        seen = {0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for g in range(self.rank):
                for j in (self.action[g][i], self.inverse_action[g][i]):
                    if j not in seen:
                        seen.add(j)
                        queue.append(j)
        assert len(seen) == n, "action is not transitive"
        if p is not None:
            for r in p.relators:
                for i in range(n):
                    assert self.word_action(r, i) == i, "relator acts nontrivially"
        for w in self.subgroup_words:
            assert self.word_action(w, 0) == 0, "subgroup word moves coset 0"

    def to_json(self) -> dict:
        return {"index": self.index,
                "action": {name: list(self.action[g]) for g, name in enumerate(self.generators)}}


@dataclass(frozen=True)
class SchreierData:
    """Breadth-first spanning tree of the Schreier graph and its transversal.

    ``tree`` holds the Cayley edges ``(coset, generator)`` used by the tree,
    oriented as ``coset -> coset * generator`` regardless of the direction in
    which the search crossed them.
    """

    transversal: tuple[Word, ...]
    tree: frozenset[tuple[int, int]]
    non_tree: tuple[tuple[int, int], ...]


def word_action(t: CosetTable, w: Sequence[int], i: int) -> int:
    return t.word_action(w, i)


def _column(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


class _Enumerator:
    # HLT enumeration with coincidence processing, after Holt, Eick and
    # O'Brien, Handbook of Computational Group Theory, ch. 5.

    def __init__(self, ncols: int, max_cosets: int):
        self.ncols = ncols
        self.max_cosets = max_cosets
        self.table = [[-1] * ncols]
        self.parent = [0]
        self.live = 1

    def rep(self, c: int) -> int:
        parent = self.parent
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(self, c: int, x: int) -> None:
        if self.live >= self.max_cosets:
            raise ResourceLimitError(
                f"coset enumeration exceeded {self.max_cosets} live cosets "
                "(index may be infinite or the limit too small)")
        new = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(new)
        self.live += 1
        self.table[c][x] = new
        self.table[new][x ^ 1] = c

    def merge(self, a: int, b: int, queue: list) -> None:
        a, b = self.rep(a), self.rep(b)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            self.live -= 1
            queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        table = self.table
        queue: list[int] = []
        self.merge(a, b, queue)
        pos = 0
        while pos < len(queue):
            g = queue[pos]
            pos += 1
            for x in range(self.ncols):
                d = table[g][x]
                if d < 0:
                    continue
                table[d][x ^ 1] = -1
                mu, nu = self.rep(g), self.rep(d)
                if table[mu][x] >= 0:
                    self.merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] >= 0:
                    self.merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(self, a: int, w: Sequence[int]) -> None:
        table = self.table
        f, b = a, a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])


def todd_coxeter(p: Presentation, subgroup_words: Iterable[Sequence[int]] = (),
                 max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgroup_words``.

    The result is standardized: cosets are numbered in breadth-first order
    from coset 0, scanning generators in order and then their inverses, so
    equal inputs give identical tables.  Raises ``ResourceLimitError`` if more
    than ``max_cosets`` cosets are alive at once.
    """
    if max_cosets < 1:
        raise PreconditionError("max_cosets must be at least 1")
    k = p.rank
    subgroup_words = tuple(free_reduce(w) for w in subgroup_words)
    if k == 0:
        return CosetTable((), (), subgroup_words)
    en = _Enumerator(2 * k, max_cosets)
    relators = [[_column(x) for x in r] for r in p.relators if r]
    for w in subgroup_words:
        if w:
            en.scan_and_fill(0, [_column(x) for x in w])
    c = 0
    while c < len(en.table):
        if en.parent[c] == c:
            for r in relators:
                en.scan_and_fill(c, r)
                if en.parent[c] != c:
                    break
            if en.parent[c] == c:
                for x in range(2 * k):
                    if en.table[c][x] < 0:
                        en.define(c, x)
        c += 1

    # standardize by breadth-first renumbering from coset 0
    scan = [2 * g for g in range(k)] + [2 * g + 1 for g in range(k)]
    new = {0: 0}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in scan:
            d = en.rep(en.table[c][x])
            if d not in new:
                new[d] = len(new)
                queue.append(d)
    n = len(new)
    action = [[0] * n for _ in range(k)]
    for old, i in new.items():
        for g in range(k):
            action[g][i] = new[en.rep(en.table[old][2 * g])]
    return CosetTable(tuple(p.generators), tuple(tuple(a) for a in action), subgroup_words)


def schreier_data(t: CosetTable) -> SchreierData:
    """Breadth-first spanning tree rooted at coset 0.

    Generators are scanned in presentation order, then their inverses.
    """
    n, k = t.index, t.rank
    transversal: list[Word | None] = [None] * n
    transversal[0] = ()
    tree = set()
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for x in [*range(1, k + 1), *range(-1, -k - 1, -1)]:
            j = t.act(i, x)
            if transversal[j] is None:
                transversal[j] = transversal[i] + (x,)
                tree.add((i, x - 1) if x > 0 else (j, -x - 1))
                queue.append(j)
    non_tree = tuple((i, g) for i in range(n) for g in range(k) if (i, g) not in tree)
    return SchreierData(tuple(transversal), frozenset(tree), non_tree)


def schreier_generator(t: CosetTable, sd: SchreierData, i: int, g: int) -> Word:
    """The word ``t_i * s * t_{i s}^-1`` for the Cayley edge ``(i, g)``."""
    j = t.action[g][i]
    return free_reduce(sd.transversal[i] + (g + 1,) + inverse(sd.transversal[j]))


def is_normal(t: CosetTable, sd: SchreierData | None = None) -> bool:
    """True iff every generator conjugate of every Schreier generator fixes coset 0."""
    if t.index <= 2:
        return True
    sd = sd or schreier_data(t)
    for i, g in sd.non_tree:
        w = schreier_generator(t, sd, i, g)
        for s in range(1, t.rank + 1):
            c = t.act(0, -s)
            c = t.word_action(w, c)
            if t.act(c, s) != 0:
                return False
    return True


def table_from_json(data: dict) -> CosetTable:
    names = tuple(data["action"])
    action = tuple(tuple(int(v) for v in data["action"][name]) for name in names)
    t = CosetTable(names, action)
    if t.index != data["index"]:
        raise PreconditionError("index does not match the action arrays")
    t.check()
    return t
