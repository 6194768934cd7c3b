"""Free-group words and finite presentations.

A word is a tuple of nonzero ints: generator ``g`` (0-based) is the letter
``g + 1`` and its inverse is ``-(g + 1)``.  In text, lowercase letters are
generators and uppercase letters their inverses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import PreconditionError

Word = tuple[int, ...]


class PresentationSyntaxError(PreconditionError):
    """Malformed presentation text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = list(free_reduce(w))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def proper_power(w: Sequence[int]) -> tuple[Word, int]:
    """Return ``(root, k)`` with ``w == root * k`` and ``k`` maximal."""
    w = tuple(w)
    n = len(w)
    for size in range(1, n + 1):
        if n % size == 0 and w[:size] * (n // size) == w:
            return w[:size], n // size
    return w, 1


def parse_word(text: str, generators: Sequence[str]) -> Word:
    index = {name: i for i, name in enumerate(generators)}
    letters = []
    for pos, ch in enumerate(text):
        if ch in index:
            letters.append(index[ch] + 1)
        elif ch.lower() in index and ch.isupper():
            letters.append(-(index[ch.lower()] + 1))
        else:
            err = PresentationSyntaxError(f"unknown generator letter {ch!r}", column=pos + 1)
            err.offset = pos
            raise err
    return tuple(letters)


def format_word(w: Sequence[int], generators: Sequence[str]) -> str:
    return "".join(generators[x - 1] if x > 0 else generators[-x - 1].upper() for x in w)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation ``<S | R>`` with relators kept freely reduced."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    # indices of relators that reduced to the empty word
    empty_relators: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise PreconditionError("generator names must be distinct")
        rels = tuple(free_reduce(r) for r in self.relators)
        for r in rels:
            if any(x == 0 or abs(x) > len(gens) for x in r):
                raise PreconditionError("relator refers to an unknown generator")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)
        object.__setattr__(self, "empty_relators", tuple(i for i, r in enumerate(rels) if not r))

    @classmethod
    def build(cls, generators: str, *relators: str) -> "Presentation":
        """Shorthand: ``Presentation.build("ab", "aa", "abAB")``."""
        gens = tuple(generators)
        return cls(gens, tuple(parse_word(r, gens) for r in relators))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def relator_length_sum(self) -> int:
        return sum(len(r) for r in self.relators)

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format(self, w: Sequence[int]) -> str:
        return format_word(w, self.generators)

    def __str__(self):
        rels = ", ".join(self.format(r) or "1" for r in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"


def parse_presentation(text: str) -> Presentation:
    """Parse the ``gens:`` / ``rel:`` line format.

    ``#`` starts a comment.  Exactly one ``gens:`` line is required; names are
    single lowercase ASCII letters.
    """
    gens: tuple[str, ...] | None = None
    rel_lines: list[tuple[int, int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise PresentationSyntaxError("expected 'gens:' or 'rel:'", lineno, 1)
        col = raw.index(":") + 2
        if key == "gens":
            if gens is not None:
                raise PresentationSyntaxError("duplicate 'gens:' line", lineno, 1)
            names = rest.split()
            if not names:
                raise PresentationSyntaxError("empty generator list", lineno, col)
            for name in names:
                if len(name) != 1 or not ("a" <= name <= "z"):
                    raise PresentationSyntaxError(
                        f"generator names must be single lowercase letters, got {name!r}", lineno, col)
            if len(set(names)) != len(names):
                raise PresentationSyntaxError("generator names must be distinct", lineno, col)
            gens = tuple(names)
        elif key == "rel":
            body = rest.strip()
            offset = col + (len(rest) - len(rest.lstrip()))
            if body and len(body.split()) != 1:
                raise PresentationSyntaxError("relator must be a single word", lineno, offset)
            rel_lines.append((lineno, offset, body))
        else:
            raise PresentationSyntaxError(f"unknown key {key!r}", lineno, 1)
    if gens is None:
        raise PresentationSyntaxError("missing 'gens:' line")
    relators = []
    for lineno, offset, body in rel_lines:
        try:
            relators.append(parse_word(body, gens))
        except PresentationSyntaxError as exc:
            raise PresentationSyntaxError(
                str(exc), lineno, offset + exc.offset) from None
    return Presentation(gens, tuple(relators))


def format_presentation(p: Presentation) -> str:
    lines = ["gens: " + " ".join(p.generators)]
    lines += ["rel: " + p.format(r) for r in p.relators]
    return "\n".join(lines) + "\n"
