from __future__ import annotations

import pytest

from largeness.presentation import parse_presentation

# small presentations used across modules; finite ones carry their order
CORPUS = {
    "free2": ("gens: a b\n", None),
    "cyclic3": ("gens: a\nrel: aaa\n", 3),
    "cyclic4": ("gens: a\nrel: aaaa\n", 4),
    "cyclic6": ("gens: a\nrel: aaaaaa\n", 6),
    "cyclic9": ("gens: a\nrel: aaaaaaaaa\n", 9),
    "klein": ("gens: a b\nrel: aa\nrel: bb\nrel: abab\n", 4),
    "s3": ("gens: a b\nrel: aa\nrel: bbb\nrel: abab\n", 6),
    "z2xz4": ("gens: a b\nrel: aa\nrel: bbbb\nrel: abAB\n", 8),
    "z3xz3": ("gens: a b\nrel: aaa\nrel: bbb\nrel: abAB\n", 9),
    "dihedral4": ("gens: a b\nrel: aaaa\nrel: bb\nrel: abab\n", 8),
    "quaternion": ("gens: a b\nrel: aaaa\nrel: aaBB\nrel: abaB\n", 8),
    "a4": ("gens: a b\nrel: aa\nrel: bbb\nrel: ababab\n", 12),
    "torus": ("gens: a b\nrel: abAB\n", None),
    "genus2": ("gens: a b c d\nrel: abABcdCD\n", None),
}


def load(name: str):
    return parse_presentation(CORPUS[name][0])


@pytest.fixture
def free2():
    return load("free2")


@pytest.fixture
def cyclic3():
    return load("cyclic3")


# PASS/FAIL lines from tests/test_acceptance.py, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
