"""Shared catalogs and hypothesis strategies."""

from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import strategies as st

from zariski_groups.abelian import FgAbelianGroup
from zariski_groups.constructions import semidirect_involution
from zariski_groups.equations import ElementaryEquation
from zariski_groups.groups import (
    abelian_finite,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    quaternion,
    symmetric,
)


def finite_catalog(max_order: int = 24) -> dict:
    """Named finite groups up to ``max_order``."""
    cat = {f"Z{n}": lambda n=n: cyclic(n) for n in range(1, max_order + 1)}
    cat.update({f"D{n}": lambda n=n: dihedral(n) for n in range(2, max_order // 2 + 1)})
    cat.update({
        "S3": lambda: symmetric(3),
        "S4": lambda: symmetric(4),
        "A4": lambda: alternating(4),
        "Q8": quaternion,
        "Z2xZ2": lambda: abelian_finite([2, 2]),
        "Z2xZ4": lambda: abelian_finite([2, 4]),
        "Z2^3": lambda: abelian_finite([2, 2, 2]),
        "Z3xZ3": lambda: abelian_finite([3, 3]),
        "Z2xZ6": lambda: abelian_finite([2, 6]),
        "Z2xS3": lambda: direct_product(cyclic(2), symmetric(3)),
        "Z2xD4": lambda: direct_product(cyclic(2), dihedral(4)),
        "Z2xQ8": lambda: direct_product(cyclic(2), quaternion()),
        "Z3xS3": lambda: direct_product(cyclic(3), symmetric(3)),
        "Z4:neg": lambda: semidirect_involution(cyclic(4), [0, 3, 2, 1]),
        "Z3xQ8": lambda: direct_product(cyclic(3), quaternion()),
    })
    out = {}
    for name, make in cat.items():
        G = make()
        if G.order <= max_order:
            out[name] = G
    return out


def abelian_catalog(max_order: int = 200) -> list[FgAbelianGroup]:
    """Finite groups Z/n and Z/a + Z/b (a | b) of order <= max_order."""
    groups = [FgAbelianGroup(0, (n,)) for n in range(2, max_order + 1)]
    for a in range(2, 15):
        for b in range(a, max_order // a + 1):
            if b % a == 0:
                groups.append(FgAbelianGroup(0, (a, b)))
    return groups


SMALL_ABELIAN = [
    FgAbelianGroup(0, (n,)) for n in (2, 3, 4, 6, 8, 12)
] + [FgAbelianGroup(0, (2, 2)), FgAbelianGroup(0, (2, 4)), FgAbelianGroup(0, (3, 6)), FgAbelianGroup(0, (2, 2, 2))]


def perm_compose(p: tuple, q: tuple) -> tuple:
    """(p*q)(i) = p(q(i)), written out independently of the library."""
    return tuple(p[q[i]] for i in range(len(q)))


@st.composite
def abelian_elements(draw, G: FgAbelianGroup, radius: int = 6):
    return tuple(
        draw(st.integers(-radius, radius)) if m == 0 else draw(st.integers(0, m - 1))
        for m in G.moduli
    )


@st.composite
def equations_over(draw, G, max_n: int = 4):
    """Random elementary equation with coefficients from a finite group (or abelian window)."""
    n = draw(st.integers(0, max_n))
    signs = tuple(draw(st.sampled_from((1, -1))) for _ in range(n + 1))
    if isinstance(G, FgAbelianGroup):
        coeffs = tuple(draw(abelian_elements(G)) for _ in range(n + 1))
    else:
        coeffs = tuple(draw(st.integers(0, G.order - 1)) for _ in range(n + 1))
    return ElementaryEquation(coeffs, signs)


@pytest.fixture(scope="session")
def catalog24():
    return finite_catalog(24)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def lcm(*xs: int) -> int:
    return math.lcm(*xs) if xs else 1


def all_tuples(moduli):
    return list(itertools.product(*(range(m) for m in moduli)))


_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
