"""Finitely generated abelian groups Z^r + Z/m_1 + ... + Z/m_s in additive notation."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Iterable, Iterator

from .snf import integer_kernel, matvec, smith_normal_form, solve_integer_system

AbelianElement = tuple[int, ...]


class GroupError(ValueError):
    """Invalid group descriptor or an element that does not belong to the group."""


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^rank + Z/m_1 + ... + Z/m_s.

    With ``strict=True`` (the default) the moduli must form a divisibility chain,
    i.e. the invariant-factor form.  ``strict=False`` admits any product of cyclic
    groups; every algorithm here works coordinatewise and does not need the chain.
    """

    rank: int = 0
    invariants: tuple[int, ...] = ()
    strict: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "invariants", tuple(int(m) for m in self.invariants))
        if self.rank < 0:
            raise GroupError("rank must be nonnegative")
        if any(m < 2 for m in self.invariants):
            raise GroupError(f"invariants must be >= 2, got {list(self.invariants)}")
        if self.strict:
            for a, b in zip(self.invariants, self.invariants[1:]):
                if b % a:
                    raise GroupError(f"divisibility chain broken: {a} does not divide {b}")

    # -- shape -------------------------------------------------------------
    @property
    def ngens(self) -> int:
        return self.rank + len(self.invariants)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus, 0 for free coordinates."""
        return (0,) * self.rank + self.invariants

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def order(self) -> int | None:
        return math.prod(self.invariants) if self.rank == 0 else None

    @property
    def exponent(self) -> int:
        return _lcm(self.invariants)

    @property
    def is_abelian(self) -> bool:
        return True

    @property
    def identity(self) -> AbelianElement:
        return (0,) * self.ngens

    # -- arithmetic ----------------------------------------------------------
    def reduce(self, coords: Iterable[int]) -> AbelianElement:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.ngens:
            raise GroupError(f"element {coords} has {len(coords)} coordinates, group needs {self.ngens}")
        return tuple(c % m if m else c for c, m in zip(coords, self.moduli))

    def check(self, g: AbelianElement) -> AbelianElement:
        if not isinstance(g, tuple) or len(g) != self.ngens:
            raise GroupError(f"{g!r} is not an element of {self}")
        if any(m and not 0 <= c < m for c, m in zip(g, self.moduli)):
            raise GroupError(f"{g!r} has unreduced torsion coordinates in {self}")
        return g

    def op(self, g: AbelianElement, h: AbelianElement) -> AbelianElement:
        return tuple((a + b) % m if m else a + b for a, b, m in zip(g, h, self.moduli))

    def inv(self, g: AbelianElement) -> AbelianElement:
        return tuple((-a) % m if m else -a for a, m in zip(g, self.moduli))

    def scale(self, k: int, g: AbelianElement) -> AbelianElement:
        return tuple((k * a) % m if m else k * a for a, m in zip(g, self.moduli))

    def sub(self, g: AbelianElement, h: AbelianElement) -> AbelianElement:
        return self.op(g, self.inv(h))

    def unit(self, i: int) -> AbelianElement:
        return self.reduce(int(j == i) for j in range(self.ngens))

    def elements(self) -> list[AbelianElement]:
        if not self.is_finite:
            raise GroupError("cannot enumerate an infinite group")
        return list(itertools.product(*(range(m) for m in self.invariants)))

    def window(self, radius: int) -> Iterator[AbelianElement]:
        """Elements whose free coordinates lie in [-radius, radius]."""
        ranges = [range(-radius, radius + 1)] * self.rank + [range(m) for m in self.invariants]
        return itertools.product(*ranges)

    def kernel_key(self, k: int) -> int:
        """Canonical integer d with G[d] == G[k] = {x : kx = 0}."""
        e = self.exponent
        if self.rank and k == 0:
            return 0
        return math.gcd(k, e)

    def kernel_steps(self, k: int) -> tuple[int, ...]:
        """G[k] as per-coordinate subgroups step*Z (step 0 is the zero subgroup)."""
        return tuple(
            (1 if k == 0 else 0) if m == 0 else m // math.gcd(k, m) for m in self.moduli
        )

    def kernel_order(self, k: int) -> int | None:
        if self.rank and k == 0:
            return None
        return math.prod(math.gcd(k, m) for m in self.invariants)

    # -- text ----------------------------------------------------------------
    _unit_re = re.compile(r"^(-?\d*)e(\d+)$")

    def parse_element(self, token: str) -> AbelianElement:
        """``(a,b,...)``, a bare integer for one-coordinate groups, ``e`` for zero, or ``[c]e<i>``."""
        token = token.strip()
        if token in ("e", "0") and self.ngens != 1:
            return self.identity
        if token.startswith("(") and token.endswith(")"):
            body = token[1:-1].strip()
            parts = [p for p in body.split(",")] if body else []
            try:
                return self.reduce(int(p) for p in parts)
            except ValueError as exc:
                raise GroupError(f"bad element literal {token!r}") from exc
        if re.fullmatch(r"-?\d+", token):
            if self.ngens != 1:
                raise GroupError(f"integer literal {token!r} needs a one-coordinate group")
            return self.reduce((int(token),))
        if token == "e":
            return self.identity
        m = self._unit_re.match(token)
        if m and int(m.group(2)) < self.ngens:
            coef = m.group(1)
            c = 1 if coef in ("", "+") else (-1 if coef == "-" else int(coef))
            return self.scale(c, self.unit(int(m.group(2))))
        raise GroupError(f"cannot read {token!r} as an element of {self}")

    def format_element(self, g: AbelianElement) -> str:
        if self.ngens == 1:
            return str(g[0])
        return "(" + ",".join(str(c) for c in g) + ")"

    def to_json(self, g: AbelianElement):
        return g[0] if self.ngens == 1 else list(g)

    def sort_key(self, g: AbelianElement) -> tuple[int, ...]:
        """Canonical enumeration order: lexicographic, free coordinates as 0, 1, -1, 2, -2, ..."""
        return tuple(2 * abs(c) - (c > 0) if m == 0 else c for c, m in zip(g, self.moduli))

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{m}" for m in self.invariants]
        return " + ".join(parts) if parts else "0"


def cyclic_abelian(n: int) -> FgAbelianGroup:
    return FgAbelianGroup(0, (n,)) if n > 1 else FgAbelianGroup(0, ())


def integers(rank: int = 1) -> FgAbelianGroup:
    return FgAbelianGroup(rank, ())


# -- subgroups via Smith normal form ----------------------------------------


@dataclass
class SubgroupCoordinates:
    """Invariant-factor presentation of H = <gens> <= G with coordinate maps.

    ``embed`` is an injective homomorphism presentation -> G; ``project`` is
    its inverse on the image and returns ``None`` off the image.
    """

    ambient: FgAbelianGroup
    gens: list[AbelianElement]
    presentation: FgAbelianGroup
    _basis: list[list[int]]  # rows: H-coordinate i -> coefficient vector over gens
    _to_h: list[list[int]]   # rows: gens-coefficients -> H-coordinate i

    def embed(self, h: Iterable[int]) -> AbelianElement:
        h = tuple(h)
        G = self.ambient
        total = G.identity
        for coef, basis in zip(h, self._basis):
            for c, g in zip(basis, self.gens):
                total = G.op(total, G.scale(coef * c, g))
        return total

    def project(self, g: AbelianElement) -> AbelianElement | None:
        G = self.ambient
        A = [[gen[j] for gen in self.gens] for j in range(G.ngens)]
        y = solve_integer_system(A, list(g), list(G.moduli))
        if y is None:
            return None
        return self.presentation.reduce(matvec(self._to_h, y)) if self._to_h else ()

    def generator_images(self) -> list[AbelianElement]:
        return [self.embed(self.presentation.unit(i)) for i in range(self.presentation.ngens)]


def presentation_from_relations(ngens: int, relations: list[list[int]]):
    """Z^ngens / <relations> in invariant-factor form.

    Returns (group, to_h, basis): ``to_h`` maps Z^ngens coordinates to group
    coordinates (rows), ``basis`` gives for each group coordinate a preimage in Z^ngens.
    """
    if ngens == 0:
        return FgAbelianGroup(0, ()), [], []
    R = [[rel[i] for rel in relations] for i in range(ngens)] if relations else [[] for _ in range(ngens)]
    if relations:
        dec = smith_normal_form(R)
        U, U_inv, diag = dec.U, dec.U_inv, dec.diagonal
    else:
        from .snf import identity

        U, U_inv, diag = identity(ngens), identity(ngens), []
    diag = list(diag) + [0] * (ngens - len(diag))
    free = [i for i in range(ngens) if diag[i] == 0]
    tors = [i for i in range(ngens) if diag[i] > 1]
    order = free + tors
    group = FgAbelianGroup(len(free), tuple(diag[i] for i in tors))
    to_h = [U[i] for i in order]
    basis = [[U_inv[r][i] for r in range(ngens)] for i in order]
    return group, to_h, basis


def subgroup_coordinates(G: FgAbelianGroup, gens: Iterable[AbelianElement]) -> SubgroupCoordinates:
    """Present H = <gens> in invariant-factor form through the SNF of its relation lattice."""
    gens = [G.check(tuple(g)) for g in gens]
    t = len(gens)
    if t == 0:
        return SubgroupCoordinates(G, [], FgAbelianGroup(0, ()), [], [])
    tors_rows = [j for j, m in enumerate(G.moduli) if m]
    M = [
        [gen[j] for gen in gens] + [(-G.moduli[j] if j == r else 0) for r in tors_rows]
        for j in range(G.ngens)
    ]
    kernel = integer_kernel(M, t + len(tors_rows))
    relations = [vec[:t] for vec in kernel]
    relations = [r for r in relations if any(r)]
    pres, to_h, basis = presentation_from_relations(t, relations)
    out = SubgroupCoordinates(G, gens, pres, basis, to_h)
    # free basis vectors are only defined up to sign; make each image start positive
    for i in range(pres.rank):
        img = out.embed(pres.unit(i))
        lead = next((c for c, m in zip(img, G.moduli) if m == 0 and c), 0)
        if lead < 0:
            basis[i] = [-c for c in basis[i]]
            to_h[i] = [-c for c in to_h[i]]
    return out


def enumerate_subgroup(G: FgAbelianGroup, gens: Iterable[AbelianElement], limit: int | None = None) -> set[AbelianElement] | None:
    """All elements of <gens> by breadth-first closure; ``None`` if ``limit`` is exceeded."""
    gens = [tuple(g) for g in gens]
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.op(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if limit is not None and len(seen) > limit:
                        return None
        frontier = nxt
    return seen


def hom_from_images(G: FgAbelianGroup, images: list[AbelianElement], target: FgAbelianGroup) -> Callable[[AbelianElement], AbelianElement]:
    def f(g: AbelianElement) -> AbelianElement:
        out = target.identity
        for c, img in zip(g, images):
            out = target.op(out, target.scale(c, img))
        return out

    return f
