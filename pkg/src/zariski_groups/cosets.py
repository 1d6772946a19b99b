"""Exact set algebra on product cosets of a finitely generated abelian group.

A product coset fixes, per coordinate, a residue ``rep`` and a step ``s``:
the coordinate ranges over rep + sZ (reduced modulo the torsion modulus, which
``s`` divides), and ``s == 0`` pins it to ``rep``.  Cosets of torsion kernels
G[k] are the special case the closed-set engine stores; slices with arbitrary
steps appear during the lexicographic search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .abelian import AbelianElement, FgAbelianGroup


def _crt(r1: int, s1: int, r2: int, s2: int) -> tuple[int, int] | None:
    """Intersect r1 + s1 Z with r2 + s2 Z (step 0 means a single integer)."""
    if s1 == 0 and s2 == 0:
        return (r1, 0) if r1 == r2 else None
    if s1 == 0:
        return (r1, 0) if (r1 - r2) % s2 == 0 else None
    if s2 == 0:
        return (r2, 0) if (r2 - r1) % s1 == 0 else None
    g = math.gcd(s1, s2)
    if (r2 - r1) % g:
        return None
    l = s1 // g * s2
    t = ((r2 - r1) // g * pow(s1 // g, -1, s2 // g)) % (s2 // g) if s2 // g > 1 else 0
    return ((r1 + s1 * t) % l, l)


@dataclass(frozen=True)
class ProductCoset:
    rep: tuple[int, ...]
    steps: tuple[int, ...]

    @staticmethod
    def make(rep: Sequence[int], steps: Sequence[int]) -> "ProductCoset":
        return ProductCoset(tuple(r % s if s else r for r, s in zip(rep, steps)), tuple(steps))

    def contains_point(self, x: Sequence[int]) -> bool:
        for a, r, s in zip(x, self.rep, self.steps):
            if s:
                if (a - r) % s:
                    return False
            elif a != r:
                return False
        return True

    def intersect(self, other: "ProductCoset") -> "ProductCoset | None":
        rep, steps = [], []
        for r1, s1, r2, s2 in zip(self.rep, self.steps, other.rep, other.steps):
            c = _crt(r1, s1, r2, s2)
            if c is None:
                return None
            rep.append(c[0])
            steps.append(c[1])
        return ProductCoset(tuple(rep), tuple(steps))

    def subset_of(self, other: "ProductCoset") -> bool:
        for r1, s1, r2, s2 in zip(self.rep, self.steps, other.rep, other.steps):
            if s2 == 0:
                if s1 != 0 or r1 != r2:
                    return False
            elif s1 % s2 or (r1 - r2) % s2:
                return False
        return True

    def finite_index_in(self, other: "ProductCoset") -> bool:
        """Whether this coset's subgroup has finite index in ``other``'s (assumed to contain it)."""
        return all(not (s2 != 0 and s1 == 0) for s1, s2 in zip(self.steps, other.steps))

    def point(self, G: FgAbelianGroup) -> AbelianElement:
        return G.reduce(self.rep)

    def split(self, coord: int, new_step: int) -> Iterator["ProductCoset"]:
        """Partition along one coordinate into cosets with step ``new_step`` (a multiple of the old)."""
        s = self.steps[coord]
        for t in range(new_step // s):
            rep = list(self.rep)
            rep[coord] = self.rep[coord] + t * s
            steps = list(self.steps)
            steps[coord] = new_step
            yield ProductCoset.make(rep, steps)


def kernel_coset(G: FgAbelianGroup, rep: Sequence[int], k: int) -> ProductCoset:
    return ProductCoset.make(rep, G.kernel_steps(k))


def full_coset(G: FgAbelianGroup) -> ProductCoset:
    return ProductCoset((0,) * G.ngens, G.kernel_steps(0))


def uncovered_point(G: FgAbelianGroup, c: ProductCoset, cover: Iterable[ProductCoset]) -> AbelianElement | None:
    """A point of ``c`` outside every coset in ``cover``, or ``None`` if ``c`` is covered.

    Cover members meeting ``c`` in an infinite-index piece are dropped (a coset is
    never covered by finitely many cosets of infinite-index subgroups together
    with cosets that miss the rest).  The remaining pieces have finite index,
    and ``c`` is split coordinate by coordinate along them until each part is
    either inside one piece or disjoint from all.
    """
    pieces = []
    for d in cover:
        p = c.intersect(d)
        if p is None or not p.finite_index_in(c):
            continue
        if p == c:
            return None
        pieces.append(p)
    if not pieces:
        return c.point(G)
    first = pieces[0]
    j = next(i for i, (s1, s0) in enumerate(zip(first.steps, c.steps)) if s1 != s0)
    for part in c.split(j, first.steps[j]):
        w = uncovered_point(G, part, pieces)
        if w is not None:
            return w
    return None


def covered(G: FgAbelianGroup, c: ProductCoset, cover: Iterable[ProductCoset]) -> bool:
    return uncovered_point(G, c, list(cover)) is None


def union_nonempty_minus(G: FgAbelianGroup, pos: Sequence[ProductCoset], neg: Sequence[ProductCoset]) -> bool:
    return any(uncovered_point(G, c, neg) is not None for c in pos)


def _matches(c: ProductCoset, j: int, v: int) -> bool:
    s = c.steps[j]
    return (v - c.rep[j]) % s == 0 if s else v == c.rep[j]


def _free_values(live: Sequence[ProductCoset], j: int) -> Iterator[int]:
    """Values on a free coordinate hit by some live coset, in the order 0, 1, -1, 2, -2, ..."""
    pins = {c.rep[j] for c in live if c.steps[j] == 0}
    if all(c.steps[j] == 0 for c in live):
        yield from sorted(pins, key=lambda v: 2 * abs(v) - (v > 0))
        return
    n = 0
    while True:
        for v in ((n, -n) if n else (0,)):
            if any(_matches(c, j, v) for c in live):
                yield v
        n += 1


def iter_lex(G: FgAbelianGroup, pos: Sequence[ProductCoset], neg: Sequence[ProductCoset]) -> Iterator[AbelianElement]:
    """Elements of (union pos) minus (union neg) in canonical order (``G.sort_key``).

    Depth-first over coordinates; a prefix is explored only if the pinned
    slices still have a point outside ``neg``, so every branch yields.
    """
    moduli = G.moduli
    neg = list(neg)

    def pin(c: ProductCoset, j: int, v: int) -> ProductCoset:
        rep = list(c.rep)
        steps = list(c.steps)
        rep[j] = v
        steps[j] = moduli[j]  # a torsion modulus pins the coordinate; 0 pins a free one
        return ProductCoset(tuple(rep), tuple(steps))

    def rec(prefix: list[int], live: list[ProductCoset]) -> Iterator[AbelianElement]:
        j = len(prefix)
        if j == G.ngens:
            yield tuple(prefix)
            return
        if moduli[j]:
            values: Iterable[int] = [v for v in range(moduli[j]) if any(_matches(c, j, v) for c in live)]
        else:
            values = _free_values(live, j)
        for v in values:
            fixed = [pin(c, j, v) for c in live if _matches(c, j, v)]
            # drop covered slices so a free coordinate never scans values forever
            fixed = [c for c in fixed if uncovered_point(G, c, neg) is not None]
            if fixed:
                yield from rec(prefix + [v], fixed)

    yield from rec([], [c for c in pos if uncovered_point(G, c, neg) is not None])


def first_lex(G: FgAbelianGroup, pos: Sequence[ProductCoset], neg: Sequence[ProductCoset]) -> AbelianElement | None:
    if not union_nonempty_minus(G, pos, neg):
        return None
    return next(iter_lex(G, pos, neg))
