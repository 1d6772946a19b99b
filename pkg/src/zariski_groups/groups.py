"""Finite groups given by validated Cayley tables, and a small catalog of builders."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .abelian import GroupError


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group on {0, ..., order-1} with multiplication ``table[g][h] = g*h``.

    The full group axioms, associativity included, are checked at construction.
    """

    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    name: str = "G"
    identity: int = field(init=False)
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        n = len(table)
        if n == 0:
            raise GroupError("a group needs at least one element")
        full = set(range(n))
        for row in table:
            if len(row) != n or set(row) != full:
                raise GroupError("every row of the Cayley table must be a permutation")
        for j in range(n):
            if {table[i][j] for i in range(n)} != full:
                raise GroupError("every column of the Cayley table must be a permutation")
        ident = next((e for e in range(n) if table[e] == tuple(range(n))), None)
        if ident is None or any(table[i][ident] != i for i in range(n)):
            raise GroupError("Cayley table has no two-sided identity")
        for a in range(n):
            ta = table[a]
            for b in range(n):
                tab = table[ta[b]]
                tb = table[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise GroupError(f"not associative at ({a}, {b}, {c})")
        inverse = tuple(table[g].index(ident) for g in range(n))
        object.__setattr__(self, "identity", ident)
        object.__setattr__(self, "inverse", inverse)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != n or len(set(labels)) != n:
                raise GroupError("labels must be distinct and one per element")
            object.__setattr__(self, "labels", labels)

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def check(self, g: int) -> int:
        if not isinstance(g, int) or isinstance(g, bool) or not 0 <= g < self.order:
            raise GroupError(f"{g!r} is not an element index of {self.name}")
        return g

    def op(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def power(self, g: int, k: int) -> int:
        base = g if k >= 0 else self.inverse[g]
        out = self.identity
        for _ in range(abs(k)):
            out = self.table[out][base]
        return out

    def elements(self) -> list[int]:
        return list(range(self.order))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.table[x][g]
            k += 1
        return k

    # -- names ---------------------------------------------------------------
    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def format_element(self, g: int) -> str:
        return self.label(g)

    def to_json(self, g: int):
        return self.labels[g] if self.labels else g

    def parse_element(self, token: str) -> int:
        token = token.strip()
        if self.labels and token in self.labels:
            return self.labels.index(token)
        if token == "e":
            return self.identity
        if not self.labels and token.lstrip("-").isdigit():
            return int(token) % self.order
        raise GroupError(f"unknown element {token!r} in {self.name}")

    def sort_key(self, g: int) -> int:
        return g

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


# -- builders -----------------------------------------------------------------


def from_multiplication(elements: Sequence, mul, labels: Sequence[str] | None = None, name: str = "G") -> FiniteGroup:
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return FiniteGroup(tuple(map(tuple, table)), tuple(labels) if labels else None, name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    return from_multiplication(range(n), lambda a, b: (a + b) % n, name=f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n: elements r^i (i<n) then s r^i."""
    if n < 1:
        raise GroupError("dihedral group needs n >= 1")
    elems = [(f, i) for f in (0, 1) for i in range(n)]

    def mul(a, b):
        # s r^i s = r^-i
        fa, ia = a
        fb, ib = b
        return ((fa + fb) % 2, ((-ia if fb else ia) + ib) % n)

    def lab(x):
        f, i = x
        rot = "" if i == 0 else ("r" if i == 1 else f"r{i}")
        if f == 0:
            return rot or "e"
        return "s" + rot

    return from_multiplication(elems, mul, [lab(x) for x in elems], name=f"D{n}")


def _cycle_label(perm: tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = perm[x]
        cycles.append("(" + "".join(map(str, cyc)) + ")")
    return "".join(cycles) or "e"


def symmetric(n: int) -> FiniteGroup:
    """S_n with (g*h)(i) = g(h(i)), labels in cycle notation, identity first."""
    if not 1 <= n <= 5:
        raise GroupError("symmetric(n) is limited to n <= 5")
    perms = sorted(itertools.permutations(range(n)))
    return from_multiplication(
        perms,
        lambda g, h: tuple(g[h[i]] for i in range(n)),
        [_cycle_label(p) for p in perms],
        name=f"S{n}",
    )


def alternating(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise GroupError("alternating(n) is limited to n <= 5")

    def even(p):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inv % 2 == 0

    perms = sorted(p for p in itertools.permutations(range(n)) if even(p))
    return from_multiplication(
        perms,
        lambda g, h: tuple(g[h[i]] for i in range(n)),
        [_cycle_label(p) for p in perms],
        name=f"A{n}",
    )


def quaternion() -> FiniteGroup:
    """Q8 with labels e, -1, i, -i, j, -j, k, -k."""
    units = ["1", "i", "j", "k"]
    # unit products: (sign, unit)
    prod = {
        ("1", u): (1, u) for u in units
    }
    prod.update({(u, "1"): (1, u) for u in units})
    prod.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elems = [(s, u) for u in units for s in (1, -1)]

    def mul(a, b):
        s, u = prod[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    def lab(x):
        s, u = x
        if u == "1":
            return "e" if s == 1 else "-1"
        return u if s == 1 else "-" + u

    return from_multiplication(elems, mul, [lab(x) for x in elems], name="Q8")


def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    """Cartesian product with the componentwise law; labels joined as ``(a,b)``."""
    if not factors:
        return cyclic(1)
    elems = list(itertools.product(*(range(f.order) for f in factors)))

    def mul(a, b):
        return tuple(f.op(x, y) for f, x, y in zip(factors, a, b))

    labels = ["(" + ",".join(f.label(c) for f, c in zip(factors, x)) + ")" for x in elems]
    return from_multiplication(elems, mul, labels, name="x".join(f.name for f in factors))


def abelian_finite(moduli: Sequence[int]) -> FiniteGroup:
    """Z/m_1 x ... x Z/m_s as a Cayley table; element index is the mixed-radix number."""
    moduli = list(moduli)
    elems = list(itertools.product(*(range(m) for m in moduli)))
    if len(moduli) == 1:
        return cyclic(moduli[0])
    return from_multiplication(
        elems,
        lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, moduli)),
        ["(" + ",".join(map(str, x)) + ")" for x in elems],
        name="x".join(f"Z{m}" for m in moduli) or "Z1",
    )


def from_cayley(table, labels=None, name: str = "G") -> FiniteGroup:
    return FiniteGroup(tuple(map(tuple, table)), tuple(labels) if labels else None, name)


def relabel_isomorphic(G: FiniteGroup, H: FiniteGroup) -> dict[int, int] | None:
    """An isomorphism G -> H by backtracking over generator images, or ``None``."""
    if G.order != H.order:
        return None
    gens = small_generating_set(G)
    ord_h = [H.element_order(h) for h in range(H.order)]
    for images in itertools.product(*[[h for h in range(H.order) if ord_h[h] == G.element_order(g)] for g in gens]):
        phi = {G.identity: H.identity}
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, img in zip(gens, images):
                    y, fy = G.op(x, g), H.op(phi[x], img)
                    if y in phi:
                        if phi[y] != fy:
                            ok = False
                            break
                    else:
                        phi[y] = fy
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok or len(phi) != G.order or len(set(phi.values())) != H.order:
            continue
        if all(phi[G.op(a, b)] == H.op(phi[a], phi[b]) for a in range(G.order) for b in range(G.order)):
            return phi
    return None


def small_generating_set(G: FiniteGroup) -> list[int]:
    """Greedy generating set: repeatedly add the element enlarging the span the most."""
    from .subgroups import closure_elements

    gens: list[int] = []
    span = {G.identity}
    while len(span) < G.order:
        best = max((g for g in range(G.order) if g not in span), key=lambda g: (len(closure_elements(G, gens + [g])), -g))
        gens.append(best)
        span = closure_elements(G, gens)
    return gens
