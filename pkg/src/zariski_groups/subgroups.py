"""Subgroups, centralizers, normality and super-normality.

Everything works over any object with ``op``, ``inv``, ``identity`` and ``check``
(FiniteGroup, FgAbelianGroup, DirectSumGroup); the enumeration-based checks
need a finite ambient group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .abelian import GroupError


@dataclass(frozen=True)
class SubgroupHandle:
    ambient: Any
    generators: tuple
    elements: frozenset | None = None
    stabilized: bool = True
    stages: int = 0

    @property
    def order(self) -> int | None:
        return len(self.elements) if self.elements is not None and self.stabilized else None

    def __contains__(self, g) -> bool:
        if self.elements is None:
            raise GroupError("subgroup closure was not materialized")
        return g in self.elements


def group_arithmetic(G, g=None, h=None, op: str = "compose"):
    if op == "identity":
        return G.identity
    if op == "invert":
        return G.inv(G.check(g))
    if op == "compose":
        return G.op(G.check(g), G.check(h))
    raise ValueError(f"unknown operation {op!r}")


def enumerate_elements(G) -> list:
    return G.elements()


def subgroup_generated(G, gens: Iterable, fuel: int | None = None) -> SubgroupHandle:
    """Smallest subgroup containing ``gens``, built in stages of right multiplication.

    Each stage multiplies the newest elements by every generator and its inverse.
    With a finite ``fuel`` the closure may stop early; the handle is then flagged
    ``stabilized=False`` and holds the elements reached so far.
    """
    gens = tuple(G.check(g) for g in gens)
    steps = list(dict.fromkeys(gens + tuple(G.inv(g) for g in gens)))
    seen = {G.identity}
    frontier = [G.identity]
    stage = 0
    while frontier:
        if fuel is not None and stage >= fuel:
            return SubgroupHandle(G, gens, frozenset(seen), False, stage)
        stage += 1
        nxt = []
        for x in frontier:
            for s in steps:
                y = G.op(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return SubgroupHandle(G, gens, frozenset(seen), True, stage)


def closure_elements(G, gens: Iterable) -> set:
    return set(subgroup_generated(G, gens).elements)


def as_subgroup(G, elements: Iterable) -> SubgroupHandle:
    """Wrap an explicit element set after checking it is a subgroup."""
    elems = frozenset(G.check(g) for g in elements)
    if G.identity not in elems:
        raise GroupError("subset does not contain the identity")
    for a in elems:
        if G.inv(a) not in elems:
            raise GroupError("subset not closed under inverses")
        for b in elems:
            if G.op(a, b) not in elems:
                raise GroupError("subset not closed under the product")
    return SubgroupHandle(G, tuple(sorted(elems, key=G.sort_key)), elems, True, 0)


def _require_subgroup(G, H: SubgroupHandle) -> frozenset:
    if H.elements is None or not H.stabilized:
        raise GroupError("subgroup must be fully enumerated")
    return H.elements


def centralizer(G, H: SubgroupHandle) -> SubgroupHandle:
    """c_G(H) = {x : xh = hx for all h in H}; only H's generators need checking."""
    _require_subgroup(G, H)
    gens = H.generators or tuple(H.elements)
    elems = [x for x in G.elements() if all(G.op(x, h) == G.op(h, x) for h in gens)]
    return SubgroupHandle(G, tuple(elems), frozenset(elems), True, 0)


def center(G) -> SubgroupHandle:
    return centralizer(G, SubgroupHandle(G, tuple(G.elements()), frozenset(G.elements())))


def derived_subgroup(G) -> SubgroupHandle:
    comms = {G.op(G.op(G.inv(a), G.inv(b)), G.op(a, b)) for a in G.elements() for b in G.elements()}
    return subgroup_generated(G, sorted(comms, key=G.sort_key))


def conjugate(G, x, h):
    """x^-1 h x."""
    return G.op(G.op(G.inv(x), h), x)


def is_normal(G, H: SubgroupHandle) -> bool:
    elems = _require_subgroup(G, H)
    gens = H.generators or tuple(elems)
    return all(conjugate(G, x, h) in elems for x in G.elements() for h in gens)


def index(G, H: SubgroupHandle) -> int:
    elems = _require_subgroup(G, H)
    n = len(G.elements())
    if n % len(elems):
        raise GroupError("subgroup order does not divide the group order")
    return n // len(elems)


@dataclass
class SuperNormalResult:
    holds: bool
    method: str
    witness: dict = field(default_factory=dict)
    failing: Any = None

    def __bool__(self) -> bool:
        return self.holds


def is_super_normal(G, H: SubgroupHandle, method: str = "definitional", require_normal: bool = True) -> SuperNormalResult:
    """Whether every inner automorphism of G restricts on H to conjugation by an element of H.

    ``definitional`` searches, for each x in G, some y in H with x^-1 h x = y^-1 h y
    for all h in H and returns the map x -> y; ``centralizer_product`` tests
    G = c_G(H) H and returns the factorization x = c y.  ``failing`` is the
    first x (in element order) with no witness.
    """
    elems = _require_subgroup(G, H)
    if require_normal and not is_normal(G, H):
        raise GroupError("super-normality is only defined for normal subgroups")
    gens = H.generators or tuple(elems)
    H_sorted = sorted(elems, key=G.sort_key)
    if method == "definitional":
        witness = {}
        for x in G.elements():
            target = [conjugate(G, x, h) for h in gens]
            y = next((y for y in H_sorted if all(conjugate(G, y, h) == t for h, t in zip(gens, target))), None)
            if y is None:
                return SuperNormalResult(False, method, witness, x)
            witness[x] = y
        return SuperNormalResult(True, method, witness)
    if method == "centralizer_product":
        C = sorted(centralizer(G, H).elements, key=G.sort_key)
        products = {}
        for c in C:
            for y in H_sorted:
                products.setdefault(G.op(c, y), (c, y))
        for x in G.elements():
            if x not in products:
                return SuperNormalResult(False, method, {k: products[k] for k in products}, x)
        return SuperNormalResult(True, method, {x: products[x] for x in G.elements()})
    raise ValueError(f"unknown method {method!r}")


def all_subgroups(G) -> list[SubgroupHandle]:
    """Every subgroup of a finite group: cyclic subgroups closed under pairwise joins."""
    cyclic = {}
    for g in G.elements():
        h = subgroup_generated(G, [g])
        cyclic.setdefault(h.elements, h)
    found = dict(cyclic)
    frontier = list(found)
    cyc_list = list(cyclic)
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyc_list:
                if C <= S:
                    continue
                J = subgroup_generated(G, sorted(S | C, key=G.sort_key))
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J.elements)
        frontier = nxt
    out = sorted(found.values(), key=lambda h: (len(h.elements), sorted(map(G.sort_key, h.elements))))
    return [SubgroupHandle(G, _minimal_gens(G, h.elements), h.elements, True, 0) for h in out]


def _minimal_gens(G, elems: frozenset) -> tuple:
    gens, span = [], {G.identity}
    for g in sorted(elems, key=G.sort_key):
        if g not in span:
            gens.append(g)
            span = set(subgroup_generated(G, gens).elements)
            if span == elems:
                break
    return tuple(gens)
