"""Semidirect products by an involution and the two-factor product construction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .abelian import GroupError
from .direct_sum import DirectSumGroup
from .groups import FiniteGroup, direct_product, from_multiplication, small_generating_set
from .subgroups import SubgroupHandle, index, subgroup_generated


def is_automorphism(N: FiniteGroup, f: Sequence[int]) -> bool:
    n = N.order
    if len(f) != n or sorted(f) != list(range(n)):
        return False
    return all(f[N.op(a, b)] == N.op(f[a], f[b]) for a in range(n) for b in range(n))


def _check_involution(N: FiniteGroup, f: Sequence[int]) -> tuple[int, ...]:
    f = tuple(int(x) for x in f)
    if not is_automorphism(N, f):
        raise GroupError("f is not an automorphism of N")
    if any(f[f[a]] != a for a in range(N.order)):
        raise GroupError("f is not an involution (f o f != id)")
    return f


def semidirect_involution(N: FiniteGroup, f: Sequence[int]) -> FiniteGroup:
    """N x| <f> with (n, b)(n', b') = (n f^b(n'), b xor b'); element (n, b) has index n + b|N|."""
    if not N.is_abelian:
        raise GroupError("semidirect_involution expects an abelian N")
    f = _check_involution(N, f)
    elems = [(a, b) for b in (0, 1) for a in range(N.order)]

    def mul(x, y):
        n1, b1 = x
        n2, b2 = y
        return (N.op(n1, f[n2] if b1 else n2), b1 ^ b2)

    labels = [N.label(a) if b == 0 else f"{N.label(a)}f" for a, b in elems]
    return from_multiplication(elems, mul, labels, name=f"{N.name}:f")


def involutive_automorphisms(N: FiniteGroup) -> list[tuple[int, ...]]:
    """All automorphisms f of N with f o f = id, found through images of a generating set."""
    gens = small_generating_set(N)
    orders = [N.element_order(g) for g in gens]
    candidates = [[h for h in range(N.order) if o % N.element_order(h) == 0] for o in orders]
    out = set()
    for images in itertools.product(*candidates):
        phi = {N.identity: N.identity}
        frontier = [N.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, img in zip(gens, images):
                    y, fy = N.op(x, g), N.op(phi[x], img)
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
        if not ok or len(set(phi.values())) != N.order:
            continue
        f = tuple(phi[a] for a in range(N.order))
        if all(f[f[a]] == a for a in range(N.order)) and is_automorphism(N, f):
            out.add(f)
    return sorted(out)


@dataclass
class ProductLemmaResult:
    N: FiniteGroup
    Gprime: FiniteGroup
    G: DirectSumGroup
    H: SubgroupHandle
    Gstar: SubgroupHandle
    report: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.report.get("passed"))


def product_lemma_construct(N1: FiniteGroup, N2: FiniteGroup, f: Sequence[int]) -> ProductLemmaResult:
    """Build G' = N x| <f> with N = N1 x N2, G = G' x G', H = <(f,f), N x {1}> and G* = H n (G' x {1}).

    The report checks [H : G*] = 2, that the first projection maps G* bijectively
    and homomorphically onto N (the b = 0 layer of G'), and that it maps H
    isomorphically onto G'.
    """
    N = direct_product(N1, N2)
    if not N.is_abelian:
        raise GroupError("N1 x N2 must be abelian")
    f = _check_involution(N, f)
    Gp = semidirect_involution(N, f)
    G = DirectSumGroup((Gp, Gp))
    f_elem = N.order  # index of (e_N, 1)
    gens = [G.make({0: f_elem, 1: f_elem})] + [G.make({0: n}) for n in small_generating_set(N)]
    H = subgroup_generated(G, gens)
    star = frozenset(h for h in H.elements if G.value(h, 1) == Gp.identity)
    Gstar = SubgroupHandle(G, tuple(sorted(star, key=G.sort_key)), star, True, 0)

    def p1(g):
        return G.value(g, 0)

    image_star = {p1(h) for h in star}
    N_layer = set(range(N.order))
    star_iso = (
        len(image_star) == len(star)
        and image_star == N_layer
        and all(p1(G.op(a, b)) == Gp.op(p1(a), p1(b)) for a in star for b in star)
    )
    image_H = {p1(h) for h in H.elements}
    H_iso = len(image_H) == len(H.elements) == Gp.order
    idx = index(_Finite(H.elements, G), Gstar)
    report = {
        "order_N": N.order,
        "order_Gprime": Gp.order,
        "order_H": len(H.elements),
        "order_Gstar": len(star),
        "index_H_Gstar": idx,
        "Gstar_iso_N_via_p1": star_iso,
        "H_iso_Gprime_via_p1": H_iso,
    }
    report["passed"] = idx == 2 and star_iso and H_iso
    return ProductLemmaResult(N, Gp, G, H, Gstar, report)


class _Finite:
    """A finite subgroup viewed as a group in its own right (for index computations)."""

    def __init__(self, elements, ambient):
        self._elements = sorted(elements, key=ambient.sort_key)

    def elements(self):
        return self._elements
