"""Zariski-closed set expressions, their canonical forms over f.g. abelian groups,
restriction to subgroups and the reflection equality check."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Union

from .abelian import AbelianElement, FgAbelianGroup, GroupError, SubgroupCoordinates, subgroup_coordinates
from .cosets import ProductCoset, full_coset, kernel_coset, uncovered_point
from .equations import (
    ElementaryEquation,
    EquationSyntaxError,
    abelian_reduce,
    evaluate,
    multiple_equation,
    parse_equation,
    singleton_equation,
    solve_bruteforce,
    solve_linear,
)
from .snf import solve_integer_system

# -- expression trees -------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    equation: ElementaryEquation


@dataclass(frozen=True)
class Union_:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise ValueError("union needs at least one child")


@dataclass(frozen=True)
class Intersection:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise ValueError("intersection needs at least one child")


@dataclass(frozen=True)
class _Const:
    name: str

    def __repr__(self) -> str:
        return self.name


EMPTY = _Const("EmptySet")
FULL = _Const("FullGroup")

ClosedSetExpr = Union[Atom, Union_, Intersection, _Const]


def union(*children) -> Union_:
    return Union_(tuple(children))


def intersection(*children) -> Intersection:
    return Intersection(tuple(children))


class ExpressionError(ValueError):
    """Malformed closed-set expression document."""


class UnresolvableAtom(ValueError):
    """An atom's equation text does not resolve over the group."""


def expr_from_json(doc: Any, G) -> ClosedSetExpr:
    if doc == "empty":
        return EMPTY
    if doc == "full":
        return FULL
    if isinstance(doc, dict) and set(doc) == {"atom"}:
        try:
            return Atom(parse_equation(str(doc["atom"]), G))
        except (EquationSyntaxError, GroupError) as exc:
            raise UnresolvableAtom(f"atom {doc['atom']!r}: {exc}") from exc
    if isinstance(doc, dict) and doc.get("op") in ("union", "intersection"):
        kids = doc.get("children")
        if not isinstance(kids, list) or not kids:
            raise ExpressionError(f"{doc.get('op')} needs a nonempty children list")
        built = tuple(expr_from_json(k, G) for k in kids)
        return Union_(built) if doc["op"] == "union" else Intersection(built)
    raise ExpressionError(f"not a closed-set expression: {doc!r}")


def expr_to_json(expr: ClosedSetExpr, G) -> Any:
    from .equations import print_equation

    if expr is EMPTY:
        return "empty"
    if expr is FULL:
        return "full"
    if isinstance(expr, Atom):
        return {"atom": print_equation(expr.equation, G)}
    op = "union" if isinstance(expr, Union_) else "intersection"
    return {"op": op, "children": [expr_to_json(c, G) for c in expr.children]}


def load_expr(text: str, G) -> ClosedSetExpr:
    if not text.strip():
        raise ExpressionError("empty expression document")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ExpressionError(f"invalid JSON at position {exc.pos}: {exc.msg}") from exc
    return expr_from_json(doc, G)


def map_atoms(expr: ClosedSetExpr, fn: Callable[[ElementaryEquation], ClosedSetExpr]) -> ClosedSetExpr:
    if isinstance(expr, Atom):
        return fn(expr.equation)
    if isinstance(expr, Union_):
        return Union_(tuple(map_atoms(c, fn) for c in expr.children))
    if isinstance(expr, Intersection):
        return Intersection(tuple(map_atoms(c, fn) for c in expr.children))
    return expr


def member(expr, x, G) -> bool:
    """Membership by the tree semantics (or the canonical form, if given one)."""
    if isinstance(expr, CanonicalClosed):
        return expr.member(x)
    if expr is EMPTY:
        return False
    if expr is FULL:
        return True
    if isinstance(expr, Atom):
        return evaluate(expr.equation, x, G)
    if isinstance(expr, Union_):
        return any(member(c, x, G) for c in expr.children)
    return all(member(c, x, G) for c in expr.children)


def denote(expr: ClosedSetExpr, G, universe: Iterable | None = None) -> frozenset:
    """The element set of ``expr`` by enumeration (finite groups, or a finite ``universe``)."""
    pool = list(G.elements() if universe is None else universe)
    if expr is EMPTY:
        return frozenset()
    if expr is FULL:
        return frozenset(pool)
    if isinstance(expr, Atom):
        return solve_bruteforce(expr.equation, G, pool)
    parts = [denote(c, G, pool) for c in expr.children]
    if isinstance(expr, Union_):
        return frozenset().union(*parts)
    out = parts[0]
    for p in parts[1:]:
        out = out & p
    return out


# -- canonical form -----------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalClosed:
    """A finite antichain of cosets rep + G[kernel]; the union is the denoted set."""

    group: FgAbelianGroup
    cosets: tuple[tuple[int, AbelianElement], ...] = ()

    def product_cosets(self) -> list[ProductCoset]:
        return [kernel_coset(self.group, rep, d) for d, rep in self.cosets]

    @property
    def is_empty(self) -> bool:
        return not self.cosets

    @property
    def is_full(self) -> bool:
        return uncovered_point(self.group, full_coset(self.group), self.product_cosets()) is None

    def member(self, x) -> bool:
        return any(c.contains_point(x) for c in self.product_cosets())

    def elements(self, universe: Iterable | None = None) -> frozenset:
        pool = self.group.elements() if universe is None else universe
        pcs = self.product_cosets()
        return frozenset(x for x in pool if any(c.contains_point(x) for c in pcs))

    def to_json(self) -> dict:
        G = self.group
        return {
            "empty": self.is_empty,
            "full": self.is_full,
            "cosets": [{"kernel": d, "representative": G.to_json(rep)} for d, rep in self.cosets],
        }


def _canonical_coset(G: FgAbelianGroup, d: int, rep) -> tuple[int, AbelianElement]:
    d = G.kernel_key(d)
    pc = kernel_coset(G, G.reduce(rep), d)
    return (d, tuple(pc.rep))


def make_canonical(G: FgAbelianGroup, cosets: Iterable[tuple[int, Any]]) -> CanonicalClosed:
    """Canonical representatives, then drop every coset contained in another."""
    uniq = sorted({_canonical_coset(G, d, rep) for d, rep in cosets}, key=lambda c: (G.sort_key(c[1]), c[0]))
    pcs = [kernel_coset(G, rep, d) for d, rep in uniq]
    keep = []
    for i, (c, pc) in enumerate(zip(uniq, pcs)):
        if not any(j != i and pc.subset_of(pcs[j]) for j in range(len(uniq))):
            keep.append(c)
    return CanonicalClosed(G, tuple(keep))


def _intersect(G: FgAbelianGroup, A: CanonicalClosed, B: CanonicalClosed) -> CanonicalClosed:
    out = []
    for d1, r1 in A.cosets:
        for d2, r2 in B.cosets:
            p = kernel_coset(G, r1, d1).intersect(kernel_coset(G, r2, d2))
            if p is not None:
                d = G.kernel_key(math.gcd(d1, d2))
                assert p.steps == G.kernel_steps(d)
                out.append((d, p.rep))
    return make_canonical(G, out)


def resolve_atom(eq: ElementaryEquation, G: FgAbelianGroup) -> CanonicalClosed:
    sol = solve_linear(G, abelian_reduce(eq, G))
    if sol.kind == "empty":
        return CanonicalClosed(G, ())
    if sol.kind == "all":
        return make_canonical(G, [(0, G.identity)])
    return make_canonical(G, [(sol.kernel, sol.representative)])


def normalize(expr, G: FgAbelianGroup) -> CanonicalClosed:
    """Canonical coset antichain denoting the same set as ``expr``.

    Intersections distribute over unions; cosets meet by per-coordinate CRT.
    """
    if isinstance(expr, CanonicalClosed):
        return make_canonical(G, expr.cosets)
    if expr is EMPTY:
        return CanonicalClosed(G, ())
    if expr is FULL:
        return make_canonical(G, [(0, G.identity)])
    if isinstance(expr, Atom):
        return resolve_atom(expr.equation, G)
    parts = [normalize(c, G) for c in expr.children]
    if isinstance(expr, Union_):
        return make_canonical(G, [c for p in parts for c in p.cosets])
    out = parts[0]
    for p in parts[1:]:
        out = _intersect(G, out, p)
    return out


def contains(A: CanonicalClosed, B: CanonicalClosed) -> bool:
    return contains_witness(A, B) is None


def contains_witness(A: CanonicalClosed, B: CanonicalClosed) -> AbelianElement | None:
    """A point of B outside A, or ``None`` when B is a subset of A."""
    cover = A.product_cosets()
    for c in B.product_cosets():
        w = uncovered_point(A.group, c, cover)
        if w is not None:
            return w
    return None


def same_set(A: CanonicalClosed, B: CanonicalClosed) -> bool:
    return contains(A, B) and contains(B, A)


@dataclass
class FiniteClosure:
    closed: CanonicalClosed
    certificate: list[ElementaryEquation] = field(default_factory=list)


def closure_finite_set(A: Iterable, G: FgAbelianGroup) -> FiniteClosure:
    """A finite set is its own closure: the union of the singleton atoms x = a."""
    pts = sorted({G.check(tuple(a)) for a in A}, key=G.sort_key)
    cert = [singleton_equation(G, a) for a in pts]
    closed = make_canonical(G, [(1, a) for a in pts])
    return FiniteClosure(closed, cert)


# -- subgroups ----------------------------------------------------------------------


def restrict(X: CanonicalClosed, sub: SubgroupCoordinates) -> CanonicalClosed:
    """H n X in the coordinates of ``sub.presentation``.

    (c + G[d]) n H is empty or h + H[d]; a point h is found by solving the
    embedding matrix against c modulo the kernel steps.
    """
    G = X.group
    Hp = sub.presentation
    images = sub.generator_images()
    A = [[img[j] for img in images] for j in range(G.ngens)]
    out = []
    for d, rep in X.cosets:
        steps = G.kernel_steps(d)
        if not images:
            if kernel_coset(G, rep, d).contains_point(G.identity):
                out.append((0, ()))
            continue
        y = solve_integer_system(A, list(rep), list(steps))
        if y is not None:
            out.append((d, Hp.reduce(y)))
    return make_canonical(Hp, out)


def pull_back(expr: ClosedSetExpr, sub: SubgroupCoordinates) -> ClosedSetExpr:
    """Rewrite each atom k x = b as the H-equation k y = b' (or the empty set if b is not in H)."""
    G, Hp = sub.ambient, sub.presentation

    def fn(eq: ElementaryEquation) -> ClosedSetExpr:
        c = abelian_reduce(eq, G)
        b = sub.project(c.b)
        if b is None:
            return EMPTY
        return Atom(multiple_equation(Hp, c.k, b))

    return map_atoms(expr, fn)


def reflection_check(G, gens: Iterable, A: ClosedSetExpr, *, enumerate_limit: int = 4096, stabilized: bool = True) -> dict:
    """Compare Cl_H(H n A) with H n Cl_G(A) for H = <gens> and closed A.

    The right side restricts the ambient canonical form to H.  The left side
    pulls every atom back to an equation over H itself and normalizes there,
    so it is a closed set of H's own Zariski topology denoting H n A.  Equality
    is decided by mutual containment; for finite H of order up to
    ``enumerate_limit`` both sides are also checked point by point against
    membership in A.
    """
    sub = subgroup_coordinates(G, gens)
    Hp = sub.presentation
    ambient = normalize(A, G)
    rhs = restrict(ambient, sub)
    lhs = normalize(pull_back(A, sub), Hp)
    w1 = contains_witness(lhs, rhs)
    w2 = contains_witness(rhs, lhs)
    equal = w1 is None and w2 is None
    witnesses = []
    if w1 is not None:
        witnesses.append({"in_rhs_not_lhs": Hp.to_json(w1)})
    if w2 is not None:
        witnesses.append({"in_lhs_not_rhs": Hp.to_json(w2)})
    enumerated = False
    if Hp.is_finite and (Hp.order or 1) <= enumerate_limit:
        enumerated = True
        for h in Hp.elements():
            in_a = ambient.member(sub.embed(h))
            if lhs.member(h) != in_a or rhs.member(h) != in_a:
                equal = False
                witnesses.append({"element": G.to_json(sub.embed(h)), "in_A": in_a, "lhs": lhs.member(h), "rhs": rhs.member(h)})
                break
    return {
        "lhs_canonical": lhs.to_json(),
        "rhs_canonical": rhs.to_json(),
        "equal": equal,
        "witnesses": witnesses,
        "subgroup_order": Hp.order,
        "subgroup_invariants": {"rank": Hp.rank, "invariants": list(Hp.invariants)},
        "enumerated": enumerated,
        "informational": not stabilized,
    }
