"""One-variable group equations x^e0 a0 x^e1 a1 ... a(n-1) x^en = a(n).

The right-hand side is ``coeffs[-1]``; ``coeffs[:-1]`` sit between the x-terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .abelian import AbelianElement, FgAbelianGroup, GroupError


class EquationSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


@dataclass(frozen=True)
class ElementaryEquation:
    coeffs: tuple
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if not self.coeffs or len(self.coeffs) != len(self.signs):
            raise ValueError("need n+1 coefficients and n+1 signs")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.signs) - 1

    @property
    def rhs(self):
        return self.coeffs[-1]

    def support(self) -> frozenset:
        return frozenset(self.coeffs)


def make_equation(G, coeffs: Iterable, signs: Iterable[int]) -> ElementaryEquation:
    return ElementaryEquation(tuple(G.check(c) for c in coeffs), tuple(signs))


# -- text ------------------------------------------------------------------------


def _tokens(text: str) -> list[tuple[str, int]]:
    out, i = [], 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        depth = 0
        while j < len(text) and (depth or not text[j].isspace()):
            if text[j] in "({[":
                depth += 1
            elif text[j] in ")}]":
                depth -= 1
            j += 1
        out.append((text[i:j], i))
        i = j
    return out


def parse_equation(text: str, G) -> ElementaryEquation:
    """Read ``xterm (coeff xterm)* = coeff`` with xterm one of ``x`` and ``x^-1``.

    Coefficients are resolved by ``G.parse_element``.  Errors carry the
    character offset of the offending token.
    """
    toks = _tokens(text)
    if not toks:
        raise EquationSyntaxError("empty equation", 0)
    eq_pos = [k for k, (t, _) in enumerate(toks) if t == "="]
    if len(eq_pos) != 1:
        pos = toks[eq_pos[1]][1] if len(eq_pos) > 1 else len(text)
        raise EquationSyntaxError("expected exactly one '='", pos)
    k = eq_pos[0]
    lhs, rhs = toks[:k], toks[k + 1:]
    if not lhs:
        raise EquationSyntaxError("missing left-hand side", toks[k][1])
    if len(rhs) != 1:
        pos = rhs[1][1] if len(rhs) > 1 else len(text)
        raise EquationSyntaxError("right-hand side must be a single coefficient", pos)
    signs, coeffs = [], []
    for idx, (tok, pos) in enumerate(lhs):
        want_x = idx % 2 == 0
        is_x = tok in ("x", "x^1", "x^-1")
        if want_x and not is_x:
            raise EquationSyntaxError(f"expected an x-term, found {tok!r}", pos)
        if not want_x and is_x:
            raise EquationSyntaxError("two x-terms are adjacent", pos)
        if is_x:
            signs.append(-1 if tok == "x^-1" else 1)
        else:
            coeffs.append(_resolve(G, tok, pos))
    if len(lhs) % 2 == 0:
        raise EquationSyntaxError("left-hand side must end with an x-term", lhs[-1][1])
    rtok, rpos = rhs[0]
    if rtok.startswith("x"):
        raise EquationSyntaxError("right-hand side must be a coefficient", rpos)
    coeffs.append(_resolve(G, rtok, rpos))
    return ElementaryEquation(tuple(coeffs), tuple(signs))


def _resolve(G, tok: str, pos: int):
    if tok.startswith("x^") or tok == "x":
        raise EquationSyntaxError("two x-terms are adjacent", pos)
    try:
        return G.parse_element(tok)
    except GroupError as exc:
        raise UnknownCoefficientError(str(exc), pos) from exc


class UnknownCoefficientError(EquationSyntaxError):
    pass


def print_equation(eq: ElementaryEquation, G) -> str:
    parts = []
    for i, s in enumerate(eq.signs):
        parts.append("x" if s == 1 else "x^-1")
        if i < eq.n:
            parts.append(G.format_element(eq.coeffs[i]))
    return " ".join(parts) + " = " + G.format_element(eq.rhs)


# -- evaluation and brute force ------------------------------------------------------


def evaluate(eq: ElementaryEquation, x, G) -> bool:
    """Left-to-right product of the word at ``x`` compared with the right-hand side."""
    xi = G.inv(x)
    acc = G.identity
    for i, s in enumerate(eq.signs):
        acc = G.op(acc, x if s == 1 else xi)
        if i < eq.n:
            acc = G.op(acc, eq.coeffs[i])
    return acc == eq.rhs


def solve_bruteforce(eq: ElementaryEquation, G, universe: Iterable | None = None) -> frozenset:
    """{x : evaluate(eq, x)} over all of a finite G, or over ``universe`` if given."""
    pool = G.elements() if universe is None else universe
    return frozenset(x for x in pool if evaluate(eq, x, G))


# -- the abelian case ------------------------------------------------------------------


@dataclass(frozen=True)
class LinearCongruence:
    """k x = b in additive notation."""

    k: int
    b: AbelianElement


def abelian_reduce(eq: ElementaryEquation, G: FgAbelianGroup) -> LinearCongruence:
    k = sum(eq.signs)
    b = eq.rhs
    for a in eq.coeffs[:-1]:
        b = G.sub(b, a)
    return LinearCongruence(k, b)


@dataclass(frozen=True)
class SolutionSet:
    """``kind`` is 'empty', 'all', 'coset' (representative + G[kernel]) or 'explicit'."""

    kind: str
    representative: AbelianElement | None = None
    kernel: int | None = None
    elements: frozenset | None = None

    def contains(self, x, G: FgAbelianGroup) -> bool:
        if self.kind == "empty":
            return False
        if self.kind == "all":
            return True
        if self.kind == "explicit":
            return x in self.elements
        return all(
            (a - r) % s == 0 if s else a == r
            for a, r, s in zip(x, self.representative, G.kernel_steps(self.kernel))
        )

    def materialize(self, G: FgAbelianGroup, universe: Iterable | None = None) -> frozenset:
        if self.kind == "explicit":
            return self.elements
        pool = G.elements() if universe is None else universe
        return frozenset(x for x in pool if self.contains(x, G))

    def to_json(self, G) -> dict:
        if self.kind in ("empty", "all"):
            return {"kind": self.kind}
        if self.kind == "explicit":
            return {"kind": "explicit", "elements": [G.to_json(x) for x in sorted(self.elements, key=G.sort_key)]}
        return {"kind": "coset", "representative": G.to_json(self.representative), "kernel": self.kernel}


def solve_linear(G: FgAbelianGroup, c: LinearCongruence) -> SolutionSet:
    """Exact solution set of k x = b, coordinate by coordinate."""
    k, b = c.k, G.check(tuple(c.b))
    if k == 0:
        return SolutionSet("all") if all(v == 0 for v in b) else SolutionSet("empty")
    rep = []
    for v, m in zip(b, G.moduli):
        if m == 0:
            if v % k:
                return SolutionSet("empty")
            rep.append(v // k)
        else:
            d = math.gcd(k, m)
            if v % d:
                return SolutionSet("empty")
            mm = m // d
            rep.append(((v // d) * pow((k // d) % mm, -1, mm)) % mm if mm > 1 else 0)
    key = G.kernel_key(k)
    if G.rank == 0 and key == G.exponent:
        return SolutionSet("all")
    return SolutionSet("coset", tuple(rep), key)


def singleton_equation(G, g) -> ElementaryEquation:
    """x = g."""
    return ElementaryEquation((G.check(g),), (1,))


def multiple_equation(G: FgAbelianGroup, k: int, b: AbelianElement) -> ElementaryEquation:
    """An equation reducing to k x = b with all interior coefficients zero."""
    zero = G.identity
    if k == 0:
        return ElementaryEquation((zero, b), (1, -1))
    s = 1 if k > 0 else -1
    return ElementaryEquation((zero,) * (abs(k) - 1) + (b,), (s,) * abs(k))
