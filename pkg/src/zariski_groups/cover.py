"""Certificates that finitely many elementary sets cover G minus the identity exactly."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any

from .equations import ElementaryEquation, parse_equation, print_equation, solve_bruteforce, singleton_equation


@dataclass
class CoverCertificate:
    equations: list[ElementaryEquation]
    target: Any
    exact: bool | None = None  # True: proven minimum; False: search stopped early

    def to_json(self) -> dict:
        doc = {"equations": [print_equation(e, self.target) for e in self.equations], "size": len(self.equations)}
        if self.exact is not None:
            doc["exact"] = self.exact
        return doc

    @classmethod
    def from_json(cls, doc: dict, G) -> "CoverCertificate":
        eqs = doc["equations"] if isinstance(doc, dict) else doc
        return cls([parse_equation(t, G) for t in eqs], G)


def singleton_certificate(G) -> CoverCertificate:
    return CoverCertificate([singleton_equation(G, g) for g in G.elements() if g != G.identity], G)


@dataclass
class CoverVerdict:
    valid: bool
    uncovered: Any = None
    identity_covered_by: int | None = None

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self, G) -> dict:
        doc: dict = {"valid": self.valid}
        if self.uncovered is not None:
            doc["uncovered"] = G.to_json(self.uncovered)
        if self.identity_covered_by is not None:
            doc["identity_covered_by"] = self.identity_covered_by
        return doc


def verify_discreteness_cover(cert: CoverCertificate) -> CoverVerdict:
    """Valid iff the union of the solution sets is exactly G minus {e}.

    Failure reports the first equation whose solutions contain e, else the
    first non-identity element (in element order) left uncovered.
    """
    G = cert.target
    sols = [solve_bruteforce(eq, G) for eq in cert.equations]
    for i, s in enumerate(sols):
        if G.identity in s:
            return CoverVerdict(False, identity_covered_by=i)
    covered = set().union(*sols) if sols else set()
    for g in G.elements():
        if g != G.identity and g not in covered:
            return CoverVerdict(False, uncovered=g)
    return CoverVerdict(True)


def candidate_equations(G, max_n: int):
    """All equations with n <= max_n in a fixed order: n, then signs, then coefficients."""
    elems = G.elements()
    for n in range(max_n + 1):
        for signs in itertools.product((1, -1), repeat=n + 1):
            for coeffs in itertools.product(elems, repeat=n + 1):
                yield ElementaryEquation(coeffs, signs)


def _solution_mask(eq: ElementaryEquation, G, index: dict) -> int:
    mask = 0
    for x in solve_bruteforce(eq, G):
        mask |= 1 << index[x]
    return mask


@dataclass
class SearchResult:
    certificate: CoverCertificate | None
    exact: bool
    nodes: int
    candidates: int
    budget_exhausted: bool = False
    stats: dict = field(default_factory=dict)


def search_min_cover(G, max_n: int, budget: int = 100_000) -> SearchResult:
    """Smallest cover of G minus {e} by elementary sets with word length <= max_n.

    Candidate sets containing e are discarded, duplicates keep their first
    equation, and sets contained in another candidate are dropped (they never
    help a minimum cover).  Branch and bound starts from the greedy cover and
    branches on the uncovered element with the fewest covering sets; ``budget``
    bounds the number of search nodes.  ``budget <= 0`` does no search.
    """
    if budget <= 0:
        return SearchResult(None, False, 0, 0, budget_exhausted=True)
    elems = G.elements()
    index = {g: i for i, g in enumerate(elems)}
    target = 0
    for g in elems:
        if g != G.identity:
            target |= 1 << index[g]
    ident_bit = 1 << index[G.identity]
    first_eq: dict[int, ElementaryEquation] = {}
    for eq in candidate_equations(G, max_n):
        m = _solution_mask(eq, G, index)
        if m == 0 or m & ident_bit:
            continue
        first_eq.setdefault(m, eq)
    masks = list(first_eq)
    rank = {m: i for i, m in enumerate(masks)}
    # maximal sets only
    maximal = [m for m in masks if not any(o != m and (m | o) == o for o in masks)]
    maximal.sort(key=lambda m: (-bin(m).count("1"), rank[m]))
    n_cand = len(first_eq)
    if target == 0:
        cert = CoverCertificate([], G, exact=True)
        return SearchResult(cert, True, 0, n_cand)

    if not maximal:
        return SearchResult(None, False, 0, n_cand)
    # greedy incumbent
    greedy, rem = [], target
    while rem:
        best = max(maximal, key=lambda m: (bin(m & rem).count("1"), -rank[m]))
        if not best & rem:
            return SearchResult(None, False, 0, n_cand)
        greedy.append(best)
        rem &= ~best
    incumbent = list(greedy)
    largest = max(bin(m).count("1") for m in maximal)
    covering = {}
    for i in range(len(elems)):
        bit = 1 << i
        covering[bit] = [m for m in maximal if m & bit]

    nodes = 0
    exhausted = False

    def lower_bound(rem: int) -> int:
        return -(-bin(rem).count("1") // largest)

    def dfs(chosen: list[int], rem: int) -> None:
        nonlocal nodes, incumbent, exhausted
        if exhausted:
            return
        nodes += 1
        if nodes > budget:
            exhausted = True
            return
        if rem == 0:
            if len(chosen) < len(incumbent):
                incumbent = list(chosen)
            return
        if len(chosen) + lower_bound(rem) >= len(incumbent):
            return
        # element with the fewest covering sets
        bit = min((1 << i for i in range(len(elems)) if rem >> i & 1), key=lambda b: len(covering[b]))
        for m in covering[bit]:
            chosen.append(m)
            dfs(chosen, rem & ~m)
            chosen.pop()
            if exhausted:
                return

    dfs([], target)
    ordered = sorted(incumbent, key=lambda m: rank[m])
    cert = CoverCertificate([first_eq[m] for m in ordered], G, exact=not exhausted)
    return SearchResult(cert, not exhausted, nodes, n_cand, budget_exhausted=exhausted,
                        stats={"greedy_size": len(greedy), "maximal_candidates": len(maximal)})


def load_certificate(text: str, G) -> CoverCertificate:
    return CoverCertificate.from_json(json.loads(text), G)
