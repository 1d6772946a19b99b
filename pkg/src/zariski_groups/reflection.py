"""Finite-stage reflection construction over f.g. abelian groups.

Starting from a seed, the subgroup H is closed simultaneously under the group
operations, under psi (adjoin the coefficients of a separating family F_z for
every z in H outside the closure of A) and under phi_k (adjoin a chosen point
x_F of A outside the sets of F, for finite families F of equations with
coefficients in H and word length <= k).  When nothing new appears, H is a
subgroup on which the closure of H n A computed inside H agrees with
H n closure(A); the final report checks exactly that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .abelian import AbelianElement, FgAbelianGroup, GroupError, enumerate_subgroup
from .club import DEFAULT_ARITY_CAP
from .closed_sets import (
    Atom,
    CanonicalClosed,
    ClosedSetExpr,
    contains,
    make_canonical,
    map_atoms,
    normalize,
    reflection_check,
)
from .cosets import ProductCoset, first_lex, iter_lex, kernel_coset
from .direct_sum import DirectSumGroup
from .equations import ElementaryEquation, LinearCongruence, multiple_equation, solve_linear



@dataclass
class WitnessMaps:
    """x_F for the families F met so far and F_z for the points z met so far.

    ``xF`` is keyed by the tuple of equations in F; ``empty`` holds the keys of
    families with A inside their union (their x_F is the identity).
    """

    xF: dict[tuple, AbelianElement] = field(default_factory=dict)
    empty: set = field(default_factory=set)
    Fz: dict[AbelianElement, tuple[ElementaryEquation, ...]] = field(default_factory=dict)


@dataclass
class ReflectionTrace:
    group: FgAbelianGroup
    closed: CanonicalClosed
    seed: list
    records: list[dict]
    subgroup: frozenset
    generators: list
    stabilized: bool
    report: dict
    witnesses: WitnessMaps

    @property
    def equal(self) -> bool:
        return bool(self.report.get("equal"))

    def summary(self) -> dict:
        return {
            "summary": True,
            "stabilized": self.stabilized,
            "subgroup_size": len(self.subgroup),
            "generators": [self.group.to_json(g) for g in self.generators],
            "equality": {
                "equal": self.report["equal"],
                "lhs": self.report["lhs_canonical"],
                "rhs": self.report["rhs_canonical"],
                "informational": self.report["informational"],
            },
        }

    def json_lines(self) -> str:
        return "\n".join(json.dumps(r) for r in self.records + [self.summary()]) + "\n"


def _achievable_multipliers(k: int) -> list[int]:
    """Exponent sums of words with n <= k, up to sign: |m| <= k+1, and m = 0 needs n >= 1."""
    return [m for m in range(0, k + 2) if m or k >= 1]


def _span_add(G: FgAbelianGroup, gens: list, H: set, new: Iterable, limit: int) -> tuple[set, list]:
    """Grow generators by the new elements not yet in H and re-close."""
    for x in sorted(set(new), key=G.sort_key):
        if x not in H:
            gens.append(x)
            H = enumerate_subgroup(G, gens, limit)
            if H is None:
                raise _TooLarge()
    return H, gens


class _TooLarge(Exception):
    pass


def _family_witnesses(G: FgAbelianGroup, H: set, mults: list[int], cap: int, choose_x):
    """Yield (F, x_F) covering every value x_F takes over families F of at most
    ``cap`` solution sets of m x = b with m in ``mults`` and b in H.

    x_F is the first point q of A outside the union of F.  Adding a set that
    misses q leaves x_F = q, so the only families worth extending are those
    that add a set containing q; for each m there is at most one such set
    (m x = m q, available when m q lies in H).  The search therefore visits at
    most len(mults)**cap families and still meets every value of x_F.
    """
    out = []

    def visit(chosen: tuple, cosets: list) -> None:
        q = choose_x(cosets)
        out.append((tuple(multiple_equation(G, m, b) for m, b in chosen), q))
        if q is None or len(chosen) >= cap:
            return
        for m in mults:
            b = G.scale(m, q)
            if b not in H or (m, b) in chosen:
                continue
            sol = solve_linear(G, LinearCongruence(m, b))
            if sol.kind == "all":  # covers A, so x_F = e
                out.append((tuple(multiple_equation(G, mm, bb) for mm, bb in chosen + ((m, b),)), None))
                continue
            visit(chosen + ((m, b),), cosets + [kernel_coset(G, sol.representative, sol.kernel)])

    visit((), [])
    return out


def reflection_construct(
    G,
    A: ClosedSetExpr,
    seed: Iterable,
    max_word_n: int = 1,
    fuel: int = 16,
    arity_cap: int = DEFAULT_ARITY_CAP,
    subgroup_limit: int = 1 << 16,
    segment: int = 256,
) -> ReflectionTrace:
    """Close ``seed`` under the group operations, psi and phi_0..phi_{max_word_n}.

    Witnesses are chosen deterministically: x_F is the first point of A minus
    the union of F in ``G.sort_key`` order (the identity if there is none), and
    F_z lists, for each coset c + G[d] of the canonical form of A, the equation
    d x = d c, which covers that coset and misses every z outside A.

    Families F are drawn from the solution sets of equations over H, up to
    ``arity_cap`` sets at a time; ``_family_witnesses`` explains why a small
    search reaches every value of x_F.  ``xF`` stores the families visited.
    ``fuel`` bounds the number of stages.
    """
    if isinstance(G, DirectSumGroup):
        Gc, to_c, _from_c = G.as_abelian()
        A = map_atoms(A, lambda eq: Atom(ElementaryEquation(tuple(to_c(c) for c in eq.coeffs), eq.signs)))
        seed = [to_c(s) for s in seed]
        G = Gc
    if not isinstance(G, FgAbelianGroup):
        raise GroupError("reflection_construct needs an abelian group in coordinates")
    seed = [G.check(tuple(s)) for s in seed]
    closed = normalize(A, G)
    pos = closed.product_cosets()
    maps = WitnessMaps()

    # F_z is the same family for every z outside A
    Fz_family = tuple(multiple_equation(G, d, G.scale(d, rep)) for d, rep in closed.cosets)
    Fz_support = set().union(*(eq.support() for eq in Fz_family)) if Fz_family else set()

    lex_cache: list[AbelianElement] = []
    lex_iter = iter_lex(G, pos, [])

    def lex_prefix(i: int) -> AbelianElement | None:
        while len(lex_cache) <= i:
            nxt = next(lex_iter, None)
            if nxt is None:
                return None
            lex_cache.append(nxt)
        return lex_cache[i]

    def choose_x(F_cosets: list[ProductCoset]) -> AbelianElement | None:
        for i in range(segment):
            x = lex_prefix(i)
            if x is None:
                return None
            if not any(c.contains_point(x) for c in F_cosets):
                return x
        return first_lex(G, pos, F_cosets)

    records: list[dict] = []
    gens: list = []
    H: set = {G.identity}
    current: set = set(seed)
    stabilized = False
    stage = 0

    try:
        while stage < fuel:
            stage += 1
            stage_added = False

            # (1) subgroup closure
            before = set(H)
            H, gens = _span_add(G, gens, H, current, subgroup_limit)
            group_new = H - before
            records.append({"stage": stage, "trigger": "group", "added": [G.to_json(x) for x in sorted(group_new, key=G.sort_key)]})
            stage_added |= bool(group_new)
            current = set(H)

            # (2) psi
            psi_new = set()
            outside = [z for z in sorted(H, key=G.sort_key) if not closed.member(z)]
            for z in outside:
                maps.Fz.setdefault(z, Fz_family)
            if outside:
                psi_new = Fz_support - current
            records.append({"stage": stage, "trigger": "psi", "added": [G.to_json(x) for x in sorted(psi_new, key=G.sort_key)]})
            current |= psi_new
            stage_added |= bool(psi_new)

            # (3) phi_k for k = 0..max_word_n, coefficients from H
            for k in range(max_word_n + 1):
                mults = [m for m in _achievable_multipliers(k) if m]
                phi_new = set()
                for eqs, x in _family_witnesses(G, H, mults, arity_cap, choose_x):
                    if x is None:
                        maps.xF[eqs] = G.identity
                        maps.empty.add(eqs)
                        continue
                    maps.xF[eqs] = x
                    if x not in current:
                        phi_new.add(x)
                records.append({
                    "stage": stage, "trigger": "phi_k", "k": k,
                    "added": [G.to_json(x) for x in sorted(phi_new, key=G.sort_key)],
                })
                current |= phi_new
                stage_added |= bool(phi_new)

            if not stage_added:
                stabilized = True
                break
    except _TooLarge:
        stabilized = False

    final_gens = list(gens)
    report = reflection_check(G, final_gens, A, stabilized=stabilized)
    return ReflectionTrace(G, closed, seed, records, frozenset(H), final_gens, stabilized, report, maps)


def verify_witnesses(trace: ReflectionTrace) -> list[str]:
    """Re-check every stored x_F and F_z with the canonical-form decision procedures."""
    G, closed = trace.group, trace.closed
    problems = []
    for eqs, x in trace.witnesses.xF.items():
        union = make_canonical(G, [c for eq in eqs for c in normalize(Atom(eq), G).cosets])
        if eqs in trace.witnesses.empty:
            if not contains(union, closed):
                problems.append(f"x_F = e but A is not inside the union of F={eqs}")
        else:
            if not closed.member(x):
                problems.append(f"x_F={x} is not in A")
            if union.member(x):
                problems.append(f"x_F={x} lies in a set of F")
    for z, eqs in trace.witnesses.Fz.items():
        union = make_canonical(G, [c for eq in eqs for c in normalize(Atom(eq), G).cosets])
        if union.member(z):
            problems.append(f"z={z} is not in U(F_z)")
        if not contains(union, closed):
            problems.append(f"A meets U(F_z) for z={z}")
        if closed.member(z):
            problems.append(f"F_z stored for z={z} inside the closure of A")
    return problems
