"""Closing-off machinery at finite stages: phi-invariant hulls and diagonal intersections."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

Phi = Callable[[frozenset], Iterable]

DEFAULT_ARITY_CAP = 3


@dataclass(frozen=True)
class FinitarySet:
    elements: frozenset
    stage: int = 0


@dataclass
class ClosureResult:
    elements: frozenset
    stabilized: bool
    stages: int
    added: list[list] = field(default_factory=list)  # elements added at each stage

    @property
    def finitary(self) -> FinitarySet:
        return FinitarySet(self.elements, self.stages)


def _default_key(x: Any):
    return (type(x).__name__, x) if isinstance(x, (int, tuple, str)) else (type(x).__name__, repr(x))


def _subsets(items: Sequence, cap: int, must_meet: set | None) -> Iterator[frozenset]:
    """Subsets of size <= cap in size-then-lexicographic order; if ``must_meet`` is given,
    only those containing one of its elements (the empty set is then skipped)."""
    for r in range(0, min(cap, len(items)) + 1):
        for combo in itertools.combinations(items, r):
            if must_meet is None or any(z in must_meet for z in combo):
                yield frozenset(combo)


def phi_closure(
    seed: Iterable | FinitarySet,
    phi: Phi,
    fuel: int | None = None,
    arity_cap: int = DEFAULT_ARITY_CAP,
    universe: Iterable | None = None,
    key: Callable = _default_key,
) -> ClosureResult:
    """Iterate Y_{n+1} = Y_n + union of phi(Z) over finite Z in Y_n with |Z| <= arity_cap.

    Only subsets meeting the previous stage's additions are re-evaluated, which
    gives the same stages as the full recursion.  ``stabilized`` is set when a
    stage adds nothing; the result is then phi-invariant up to ``arity_cap``.
    """
    Y = set(seed.elements if isinstance(seed, FinitarySet) else seed)
    allowed = None if universe is None else set(universe)
    if allowed is not None and not Y <= allowed:
        raise ValueError("seed is not inside the universe")
    new: set | None = None  # None: first stage evaluates every subset
    added_log: list[list] = []
    stage = 0
    while fuel is None or stage < fuel:
        stage += 1
        items = sorted(Y, key=key)
        out = set()
        for Z in _subsets(items, arity_cap, new):
            for y in phi(Z):
                if y not in Y:
                    if allowed is not None and y not in allowed:
                        raise ValueError(f"phi left the universe: {y!r}")
                    out.add(y)
        added_log.append(sorted(out, key=key))
        if not out:
            return ClosureResult(frozenset(Y), True, stage, added_log)
        Y |= out
        new = out
    return ClosureResult(frozenset(Y), False, stage, added_log)


def naive_saturation(seed: Iterable, phi: Phi, arity_cap: int = DEFAULT_ARITY_CAP) -> frozenset:
    """Least superset of ``seed`` closed under phi, by plain repetition (test oracle)."""
    Y = set(seed)
    changed = True
    while changed:
        changed = False
        for r in range(0, min(arity_cap, len(Y)) + 1):
            for combo in itertools.combinations(list(Y), r):
                extra = set(phi(frozenset(combo))) - Y
                if extra:
                    Y |= extra
                    changed = True
    return frozenset(Y)


@dataclass
class InvarianceResult:
    invariant: bool
    counterexample: frozenset | None = None

    def __bool__(self) -> bool:
        return self.invariant


def is_phi_invariant(Y: Iterable | FinitarySet, phi: Phi, arity_cap: int = DEFAULT_ARITY_CAP, key: Callable = _default_key) -> InvarianceResult:
    Yset = set(Y.elements if isinstance(Y, FinitarySet) else Y)
    for Z in _subsets(sorted(Yset, key=key), arity_cap, None):
        if not set(phi(Z)) <= Yset:
            return InvarianceResult(False, Z)
    return InvarianceResult(True)


def cantor_pairs() -> Iterator[tuple[int, int]]:
    """Enumeration of N x N along anti-diagonals: (0,0), (0,1), (1,0), (0,2), ..."""
    s = 0
    while True:
        for k in range(s + 1):
            yield (k, s - k)
        s += 1


@dataclass
class DiagonalResult:
    elements: frozenset
    stabilized: bool
    steps: int
    in_club: list[bool]
    schedule: list[int] = field(default_factory=list)


def diagonal_intersection(seed: Iterable | FinitarySet, witnesses: Sequence[Callable[[frozenset], Iterable]], fuel: int = 10_000) -> DiagonalResult:
    """Interleave unbounding functions f_k by Y_{n+1} = Y_n + f_{k_n}(Y_n).

    (k_n, m_n) runs through ``cantor_pairs`` restricted to k < len(witnesses),
    so every f_k is applied infinitely often.  The run stops once a full round
    of all witnesses adds nothing (the stage is then closed under every f_k) or
    after ``fuel`` applications.  ``in_club[k]`` reports f_k(Y) <= Y at the end.
    """
    Y = frozenset(seed.elements if isinstance(seed, FinitarySet) else seed)
    K = len(witnesses)
    if K == 0:
        return DiagonalResult(Y, True, 0, [])
    quiet: set[int] = set()
    schedule: list[int] = []
    steps = 0
    stabilized = False
    for k, _ in cantor_pairs():
        if k >= K:
            continue
        if steps >= fuel:
            break
        steps += 1
        schedule.append(k)
        nxt = Y | frozenset(witnesses[k](Y))
        if nxt == Y:
            quiet.add(k)
            if len(quiet) == K:
                stabilized = True
                break
        else:
            quiet = set()
            Y = nxt
    flags = [frozenset(f(Y)) <= Y for f in witnesses]
    return DiagonalResult(Y, stabilized, steps, flags, schedule)


def closure_witness(phi: Phi, arity_cap: int = DEFAULT_ARITY_CAP, fuel: int | None = None, key: Callable = _default_key) -> Callable[[frozenset], frozenset]:
    """The unbounding function Z -> phi-invariant hull of Z for the club of phi-invariant sets."""

    def f(Z: frozenset) -> frozenset:
        return phi_closure(Z, phi, fuel=fuel, arity_cap=arity_cap, key=key).elements

    return f
