"""Direct sums of groups: finitely supported families with coordinatewise operations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .abelian import FgAbelianGroup, GroupError
from .subgroups import SubgroupHandle, subgroup_generated

NATURALS = "N"

SumElement = tuple[tuple[int, Any], ...]


@dataclass(frozen=True, eq=False)
class DirectSumGroup:
    """The direct sum of ``factors`` over a finite index list or over all of N.

    For the index N a single factor is repeated at every coordinate.  Elements
    are tuples of (index, value) pairs sorted by index, listing exactly the
    coordinates where the value is not the factor identity, so equal elements
    have equal encodings.
    """

    factors: tuple
    index_kind: Any = None  # None: indices 0..len(factors)-1;  NATURALS: one factor repeated

    def __post_init__(self) -> None:
        if not self.factors:
            raise GroupError("a direct sum needs at least one factor")
        for f in self.factors:
            if not all(hasattr(f, a) for a in ("op", "inv", "identity", "check")):
                raise GroupError(f"invalid factor descriptor {f!r}")
        if self.index_kind == NATURALS and len(self.factors) != 1:
            raise GroupError("an N-indexed sum takes exactly one repeated factor")

    @property
    def is_countable_index(self) -> bool:
        return self.index_kind == NATURALS

    @property
    def indices(self) -> range:
        if self.is_countable_index:
            raise GroupError("the index set N cannot be listed")
        return range(len(self.factors))

    def factor(self, i: int):
        if self.is_countable_index:
            if i < 0:
                raise GroupError(f"index {i} not in N")
            return self.factors[0]
        if not 0 <= i < len(self.factors):
            raise GroupError(f"index {i} outside the finite index set")
        return self.factors[i]

    @property
    def is_finite(self) -> bool:
        return not self.is_countable_index and all(getattr(f, "is_finite", False) for f in self.factors)

    @property
    def is_abelian(self) -> bool:
        return all(getattr(f, "is_abelian", False) for f in self.factors)

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        n = 1
        for f in self.factors:
            n *= len(f.elements())
        return n

    @property
    def identity(self) -> SumElement:
        return ()

    def make(self, values: Mapping[int, Any]) -> SumElement:
        """Canonical encoding of the family i -> values[i] (identity elsewhere)."""
        out = []
        for i in sorted(values):
            f = self.factor(i)
            v = f.check(values[i])
            if v != f.identity:
                out.append((i, v))
        return tuple(out)

    def check(self, g) -> SumElement:
        if not isinstance(g, tuple):
            raise GroupError(f"{g!r} is not a direct-sum element")
        prev = -1
        for pair in g:
            if not isinstance(pair, tuple) or len(pair) != 2:
                raise GroupError(f"{g!r} is not a direct-sum element")
            i, v = pair
            if i <= prev:
                raise GroupError("direct-sum element is not sorted by index")
            f = self.factor(i)
            f.check(v)
            if v == f.identity:
                raise GroupError("direct-sum element lists an identity coordinate")
            prev = i
        return g

    def support(self, g: SumElement) -> set[int]:
        return {i for i, _ in g}

    def value(self, g: SumElement, i: int):
        return dict(g).get(i, self.factor(i).identity)

    def op(self, g: SumElement, h: SumElement) -> SumElement:
        a, b = dict(g), dict(h)
        out = []
        for i in sorted(a.keys() | b.keys()):
            f = self.factor(i)
            v = f.op(a.get(i, f.identity), b.get(i, f.identity))
            if v != f.identity:
                out.append((i, v))
        return tuple(out)

    def inv(self, g: SumElement) -> SumElement:
        return tuple((i, self.factor(i).inv(v)) for i, v in g)

    def elements(self) -> list[SumElement]:
        if not self.is_finite:
            raise GroupError("cannot enumerate an infinite direct sum")
        per = [self.factors[i].elements() for i in self.indices]
        return [self.make(dict(enumerate(vals))) for vals in itertools.product(*per)]

    def sort_key(self, g: SumElement):
        return tuple((i, self.factor(i).sort_key(v)) for i, v in g)

    def format_element(self, g: SumElement) -> str:
        if not g:
            return "e"
        return "{" + ",".join(f"{i}:{self.factor(i).format_element(v)}" for i, v in g) + "}"

    def to_json(self, g: SumElement):
        return {str(i): self.factor(i).to_json(v) for i, v in g}

    def parse_element(self, token: str) -> SumElement:
        """``e`` or ``{i:v,j:w}`` with each value read by its factor."""
        token = token.strip()
        if token == "e":
            return ()
        if not (token.startswith("{") and token.endswith("}")):
            raise GroupError(f"cannot read {token!r} as a direct-sum element")
        values = {}
        depth, start, body = 0, 0, token[1:-1]
        parts = []
        for pos, ch in enumerate(body):
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            elif ch == "," and depth == 0:
                parts.append(body[start:pos])
                start = pos + 1
        if body.strip():
            parts.append(body[start:])
        for part in parts:
            i, _, v = part.partition(":")
            i = int(i)
            values[i] = self.factor(i).parse_element(v)
        return self.make(values)

    def as_abelian(self):
        """(FgAbelianGroup in product form, to_coords, from_coords) for finite sums of cyclic factors.

        Factors must be FgAbelianGroup; coordinates are concatenated in index order.
        """
        if self.is_countable_index or not all(isinstance(f, FgAbelianGroup) for f in self.factors):
            raise GroupError("only finite sums of f.g. abelian factors convert to coordinates")
        rank = sum(f.rank for f in self.factors)
        if rank:
            raise GroupError("free factors are not supported in coordinate form")
        moduli = tuple(m for f in self.factors for m in f.invariants)
        strict = all(b % a == 0 for a, b in zip(moduli, moduli[1:]))
        A = FgAbelianGroup(0, moduli, strict=strict)
        offsets = list(itertools.accumulate([0] + [f.ngens for f in self.factors]))

        def to_coords(g: SumElement):
            out = [0] * A.ngens
            for i, v in g:
                out[offsets[i]:offsets[i + 1]] = v
            return tuple(out)

        def from_coords(c):
            c = A.reduce(c)
            return self.make({i: tuple(c[offsets[i]:offsets[i + 1]]) for i in self.indices})

        return A, to_coords, from_coords


def direct_sum(factors, index_kind=None) -> DirectSumGroup:
    if index_kind == NATURALS:
        factors = factors if isinstance(factors, (list, tuple)) else [factors]
    return DirectSumGroup(tuple(factors), index_kind)


def summand_intersection(G: DirectSumGroup, H: SubgroupHandle, J: Iterable[int], fuel: int | None = None) -> SubgroupHandle:
    """H_J = H intersected with the sub-sum over J.

    H is closed from its generators (all of H lies in the sum over the union of
    their supports, which is finite when the factors are), then filtered by support.
    """
    J = set(J)
    closed = H if H.elements is not None and H.stabilized else subgroup_generated(G, H.generators, fuel)
    elems = frozenset(g for g in closed.elements if G.support(g) <= J)
    gens = tuple(sorted(elems, key=G.sort_key))
    return SubgroupHandle(G, gens, elems, closed.stabilized, closed.stages)
