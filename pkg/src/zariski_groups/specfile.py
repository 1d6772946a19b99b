"""Group specification documents (JSON) and subgroup shorthands."""

from __future__ import annotations

import json
from typing import Any

from .abelian import FgAbelianGroup, GroupError
from .constructions import semidirect_involution
from .direct_sum import DirectSumGroup
from .groups import (
    FiniteGroup,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    from_cayley,
    quaternion,
    symmetric,
)
from .subgroups import center, derived_subgroup

KINDS = (
    "cyclic", "dihedral", "symmetric", "alternating", "quaternion",
    "product", "abelian", "cayley", "semidirect_involution", "direct_sum",
)


class SpecError(GroupError):
    """A group specification that cannot be built."""


def _int_field(doc: dict, name: str, low: int = 1) -> int:
    v = doc.get(name)
    if not isinstance(v, int) or isinstance(v, bool) or v < low:
        raise SpecError(f"field {name!r} must be an integer >= {low}, got {v!r}")
    return v


def _cyclic_moduli(doc: Any) -> list[int] | None:
    """Moduli when ``doc`` describes a finite product of cyclic groups, else None."""
    if not isinstance(doc, dict):
        return None
    kind = doc.get("kind")
    if kind == "cyclic":
        n = doc.get("n")
        return [n] if isinstance(n, int) and n > 1 else ([] if n == 1 else None)
    if kind == "abelian" and not doc.get("rank"):
        inv = doc.get("invariants", [])
        return list(inv) if isinstance(inv, list) else None
    if kind == "product":
        parts = [_cyclic_moduli(f) for f in doc.get("factors", [])]
        if any(p is None for p in parts):
            return None
        return [m for p in parts for m in p]
    return None


def build_group(doc: Any, abelian: bool = False):
    """Build the group described by ``doc``.

    ``abelian=True`` asks for coordinate form: cyclic groups and finite
    products of cyclic groups come back as FgAbelianGroup (product form
    allowed), which is what the closed-set and reflection engines need.
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SpecError("a group specification is an object with a 'kind' field")
    kind = doc["kind"]
    if kind not in KINDS:
        raise SpecError(f"unknown group kind {kind!r}; expected one of {', '.join(KINDS)}")

    if abelian and kind != "abelian":
        moduli = _cyclic_moduli(doc)
        if moduli is not None:
            if any(not isinstance(m, int) or m < 2 for m in moduli):
                raise SpecError(f"bad cyclic orders {moduli}")
            chain = all(b % a == 0 for a, b in zip(moduli, moduli[1:]))
            return FgAbelianGroup(0, tuple(moduli), strict=chain)

    if kind == "cyclic":
        return cyclic(_int_field(doc, "n"))
    if kind == "dihedral":
        return dihedral(_int_field(doc, "n", 2))
    if kind == "symmetric":
        n = _int_field(doc, "n")
        if n > 5:
            raise SpecError("symmetric groups are supported up to n = 5")
        return symmetric(n)
    if kind == "alternating":
        n = _int_field(doc, "n")
        if n > 5:
            raise SpecError("alternating groups are supported up to n = 5")
        return alternating(n)
    if kind == "quaternion":
        return quaternion()
    if kind == "abelian":
        rank = doc.get("rank", 0)
        inv = doc.get("invariants", [])
        if not isinstance(rank, int) or rank < 0 or not isinstance(inv, list):
            raise SpecError("abelian needs an integer 'rank' >= 0 and a list 'invariants'")
        return FgAbelianGroup(rank, tuple(inv))
    if kind == "product":
        factors = doc.get("factors")
        if not isinstance(factors, list) or not factors:
            raise SpecError("product needs a nonempty 'factors' list")
        built = [build_group(f) for f in factors]
        if not all(isinstance(f, FiniteGroup) for f in built):
            raise SpecError("product factors must be finite groups")
        return direct_product(*built)
    if kind == "cayley":
        table = doc.get("table")
        if not isinstance(table, list) or not table:
            raise SpecError("cayley needs a nonempty 'table'")
        return from_cayley(table, doc.get("labels"), doc.get("name", "G"))
    if kind == "semidirect_involution":
        base = build_group(doc.get("base"))
        if not isinstance(base, FiniteGroup):
            raise SpecError("semidirect_involution needs a finite base group")
        f = doc.get("involution")
        if isinstance(f, dict):
            f = [base.parse_element(str(f.get(base.label(a), base.label(a)))) for a in base.elements()]
        if not isinstance(f, list) or len(f) != base.order:
            raise SpecError("'involution' must list the image of every base element")
        f = [base.parse_element(str(v)) if isinstance(v, str) else v for v in f]
        return semidirect_involution(base, f)
    # direct_sum
    if "factors" in doc:
        factors = [build_group(f, abelian=True) for f in doc["factors"]]
    else:
        count = _int_field(doc, "count")
        factors = [build_group(doc.get("factor"), abelian=True)] * count
    if abelian:
        return DirectSumGroup(tuple(factors)).as_abelian()[0]
    return DirectSumGroup(tuple(factors))


def load_group(text: str, abelian: bool = False):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"group file is not valid JSON (position {exc.pos}): {exc.msg}") from exc
    return build_group(doc, abelian=abelian)


def split_top_level(text: str) -> list[str]:
    """Split on commas that are not inside (), [] or {}."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts if p.strip()]


def resolve_subgroup(G, spec: str) -> list:
    """Generators for a subgroup shorthand: ``center``, ``derived``, ``trivial``,
    ``whole``, a JSON list of element tokens, or comma-separated tokens."""
    spec = spec.strip()
    if spec in ("center", "derived"):
        if isinstance(G, FgAbelianGroup):
            return [G.unit(i) for i in range(G.ngens)] if spec == "center" else []
        H = center(G) if spec == "center" else derived_subgroup(G)
        return list(H.generators)
    if spec == "trivial":
        return []
    if spec == "whole":
        if isinstance(G, FgAbelianGroup):
            return [G.unit(i) for i in range(G.ngens)]
        return list(G.elements())
    if spec.startswith("["):
        try:
            tokens = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecError(f"bad subgroup list: {exc.msg}") from exc
        if isinstance(G, FgAbelianGroup):
            tokens = [("(" + ",".join(map(str, t)) + ")") if isinstance(t, list) else t for t in tokens]
        return [G.parse_element(str(t)) for t in tokens]
    return [G.parse_element(t) for t in split_top_level(spec)]
