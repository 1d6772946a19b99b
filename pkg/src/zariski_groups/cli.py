"""Command-line entry point: ``zariski-groups <command> ...``.

Reports go to stdout as JSON, a one-line summary goes to stderr.
Exit codes: 0 pass, 1 property fails, 2 parse error, 3 validation error,
4 fuel or budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .abelian import FgAbelianGroup, GroupError
from .closed_sets import (
    Atom,
    ExpressionError,
    UnresolvableAtom,
    load_expr,
    map_atoms,
    normalize,
    reflection_check,
)
from .cover import load_certificate, search_min_cover, verify_discreteness_cover
from .direct_sum import DirectSumGroup
from .equations import ElementaryEquation, EquationSyntaxError, abelian_reduce, parse_equation, solve_bruteforce, solve_linear
from .reflection import reflection_construct, verify_witnesses
from .specfile import build_group, resolve_subgroup, split_top_level
from .subgroups import is_normal, is_super_normal, subgroup_generated

EXIT_PASS, EXIT_FAIL, EXIT_PARSE, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3, 4
ENUMERATE_LIMIT = 4096


class CliExit(Exception):
    def __init__(self, code: int, report: dict):
        super().__init__(report.get("error", ""))
        self.code = code
        self.report = report


@dataclass
class RunConfig:
    command: str
    group: Path | None = None
    check: str | None = None
    subgroup: str | None = None
    eq: str | None = None
    expr: Path | None = None
    cert: Path | None = None
    seed: str | None = None
    query: str | None = None
    fuel: int = 16
    budget: int = 100_000
    max_n: int = 1
    arity: int = 3
    out: Path | None = None

    def validate(self) -> None:
        if self.fuel < 1:
            raise CliExit(EXIT_INVALID, {"error": "--fuel must be positive"})
        if self.max_n < 0 or self.arity < 0:
            raise CliExit(EXIT_INVALID, {"error": "--max-n and --arity must be nonnegative"})
        for p in (self.group, self.expr, self.cert):
            if p is not None and not p.is_file():
                raise CliExit(EXIT_INVALID, {"error": f"cannot read {p}"})


# -- helpers -----------------------------------------------------------------


def _read_doc(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliExit(EXIT_INVALID, {"error": f"{path}: invalid JSON: {exc.msg}", "position": exc.pos}) from exc


def _group(cfg: RunConfig, abelian: bool = False):
    if cfg.group is None:
        raise CliExit(EXIT_INVALID, {"error": "--group is required"})
    try:
        return build_group(_read_doc(cfg.group), abelian=abelian)
    except GroupError as exc:
        raise CliExit(EXIT_INVALID, {"error": f"group specification: {exc}"}) from exc


def _engine_group(cfg: RunConfig):
    """The group in a form the closed-set engines accept."""
    doc = _read_doc(cfg.group) if cfg.group else None
    if isinstance(doc, dict) and doc.get("kind") == "direct_sum":
        G = _group(cfg)
    else:
        G = _group(cfg, abelian=True)
    if not isinstance(G, (FgAbelianGroup, DirectSumGroup)):
        raise CliExit(EXIT_INVALID, {"error": "this command needs an abelian group (cyclic, abelian, products of cyclic, direct_sum)"})
    return G


def _coords(G):
    """(coordinate group, element -> coordinates) for the closed-set engines."""
    if isinstance(G, DirectSumGroup):
        try:
            Gc, to_c, _ = G.as_abelian()
        except GroupError as exc:
            raise CliExit(EXIT_INVALID, {"error": str(exc)}) from exc
        return Gc, to_c
    return G, lambda g: g


def _eq_coords(eq: ElementaryEquation, to_c) -> ElementaryEquation:
    return ElementaryEquation(tuple(to_c(c) for c in eq.coeffs), eq.signs)


def _parse_eq(text: str | None, G):
    if text is None:
        raise CliExit(EXIT_INVALID, {"error": "--eq is required"})
    try:
        return parse_equation(text, G)
    except EquationSyntaxError as exc:
        raise CliExit(EXIT_PARSE, {"error": str(exc), "position": exc.position}) from exc


def _load_expr(cfg: RunConfig, G):
    if cfg.expr is None:
        raise CliExit(EXIT_INVALID, {"error": "--expr is required"})
    try:
        return load_expr(cfg.expr.read_text(encoding="utf-8"), G)
    except UnresolvableAtom as exc:
        raise CliExit(EXIT_INVALID, {"error": str(exc)}) from exc
    except ExpressionError as exc:
        raise CliExit(EXIT_PARSE, {"error": str(exc), "position": 0}) from exc


def _elements(G, text: str | None) -> list:
    if not text:
        return []
    try:
        return [G.parse_element(t) for t in split_top_level(text)]
    except GroupError as exc:
        raise CliExit(EXIT_PARSE, {"error": str(exc), "position": 0}) from exc


def _subgroup_gens(cfg: RunConfig, G) -> list:
    if cfg.subgroup is None:
        raise CliExit(EXIT_INVALID, {"error": "--subgroup is required"})
    try:
        return resolve_subgroup(G, cfg.subgroup)
    except GroupError as exc:
        raise CliExit(EXIT_INVALID, {"error": f"subgroup: {exc}"}) from exc


def _write(path: Path | None, text: str) -> None:
    if path is not None:
        path.write_text(text, encoding="utf-8")


# -- commands ----------------------------------------------------------------


def _linear_view(cfg: RunConfig, G):
    """(abelian coordinate group, element -> coordinates) when G is abelian in coordinates, else None."""
    if isinstance(G, FgAbelianGroup):
        return G, lambda g: g
    if isinstance(G, DirectSumGroup):
        return _coords(G) if G.is_finite else None
    view = _group(cfg, abelian=True)
    if isinstance(view, FgAbelianGroup):
        return view, lambda g: view.parse_element(G.format_element(g))
    return None


def cmd_solve(cfg: RunConfig) -> tuple[int, dict]:
    G = _group(cfg)
    eq = _parse_eq(cfg.eq, G)
    report: dict = {}
    view = _linear_view(cfg, G)
    if view is not None:
        Gc, to_c = view
        sol = solve_linear(Gc, abelian_reduce(_eq_coords(eq, to_c), Gc))
        report.update(sol.to_json(Gc))
    if G.is_finite:
        brute = solve_bruteforce(eq, G)
        report["solutions"] = [G.to_json(x) for x in sorted(brute, key=G.sort_key)]
        if view is not None:
            report["bruteforce_agrees"] = set(sol.materialize(Gc)) == {to_c(x) for x in brute}
    code = EXIT_FAIL if report.get("bruteforce_agrees") is False else EXIT_PASS
    return code, report


def cmd_closure(cfg: RunConfig) -> tuple[int, dict]:
    G = _engine_group(cfg)
    A = _load_expr(cfg, G)
    Gc, to_c = _coords(G)
    if Gc is not G:
        A = map_atoms(A, lambda e: Atom(_eq_coords(e, to_c)))
    canon = normalize(A, Gc)
    report = {"canonical": canon.to_json()}
    if Gc.is_finite and (Gc.order or 1) <= ENUMERATE_LIMIT:
        report["elements"] = [Gc.to_json(x) for x in sorted(canon.elements(), key=Gc.sort_key)]
    if cfg.query:
        pts = _elements(G, cfg.query)
        report["query"] = [{"element": G.to_json(p), "member": canon.member(to_c(p))} for p in pts]
    return EXIT_PASS, report


def cmd_check(cfg: RunConfig) -> tuple[int, dict]:
    kind = cfg.check
    if kind in ("normal", "super-normal"):
        G = _group(cfg)
        if not getattr(G, "is_finite", False):
            raise CliExit(EXIT_INVALID, {"error": f"check {kind} needs a finite group"})
        H = subgroup_generated(G, _subgroup_gens(cfg, G))
        normal = is_normal(G, H)
        report: dict = {"check": kind, "subgroup_order": H.order, "normal": normal}
        if kind == "normal":
            report["holds"] = normal
        elif not normal:
            report["holds"] = False
            report["reason"] = "not normal"
        else:
            res = is_super_normal(G, H, "definitional")
            other = is_super_normal(G, H, "centralizer_product")
            report["holds"] = res.holds
            report["methods_agree"] = res.holds == other.holds
            if res.holds:
                report["witness"] = {G.format_element(x): G.to_json(y) for x, y in res.witness.items()}
            else:
                report["witness"] = {"x": G.to_json(res.failing)}
        return (EXIT_PASS if report["holds"] else EXIT_FAIL), report
    if kind == "reflection":
        G = _engine_group(cfg)
        A = _load_expr(cfg, G)
        gens = _subgroup_gens(cfg, G)
        Gc, to_c = _coords(G)
        if Gc is not G:
            A = map_atoms(A, lambda e: Atom(_eq_coords(e, to_c)))
        rep = reflection_check(Gc, [to_c(g) for g in gens], A)
        rep["check"] = "reflection"
        return (EXIT_PASS if rep["equal"] else EXIT_FAIL), rep
    if kind == "cover":
        G = _group(cfg)
        if not getattr(G, "is_finite", False):
            raise CliExit(EXIT_INVALID, {"error": "check cover needs a finite group"})
        if cfg.cert is None:
            raise CliExit(EXIT_INVALID, {"error": "--cert is required"})
        try:
            cert = load_certificate(cfg.cert.read_text(encoding="utf-8"), G)
        except EquationSyntaxError as exc:
            raise CliExit(EXIT_PARSE, {"error": str(exc), "position": exc.position}) from exc
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CliExit(EXIT_INVALID, {"error": f"certificate: {exc}"}) from exc
        verdict = verify_discreteness_cover(cert)
        report = {"check": "cover", "size": len(cert.equations), **verdict.to_json(G)}
        return (EXIT_PASS if verdict.valid else EXIT_FAIL), report
    raise CliExit(EXIT_INVALID, {"error": f"unknown check {kind!r}"})


def cmd_reflect(cfg: RunConfig) -> tuple[int, dict]:
    G = _engine_group(cfg)
    A = _load_expr(cfg, G)
    seed = _elements(G, cfg.seed)
    try:
        trace = reflection_construct(G, A, seed, max_word_n=cfg.max_n, fuel=cfg.fuel, arity_cap=cfg.arity)
    except GroupError as exc:
        raise CliExit(EXIT_INVALID, {"error": str(exc)}) from exc
    problems = verify_witnesses(trace)
    summary = trace.summary()
    summary["witness_problems"] = problems
    lines = [json.dumps(r) for r in trace.records] + [json.dumps(summary)]
    text = "\n".join(lines) + "\n"
    if cfg.out is not None:
        _write(cfg.out, text)
    if not trace.stabilized:
        code = EXIT_BUDGET
    else:
        code = EXIT_PASS if trace.equal and not problems else EXIT_FAIL
    return code, summary


def cmd_cover_search(cfg: RunConfig) -> tuple[int, dict]:
    G = _group(cfg)
    if not getattr(G, "is_finite", False):
        raise CliExit(EXIT_INVALID, {"error": "cover-search needs a finite group"})
    res = search_min_cover(G, cfg.max_n, cfg.budget)
    if res.certificate is None:
        return EXIT_BUDGET, {"error": "no cover found within the budget", "nodes": res.nodes, "candidates": res.candidates}
    doc = res.certificate.to_json()
    _write(cfg.out, json.dumps(doc, indent=2) + "\n")
    verdict = verify_discreteness_cover(res.certificate)
    report = {**doc, "verified": verdict.valid, "nodes": res.nodes, "candidates": res.candidates,
              "budget_exhausted": res.budget_exhausted}
    return (EXIT_PASS if verdict.valid else EXIT_FAIL), report


COMMANDS = {
    "solve": cmd_solve,
    "closure": cmd_closure,
    "check": cmd_check,
    "reflect": cmd_reflect,
    "cover-search": cmd_cover_search,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zariski-groups", description="Elementary algebraic sets and Zariski closures in groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--group", type=Path, required=True, help="group specification (JSON)")
        sp.add_argument("--out", type=Path)

    s = sub.add_parser("solve", help="solve one elementary equation")
    common(s)
    s.add_argument("--eq", required=True)

    s = sub.add_parser("closure", help="canonical form of a closed-set expression")
    common(s)
    s.add_argument("--expr", type=Path, required=True)
    s.add_argument("--query", help="comma-separated elements to test for membership")

    s = sub.add_parser("check", help="check a property; exit 0 if it holds, 1 if not")
    s.add_argument("check", choices=["normal", "super-normal", "reflection", "cover"])
    common(s)
    s.add_argument("--subgroup")
    s.add_argument("--expr", type=Path)
    s.add_argument("--cert", type=Path)

    s = sub.add_parser("reflect", help="run the staged reflection construction")
    common(s)
    s.add_argument("--expr", type=Path, required=True)
    s.add_argument("--seed", default="", help="comma-separated seed elements")
    s.add_argument("--fuel", type=int, default=16)
    s.add_argument("--max-n", type=int, default=1, help="largest word length n used by phi_k")
    s.add_argument("--arity", type=int, default=3, help="largest family size for phi_k")

    s = sub.add_parser("cover-search", help="search for a small discreteness cover")
    common(s)
    s.add_argument("--max-n", type=int, default=1)
    s.add_argument("--budget", type=int, default=100_000)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields and v is not None})


def _summary_line(command: str, code: int, report: dict) -> str:
    verdict = {0: "pass", 1: "fail", 2: "parse error", 3: "invalid input", 4: "budget exhausted"}[code]
    extra = f": {report['error']}" if "error" in report else ""
    return f"{command}: {verdict}{extra}"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_PASS
    cfg = config_from_args(ns)
    try:
        cfg.validate()
        code, report = COMMANDS[cfg.command](cfg)
    except CliExit as exc:
        code, report = exc.code, exc.report
    print(json.dumps(report))
    print(_summary_line(cfg.command, code, report), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
