"""Smallest discreteness covers found by search, next to the singleton bound, for a group catalog.

    python scripts/cover_table.py --max-order 12 --max-n 1
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from zariski_groups.cover import search_min_cover, verify_discreteness_cover
from zariski_groups.groups import abelian_finite, alternating, cyclic, dihedral, direct_product, quaternion, symmetric


@dataclass
class TableConfig:
    max_order: int = 12
    max_n: int = 1
    budget: int = 100_000
    out: str | None = None


def catalog(max_order: int) -> dict:
    groups = {f"Z{n}": cyclic(n) for n in range(2, max_order + 1)}
    groups.update({f"D{n}": dihedral(n) for n in range(3, max_order // 2 + 1)})
    extra = {
        "Z2xZ2": lambda: abelian_finite([2, 2]),
        "Z2xZ4": lambda: abelian_finite([2, 4]),
        "Z2^3": lambda: abelian_finite([2, 2, 2]),
        "Z3xZ3": lambda: abelian_finite([3, 3]),
        "Q8": quaternion,
        "A4": lambda: alternating(4),
        "Z2xS3": lambda: direct_product(cyclic(2), symmetric(3)),
        "S4": lambda: symmetric(4),
    }
    for name, make in extra.items():
        G = make()
        if G.order <= max_order:
            groups[name] = G
    return groups


def run(cfg: TableConfig) -> list[dict]:
    rows = []
    for name, G in catalog(cfg.max_order).items():
        t = time.perf_counter()
        res = search_min_cover(G, cfg.max_n, budget=cfg.budget)
        size = len(res.certificate.equations) if res.certificate else None
        rows.append({
            "group": name,
            "order": G.order,
            "singleton_bound": G.order - 1,
            "found": size,
            "exact": res.exact,
            "verified": bool(res.certificate) and verify_discreteness_cover(res.certificate).valid,
            "nodes": res.nodes,
            "candidates": res.candidates,
            "seconds": round(time.perf_counter() - t, 3),
        })
    return rows


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-order", type=int, default=12)
    p.add_argument("--max-n", type=int, default=1)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--out", help="write rows as JSON lines")
    a = p.parse_args(argv)
    cfg = TableConfig(a.max_order, a.max_n, a.budget, a.out)
    rows = run(cfg)
    print(f"{'group':>8} {'|G|':>4} {'bound':>6} {'found':>6} {'exact':>6} {'ok':>4} {'nodes':>8} {'s':>6}")
    for r in rows:
        print(f"{r['group']:>8} {r['order']:>4} {r['singleton_bound']:>6} {str(r['found']):>6} "
              f"{str(r['exact']):>6} {str(r['verified']):>4} {r['nodes']:>8} {r['seconds']:>6.2f}")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(json.dumps({"config": asdict(cfg)}) + "\n")
            fh.writelines(json.dumps(r) + "\n" for r in rows)


if __name__ == "__main__":
    main()
