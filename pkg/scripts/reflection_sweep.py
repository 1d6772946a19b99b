"""Sweep the reflection construction over sums of cyclic groups and tabulate the outcome.

    python scripts/reflection_sweep.py --shapes 8x2 16x4 32x2 --seeds 50
"""

from __future__ import annotations

import argparse
import json
import random
import statistics
import time
from dataclasses import asdict, dataclass, field

from zariski_groups.abelian import FgAbelianGroup
from zariski_groups.closed_sets import EMPTY, FULL, Atom, union
from zariski_groups.equations import multiple_equation
from zariski_groups.reflection import reflection_construct, verify_witnesses


@dataclass
class SweepConfig:
    shapes: list[tuple[int, int]] = field(default_factory=lambda: [(8, 2), (16, 4), (32, 2)])
    seeds: int = 50
    rng_seed: int = 0
    max_word_n: int = 1
    fuel: int = 16
    arity_cap: int = 3
    out: str | None = None


def random_target(rng: random.Random, G: FgAbelianGroup, m: int):
    r = rng.random()
    if r < 0.1:
        return EMPTY, "empty"
    if r < 0.2:
        return FULL, "full"
    atoms = []
    for _ in range(rng.randint(1, 3)):
        k = rng.choice([d for d in range(1, m + 1) if m % d == 0])
        c = tuple(rng.randrange(m) for _ in range(G.ngens))
        atoms.append(Atom(multiple_equation(G, k, G.scale(k, c))))
    return union(*atoms), f"{len(atoms)} cosets"


def run(cfg: SweepConfig) -> list[dict]:
    rng = random.Random(cfg.rng_seed)
    rows = []
    for N, m in cfg.shapes:
        G = FgAbelianGroup(0, (m,) * N)
        for i in range(cfg.seeds):
            A, kind = random_target(rng, G, m)
            seed = [tuple(rng.randrange(m) for _ in range(N)) for _ in range(rng.randint(1, 3))]
            t = time.perf_counter()
            tr = reflection_construct(G, A, seed, max_word_n=cfg.max_word_n, fuel=cfg.fuel, arity_cap=cfg.arity_cap)
            rows.append({
                "shape": f"{N}x{m}",
                "run": i,
                "target": kind,
                "stabilized": tr.stabilized,
                "equal": tr.equal,
                "witnesses_ok": not verify_witnesses(tr),
                "subgroup_order": len(tr.subgroup),
                "stages": 1 + max((r["stage"] for r in tr.records), default=0),
                "seconds": round(time.perf_counter() - t, 4),
            })
    return rows


def summarize(rows: list[dict]) -> None:
    print(f"{'shape':>6} {'runs':>5} {'stab':>5} {'equal':>6} {'wit ok':>7} {'median |H|':>11} {'max s':>7}")
    for shape in dict.fromkeys(r["shape"] for r in rows):
        sel = [r for r in rows if r["shape"] == shape]
        orders = [r["subgroup_order"] for r in sel if r["subgroup_order"]]
        print(
            f"{shape:>6} {len(sel):>5} {sum(r['stabilized'] for r in sel):>5} "
            f"{sum(r['equal'] for r in sel):>6} {sum(r['witnesses_ok'] for r in sel):>7} "
            f"{statistics.median(orders) if orders else 0:>11} {max(r['seconds'] for r in sel):>7.2f}"
        )


def parse_args(argv=None) -> SweepConfig:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--shapes", nargs="+", default=["8x2", "16x4", "32x2"], help="NxM for the sum of N copies of Z/M")
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=1)
    p.add_argument("--fuel", type=int, default=16)
    p.add_argument("--arity", type=int, default=3)
    p.add_argument("--out", help="write per-run rows as JSON lines")
    a = p.parse_args(argv)
    shapes = [tuple(int(v) for v in s.split("x")) for s in a.shapes]
    return SweepConfig(shapes, a.seeds, a.rng_seed, a.max_n, a.fuel, a.arity, a.out)


def main(argv=None) -> None:
    cfg = parse_args(argv)
    rows = run(cfg)
    summarize(rows)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(json.dumps({"config": asdict(cfg)}) + "\n")
            fh.writelines(json.dumps(r) + "\n" for r in rows)


if __name__ == "__main__":
    main()
