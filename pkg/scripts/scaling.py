"""Time solve_mintb on random series-parallel networks of growing size."""

import argparse
import math
import statistics
import time
from dataclasses import dataclass

from tollbooth.flows import compute_social_optimum, verify_opt_inducing
from tollbooth.gadgets import gen_random_sp
from tollbooth.mintb import solve_mintb


@dataclass
class ScalingConfig:
    sizes: tuple[int, ...] = (250, 500, 1000, 2000)
    seed: int = 7
    repeats: int = 3


def run(cfg: ScalingConfig) -> list[tuple[int, float, float, int]]:
    rows = []
    for m in cfg.sizes:
        g = gen_random_sp(cfg.seed, m)
        start = time.perf_counter()
        opt = compute_social_optimum(g.network, g.latencies, g.demand)
        t_opt = time.perf_counter() - start
        best = math.inf
        for _ in range(cfg.repeats):
            start = time.perf_counter()
            sol = solve_mintb(g.network, g.latencies, g.demand, opt)
            best = min(best, time.perf_counter() - start)
        assert verify_opt_inducing(g.network, g.latencies, g.demand, opt, sol.tolls)
        rows.append((m, t_opt, best, sol.support))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=lambda s: tuple(int(x) for x in s.split(",")), default=ScalingConfig.sizes)
    ap.add_argument("--seed", type=int, default=ScalingConfig.seed)
    ap.add_argument("--repeats", type=int, default=ScalingConfig.repeats)
    cfg = ScalingConfig(**vars(ap.parse_args()))
    rows = run(cfg)
    print(f"{'m':>6} {'optimum s':>10} {'solve s':>9} {'support':>8}")
    for m, t_opt, t_solve, support in rows:
        print(f"{m:>6} {t_opt:>10.3f} {t_solve:>9.3f} {support:>8}")
    if len(rows) > 1:
        slope = statistics.linear_regression([math.log(r[0]) for r in rows],
                                             [math.log(r[2]) for r in rows]).slope
        print(f"log-log slope of solve time: {slope:.2f}")


if __name__ == "__main__":
    main()
