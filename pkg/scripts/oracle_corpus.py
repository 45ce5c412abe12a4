"""Compare DP support against the brute-force oracle over a random corpus of
small series-parallel l-instances and summarize the support distribution."""

import argparse
import collections
import time
from dataclasses import dataclass

from tollbooth.gadgets import random_l_instances
from tollbooth.mintb import solve_l_instance
from tollbooth.oracle import brute_force_mintb


@dataclass
class CorpusConfig:
    seed: int = 2024
    count: int = 600
    max_m: int = 8
    max_length: int = 6


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=CorpusConfig.seed)
    ap.add_argument("--count", type=int, default=CorpusConfig.count)
    ap.add_argument("--max-m", type=int, default=CorpusConfig.max_m)
    ap.add_argument("--max-length", type=int, default=CorpusConfig.max_length)
    cfg = CorpusConfig(**vars(ap.parse_args()))
    start = time.perf_counter()
    by_support = collections.Counter()
    mismatches = 0
    for li in random_l_instances(cfg.seed, cfg.count, cfg.max_m, cfg.max_length):
        dp = solve_l_instance(li).support
        bf, _ = brute_force_mintb(li)
        by_support[dp] += 1
        if dp != bf:
            mismatches += 1
            print(f"mismatch: dp {dp} oracle {bf} on {li}")
    print(f"{cfg.count} instances, {mismatches} mismatches, {time.perf_counter() - start:.1f}s")
    for k in sorted(by_support):
        print(f"support {k}: {by_support[k]} instances")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
