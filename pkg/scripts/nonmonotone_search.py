"""Search four-node non-series-parallel l-instances for a longer target
length that needs fewer tolls than a shorter one, and print the first hit."""

import argparse
import time
from dataclasses import dataclass

from tollbooth.instance import fmt_fraction
from tollbooth.oracle import find_nonmonotone_witness


@dataclass
class SearchConfig:
    max_length: int = 3
    span: int = 4


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-length", type=int, default=SearchConfig.max_length)
    ap.add_argument("--span", type=int, default=SearchConfig.span)
    cfg = SearchConfig(**vars(ap.parse_args()))
    start = time.perf_counter()
    w = find_nonmonotone_witness(cfg.max_length, cfg.span)
    elapsed = time.perf_counter() - start
    if w is None:
        print(f"no witness found ({elapsed:.1f}s)")
        return 1
    li = w.linstance
    for e in li.network.edges:
        mark = "used" if e.id in li.used else "unused"
        print(f"edge {e.id} {e.tail}->{e.head} length {fmt_fraction(li.lengths[e.id])} {mark}")
    for target, k in sorted(w.supports.items()):
        print(f"target {fmt_fraction(target)}: min tolls {k}")
    print(f"length {fmt_fraction(w.longer)} needs fewer tolls than {fmt_fraction(w.shorter)} ({elapsed:.1f}s)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
