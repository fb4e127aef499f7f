#!/usr/bin/env python3
"""Print the depth table for T_n with its diagonal, arrow and Jordan subalgebras.

Usage: python3 scripts/reproduce_tables.py [--max-n 4] [--cutoff 6]
"""
import argparse
import time

from quiverdepth.depth import min_depth
from quiverdepth.families import arrow_subalgebra, diagonal_subalgebra, jordan_subalgebra, t_n


def fmt(r):
    return str(r.min_depth) if r.resolved else f">={r.min_depth.at_least}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--cutoff", type=int, default=6)
    ap.add_argument("--jordan-max", type=int, default=3, help="largest n for the Jordan column")
    ns = ap.parse_args()

    print("n,diagonal,arrow,jordan,seconds")
    for n in range(2, ns.max_n + 1):
        t = time.perf_counter()
        a = t_n(n)
        diag = fmt(min_depth(diagonal_subalgebra(a), ns.cutoff))
        arr = fmt(min_depth(arrow_subalgebra(a), ns.cutoff))
        jor = fmt(min_depth(jordan_subalgebra(n), min(ns.cutoff, 5))) if n <= ns.jordan_max else "-"
        print(f"{n},{diag},{arr},{jor},{time.perf_counter() - t:.1f}", flush=True)


if __name__ == "__main__":
    main()
