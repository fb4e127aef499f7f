#!/usr/bin/env python3
"""Exploratory: tensor dimensions and depth flags for Jordan subalgebras J_n in T_n.

Nothing printed here is a claim to be checked against; it records what the
engine finds.  n = 4 takes a few minutes.
"""
import argparse
import logging

from quiverdepth.bimodule import TensorChain
from quiverdepth.depth import DepthConfig, DepthEngine
from quiverdepth.families import jordan_subalgebra


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("n", type=int, nargs="*", default=[2, 3])
    ap.add_argument("--cutoff", type=int, default=5)
    ap.add_argument("-v", "--verbose", action="store_true")
    ns = ap.parse_args()
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING)

    for n in ns.n:
        e = jordan_subalgebra(n)
        ch = TensorChain(e)
        dims = [ch.dim(k) for k in range(ns.cutoff // 2 + 2)]
        r = DepthEngine(e, DepthConfig(cutoff=ns.cutoff)).report(with_h_depth=False)
        print(f"J{n}: dims C_0.. = {dims}")
        for lv in r.flags:
            print("   n=%d  " % lv.n + "  ".join(f"{k}={lv.values.get(k)}" for k in ("AA", "AB", "BA", "BB")))
        print(f"   min depth: {r.min_depth}")


if __name__ == "__main__":
    main()
