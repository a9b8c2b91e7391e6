#!/usr/bin/env python3
"""Decide the completeness obligation for two consecutive workflows."""
import argparse
import time

from wfveri.formula import print_formula
from wfveri.generator import completeness_obligation
from wfveri.patterns import default_library
from wfveri.tableau import decide
from wfveri.workflow import aggregated, parse_workflow


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("first", nargs="?", default="Sequence(a,b)")
    ap.add_argument("second", nargs="?", default="Sequence(c,d)")
    args = ap.parse_args()
    lib = default_library()
    g = aggregated(parse_workflow(args.first), lib)
    h = aggregated(parse_workflow(args.second), lib)
    f = completeness_obligation(g, h)
    print(print_formula(f))
    t0 = time.perf_counter()
    v = decide(f)
    print(f"{v.answer.value}: {v.stats.nodes} nodes in {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
