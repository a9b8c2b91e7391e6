#!/usr/bin/env python3
"""Prove the chained-response formula and print its closed tree."""
import argparse
import time

from wfveri.formula import parse_formula
from wfveri.render import render_tree
from wfveri.tableau import decide

FORMULA = "[](p => q) & [](q => <>r) & [](r => s) => [](p => <>s)"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--formula", default=FORMULA)
    ap.add_argument("--no-tree", action="store_true")
    args = ap.parse_args()
    t0 = time.perf_counter()
    v = decide(parse_formula(args.formula))
    dt = time.perf_counter() - t0
    if not args.no_tree:
        print(render_tree(v), end="")
    print(f"{v.answer.value}: {v.stats.nodes} nodes in {dt:.3f}s")


if __name__ == "__main__":
    main()
