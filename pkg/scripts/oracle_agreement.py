#!/usr/bin/env python3
"""Compare the tableau against the bounded lasso oracle on random formulas."""
import argparse
import random
import time

from wfveri.formula import Not, print_formula
from wfveri.oracle import oracle_decide
from wfveri.randgen import random_formula
from wfveri.tableau import Answer, decide


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=20240607)
    ap.add_argument("--bound", type=int, default=6)
    ap.add_argument("--depth", type=int, default=4)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    counts = {a: 0 for a in Answer}
    bad = 0
    t0 = time.perf_counter()
    for _ in range(args.n):
        f = random_formula(rng, max_depth=args.depth)
        v = decide(f)
        counts[v.answer] += 1
        sat = oracle_decide(f, args.bound) is not None
        valid = oracle_decide(Not(f), args.bound) is None
        if (v.answer is not Answer.UNSATISFIABLE) != sat or (v.answer is Answer.VALID) != valid:
            bad += 1
            print("disagreement:", print_formula(f), v.answer.value)
    print({a.value: c for a, c in counts.items()})
    print(f"{args.n} formulas, {bad} disagreements, {time.perf_counter() - t0:.1f}s")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
