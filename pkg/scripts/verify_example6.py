#!/usr/bin/env python3
"""Verify the nested example6.wfx workflow against its liveness and safety properties.

Also checks whether each conjunction of the specification with an
eventual activity is satisfiable, which shows how much behaviour the
specification admits.
"""
import argparse

from wfveri.audit import audit_verdict
from wfveri.formula import And, Atom, Eventually, Implies, parse_formula
from wfveri.generator import conjoin, generate
from wfveri.patterns import default_library, fixture_path
from wfveri.tableau import decide
from wfveri.workflow import expression_atoms, parse_workflow

PROPS = ["[](b => <>j)", "[]~(c & g)"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", default=str(fixture_path("example6.wfx")))
    ap.add_argument("--prop", action="append")
    ap.add_argument("--vacuity", action="store_true", help="also test C & <>x per activity")
    args = ap.parse_args()
    lib = default_library()
    with open(args.model) as fh:
        expr = parse_workflow(fh.read())
    spec = conjoin(generate(expr, lib))
    for text in args.prop or PROPS:
        v = decide(Implies(spec, parse_formula(text)))
        ok = audit_verdict(v).ok
        print(f"{text:20s} {v.answer.value:22s} {v.stats.nodes:7d} nodes  certificate {'ok' if ok else 'BROKEN'}")
    if args.vacuity:
        for name in sorted(expression_atoms(expr)):
            v = decide(And(spec, Eventually(Atom(name))))
            print(f"C & <>{name}: {v.answer.value}")


if __name__ == "__main__":
    main()
