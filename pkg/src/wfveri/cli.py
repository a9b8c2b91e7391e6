"""Command line: ``wfveri generate|verify|prove|lint``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .generator import dump_json
from .render import model_json, model_text, render_tree, tree_json
from .run import (
    EXIT_BUDGET, EXIT_INPUT, EXIT_NO, EXIT_OK, InputError, Options, load_properties,
    read_formula_arg, run_generate, run_lint, run_prove, run_verify, write_run,
)
from .tableau import Answer, BudgetExceeded


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--max-nodes", type=int, default=1_000_000, metavar="N")
    p.add_argument("--timeout", type=float, default=60.0, metavar="SEC")


def _patterns(p):
    p.add_argument("--patterns", metavar="FILE",
                   help="pattern set (default: $WFVERI_PATTERNS, else the shipped set)")
    p.add_argument("--no-strict-disjoint", action="store_true",
                   help="allow an activity name to occur more than once")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wfveri", description=__doc__)
    ap.add_argument("--version", action="version", version=f"wfveri {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="workflow expression -> logical specification")
    g.add_argument("--model", required=True, metavar="FILE")
    g.add_argument("--out", metavar="DIR", help="write spec.txt and spec.json here")
    _patterns(g)
    _common(g)

    v = sub.add_parser("verify", help="check properties against a model's specification")
    v.add_argument("--model", required=True, metavar="FILE")
    v.add_argument("--prop", action="append", default=[], metavar="FORMULA")
    v.add_argument("--props", metavar="FILE", help="one property per line")
    v.add_argument("--out", metavar="DIR", help="write run.json here")
    v.add_argument("--tree", action="store_true", help="print proof trees")
    v.add_argument("--aux", action="store_true", help="print countermodels of N answers")
    _patterns(v)
    _common(v)

    pr = sub.add_parser("prove", help="decide a single formula")
    pr.add_argument("formula", help="formula text, or a file holding one")
    pr.add_argument("--tree", action="store_true", help="print the proof tree")
    pr.add_argument("--aux", action="store_true", help="print the model/countermodel")
    _common(pr)

    li = sub.add_parser("lint", help="sanity-check a pattern set")
    li.add_argument("--patterns", metavar="FILE")
    _common(li)
    return ap


def _options(args) -> Options:
    if args.max_nodes <= 0 or args.timeout <= 0:
        raise InputError("--max-nodes and --timeout must be positive")
    return Options(args.max_nodes, args.timeout,
                   not getattr(args, "no_strict_disjoint", False))


def cmd_generate(args, out) -> int:
    spec, ppath = run_generate(args.model, args.patterns, _options(args))
    meta = {"model": args.model, "patterns": ppath}
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "spec.txt").write_text(spec.to_text(), encoding="utf-8")
        (d / "spec.json").write_text(dump_json(spec, **meta), encoding="utf-8")
        print(f"wrote {len(spec)} formulas to {d}", file=out)
    elif args.format == "json":
        out.write(dump_json(spec, **meta))
    else:
        out.write(spec.to_text())
    return EXIT_OK


def cmd_verify(args, out) -> int:
    props = load_properties(args.prop, args.props)
    run = run_verify(args.model, args.patterns, props, _options(args))
    if args.out:
        path = write_run(run, args.out)
        print(f"run record: {path}", file=sys.stderr)
    if args.format == "json":
        out.write(json.dumps(run.to_json(), indent=2, ensure_ascii=False) + "\n")
        return run.exit_code
    print(f"specification: {len(run.specification)} formulas", file=out)
    for v in run.verdicts:
        print(f"{v.yn}  {v.to_json()['property']}  ({v.answer}, {v.stats['nodes']} nodes)",
              file=out)
        if args.tree and v.verdict is not None and v.verdict.tree is not None:
            out.write(render_tree(v.verdict))
        if args.aux and v.verdict is not None and v.verdict.countermodel is not None:
            out.write(model_text(v.verdict.countermodel, "countermodel"))
    return run.exit_code


def cmd_prove(args, out) -> int:
    f = read_formula_arg(args.formula)
    v = run_prove(f, _options(args))
    if args.format == "json":
        doc = {"formula": args.formula, "answer": v.answer.value,
               "valid": v.valid, "stats": v.stats.to_json(timing=False)}
        if args.tree and v.tree is not None:
            doc["tree"] = tree_json(v.tree)
        if v.model is not None:
            doc["model"] = model_json(v.model)
        if v.countermodel is not None:
            doc["countermodel"] = model_json(v.countermodel)
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        head = "VALID" if v.valid else "NOT VALID"
        if v.answer is not Answer.VALID:
            head += f" ({v.answer.value})"
        print(f"{head}  [{v.stats.nodes} nodes, {v.stats.elapsed:.3f}s]", file=out)
        if args.tree and v.tree is not None:
            out.write(render_tree(v))
        if args.aux:
            if v.model is not None:
                out.write(model_text(v.model))
            if v.countermodel is not None:
                out.write(model_text(v.countermodel, "countermodel"))
    return EXIT_OK if v.valid else EXIT_NO


def cmd_lint(args, out) -> int:
    msgs = run_lint(args.patterns, _options(args))
    if args.format == "json":
        out.write(json.dumps([{"pattern": m.pattern, "kind": m.kind, "message": m.message}
                              for m in msgs], indent=2) + "\n")
    else:
        for m in msgs:
            print(m, file=out)
        if not msgs:
            print("no problems found", file=out)
    return EXIT_NO if any(m.kind == "warning" for m in msgs) else EXIT_OK


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify, "prove": cmd_prove,
            "lint": cmd_lint}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except InputError as e:
        print(f"wfveri: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as e:
        print(f"wfveri: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
