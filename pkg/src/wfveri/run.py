"""Batch pipeline: model + patterns -> specification -> prover -> Y/N."""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .audit import audit_verdict
from .formula import (
    And, Formula, FormulaSyntaxError, Implies, conjunction, parse_formula, print_formula,
)
from .generator import GenerationError, LogicalSpecification, conjoin, generate
from .patterns import PatternLibrary, PatternSetError, fixture_path, parse_pattern_set
from .tableau import Answer, Budget, BudgetExceeded, decide
from .workflow import WorkflowSyntaxError, parse_workflow

RUN_SCHEMA = "wfveri.run"
RUN_VERSION = 1

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    """Bad or unreadable input; maps to exit code 2."""


@dataclass(frozen=True)
class Options:
    max_nodes: int = 1_000_000
    timeout: float = 60.0
    strict_disjoint: bool = True

    @property
    def budget(self) -> Budget:
        return Budget(self.max_nodes, self.timeout)

    def to_json(self) -> dict:
        return {"max_nodes": self.max_nodes, "timeout": self.timeout,
                "strict_disjoint": self.strict_disjoint}


@dataclass
class PropertyVerdict:
    property: Formula
    answer: str  # an Answer value or "budget-exceeded"
    stats: dict
    elapsed: float = 0.0
    countermodel: dict | None = None
    audit_ok: bool | None = None
    verdict: object = field(default=None, repr=False, compare=False)

    @property
    def holds(self) -> bool:
        return self.answer == Answer.VALID.value

    @property
    def yn(self) -> str:
        return "Y" if self.holds else ("?" if self.answer == "budget-exceeded" else "N")

    def to_json(self) -> dict:
        d = {"property": print_formula(self.property), "result": self.yn,
             "answer": self.answer, "stats": self.stats}
        if self.countermodel is not None:
            d["countermodel"] = self.countermodel
        if self.audit_ok is not None:
            d["certificate_ok"] = self.audit_ok
        return d


@dataclass
class VerificationRun:
    model_path: str
    model_text: str
    patterns_path: str
    patterns_text: str
    properties: list
    specification: LogicalSpecification
    verdicts: list
    options: Options
    started: str = ""
    finished: str = ""
    tool_version: str = __version__

    @property
    def exit_code(self) -> int:
        if any(v.answer == "budget-exceeded" for v in self.verdicts):
            return EXIT_BUDGET
        return EXIT_OK if all(v.holds for v in self.verdicts) else EXIT_NO

    def verdicts_json(self) -> list:
        return [v.to_json() for v in self.verdicts]

    def to_json(self) -> dict:
        return {
            "schema": RUN_SCHEMA, "version": RUN_VERSION, "tool_version": self.tool_version,
            "model": {"path": self.model_path, "text": self.model_text},
            "patterns": {"path": self.patterns_path, "text": self.patterns_text},
            "options": self.options.to_json(),
            "properties": [print_formula(p) for p in self.properties],
            "specification": self.specification.to_json(),
            "verdicts": self.verdicts_json(),
            "timing": {"started": self.started, "finished": self.finished,
                       "per_property": [round(v.elapsed, 6) for v in self.verdicts]},
        }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _read(path, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {what} {path}: {e}") from None


def resolve_patterns_path(path=None) -> str:
    if path:
        return str(path)
    env = os.environ.get("WFVERI_PATTERNS")
    if env:
        return env
    return str(fixture_path("fig5_fig6.pset"))


def load_library(path=None) -> tuple:
    path = resolve_patterns_path(path)
    text = _read(path, "pattern set")
    try:
        return path, text, parse_pattern_set(text, source=path)
    except PatternSetError as e:
        raise InputError(str(e)) from None


def load_model(path) -> tuple:
    text = _read(path, "model")
    try:
        return text, parse_workflow(text)
    except WorkflowSyntaxError as e:
        raise InputError(f"{path}:{e}") from None


def parse_property(text: str, where: str = "property") -> Formula:
    try:
        return parse_formula(text)
    except FormulaSyntaxError as e:
        raise InputError(f"{where}: {e}") from None


def load_properties(inline=(), path=None) -> list:
    props = [parse_property(p, f"--prop {p!r}") for p in inline]
    if path:
        for n, line in enumerate(_read(path, "property file").splitlines(), start=1):
            line = line.strip()
            if line and not line.startswith("#"):
                props.append(parse_property(line, f"{path}:{n}"))
    return props


def build_specification(expr, lib: PatternLibrary, opts: Options, where: str = "model"
                        ) -> LogicalSpecification:
    try:
        return generate(expr, lib, opts.strict_disjoint)
    except GenerationError as e:
        raise InputError(f"{where}: {e}") from None


def check_property(spec_formula: Formula, prop: Formula, opts: Options) -> PropertyVerdict:
    query = Implies(spec_formula, prop)
    t0 = time.perf_counter()
    try:
        v = decide(query, opts.budget)
    except BudgetExceeded as e:
        return PropertyVerdict(prop, "budget-exceeded", e.stats.to_json(timing=False),
                               time.perf_counter() - t0)
    cm = v.countermodel.to_json() if v.countermodel is not None else None
    return PropertyVerdict(prop, v.answer.value, v.stats.to_json(timing=False),
                           time.perf_counter() - t0, cm, audit_verdict(v).ok, v)


def run_verify(model_path, patterns_path=None, properties=(), options: Options = Options()
               ) -> VerificationRun:
    if not properties:
        raise InputError("no properties given (use --prop or --props)")
    started = _now()
    ppath, ptext, lib = load_library(patterns_path)
    mtext, expr = load_model(model_path)
    spec = build_specification(expr, lib, options, str(model_path))
    spec_formula = conjoin(spec)
    verdicts = [check_property(spec_formula, p, options) for p in properties]
    return VerificationRun(str(model_path), mtext, ppath, ptext, list(properties), spec,
                           verdicts, options, started, _now())


def replay(record: dict) -> list:
    """Re-derive the verdicts of a run record from its own snapshot."""
    opts = Options(**record["options"])
    try:
        lib = parse_pattern_set(record["patterns"]["text"], source=record["patterns"]["path"])
        expr = parse_workflow(record["model"]["text"])
    except (PatternSetError, WorkflowSyntaxError) as e:
        raise InputError(f"run record: {e}") from None
    spec = build_specification(expr, lib, opts)
    spec_formula = conjoin(spec)
    props = [parse_property(p) for p in record["properties"]]
    return [check_property(spec_formula, p, opts).to_json() for p in props]


def run_generate(model_path, patterns_path=None, options: Options = Options()) -> tuple:
    ppath, _, lib = load_library(patterns_path)
    _, expr = load_model(model_path)
    spec = build_specification(expr, lib, options, str(model_path))
    return spec, ppath


def read_formula_arg(arg: str) -> Formula:
    """A formula given inline, or the path of a file holding one."""
    if os.path.isfile(arg):
        return parse_property(_read(arg, "formula file"), arg)
    return parse_property(arg, "formula")


def run_prove(formula: Formula, options: Options = Options()):
    return decide(formula, options.budget)


@dataclass(frozen=True)
class LintMessage:
    pattern: str
    kind: str  # "warning" or "note"
    message: str

    def __str__(self) -> str:
        return f"{self.pattern}: {self.kind}: {self.message}"


def _lint_formulas(d, options: Options) -> list:
    budget = options.budget
    msgs = []
    temporal = conjunction(list(d.temporal))
    if decide(temporal, budget).answer is Answer.UNSATISFIABLE:
        return [LintMessage(d.name, "warning", "temporal formulas are jointly unsatisfiable")]
    for k, t in enumerate(d.temporal):
        if decide(And(d.entry, t), budget).answer is Answer.UNSATISFIABLE:
            msgs.append(LintMessage(
                d.name, "warning",
                f"temporal formula {k + 1} ({print_formula(t)}) contradicts the entry "
                f"formula {print_formula(d.entry)}"))
    if not msgs and decide(And(d.entry, temporal), budget).answer is Answer.UNSATISFIABLE:
        msgs.append(LintMessage(
            d.name, "note",
            "no run satisfies the entry formula together with all temporal formulas"))
    return msgs


def lint_library(lib: PatternLibrary, options: Options = Options()) -> list:
    msgs = []
    if not len(lib):
        return [LintMessage("-", "note", "no patterns")]
    for d in lib:
        cls = d.classify_arguments()
        if not cls.entry:
            msgs.append(LintMessage(d.name, "warning", "no entry arguments"))
        if not cls.exit:
            msgs.append(LintMessage(d.name, "warning", "no exit arguments"))
        parts = set(cls.entry) | set(cls.ordinary) | set(cls.exit)
        disjoint = len(cls.entry) + len(cls.ordinary) + len(cls.exit) == len(parts)
        if parts != set(d.params) or not disjoint:
            msgs.append(LintMessage(d.name, "warning",
                                    "arguments do not split into disjoint entry/ordinary/exit"))
        if not d.temporal:
            msgs.append(LintMessage(d.name, "note", "no temporal formulas"))
            continue
        try:
            msgs.extend(_lint_formulas(d, options))
        except BudgetExceeded:
            msgs.append(LintMessage(d.name, "note", "satisfiability check exceeded the budget"))
    return msgs


def run_lint(patterns_path=None, options: Options = Options()) -> list:
    path = resolve_patterns_path(patterns_path)
    text = _read(path, "pattern set")
    if not text.strip():
        return [LintMessage("-", "note", "no patterns")]
    try:
        lib = parse_pattern_set(text, source=path)
    except PatternSetError as e:
        raise InputError(str(e)) from None
    return lint_library(lib, options)


def write_run(run: VerificationRun, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "run.json"
    path.write_text(json.dumps(run.to_json(), indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")
    return path
