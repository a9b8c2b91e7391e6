"""Generation of logical specifications from workflow expressions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .formula import (
    Always, And, Atom, Eventually, Formula, Implies, Not, Or, SubstitutionError,
    conjunction, parse_formula, print_formula, substitute,
)
from .patterns import PatternLibrary
from .workflow import (
    AggregatedFormulas, AtomArg, PatternApp, aggregated, applications, validate,
)

SCHEMA_VERSION = 1


class GenerationError(ValueError):
    def __init__(self, message: str, diagnostics=()):
        self.diagnostics = list(diagnostics)
        super().__init__(message)


@dataclass(frozen=True)
class Provenance:
    pattern: str
    path: tuple  # argument-index path of the application from the root
    template_index: int
    application_index: int  # position in pre-order


@dataclass
class LogicalSpecification:
    formulas: list = field(default_factory=list)
    provenance: list = field(default_factory=list)
    # other provenances of structurally equal formulas dropped as duplicates
    duplicates: list = field(default_factory=list)
    boundary: AggregatedFormulas | None = None

    def add(self, f: Formula, prov: Provenance) -> bool:
        if f in self._index:
            self.duplicates.append((self._index[f], prov))
            return False
        self._index[f] = len(self.formulas)
        self.formulas.append(f)
        self.provenance.append(prov)
        return True

    def __post_init__(self):
        self._index = {f: i for i, f in enumerate(self.formulas)}

    def __len__(self) -> int:
        return len(self.formulas)

    def __iter__(self):
        return iter(self.formulas)

    def groups(self) -> list:
        """Formulas grouped by the pattern application that produced them."""
        out = {}
        for f, p in zip(self.formulas, self.provenance):
            out.setdefault(p.application_index, []).append(f)
        return [out[k] for k in sorted(out)]

    def to_text(self) -> str:
        return "".join(print_formula(f) + "\n" for f in self.formulas)

    def to_json(self, **meta) -> dict:
        doc = {"schema": "wfveri.specification", "version": SCHEMA_VERSION}
        doc.update(meta)
        if self.boundary is not None:
            doc["boundary"] = {"entry": print_formula(self.boundary.entry),
                               "exit": print_formula(self.boundary.exit)}
        doc["formulas"] = [
            {"index": i, "formula": print_formula(f), "pattern": p.pattern,
             "path": list(p.path), "template_index": p.template_index,
             "application_index": p.application_index}
            for i, (f, p) in enumerate(zip(self.formulas, self.provenance))
        ]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "LogicalSpecification":
        spec = cls()
        for item in doc["formulas"]:
            spec.add(parse_formula(item["formula"]),
                     Provenance(item["pattern"], tuple(item["path"]),
                                item["template_index"], item["application_index"]))
        if "boundary" in doc:
            spec.boundary = AggregatedFormulas(parse_formula(doc["boundary"]["entry"]),
                                               parse_formula(doc["boundary"]["exit"]))
        return spec


def argument_binding(app: PatternApp, lib: PatternLibrary) -> dict:
    """Actual argument for each formal parameter; a nested workflow is
    represented by the disjunction of its aggregated entry and exit."""
    defn = lib[app.name]
    binding = {}
    for param, a in zip(defn.params, app.args):
        if isinstance(a, AtomArg):
            binding[param] = Atom(a.name)
        else:
            agg = aggregated(a, lib)
            binding[param] = Or(agg.entry, agg.exit)
    return binding


def generate(expr: PatternApp, lib: PatternLibrary, strict_disjoint: bool = True
             ) -> LogicalSpecification:
    diags = validate(expr, lib, strict_disjoint)
    if diags:
        raise GenerationError(
            "invalid workflow expression: " + "; ".join(map(str, diags)), diags)
    spec = LogicalSpecification()
    spec.boundary = aggregated(expr, lib)
    for n, (path, app) in enumerate(applications(expr)):
        defn = lib[app.name]
        binding = argument_binding(app, lib)
        for k, template in enumerate(defn.temporal):
            try:
                f = substitute(template, binding)
            except SubstitutionError as e:
                raise GenerationError(f"{app.name} at {list(path)}: {e}") from None
            spec.add(f, Provenance(app.name, path, k, n))
    return spec


def conjoin(spec) -> Formula:
    fs = list(spec)
    if not fs:
        raise GenerationError("cannot conjoin an empty specification")
    return conjunction(fs)


def completeness_obligation(g, h) -> Formula:
    """Seven premises relating two consecutive workflows ``g`` and ``h``
    (anything with ``entry``/``exit`` formulas) implying that leaving ``g``
    always leads to entering ``h``."""
    ge, gx, he, hx = g.entry, g.exit, h.entry, h.exit
    premises = [
        Always(Implies(ge, Eventually(gx))),
        Always(Implies(Not(ge), Not(Eventually(gx)))),
        Always(Not(And(ge, gx))),
        Always(Implies(he, Eventually(hx))),
        Always(Implies(Not(he), Not(Eventually(hx)))),
        Always(Not(And(he, hx))),
        Always(Implies(Or(ge, gx), Eventually(Or(he, hx)))),
    ]
    return Implies(conjunction(premises), Always(Implies(gx, Eventually(he))))


def dump_json(spec: LogicalSpecification, **meta) -> str:
    return json.dumps(spec.to_json(**meta), indent=2) + "\n"
