"""Workflow expressions: nested pattern applications over activity names.

Grammar (``#`` starts a comment running to end of line)::

    workflow := NAME "(" arg ("," arg)* ")"
    arg      := workflow | NAME
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .formula import Atom, Formula, atom_bases, subformulas, substitute
from .patterns import PatternLibrary


class WorkflowSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, token: str):
        self.line = line
        self.column = column
        self.token = token
        self.message = message
        super().__init__(f"{line}:{column}: {message} (at {token!r})")


@dataclass(frozen=True)
class AtomArg:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PatternApp:
    name: str
    args: tuple
    # (line, column) of the pattern name; not part of identity
    pos: tuple = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return f"{self.name}({','.join(str(a) for a in self.args)})"


WorkflowExpression = Union[AtomArg, PatternApp]


@dataclass(frozen=True)
class AggregatedFormulas:
    entry: Formula
    exit: Formula


@dataclass(frozen=True)
class Diagnostic:
    message: str
    path: tuple = ()
    kind: str = "error"

    def __str__(self) -> str:
        where = "/".join(map(str, self.path)) or "root"
        return f"[{where}] {self.message}"


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(r"(?P<ws>\s+)|(?P<comment>#[^\n]*)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[(),])")


def _tokens(text: str):
    pos, line, line_start = 0, 1, 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise WorkflowSyntaxError("unexpected character", line, col, text[pos])
        chunk = m.group()
        if m.lastgroup in ("ident", "op"):
            out.append((chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    out.append(("", line, pos - line_start + 1))
    return out


def parse_workflow(text: str) -> PatternApp:
    toks = _tokens(text)
    i = 0

    def fail(msg):
        t, line, col = toks[i]
        raise WorkflowSyntaxError(msg, line, col, t or "<end of input>")

    def ident():
        nonlocal i
        t = toks[i][0]
        if not t or not t[0].isalpha():
            fail("expected a name")
        i += 1
        return t

    def arg():
        nonlocal i
        line, col = toks[i][1], toks[i][2]
        name = ident()
        if toks[i][0] != "(":
            return AtomArg(name)
        i += 1
        args = [arg()]
        while toks[i][0] == ",":
            i += 1
            args.append(arg())
        if toks[i][0] != ")":
            fail("expected ',' or ')'")
        i += 1
        return PatternApp(name, tuple(args), (line, col))

    if not toks[0][0]:
        fail("empty workflow expression")
    expr = arg()
    if toks[i][0]:
        fail("unexpected token after workflow expression")
    if isinstance(expr, AtomArg):
        i = 0
        fail("a workflow expression must be a pattern application, not a bare atom")
    return expr


# ---------------------------------------------------------------- traversal


def applications(expr: WorkflowExpression, path: tuple = ()) -> Iterator:
    """Pattern applications in pre-order (leftmost-outermost) with their paths.

    A path is the tuple of argument indices leading from the root.
    """
    if isinstance(expr, PatternApp):
        yield path, expr
        for k, a in enumerate(expr.args):
            yield from applications(a, path + (k,))


def atom_args(expr: WorkflowExpression) -> list:
    if isinstance(expr, AtomArg):
        return [expr.name]
    return [n for a in expr.args for n in atom_args(a)]


def nesting_depth(expr: WorkflowExpression) -> int:
    if isinstance(expr, AtomArg):
        return 0
    return 1 + max(nesting_depth(a) for a in expr.args)


def parenthesis_structure(expr: WorkflowExpression) -> str:
    """The expression with every ``wrf(`` and ``,wrf(`` written as ``(``."""
    if isinstance(expr, AtomArg):
        return expr.name
    out = "("
    for k, a in enumerate(expr.args):
        if k and isinstance(a, AtomArg):
            out += ","
        out += parenthesis_structure(a)
    return out + ")"


def pattern_spans(expr: WorkflowExpression) -> list:
    """Character spans of each application in ``parenthesis_structure``."""
    spans = []

    def walk(e, start):
        if isinstance(e, AtomArg):
            return start + len(e.name)
        pos = start + 1
        for k, a in enumerate(e.args):
            if k and isinstance(a, AtomArg):
                pos += 1
            pos = walk(a, pos)
        spans.append((start, pos + 1))
        return pos + 1

    walk(expr, 0)
    return spans


def spans_properly_nested(spans) -> bool:
    for i, (a0, a1) in enumerate(spans):
        for b0, b1 in spans[i + 1:]:
            disjoint = a1 <= b0 or b1 <= a0
            nested = (a0 <= b0 and b1 <= a1) or (b0 <= a0 and a1 <= b1)
            if not (disjoint or nested):
                return False
    return True


def balanced(text: str) -> bool:
    level = 0
    for ch in text:
        level += {"(": 1, ")": -1}.get(ch, 0)
        if level < 0:
            return False
    return level == 0


# ---------------------------------------------------------------- validation


def _marked_bases(f: Formula) -> set:
    return {g.base for g in subformulas(f) if isinstance(g, Atom) and g.marker}


def validate(expr: WorkflowExpression, lib: PatternLibrary,
             strict_disjoint: bool = True) -> list:
    diags = []
    if not isinstance(expr, PatternApp):
        return [Diagnostic("a workflow expression must be a pattern application")]
    roles = {}  # atom name -> set of roles
    for path, app in applications(expr):
        if app.name not in lib:
            diags.append(Diagnostic(f"unknown pattern {app.name}", path))
            continue
        defn = lib[app.name]
        if len(app.args) != len(defn.params):
            diags.append(Diagnostic(
                f"{app.name} takes {len(defn.params)} arguments, got {len(app.args)}", path))
            continue
        classes = defn.classify_arguments()
        marked = set()
        for t in defn.temporal:
            marked |= _marked_bases(t)
        for param, a in zip(defn.params, app.args):
            role = ("entry" if param in classes.entry else
                    "exit" if param in classes.exit else "ordinary")
            if isinstance(a, AtomArg):
                roles.setdefault(a.name, set()).add(role)
            elif param in marked:
                diags.append(Diagnostic(
                    f"{app.name}: parameter {param} is used as a marked atom and cannot "
                    f"take the workflow {a.name}(...)", path))
    if strict_disjoint:
        seen = set()
        for name in atom_args(expr):
            if name in seen:
                diags.append(Diagnostic(f"atom {name} occurs more than once"))
            seen.add(name)
    for name, rs in sorted(roles.items()):
        if "ordinary" in rs and rs & {"entry", "exit"}:
            diags.append(Diagnostic(
                f"atom {name} is used both as an ordinary argument and as an "
                f"entry/exit argument"))
    return diags


def aggregated(expr: WorkflowExpression, lib: PatternLibrary) -> AggregatedFormulas:
    if isinstance(expr, AtomArg):
        a = Atom(expr.name)
        return AggregatedFormulas(a, a)
    defn = lib[expr.name]
    entry_bind, exit_bind = {}, {}
    for param, a in zip(defn.params, expr.args):
        if isinstance(a, AtomArg):
            entry_bind[param] = exit_bind[param] = Atom(a.name)
        else:
            sub = aggregated(a, lib)
            entry_bind[param] = sub.entry
            exit_bind[param] = sub.exit
    return AggregatedFormulas(substitute(defn.entry, entry_bind),
                              substitute(defn.exit, exit_bind))


def expression_atoms(expr: WorkflowExpression) -> set:
    return set(atom_args(expr))


def aggregated_atoms(agg: AggregatedFormulas) -> set:
    return atom_bases(agg.entry) | atom_bases(agg.exit)
