"""Predefined workflow patterns and the ``.pset`` file format.

A pattern set file is line oriented::

    /* comment to end of line
    Sequence(f1,f2):
    f1                               <- entry point formula
    f2                               <- exit point formula
    [](f1 => <>f2) / [](~f1 => ~<>f2) <- temporal formulas, '/' separated
    []~(f1 & f2)

Blank lines are ignored. A pattern's body runs until the next header.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

from .formula import (
    Formula, FormulaSyntaxError, atom_bases, is_point_formula, parse_formula,
    substitute,
)

HEADER_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)\s*\(([^()]*)\)\s*:\s*$")
VERSION_RE = re.compile(r"/\*\s*version\s+(\S+)")


class PatternSetError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        self.line = line
        where = source or "<pattern set>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


class ArityError(ValueError):
    pass


class ArgumentClasses(NamedTuple):
    entry: tuple
    ordinary: tuple
    exit: tuple


@dataclass(frozen=True)
class WorkflowSet:
    """A pattern instantiated with actual arguments."""

    entry: Formula
    exit: Formula
    temporal: tuple


@dataclass(frozen=True)
class PatternDefinition:
    name: str
    params: tuple
    entry: Formula
    exit: Formula
    temporal: tuple
    line: int = field(default=0, compare=False)

    def classify_arguments(self) -> ArgumentClasses:
        ent, ex = atom_bases(self.entry), atom_bases(self.exit)
        return ArgumentClasses(
            entry=tuple(p for p in self.params if p in ent),
            ordinary=tuple(p for p in self.params if p not in ent and p not in ex),
            exit=tuple(p for p in self.params if p in ex),
        )

    def instantiate(self, args: Sequence[Formula]) -> WorkflowSet:
        if len(args) != len(self.params):
            raise ArityError(
                f"{self.name} takes {len(self.params)} arguments, got {len(args)}"
            )
        binding = dict(zip(self.params, args))
        return WorkflowSet(
            entry=substitute(self.entry, binding),
            exit=substitute(self.exit, binding),
            temporal=tuple(substitute(t, binding) for t in self.temporal),
        )

    def all_formulas(self) -> list:
        return [self.entry, self.exit, *self.temporal]


def classify_arguments(defn: PatternDefinition) -> ArgumentClasses:
    return defn.classify_arguments()


def instantiate(defn: PatternDefinition, args: Sequence[Formula]) -> WorkflowSet:
    return defn.instantiate(args)


@dataclass(frozen=True)
class PatternLibrary:
    patterns: dict
    source: str = ""

    def __getitem__(self, name: str) -> PatternDefinition:
        return self.patterns[name]

    def __contains__(self, name: str) -> bool:
        return name in self.patterns

    def __iter__(self) -> Iterator[PatternDefinition]:
        return iter(self.patterns.values())

    def __len__(self) -> int:
        return len(self.patterns)

    def names(self) -> list:
        return list(self.patterns)


def _is_comment(line: str) -> bool:
    return line.startswith("/*")


def _parse_at(text: str, lineno: int, source: str) -> Formula:
    try:
        return parse_formula(text)
    except FormulaSyntaxError as e:
        raise PatternSetError(f"column {e.column}: {e.message} (at {e.token!r})", lineno, source) from None


def _check_definition(d: PatternDefinition, source: str) -> None:
    line = d.line
    if len(d.params) < 2:
        raise PatternSetError(
            f"pattern {d.name} needs at least two arguments, has {len(d.params)}",
            line, source)
    if len(set(d.params)) != len(d.params):
        raise PatternSetError(f"pattern {d.name} repeats a parameter name", line, source)
    params = set(d.params)
    for role, f in (("entry", d.entry), ("exit", d.exit)):
        if not is_point_formula(f):
            raise PatternSetError(
                f"{role} formula of {d.name} contains a temporal operator", line, source)
        stray = atom_bases(f) - params
        if stray:
            raise PatternSetError(
                f"{role} formula of {d.name} uses undeclared {sorted(stray)}", line, source)
    for t in d.temporal:
        stray = atom_bases(t) - params
        if stray:
            raise PatternSetError(
                f"temporal formula {t} of {d.name} uses undeclared {sorted(stray)}",
                line, source)
    overlap = atom_bases(d.entry) & atom_bases(d.exit)
    if overlap:
        raise PatternSetError(
            f"entry and exit arguments of {d.name} overlap: {sorted(overlap)}", line, source)


def parse_pattern_set(text: str, source: str = "") -> PatternLibrary:
    if not text.strip():
        raise PatternSetError("empty pattern set", None, source)
    version = None
    blocks = []  # [name, params, header line, [(lineno, text), ...]]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if _is_comment(line):
            m = VERSION_RE.match(line)
            if m and version is None:
                version = m.group(1)
            continue
        m = HEADER_RE.match(line)
        if m:
            params = tuple(p.strip() for p in m.group(2).split(",") if p.strip())
            for p in params:
                if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", p):
                    raise PatternSetError(f"bad parameter name {p!r}", lineno, source)
            blocks.append([m.group(1), params, lineno, []])
            continue
        if not blocks:
            raise PatternSetError("formula line before any pattern header", lineno, source)
        blocks[-1][3].append((lineno, line))

    patterns = {}
    for name, params, header_line, lines in blocks:
        if name in patterns:
            raise PatternSetError(f"duplicate pattern {name}", header_line, source)
        if len(lines) < 2:
            raise PatternSetError(f"pattern {name} lacks entry/exit lines", header_line, source)
        (en_line, en_text), (ex_line, ex_text) = lines[0], lines[1]
        entry = _parse_at(en_text, en_line, source)
        exit_ = _parse_at(ex_text, ex_line, source)
        if not is_point_formula(entry):
            raise PatternSetError(f"entry formula of {name} is temporal", en_line, source)
        if not is_point_formula(exit_):
            raise PatternSetError(f"exit formula of {name} is temporal", ex_line, source)
        temporal = []
        for lineno, line in lines[2:]:
            for part in line.split("/"):
                if part.strip():
                    temporal.append(_parse_at(part, lineno, source))
        d = PatternDefinition(name, params, entry, exit_, tuple(temporal), line=header_line)
        _check_definition(d, source)
        patterns[name] = d

    src = source or "<string>"
    if version:
        src = f"{src} (version {version})"
    return PatternLibrary(patterns, src)


def load_pattern_set(path) -> PatternLibrary:
    path = Path(path)
    return parse_pattern_set(path.read_text(encoding="utf-8"), source=str(path))


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("wfveri") / "fixtures" / name))


def default_library() -> PatternLibrary:
    """The Basic Control Patterns plus ArbitraryCycles."""
    return load_pattern_set(fixture_path("fig5_fig6.pset"))


def formula2_library() -> PatternLibrary:
    """The simpler Seq/Concur/Branch/Loop set."""
    return load_pattern_set(fixture_path("formula2.pset"))
