"""Formula AST for the []/<> fragment of propositional LTL.

Concrete syntax (ASCII):

    []  always       <>  eventually     ~  not
    &   and          |   or             =>  implies     <=>  iff

Precedence, tightest first: ``~ [] <>``, ``&``, ``|``, ``=>``, ``<=>``.
``&`` and ``|`` associate to the left, ``=>`` and ``<=>`` to the right.
``x(name)`` and ``c(name)`` denote marked atoms (execution / condition).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
MARKERS = {"x": "execution", "c": "condition"}
MARKER_PREFIX = {v: k for k, v in MARKERS.items()}


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, token: str):
        self.line = line
        self.column = column
        self.token = token
        self.message = message
        super().__init__(f"{line}:{column}: {message} (at {token!r})")


class SubstitutionError(ValueError):
    pass


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return print_formula(self)

    # operator sugar for building formulas in code and tests
    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)


@dataclass(frozen=True)
class Atom(Formula):
    base: str
    marker: Optional[str] = None

    def __post_init__(self):
        if not IDENT_RE.fullmatch(self.base):
            raise ValueError(f"invalid atom identifier {self.base!r}")
        if self.marker is not None and self.marker not in MARKER_PREFIX:
            raise ValueError(f"unknown marker {self.marker!r}")


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


Unary = (Not, Always, Eventually)
Binary = (And, Or, Implies, Iff)
Temporal = (Always, Eventually)

BinaryFormula = Union[And, Or, Implies, Iff]


def atom(name: str) -> Atom:
    """``atom("a")``, ``atom("x(Alfa)")``."""
    m = re.fullmatch(r"([xc])\(\s*([A-Za-z][A-Za-z0-9_]*)\s*\)", name)
    if m:
        return Atom(m.group(2), MARKERS[m.group(1)])
    return Atom(name)


def children(f: Formula) -> tuple:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, Unary):
        return (f.operand,)
    return (f.left, f.right)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order enumeration, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def atoms(f: Formula) -> set:
    return {g for g in subformulas(f) if isinstance(g, Atom)}


def atom_bases(f: Formula) -> set:
    return {a.base for a in atoms(f)}


def is_point_formula(f: Formula) -> bool:
    return not any(isinstance(g, Temporal) for g in subformulas(f))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def depth(f: Formula) -> int:
    cs = children(f)
    return 0 if not cs else 1 + max(depth(c) for c in cs)


def conjunction(fs) -> Formula:
    """Right-nested conjunction ``f1 & (f2 & (...))``."""
    fs = list(fs)
    if not fs:
        raise ValueError("empty conjunction")
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disjunction(fs) -> Formula:
    fs = list(fs)
    if not fs:
        raise ValueError("empty disjunction")
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<op><=>|=>|<>|\[\]|[~&|()])|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'op', 'ident' or 'eof'
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise FormulaSyntaxError("unexpected character", line, col, text[pos])
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rindex("\n") + 1
        else:
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "<end of input>", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str):
        t = self.tok
        raise FormulaSyntaxError(message, t.line, t.column, t.text)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.error(f"expected {text!r}")

    def parse(self) -> Formula:
        f = self.iff()
        if self.tok.kind != "eof":
            self.error("unexpected token")
        return f

    def iff(self) -> Formula:
        left = self.implies()
        if self.accept("<=>"):
            return Iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.disj()
        if self.accept("=>"):
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("[]"):
            return Always(self.unary())
        if self.accept("<>"):
            return Eventually(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        t = self.tok
        if self.accept("("):
            f = self.iff()
            self.expect(")")
            return f
        if t.kind == "ident":
            self.i += 1
            nxt = self.tok
            if t.text in MARKERS and nxt.kind == "op" and nxt.text == "(":
                self.i += 1
                if self.tok.kind != "ident":
                    self.error("expected activity name inside marker")
                base = self.tok.text
                self.i += 1
                self.expect(")")
                return Atom(base, MARKERS[t.text])
            return Atom(t.text)
        self.error("expected formula")


def parse_formula(text: str) -> Formula:
    if not text.strip():
        raise FormulaSyntaxError("empty formula", 1, 1, text)
    return _Parser(text).parse()


# ---------------------------------------------------------------- printer

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_RIGHT_ASSOC = {Iff, Implies}
_SYMBOL = {Iff: "<=>", Implies: "=>", Or: "|", And: "&"}
_PREFIX = {Not: "~", Always: "[]", Eventually: "<>"}
_UNARY_PREC = 5


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), _UNARY_PREC)


def print_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        if f.marker:
            return f"{MARKER_PREFIX[f.marker]}({f.base})"
        return f.base
    if isinstance(f, Unary):
        inner = print_formula(f.operand)
        if _prec(f.operand) < _UNARY_PREC:
            inner = f"({inner})"
        return _PREFIX[type(f)] + inner
    p = _PREC[type(f)]
    right_assoc = type(f) in _RIGHT_ASSOC
    left, right = print_formula(f.left), print_formula(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    if lp < p or (lp == p and right_assoc):
        left = f"({left})"
    if rp < p or (rp == p and not right_assoc):
        right = f"({right})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


_UNICODE = {"[]": "□", "<>": "◇", "~": "¬", "&": "∧",
            "|": "∨", "=>": "⇒", "<=>": "⇔"}


def pretty(f: Formula) -> str:
    """Unicode rendering, for reports only (not parseable)."""
    return re.sub(r"<=>|=>|<>|\[\]|[~&|]", lambda m: _UNICODE[m.group()], print_formula(f))


# ---------------------------------------------------------------- utilities


def rebuild(f: Formula, new_children) -> Formula:
    if isinstance(f, Unary):
        return type(f)(new_children[0])
    return type(f)(*new_children)


def substitute(f: Formula, binding: Mapping[str, Formula]) -> Formula:
    """Replace atoms by formulas, keyed by atom base identifier.

    A marked atom ``x(k)`` takes the marker over to the new base when ``k``
    is bound to a plain atom; binding it to anything else is an error.
    """
    if isinstance(f, Atom):
        if f.base not in binding:
            return f
        value = binding[f.base]
        if f.marker is None:
            return value
        if not isinstance(value, Atom) or value.marker is not None:
            raise SubstitutionError(
                f"marked atom {print_formula(f)} cannot take compound formula "
                f"{print_formula(value)}"
            )
        return Atom(value.base, f.marker)
    return rebuild(f, [substitute(c, binding) for c in children(f)])


def to_nnf(f: Formula) -> Formula:
    """Negation normal form over ~ & | [] <>, with ~ only on atoms."""
    return _nnf(f, True)


def _nnf(f: Formula, pos: bool) -> Formula:
    if isinstance(f, Atom):
        return f if pos else Not(f)
    if isinstance(f, Not):
        return _nnf(f.operand, not pos)
    if isinstance(f, And):
        op = And if pos else Or
        return op(_nnf(f.left, pos), _nnf(f.right, pos))
    if isinstance(f, Or):
        op = Or if pos else And
        return op(_nnf(f.left, pos), _nnf(f.right, pos))
    if isinstance(f, Implies):
        if pos:
            return Or(_nnf(f.left, False), _nnf(f.right, True))
        return And(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Iff):
        a, na = _nnf(f.left, True), _nnf(f.left, False)
        b, nb = _nnf(f.right, True), _nnf(f.right, False)
        if pos:
            return Or(And(a, b), And(na, nb))
        return Or(And(a, nb), And(na, b))
    if isinstance(f, Always):
        return (Always if pos else Eventually)(_nnf(f.operand, pos))
    if isinstance(f, Eventually):
        return (Eventually if pos else Always)(_nnf(f.operand, pos))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    for g in subformulas(f):
        if isinstance(g, (Implies, Iff)):
            return False
        if isinstance(g, Not) and not isinstance(g.operand, Atom):
            return False
    return True
