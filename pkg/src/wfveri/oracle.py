"""Brute-force semantics on ultimately periodic (lasso) models.

Independent of the tableau: formulas are evaluated directly on the
unrolled lasso. On a lasso of length L looping back to index ``loop``,
the positions reachable from ``i`` are ``min(i, loop) .. L-1``, so
``[]g`` and ``<>g`` reduce to a finite quantification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .formula import (
    Always, And, Atom, Eventually, Formula, Iff, Implies, Not, Or, atoms,
    print_formula,
)

MAX_ATOMS = 6
MAX_BOUND = 8
MAX_BITS = 24  # atoms * bound


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class ModelDescription:
    states: tuple  # tuple of frozensets of Atom
    loop_start: int

    def __post_init__(self):
        if not self.states:
            raise ValueError("a model needs at least one state")
        if not 0 <= self.loop_start < len(self.states):
            raise ValueError("loop_start out of range")

    def __len__(self) -> int:
        return len(self.states)

    def to_json(self) -> dict:
        return {
            "states": [sorted(print_formula(a) for a in s) for s in self.states],
            "loop_start": self.loop_start,
        }

    def render(self) -> str:
        lines = []
        for i, s in enumerate(self.states):
            mark = "  <- loop" if i == self.loop_start else ""
            val = ", ".join(sorted(print_formula(a) for a in s)) or "(nothing true)"
            lines.append(f"  s{i}: {{{val}}}{mark}")
        lines.append(f"  s{len(self.states) - 1} -> s{self.loop_start}")
        return "\n".join(lines)


def holds(f: Formula, model: ModelDescription, i: int = 0) -> bool:
    """Truth of ``f`` at position ``i`` of the lasso."""
    n = len(model.states)
    if isinstance(f, Atom):
        return f in model.states[i]
    if isinstance(f, Not):
        return not holds(f.operand, model, i)
    if isinstance(f, And):
        return holds(f.left, model, i) and holds(f.right, model, i)
    if isinstance(f, Or):
        return holds(f.left, model, i) or holds(f.right, model, i)
    if isinstance(f, Implies):
        return (not holds(f.left, model, i)) or holds(f.right, model, i)
    if isinstance(f, Iff):
        return holds(f.left, model, i) == holds(f.right, model, i)
    future = range(min(i, model.loop_start), n)
    if isinstance(f, Always):
        return all(holds(f.operand, model, j) for j in future)
    if isinstance(f, Eventually):
        return any(holds(f.operand, model, j) for j in future)
    raise TypeError(f"not a formula: {f!r}")


def _eval_batch(f: Formula, vals: dict, loop: int) -> np.ndarray:
    """Truth table of ``f`` over a batch of lassos: array (L, batch)."""
    if isinstance(f, Atom):
        return vals[f]
    if isinstance(f, Not):
        return ~_eval_batch(f.operand, vals, loop)
    if isinstance(f, (And, Or, Implies, Iff)):
        a = _eval_batch(f.left, vals, loop)
        b = _eval_batch(f.right, vals, loop)
        if isinstance(f, And):
            return a & b
        if isinstance(f, Or):
            return a | b
        if isinstance(f, Implies):
            return ~a | b
        return a == b
    g = _eval_batch(f.operand, vals, loop)
    out = np.empty_like(g)
    if isinstance(f, Always):
        acc = np.logical_and.accumulate(g[::-1], axis=0)[::-1]  # acc[i] = all(g[i:])
        out[loop:] = acc[loop]
        out[:loop] = acc[:loop]
        return out
    if isinstance(f, Eventually):
        acc = np.logical_or.accumulate(g[::-1], axis=0)[::-1]
        out[loop:] = acc[loop]
        out[:loop] = acc[:loop]
        return out
    raise TypeError(f"not a formula: {f!r}")


def oracle_decide(f: Formula, bound: int, chunk_bits: int = 16) -> Optional[ModelDescription]:
    """First lasso of total length <= ``bound`` satisfying ``f``, or None.

    Lengths are tried in increasing order, then loop-back indices, then
    valuations in lexicographic order.
    """
    props = sorted(atoms(f), key=print_formula)
    n = len(props)
    if bound < 1:
        raise OracleLimitError("bound must be positive")
    if n > MAX_ATOMS or bound > MAX_BOUND or n * bound > MAX_BITS:
        raise OracleLimitError(
            f"{n} atoms with bound {bound} exceeds the oracle's enumeration cap")
    for L in range(1, bound + 1):
        bits = n * L
        total = 1 << bits
        step = 1 << min(bits, chunk_bits)
        for loop in range(L):
            for start in range(0, total, step):
                codes = np.arange(start, min(start + step, total), dtype=np.int64)
                vals = {}
                for k, p in enumerate(props):
                    vals[p] = np.stack([((codes >> (i * n + k)) & 1).astype(bool)
                                        for i in range(L)])
                truth = _eval_batch(f, vals, loop)[0]
                hits = np.flatnonzero(truth)
                if hits.size:
                    code = int(codes[hits[0]])
                    states = tuple(
                        frozenset(p for k, p in enumerate(props) if (code >> (i * n + k)) & 1)
                        for i in range(L))
                    return ModelDescription(states, loop)
    return None


def evaluate(f: Formula, model: ModelDescription) -> np.ndarray:
    """Truth value of ``f`` at every position of the lasso."""
    vals = {p: np.array([[p in s] for s in model.states], dtype=bool) for p in atoms(f)}
    return _eval_batch(f, vals, model.loop_start)[:, 0]


def _candidates(m: ModelDescription):
    n, loop = len(m.states), m.loop_start
    # stop early and repeat state k forever
    for k in range(n - 1):
        yield ModelDescription(m.states[:k + 1], k)
    # rotate a state from the end of the loop into the prefix
    if loop > 0 and m.states[loop - 1] == m.states[-1]:
        yield ModelDescription(m.states[:-1], loop - 1)
    for i in range(n):
        if n == 1:
            break
        states = m.states[:i] + m.states[i + 1:]
        if i < loop:
            yield ModelDescription(states, loop - 1)
        elif n - loop > 1:
            yield ModelDescription(states, loop)


def minimize_model(f: Formula, model: ModelDescription) -> ModelDescription:
    """Greedily drop states from a satisfying lasso while it still satisfies ``f``."""
    if not evaluate(f, model)[0]:
        return model
    improved = True
    while improved:
        improved = False
        for cand in _candidates(model):
            if evaluate(f, cand)[0]:
                model, improved = cand, True
                break
    return model
