"""Seeded random formulas and workflow expressions for cross-checks."""

from __future__ import annotations

import random

from .formula import Always, And, Atom, Eventually, Formula, Iff, Implies, Not, Or, atoms
from .patterns import PatternLibrary
from .workflow import AtomArg, PatternApp

_BINARY = (And, Or, Implies, Iff)
_UNARY = (Not, Always, Eventually)


def random_formula(rng: random.Random, names=("p", "q", "r"), max_depth: int = 4,
                   leaf_bias: float = 0.25) -> Formula:
    """Formula of depth at most ``max_depth`` over ``names``."""
    if max_depth == 0 or rng.random() < leaf_bias:
        return Atom(rng.choice(names))
    if rng.random() < 0.45:
        return rng.choice(_UNARY)(random_formula(rng, names, max_depth - 1, leaf_bias))
    op = rng.choice(_BINARY)
    return op(random_formula(rng, names, max_depth - 1, leaf_bias),
              random_formula(rng, names, max_depth - 1, leaf_bias))


def random_workflow(rng: random.Random, lib: PatternLibrary, max_depth: int = 3,
                    nest_prob: float = 0.35, counter=None) -> PatternApp:
    """Valid expression with fresh activity names ``a0, a1, ...``.

    Workflow arguments are only placed at parameters not used as marked
    atoms in the pattern's templates.
    """
    counter = counter if counter is not None else [0]
    defn = rng.choice(list(lib))
    marked = {g.base for t in defn.temporal for g in atoms(t) if g.marker}
    args = []
    for p in defn.params:
        if max_depth > 1 and p not in marked and rng.random() < nest_prob:
            args.append(random_workflow(rng, lib, max_depth - 1, nest_prob, counter))
        else:
            args.append(AtomArg(f"a{counter[0]}"))
            counter[0] += 1
    return PatternApp(defn.name, tuple(args))

