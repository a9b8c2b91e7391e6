"""Text and JSON renderings of tableau trees and lasso models."""

from __future__ import annotations

import json

from .formula import pretty, print_formula
from .oracle import ModelDescription
from .tableau import EVT, Tableau, TableauVerdict, eventuality_ledger

TREE_SCHEMA = "wfveri.tableau"
MODEL_SCHEMA = "wfveri.model"
SCHEMA_VERSION = 1

_RULE_MARK = {"and": "∧", "always": "□", "or": "∨", "eventually": "◇",
              "postpone": "◇→", "next": "next", "nnf": "nnf"}


def _node_text(tab: Tableau, n) -> str:
    c = tab.closure
    fs = ", ".join(pretty(c.formula[i]) for i in n.formulas)
    label = tab.label(n)
    if n.rule == "root":
        return f"{label}: {pretty(tab.root_formula)}"
    if n.rule == "close":
        a, b = n.ref
        return f"✕ {pretty(c.formula[a])}, {pretty(c.formula[b])}"
    if n.rule == "state":
        succ = tab.worlds[n.ref]
        mark = " ↺" if n.status == "open-loop" else ""
        verdict = "refuted" if not tab.states[n.state].good else "open"
        return f"● s{n.state} → {succ.label}{mark} ({verdict})"
    if n.rule == "postpone":
        carried = pretty(c.formula[n.ref]) + " postponed"
        fs = f"{fs}, {carried}" if fs else carried
    if n.rule == "next" and not n.formulas:
        fs = "∅"
    return f"{label}: {fs}  [{_RULE_MARK[n.rule]}]"


def tree_text(tab: Tableau) -> str:
    """Indented tree; single-child chains keep their indentation."""
    lines = []
    stack = [(tab.root, "", "")]
    while stack:
        n, head, cont = stack.pop()
        lines.append(head + _node_text(tab, n))
        kids = n.children
        if len(kids) == 1:
            stack.append((kids[0], cont, cont))
        else:
            items = []
            for k, child in enumerate(kids):
                last = k == len(kids) - 1
                items.append((child, cont + ("└─ " if last else "├─ "),
                              cont + ("   " if last else "│  ")))
            stack.extend(reversed(items))
    return "\n".join(lines) + "\n"


def tree_json(tab: Tableau) -> dict:
    c = tab.closure
    nodes = []
    for n in tab.nodes:
        d = {"id": n.id, "parent": None if n.parent is None else n.parent.id,
             "world": tab.label(n), "rule": n.rule, "status": n.status,
             "formulas": [print_formula(c.formula[i]) for i in n.formulas]}
        if n.rule == "close":
            d["pair"] = [print_formula(c.formula[i]) for i in n.ref]
        elif n.rule == "postpone":
            d["postponed"] = print_formula(c.formula[n.ref])
        elif n.rule == "state":
            d["state"] = n.state
            d["successor"] = tab.worlds[n.ref].label
            d["eventualities"] = {print_formula(c.formula[f]): v
                                  for f, v in eventuality_ledger(tab, n).items()}
        nodes.append(d)
    return {
        "schema": TREE_SCHEMA, "version": SCHEMA_VERSION,
        "root_formula": print_formula(tab.root_formula),
        "closed": tab.closed,
        "nodes": nodes,
        "edges": [[n.parent.id, n.id] for n in tab.nodes if n.parent is not None],
        "worlds": [{"label": w.label, "pre_state": sorted(print_formula(c.formula[i]) for i in w.pre),
                    "states": list(w.states), "refuted": w.refuted} for w in tab.worlds],
        "states": [{"id": s.id, "world": tab.worlds[s.world].label,
                    "successor": tab.worlds[s.succ].label, "good": s.good,
                    "eventualities": sorted(print_formula(c.formula[f])
                                            for f in s.formulas if c.kind[f] == EVT)}
                   for s in tab.states],
    }


def model_text(m: ModelDescription, title: str = "model") -> str:
    return f"{title} ({len(m.states)} states, loop to s{m.loop_start}):\n{m.render()}\n"


def model_json(m: ModelDescription) -> dict:
    return {"schema": MODEL_SCHEMA, "version": SCHEMA_VERSION, **m.to_json()}


def render_tree(verdict: TableauVerdict, format: str = "text") -> str:
    """The closed tree of a Valid/Unsatisfiable verdict, else the model."""
    if format not in ("text", "structured", "json"):
        raise ValueError(f"unknown format {format!r}")
    text = format == "text"
    if verdict.tree is not None:
        return tree_text(verdict.tree) if text else json.dumps(tree_json(verdict.tree), indent=2)
    if text:
        out = model_text(verdict.model)
        if verdict.countermodel is not None:
            out += model_text(verdict.countermodel, "countermodel")
        return out
    doc = {"answer": verdict.answer.value, "model": model_json(verdict.model)}
    if verdict.countermodel is not None:
        doc["countermodel"] = model_json(verdict.countermodel)
    return json.dumps(doc, indent=2)
