"""Independent checks of tableau certificates.

A closed tree is re-examined without trusting the builder's bookkeeping:
every closed leaf must hold a complementary pair on its branch, every
state must be saturated and point to the world its carried formulas
define, and refutation of the root world is re-derived by classical
state elimination (drop states without successors or with an
unfulfillable eventuality, to a fixpoint) instead of the SCC analysis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import Not, print_formula
from .oracle import ModelDescription, evaluate
from .tableau import ALW, AND, EVT, LIT, OR, Tableau, TableauVerdict


@dataclass
class AuditReport:
    problems: list = field(default_factory=list)
    closed_leaves: int = 0
    states: int = 0
    surviving: int = 0

    @property
    def ok(self) -> bool:
        return not self.problems


def _saturation_problems(tab: Tableau, sid: int) -> list:
    c = tab.closure
    st = tab.states[sid]
    fs = st.formulas
    out = []
    for f in fs:
        k = c.kind[f]
        ok = True
        if k == LIT:
            ok = c.neg[f] not in fs
        elif k == AND:
            ok = c.left[f] in fs and c.right[f] in fs
        elif k == OR:
            ok = c.left[f] in fs or c.right[f] in fs
        elif k == ALW:
            ok = c.left[f] in fs
        if not ok:
            out.append(f"state s{sid}: {print_formula(c.formula[f])} is not saturated")
    nxt = frozenset(f for f in fs if c.kind[f] == ALW
                    or (c.kind[f] == EVT and c.left[f] not in fs))
    if tab.worlds[st.succ].pre != nxt:
        out.append(f"state s{sid}: successor world does not match its carried formulas")
    if tab.branch_formulas(st.leaf) != set(fs):
        out.append(f"state s{sid}: formula set differs from its branch")
    return out


def eliminate(tab: Tableau) -> set:
    """States surviving elimination; the root world is satisfiable iff one
    of its states survives."""
    c = tab.closure
    alive = set(range(len(tab.states)))
    changed = True
    while changed:
        changed = False
        for sid in list(alive):
            succ = tab.worlds[tab.states[sid].succ]
            if not any(s in alive for s in succ.states):
                alive.discard(sid)
                changed = True
        # for each pending eventuality, states that can reach a fulfilment
        pending = {}
        for sid in alive:
            for f in tab.states[sid].formulas:
                if c.kind[f] == EVT and c.left[f] not in tab.states[sid].formulas:
                    pending.setdefault(f, []).append(sid)
        for f, holders in pending.items():
            body = c.left[f]
            reach = {s for s in alive if body in tab.states[s].formulas}
            grew = True
            while grew:
                grew = False
                for s in alive:
                    if s in reach:
                        continue
                    succ = tab.worlds[tab.states[s].succ]
                    if any(t in reach for t in succ.states):
                        reach.add(s)
                        grew = True
            for s in holders:
                if s not in reach:
                    alive.discard(s)
                    changed = True
    return alive


def audit_tree(tab: Tableau) -> AuditReport:
    rep = AuditReport(states=len(tab.states))
    c = tab.closure
    for n in tab.nodes:
        if n.rule == "close":
            rep.closed_leaves += 1
            a, b = n.ref
            have = tab.branch_formulas(n)
            if c.kind[a] != LIT or c.neg[a] != b or a not in have or b not in have:
                rep.problems.append(f"node {n.id}: closed without a complementary pair")
        elif not n.children:
            if n.rule != "state":
                rep.problems.append(f"node {n.id}: leaf with rule {n.rule}")
    for sid in range(len(tab.states)):
        rep.problems.extend(_saturation_problems(tab, sid))
    alive = eliminate(tab)
    rep.surviving = len(alive)
    root_alive = any(s in alive for s in tab.worlds[0].states)
    if root_alive != bool(tab.satisfiable):
        rep.problems.append(
            "state elimination disagrees with the tableau's verdict on the root world")
    return rep


def check_model(f, model: ModelDescription) -> bool:
    return bool(evaluate(f, model)[0])


def audit_verdict(v: TableauVerdict) -> AuditReport:
    """Audit the closed tree, or re-evaluate the models, of a verdict."""
    if v.tree is not None:
        rep = audit_tree(v.tree)
        if not v.tree.closed:
            rep.problems.append("verdict tree is not closed")
    else:
        rep = AuditReport()
    if v.model is not None and not check_model(v.formula, v.model):
        rep.problems.append("model does not satisfy the formula")
    if v.countermodel is not None and not check_model(Not(v.formula), v.countermodel):
        rep.problems.append("countermodel does not falsify the formula")
    return rep
