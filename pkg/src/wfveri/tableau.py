"""Semantic tableaux for the []/<> fragment of LTL over infinite linear time.

Worlds and states
-----------------
The tableau is a tree of rule applications. Each *world* starts from a
set of formulas that must hold there (its pre-state). Inside a world the
formulas are decomposed with the classical alpha/beta rules plus

    []g   ->  g, and []g is carried to the next world
    <>g   ->  g  |  <>g is carried to the next world

until the branch is closed by a complementary pair or saturated. A
saturated branch is a *state*; its successor world holds the carried
formulas. Worlds are identified by their pre-state, so a repeated
pre-state becomes a loop-back leaf instead of a new subtree.

A state witnesses a model iff it can reach a strongly connected set of
states in which every eventuality ``<>g`` occurring there is fulfilled
by some state containing ``g``.
"""

from __future__ import annotations

import enum
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .formula import Always, And, Atom, Eventually, Formula, Not, Or, print_formula, to_nnf
from .oracle import ModelDescription, minimize_model

LIT, AND, OR, ALW, EVT = range(5)

DEFAULT_MAX_NODES = 1_000_000
DEFAULT_TIMEOUT = 60.0


class BudgetExceeded(RuntimeError):
    def __init__(self, stats: "Stats", reason: str):
        self.stats = stats
        self.reason = reason
        super().__init__(f"tableau budget exceeded ({reason}) after {stats.nodes} nodes, "
                         f"{stats.elapsed:.2f}s")


@dataclass(frozen=True)
class Budget:
    max_nodes: int = DEFAULT_MAX_NODES
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self):
        if self.max_nodes <= 0 or self.timeout <= 0:
            raise ValueError("budget must be positive")


@dataclass
class Stats:
    nodes: int = 0
    rule_applications: int = 0
    worlds: int = 0
    states: int = 0
    elapsed: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        d = {"nodes": self.nodes, "rule_applications": self.rule_applications,
             "worlds": self.worlds, "states": self.states}
        if timing:
            d["elapsed"] = round(self.elapsed, 6)
        return d


class Answer(enum.Enum):
    VALID = "Valid"
    SATISFIABLE = "Satisfiable-not-valid"
    UNSATISFIABLE = "Unsatisfiable"


# ---------------------------------------------------------------- closure


class Closure:
    """Interned NNF subformulas, referred to by integer id."""

    def __init__(self):
        self.kind = []
        self.left = []
        self.right = []
        self.neg = []  # complementary literal for literals, else -1
        self.formula = []
        self.index = {}

    def __len__(self):
        return len(self.kind)

    def _new(self, f, kind, left=-1, right=-1):
        i = len(self.kind)
        self.kind.append(kind)
        self.left.append(left)
        self.right.append(right)
        self.neg.append(-1)
        self.formula.append(f)
        self.index[f] = i
        return i

    def add(self, f: Formula) -> int:
        i = self.index.get(f)
        if i is not None:
            return i
        if isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.operand, Atom)):
            a = f if isinstance(f, Atom) else f.operand
            p = self._new(a, LIT)
            n = self._new(Not(a), LIT)
            self.neg[p], self.neg[n] = n, p
            return self.index[f]
        if isinstance(f, (And, Or)):
            left, right = self.add(f.left), self.add(f.right)
            return self._new(f, AND if isinstance(f, And) else OR, left, right)
        if isinstance(f, (Always, Eventually)):
            body = self.add(f.operand)
            return self._new(f, ALW if isinstance(f, Always) else EVT, body)
        raise ValueError(f"formula is not in negation normal form: {print_formula(f)}")


# ---------------------------------------------------------------- tree


class Node:
    """One rule application in the tableau tree.

    ``rule`` is one of root, nnf, and, always, or, eventually, postpone,
    next, state, close. ``formulas`` are the ids it introduces.
    """

    __slots__ = ("id", "parent", "world", "rule", "formulas", "status", "children",
                 "ref", "state")

    def __init__(self, id, parent, world, rule, formulas=()):
        self.id = id
        self.parent = parent
        self.world = world
        self.rule = rule
        self.formulas = formulas
        self.status = "expanded"
        self.children = []
        # close: the complementary pair; postpone: the carried eventuality;
        # state: the successor world
        self.ref = None
        self.state = None


@dataclass
class World:
    id: int
    label: str
    pre: frozenset
    node: Node  # node opening this world
    states: list = field(default_factory=list)
    refuted: bool = True


@dataclass
class State:
    id: int
    world: int
    formulas: frozenset
    succ: int
    leaf: Node
    good: bool = False


class Tableau:
    def __init__(self, formula: Formula):
        self.root_formula = formula
        self.closure = Closure()
        self.nodes: list = []
        self.worlds: list = []
        self.states: list = []
        self.stats = Stats()
        self.fulfilling: list = []  # lists of state ids
        self.satisfiable: Optional[bool] = None

    @property
    def root(self) -> Node:
        return self.nodes[0]

    @property
    def closed(self) -> bool:
        return self.satisfiable is False

    def __len__(self) -> int:
        return len(self.nodes)

    def leaves(self) -> list:
        return [n for n in self.nodes if not n.children]

    def label(self, node: Node) -> str:
        return self.worlds[node.world].label

    def text(self, i: int) -> str:
        return print_formula(self.closure.formula[i])

    def branch_formulas(self, node: Node) -> set:
        """Ids of formulas holding at ``node`` within its world."""
        out = set()
        n = node
        while n is not None and n.world == node.world:
            out.update(n.formulas)
            if n is self.worlds[n.world].node:
                break
            n = n.parent
        return out

    def eventualities(self, sid: int) -> list:
        c = self.closure
        return [f for f in self.states[sid].formulas if c.kind[f] == EVT]


class _Builder:
    def __init__(self, tab: Tableau, budget: Budget, stats: Stats, t0: float):
        self.tab = tab
        self.c = tab.closure
        self.budget = budget
        self.stats = stats
        self.t0 = t0
        self.world_of_pre = {}
        self.queue = deque()

    def node(self, parent, world, rule, formulas=()):
        n = Node(len(self.tab.nodes), parent, world, rule, tuple(formulas))
        self.tab.nodes.append(n)
        if parent is not None:
            parent.children.append(n)
        st = self.stats
        st.nodes += 1
        if rule not in ("root", "state", "close"):
            st.rule_applications += 1
        if st.nodes > self.budget.max_nodes:
            self.fail("node cap")
        if not st.nodes & 1023 and time.perf_counter() - self.t0 > self.budget.timeout:
            self.fail("timeout")
        return n

    def fail(self, reason):
        self.stats.elapsed = time.perf_counter() - self.t0
        raise BudgetExceeded(self.stats, reason)

    def start(self, f: Formula):
        tab = self.tab
        nnf = to_nnf(f)
        root = self.node(None, 0, "root")
        top = root
        fid = self.c.add(nnf)
        if nnf != f:
            top = self.node(root, 0, "nnf", (fid,))
        else:
            root.formulas = (fid,)
        pre = frozenset([fid])
        tab.worlds.append(World(0, "1", pre, top))
        self.world_of_pre[pre] = 0
        self.stats.worlds += 1
        self.queue.append(0)

    def open_world(self, pre: frozenset, parent: Node, label: str) -> int:
        wid = len(self.tab.worlds)
        n = self.node(parent, wid, "next", sorted(pre))
        self.tab.worlds.append(World(wid, label, pre, n))
        self.world_of_pre[pre] = wid
        self.stats.worlds += 1
        self.queue.append(wid)
        return wid

    def run(self):
        while self.queue:
            wid = self.queue.popleft()
            w = self.tab.worlds[wid]
            self.saturate(w.node, wid, set(), sorted(w.pre, reverse=True), [])

    def saturate(self, node: Node, wid: int, have: set, todo: list, deferred: list):
        kind, left, right, neg = self.c.kind, self.c.left, self.c.right, self.c.neg
        while True:
            while todo:
                f = todo.pop()
                if f in have:
                    continue
                k = kind[f]
                if k == LIT:
                    if neg[f] in have:
                        n = self.node(node, wid, "close")
                        n.status = "closed"
                        n.ref = (neg[f], f)
                        return
                    have.add(f)
                elif k == AND:
                    have.add(f)
                    new = [g for g in (left[f], right[f]) if g not in have]
                    if new:
                        node = self.node(node, wid, "and", new)
                        todo.extend(reversed(new))
                elif k == ALW:
                    have.add(f)
                    g = left[f]
                    if g not in have:
                        node = self.node(node, wid, "always", (g,))
                        todo.append(g)
                else:
                    have.add(f)
                    deferred.append(f)

            conflict = None
            forced = []
            ors = []
            evts = []
            for f in deferred:
                a = left[f]
                if kind[f] == OR:
                    b = right[f]
                    if a in have or b in have:
                        continue
                    a_dead = kind[a] == LIT and neg[a] in have
                    b_dead = kind[b] == LIT and neg[b] in have
                    if a_dead and b_dead:
                        conflict = f
                        break
                    if a_dead or b_dead:
                        forced.append(b if a_dead else a)
                    else:
                        ors.append(f)
                else:
                    if a in have or (kind[a] == LIT and neg[a] in have):
                        continue  # fulfilled here, or necessarily carried over
                    evts.append(f)

            if conflict is not None:
                # both disjuncts contradict the branch: two immediately closed children
                for g in (left[conflict], right[conflict]):
                    child = self.node(node, wid, "or", (g,))
                    n = self.node(child, wid, "close")
                    n.status = "closed"
                    n.ref = (neg[g], g)
                return
            if forced:
                node = self.node(node, wid, "or", forced)
                todo.extend(reversed(forced))
                deferred = ors + evts
                continue
            if ors:
                pick, others = ors[0], ors[1:] + evts
                a, b = left[pick], right[pick]
                if kind[a] == LIT:
                    branches = [(a,), (neg[a], b)]
                elif kind[b] == LIT:
                    branches = [(b,), (neg[b], a)]
                else:
                    branches = [(a,), (b,)]
                for fs in branches:
                    child = self.node(node, wid, "or", fs)
                    self.saturate(child, wid, set(have), list(reversed(fs)), list(others))
                return
            if evts:
                pick, others = evts[0], evts[1:]
                a = left[pick]
                child = self.node(node, wid, "eventually", (a,))
                self.saturate(child, wid, set(have), [a], list(others))
                later = (neg[a],) if kind[a] == LIT else ()
                child = self.node(node, wid, "postpone", later)
                child.ref = pick
                self.saturate(child, wid, set(have), list(later), list(others))
                return
            break
        self.finish(node, wid, have)

    def finish(self, node: Node, wid: int, have: set):
        kind, left = self.c.kind, self.c.left
        formulas = frozenset(have)
        nxt = frozenset(f for f in formulas
                        if kind[f] == ALW or (kind[f] == EVT and left[f] not in formulas))
        tab = self.tab
        w = tab.worlds[wid]
        sid = len(tab.states)
        leaf = self.node(node, wid, "state")
        leaf.state = sid
        w.states.append(sid)
        self.stats.states += 1
        succ = self.world_of_pre.get(nxt)
        tab.states.append(State(sid, wid, formulas, -1, leaf))
        if succ is None:
            succ = self.open_world(nxt, leaf, f"{w.label}.{len(w.states)}")
        else:
            leaf.status = "open-loop"
        leaf.ref = succ
        tab.states[sid].succ = succ


# ---------------------------------------------------------------- analysis


def _graph(tab: Tableau) -> nx.DiGraph:
    """States are nodes ``sid >= 0``, worlds are nodes ``-(wid + 1)``."""
    g = nx.DiGraph()
    for w in tab.worlds:
        g.add_node(-(w.id + 1))
        for sid in w.states:
            g.add_edge(-(w.id + 1), sid)
    for st in tab.states:
        g.add_edge(st.id, -(st.succ + 1))
    return g


def fulfilling_components(tab: Tableau, g: nx.DiGraph) -> list:
    c = tab.closure
    found = []
    work = [set(g.nodes)]
    while work:
        sub = work.pop()
        for comp in nx.strongly_connected_components(g.subgraph(sub)):
            sts = [n for n in comp if n >= 0]
            if len(comp) < 2 or not sts:
                continue
            union = set()
            for s in sts:
                union |= tab.states[s].formulas
            bad = {f for f in union if c.kind[f] == EVT and c.left[f] not in union}
            if not bad:
                found.append(comp)
                continue
            drop = {s for s in sts if not bad.isdisjoint(tab.states[s].formulas)}
            work.append(comp - drop)
    return found


def analyse(tab: Tableau) -> None:
    g = _graph(tab)
    comps = fulfilling_components(tab, g)
    tab.fulfilling = [sorted(n for n in comp if n >= 0) for comp in comps]
    targets = set().union(*comps) if comps else set()
    good = set(targets)
    rev = g.reverse(copy=False)
    frontier = list(targets)
    while frontier:
        n = frontier.pop()
        for m in rev.successors(n):
            if m not in good:
                good.add(m)
                frontier.append(m)
    for st in tab.states:
        st.good = st.id in good
    for w in tab.worlds:
        w.refuted = not any(tab.states[s].good for s in w.states)
    tab.satisfiable = not tab.worlds[0].refuted
    tab._graph = g
    tab._comps = comps


def build_tableau(f: Formula, budget: Budget = Budget(), stats: Optional[Stats] = None,
                  t0: Optional[float] = None) -> Tableau:
    t0 = time.perf_counter() if t0 is None else t0
    tab = Tableau(f)
    stats = stats if stats is not None else tab.stats
    tab.stats = stats
    b = _Builder(tab, budget, stats, t0)
    b.start(f)
    b.run()
    analyse(tab)
    stats.elapsed = time.perf_counter() - t0
    return tab


def _valuation(tab: Tableau, sid: int) -> frozenset:
    c = tab.closure
    return frozenset(c.formula[f] for f in tab.states[sid].formulas
                     if c.kind[f] == LIT and isinstance(c.formula[f], Atom))


def _bfs(g, start, goal, allowed=None):
    """Shortest non-empty path from ``start`` to a goal node, or None."""
    prev = {start: None}
    q = deque([start])
    while q:
        n = q.popleft()
        for m in g.successors(n):
            if allowed is not None and m not in allowed:
                continue
            if goal(m):
                path = [m, n]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            if m not in prev:
                prev[m] = n
                q.append(m)
    return None


def extract_model(tab: Tableau) -> ModelDescription:
    """A lasso through the tableau's states satisfying the root formula."""
    if not tab.satisfiable:
        raise ValueError("tableau is closed; no model")
    g, comps = tab._graph, tab._comps
    comp_of = {}
    for k, comp in enumerate(comps):
        for n in comp:
            comp_of[n] = k
    c = tab.closure
    start = next(s for s in tab.worlds[0].states if tab.states[s].good)
    if start in comp_of:
        prefix = [start]
    else:
        prefix = _bfs(g, start, lambda n: n >= 0 and n in comp_of)
    entry = prefix[-1]
    comp = comps[comp_of[entry]]
    sts = [n for n in comp if n >= 0]
    union = set()
    for s in sts:
        union |= tab.states[s].formulas
    bodies = sorted({c.left[f] for f in union if c.kind[f] == EVT})
    required = []
    for body in bodies:
        if any(body in tab.states[s].formulas for s in required):
            continue
        required.append(next(s for s in sorted(sts) if body in tab.states[s].formulas))
    cycle = [entry]
    cur = entry
    for r in required:
        if r != cur:
            cycle.extend(_bfs(g, cur, lambda n, r=r: n == r, allowed=comp)[1:])
            cur = r
    cycle.extend(_bfs(g, cur, lambda n: n == entry, allowed=comp)[1:-1])
    seq = prefix[:-1] + cycle
    seq = [n for n in seq if n >= 0]
    loop_start = len([n for n in prefix[:-1] if n >= 0])
    return ModelDescription(tuple(_valuation(tab, s) for s in seq), loop_start)


# ---------------------------------------------------------------- verdicts


@dataclass
class TableauVerdict:
    answer: Answer
    formula: Formula
    tree: Optional[Tableau] = None  # closed tree: of ~F if valid, of F if unsatisfiable
    model: Optional[ModelDescription] = None  # satisfies F
    countermodel: Optional[ModelDescription] = None  # satisfies ~F
    stats: Stats = field(default_factory=Stats)

    @property
    def valid(self) -> bool:
        return self.answer is Answer.VALID

    @property
    def satisfiable(self) -> bool:
        return self.answer is not Answer.UNSATISFIABLE


def decide(f: Formula, limits: Budget = Budget(), minimize: bool = True) -> TableauVerdict:
    """Valid iff the tableau for ~f closes, unsatisfiable iff the one for f
    closes, otherwise satisfiable with a model and a countermodel.

    Extracted lassos are shrunk with ``minimize_model``, which only keeps
    candidates that still satisfy the formula.
    """
    shrink = minimize_model if minimize else (lambda g, m: m)
    t0 = time.perf_counter()
    stats = Stats()
    neg = build_tableau(Not(f), limits, stats, t0)
    if neg.closed:
        return TableauVerdict(Answer.VALID, f, tree=neg, stats=stats)
    counter = shrink(Not(f), extract_model(neg))
    pos = build_tableau(f, limits, stats, t0)
    stats.elapsed = time.perf_counter() - t0
    if pos.closed:
        return TableauVerdict(Answer.UNSATISFIABLE, f, tree=pos, countermodel=counter,
                              stats=stats)
    return TableauVerdict(Answer.SATISFIABLE, f, model=shrink(f, extract_model(pos)),
                          countermodel=counter, stats=stats)


def eventuality_ledger(tab: Tableau, node: Node) -> dict:
    """Each eventuality on the branch at ``node``: fulfilled or pending."""
    c = tab.closure
    have = tab.branch_formulas(node)
    return {f: ("fulfilled" if c.left[f] in have else "pending")
            for f in sorted(have) if c.kind[f] == EVT}


def satisfiable(f: Formula, limits: Budget = Budget()) -> Optional[ModelDescription]:
    tab = build_tableau(f, limits)
    return extract_model(tab) if tab.satisfiable else None
