import random

import pytest

from wfveri.formula import Atom, is_point_formula, parse_formula as P
from wfveri.patterns import parse_pattern_set
from wfveri.randgen import random_workflow
from wfveri.workflow import (
    AtomArg, PatternApp, WorkflowSyntaxError, aggregated, aggregated_atoms, applications,
    balanced, expression_atoms, nesting_depth, parenthesis_structure, parse_workflow,
    pattern_spans, spans_properly_nested, validate,
)


def test_minimal_application():
    assert parse_workflow("Seq(a,b)") == PatternApp("Seq", (AtomArg("a"), AtomArg("b")))


def test_preorder_visit():
    e = parse_workflow("p4(h,p2(d,p1(a,b,c),e),p3(f,g))")
    assert [app.name for _, app in applications(e)] == ["p4", "p2", "p1", "p3"]
    assert [path for path, _ in applications(e)] == [(), (1,), (1, 1), (2,)]


def test_example6_has_eight_applications(example6):
    names = [app.name for _, app in applications(example6)]
    assert names == ["Sequence", "ExclusiveChoice", "Sequence", "Sequence", "Sequence",
                     "ParallelSplit", "Synchronization", "SimpleMerge"]


def test_whitespace_and_comments():
    text = "# model\nSeq(\n  a ,  # first\n  b)\n"
    assert parse_workflow(text) == parse_workflow("Seq(a,b)")


def test_position_recorded():
    e = parse_workflow("Seq(a,\n  Seq(b,c))")
    assert e.args[1].pos == (2, 3)


@pytest.mark.parametrize("text, line, col", [
    ("a", 1, 1),
    ("", 1, 1),
    ("Seq(a,b", 1, 8),
    ("Seq(a,,b)", 1, 7),
    ("Seq(a,b) x", 1, 10),
    ("Seq(a,\n b;)", 2, 3),
])
def test_syntax_errors(text, line, col):
    with pytest.raises(WorkflowSyntaxError) as e:
        parse_workflow(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_bare_atom_rejected_with_message():
    with pytest.raises(WorkflowSyntaxError, match="bare atom"):
        parse_workflow("  a  ")


class TestValidate:
    def test_example6_clean(self, example6, lib):
        assert validate(example6, lib) == []

    def test_duplicate_atom(self, lib):
        diags = validate(parse_workflow("Sequence(a,a)"), lib)
        assert any("more than once" in d.message for d in diags)

    def test_duplicates_allowed_when_relaxed(self, lib):
        assert validate(parse_workflow("Sequence(a,a)"), lib, strict_disjoint=False) == []

    def test_arity(self, lib):
        diags = validate(parse_workflow("Sequence(a)"), lib)
        assert [d.message for d in diags] == ["Sequence takes 2 arguments, got 1"]

    def test_unknown(self, lib):
        diags = validate(parse_workflow("Sequence(a,Nope(b,c))"), lib)
        assert diags[0].path == (1,) and "unknown pattern" in diags[0].message

    def test_role_conflict(self, lib):
        e = parse_workflow("Sequence(ParallelSplit(a,b,c),Synchronization(d,a,e))")
        diags = validate(e, lib, strict_disjoint=False)
        assert not diags  # a is entry in ParallelSplit and entry in Synchronization
        e = parse_workflow("Sequence(ExclusiveChoice(a,b,c),ArbitraryCycles(d,b,e,f,g,h,i,j,k,l))")
        diags = validate(e, lib, strict_disjoint=False)
        assert any("ordinary" in d.message for d in diags)

    def test_workflow_at_marked_parameter(self, lib):
        e = parse_workflow("ArbitraryCycles(Sequence(a,b),c,d,e,f,g,h,i,j,k)")
        diags = validate(e, lib)
        assert any("marked atom" in d.message for d in diags)


class TestAggregated:
    @pytest.fixture
    def lib2(self, lib2):
        return lib2

    def test_seq(self, lib2):
        agg = aggregated(parse_workflow("Seq(a,b)"), lib2)
        assert (agg.entry, agg.exit) == (Atom("a"), Atom("b"))

    def test_concur_with_seq(self, lib2):
        agg = aggregated(parse_workflow("Concur(a,b,Seq(c,d))"), lib2)
        assert agg.entry == Atom("a")
        assert agg.exit == P("b | d")

    def test_concur_nested(self, lib2):
        agg = aggregated(parse_workflow("Concur(a,b,Concur(c,d,e))"), lib2)
        assert agg.exit == P("b | (d | e)")

    def test_concur_both_nested(self, lib2):
        agg = aggregated(parse_workflow("Concur(a,Concur(b,c,d),Concur(e,f,g))"), lib2)
        assert agg.exit == P("(c | d) | (f | g)")

    def test_all_atomic_matches_instantiation(self, lib):
        e = parse_workflow("ExclusiveChoice(x1,x2,x3)")
        ws = lib["ExclusiveChoice"].instantiate([Atom("x1"), Atom("x2"), Atom("x3")])
        agg = aggregated(e, lib)
        assert (agg.entry, agg.exit) == (ws.entry, ws.exit)


def test_parenthesis_structure(lib2):
    e = parse_workflow("Concur(a,Concur(b,c,d),Concur(e,f,g))")
    s = parenthesis_structure(e)
    assert s == "(a(b,c,d)(e,f,g))"
    assert balanced(s)
    assert spans_properly_nested(pattern_spans(e))


def test_spans_detect_crossing():
    assert not spans_properly_nested([(0, 5), (3, 8)])
    assert spans_properly_nested([(0, 10), (2, 4), (5, 9)])
    assert not balanced("(()")


@pytest.mark.parametrize("seed", range(200))
def test_random_expressions(lib, seed):
    rng = random.Random(seed)
    e = random_workflow(rng, lib)
    assert validate(e, lib) == []
    agg = aggregated(e, lib)
    assert is_point_formula(agg.entry) and is_point_formula(agg.exit)
    assert aggregated_atoms(agg) <= expression_atoms(e)
    s = parenthesis_structure(e)
    assert balanced(s) and spans_properly_nested(pattern_spans(e))
    assert parse_workflow(str(e)) == e
    assert nesting_depth(e) <= 3


def test_custom_library_drives_roles():
    lib = parse_pattern_set("Two(u,v):\nu\nv\n[](u => <>v)\n")
    assert validate(parse_workflow("Two(a,Two(b,c))"), lib) == []
