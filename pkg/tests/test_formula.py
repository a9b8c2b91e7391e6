import itertools

import pytest
from hypothesis import given, strategies as st

from wfveri.formula import (
    Always, And, Atom, Eventually, FormulaSyntaxError, Iff, Implies, Not, Or,
    SubstitutionError, atom_bases, atoms, conjunction, depth, is_nnf, is_point_formula,
    parse_formula, pretty, print_formula, size, subformulas, substitute, to_nnf, tokenize,
)

from conftest import formulas

p, q, r = Atom("p"), Atom("q"), Atom("r")
a, b, c = Atom("a"), Atom("b"), Atom("c")


class TestParse:
    def test_fig5_template(self):
        assert parse_formula("[](f1 => <>f2)") == Always(Implies(Atom("f1"), Eventually(Atom("f2"))))

    def test_single_atom(self):
        assert parse_formula("p") == p

    def test_and_binds_tighter_than_or(self):
        assert parse_formula("a & b | c") == Or(And(a, b), c)

    def test_implies_is_right_associative(self):
        assert parse_formula("a => b => c") == Implies(a, Implies(b, c))

    def test_iff_loosest(self):
        assert parse_formula("a => b <=> c") == Iff(Implies(a, b), c)

    def test_left_associative_and(self):
        assert parse_formula("a & b & c") == And(And(a, b), c)

    def test_unary_binds_tightest(self):
        assert parse_formula("~a & []b | <>c") == Or(And(Not(a), Always(b)), Eventually(c))

    def test_marked_atoms(self):
        f = parse_formula("x(Alfa) => c(Beta)")
        assert f == Implies(Atom("Alfa", "execution"), Atom("Beta", "condition"))

    def test_names_x_and_c_are_plain_without_parenthesis(self):
        assert parse_formula("x & c") == And(Atom("x"), Atom("c"))

    def test_newlines_are_whitespace(self):
        assert parse_formula("p &\n  q") == And(p, q)

    @pytest.mark.parametrize("text, line, col", [
        ("p &", 1, 4),
        ("(p", 1, 3),
        ("p q", 1, 3),
        ("p\n  & $", 2, 5),
        ("x(p & q)", 1, 5),
        ("", 1, 1),
    ])
    def test_syntax_errors_have_position(self, text, line, col):
        with pytest.raises(FormulaSyntaxError) as e:
            parse_formula(text)
        assert (e.value.line, e.value.column) == (line, col)

    def test_error_names_token(self):
        with pytest.raises(FormulaSyntaxError) as e:
            parse_formula("p & )")
        assert e.value.token == ")"

    def test_tokens(self):
        assert [t.text for t in tokenize("[]~(a<=>b)")] == \
            ["[]", "~", "(", "a", "<=>", "b", ")", "<end of input>"]


# Reference grammar: split at the loosest operator, rightmost for the
# left-associative ones and leftmost for the right-associative ones.
_OPS = {"&": (4, And, "left"), "|": (3, Or, "left"), "=>": (2, Implies, "right"),
        "<=>": (1, Iff, "right")}


def _reference_parse(toks):
    if len(toks) == 1:
        return Atom(toks[0])
    ops = [(i, t) for i, t in enumerate(toks) if t in _OPS]
    low = min(_OPS[t][0] for _, t in ops)
    cands = [i for i, t in ops if _OPS[t][0] == low]
    i = cands[-1] if _OPS[toks[cands[0]]][2] == "left" else cands[0]
    return _OPS[toks[i]][1](_reference_parse(toks[:i]), _reference_parse(toks[i + 1:]))


@pytest.mark.parametrize("ops", list(itertools.product(_OPS, repeat=2)))
def test_three_atom_strings_match_reference_grammar(ops):
    toks = ["a", ops[0], "b", ops[1], "c"]
    assert parse_formula(" ".join(toks)) == _reference_parse(toks)


@pytest.mark.parametrize("ops", list(itertools.product(_OPS, repeat=3)))
def test_four_atom_strings_match_reference_grammar(ops):
    toks = ["a", ops[0], "b", ops[1], "c", ops[2], "d"]
    assert parse_formula(" ".join(toks)) == _reference_parse(toks)


class TestPrint:
    def test_fig5_spacing(self):
        assert print_formula(Always(Not(And(a, b)))) == "[]~(a & b)"

    def test_atom(self):
        assert print_formula(p) == "p"

    def test_right_nested_implication_has_no_parentheses(self):
        assert print_formula(Implies(a, Implies(b, c))) == "a => b => c"

    def test_left_nested_implication_keeps_parentheses(self):
        assert print_formula(Implies(Implies(a, b), c)) == "(a => b) => c"

    def test_right_nested_and_keeps_parentheses(self):
        assert print_formula(And(a, And(b, c))) == "a & (b & c)"

    def test_marked(self):
        assert print_formula(Not(Atom("A", "execution"))) == "~x(A)"

    def test_pretty(self):
        assert pretty(parse_formula("[](p => <>q) & ~r")) == "□(p ⇒ ◇q) ∧ ¬r"

    def test_str_uses_ascii(self):
        assert str(Always(p)) == "[]p"


@given(formulas(max_leaves=40, markers=True))
def test_round_trip(f):
    assert parse_formula(print_formula(f)) == f


@given(formulas(max_leaves=20))
def test_print_is_canonical(f):
    text = print_formula(f)
    assert print_formula(parse_formula(text)) == text


class TestSubstitute:
    def test_plain_replacement(self):
        f = parse_formula("[](f1 => <>f2)")
        g = substitute(f, {"f1": Or(a, b), "f2": c})
        assert g == parse_formula("[](a | b => <>c)")

    def test_unbound_atoms_unchanged(self):
        assert substitute(And(p, q), {"p": r}) == And(r, q)

    def test_marker_transfers(self):
        f = parse_formula("x(A) & c(A) & A")
        assert substitute(f, {"A": Atom("task")}) == parse_formula("x(task) & c(task) & task")

    def test_marker_on_compound_is_error(self):
        with pytest.raises(SubstitutionError):
            substitute(parse_formula("x(A)"), {"A": Or(a, b)})

    def test_simultaneous(self):
        assert substitute(And(p, q), {"p": q, "q": p}) == And(q, p)


@given(formulas(names=("p", "q", "r"), markers=True), st.permutations(["u", "v", "w"]))
def test_injective_renaming_is_invertible(f, names):
    there = dict(zip("pqr", map(Atom, names)))
    back = {n: Atom(k) for k, n in zip("pqr", names)}
    assert substitute(substitute(f, there), back) == f


class TestNNF:
    def test_duality(self):
        assert to_nnf(Not(Eventually(p))) == Always(Not(p))
        assert to_nnf(Not(Always(p))) == Eventually(Not(p))

    def test_atom(self):
        assert to_nnf(p) == p

    def test_negated_iff(self):
        assert to_nnf(Not(Iff(p, q))) == Or(And(p, Not(q)), And(Not(p), q))

    def test_implication(self):
        assert to_nnf(Implies(p, q)) == Or(Not(p), q)

    def test_double_negation(self):
        assert to_nnf(Not(Not(p))) == p


@given(formulas(max_leaves=30))
def test_nnf_shape(f):
    g = to_nnf(f)
    assert is_nnf(g)
    assert atom_bases(g) <= atom_bases(f)


class TestUtilities:
    def test_subformulas_preorder(self):
        f = And(p, Always(q))
        assert list(subformulas(f)) == [f, p, Always(q), q]

    def test_atoms_include_markers(self):
        f = parse_formula("x(a) | a")
        assert atoms(f) == {Atom("a"), Atom("a", "execution")}
        assert atom_bases(f) == {"a"}

    def test_point_formula(self):
        assert is_point_formula(parse_formula("a | ~(b & c)"))
        assert not is_point_formula(parse_formula("a | <>b"))

    def test_size_and_depth(self):
        f = parse_formula("[](p => <>q)")
        assert size(f) == 5
        assert depth(f) == 3

    def test_conjunction_right_nested(self):
        assert conjunction([p, q, r]) == And(p, And(q, r))

    def test_invalid_atom_name(self):
        with pytest.raises(ValueError):
            Atom("1x")

    def test_sugar(self):
        assert (p & ~q) >> r == Implies(And(p, Not(q)), r)
