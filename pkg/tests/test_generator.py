import json
import random
from pathlib import Path

import pytest

from wfveri.formula import (
    Always, And, Atom, Implies, atom_bases, parse_formula as P, print_formula,
)
from wfveri.generator import (
    GenerationError, LogicalSpecification, completeness_obligation, conjoin, generate,
)
from wfveri.randgen import random_workflow
from wfveri.workflow import AggregatedFormulas, applications, expression_atoms, parse_workflow

GOLDEN = Path(__file__).parent / "golden"


def read_golden(name):
    """Formulas of a golden file keyed by group."""
    groups, cur = [], None
    for line in (GOLDEN / name).read_text().splitlines():
        if line.startswith("# L"):
            cur = []
            groups.append(cur)
        elif line.strip() and not line.startswith("#"):
            if cur is None:
                cur = []
                groups.append(cur)
            cur.append(P(line))
    return groups


class TestExample4:
    def test_seq(self, lib2):
        spec = generate(parse_workflow("Seq(a,b)"), lib2)
        assert spec.formulas == read_golden("example4_seq.txt")[0]

    def test_branch(self, lib2):
        spec = generate(parse_workflow("Branch(a,b,c)"), lib2)
        assert spec.formulas == [P("a => (<>b & ~<>c) | (~<>b & <>c)"), P("[]~(b & c)")]

    def test_concur_with_nested_seq(self, lib2):
        spec = generate(parse_workflow("Concur(Seq(a,b),c,d)"), lib2)
        assert spec.formulas == read_golden("example4_concur.txt")[0]
        assert [p.pattern for p in spec.provenance] == ["Concur", "Concur", "Seq", "Seq"]


class TestExample6:
    @pytest.fixture
    def spec(self, example6, lib):
        return generate(example6, lib)

    def test_group_sizes(self, spec):
        assert [len(g) for g in spec.groups()] == [3, 4, 3, 3, 3, 3, 3, 4]
        assert len(spec) == 26

    def test_matches_reference_except_first_scoping(self, spec):
        ref = [f for g in read_golden("example6_reference.txt") for f in g]
        assert spec.formulas[1:] == ref[1:]
        # printed as ([]A) => <>B; the Sequence template gives [](A => <>B)
        printed = ref[0]
        assert spec.formulas[0] == Always(Implies(printed.left.operand, printed.right))

    def test_groups_match_reference(self, spec):
        ref = read_golden("example6_reference.txt")
        assert [g[1:] if i == 0 else g for i, g in enumerate(spec.groups())] == \
            [g[1:] if i == 0 else g for i, g in enumerate(ref)]

    def test_example_formula_present(self, spec):
        f = P("[]((a | b) => (<>(c | d) & ~<>(e | j)) | (~<>(c | d) & <>(e | j)))")
        assert f in spec.formulas

    def test_text_golden(self, spec):
        assert spec.to_text() == (GOLDEN / "example6_generated.txt").read_text()

    def test_conjoin_left_side_of_reference_query(self, spec):
        text = print_formula(conjoin(spec))
        assert text.startswith("[](a | (d | j) => <>(k | l | m)) & ")
        assert text.endswith("[]~(k | l) & []~((k | l) & m)" + ")" * 24)

    def test_boundary_kept_out_of_spec(self, spec):
        assert spec.boundary.entry == Atom("a")
        assert spec.boundary.exit == Atom("m")
        assert spec.boundary.entry not in spec.formulas


def test_depth_one_equals_union_of_instantiations(lib):
    e = parse_workflow("ExclusiveChoice(a,b,c)")
    ws = lib["ExclusiveChoice"].instantiate([Atom("a"), Atom("b"), Atom("c")])
    assert tuple(generate(e, lib).formulas) == ws.temporal


def test_structural_dedup():
    spec = LogicalSpecification()
    assert spec.add(P("p"), None)
    assert not spec.add(P("p"), "again")
    assert len(spec) == 1 and spec.duplicates == [(0, "again")]


def test_dedup_when_duplicates_allowed(lib):
    e = parse_workflow("Sequence(Sequence(a,b),Sequence(a,b))")
    spec = generate(e, lib, strict_disjoint=False)
    assert len(spec) == 6 and len(spec.duplicates) == 3


def test_invalid_expression_raises(lib):
    with pytest.raises(GenerationError) as e:
        generate(parse_workflow("Sequence(a,a)"), lib)
    assert e.value.diagnostics


def test_conjoin():
    spec = LogicalSpecification()
    spec.add(P("p"), None)
    assert conjoin(spec) == P("p")
    spec.add(P("q"), None)
    assert conjoin(spec) == And(P("p"), P("q"))
    with pytest.raises(GenerationError):
        conjoin(LogicalSpecification())


def test_json_round_trip(example6, lib):
    spec = generate(example6, lib)
    doc = json.loads(json.dumps(spec.to_json(model="m.wfx")))
    assert doc["schema"] == "wfveri.specification" and doc["model"] == "m.wfx"
    back = LogicalSpecification.from_json(doc)
    assert back.formulas == spec.formulas and back.provenance == spec.provenance
    assert back.boundary == spec.boundary


def test_completeness_formula_with_atoms():
    g = AggregatedFormulas(Atom("ge"), Atom("gx"))
    h = AggregatedFormulas(Atom("he"), Atom("hx"))
    expected = P(
        "[](ge => <>gx) & [](~ge => ~<>gx) & []~(ge & gx) & [](he => <>hx) & "
        "[](~he => ~<>hx) & []~(he & hx) & [](ge | gx => <>(he | hx))"
    )
    f = completeness_obligation(g, h)
    premises = []
    x = f.left
    while isinstance(x, And):
        premises.append(x.left)
        x = x.right
    premises.append(x)
    flat = []
    y = expected
    while isinstance(y, And):
        flat.insert(0, y.right)
        y = y.left
    flat.insert(0, y)
    assert premises == flat
    assert f.right == P("[](gx => <>he)")


def test_completeness_same_workflow_is_well_formed():
    g = AggregatedFormulas(Atom("a"), Atom("b"))
    assert parse_formula_round_trip(completeness_obligation(g, g))


def parse_formula_round_trip(f):
    return P(print_formula(f)) == f


@pytest.mark.parametrize("seed", range(50))
def test_generation_properties(lib, seed):
    e = random_workflow(random.Random(seed), lib)
    spec = generate(e, lib)
    assert generate(e, lib).formulas == spec.formulas
    apps = list(applications(e))
    assert {p.application_index for p in spec.provenance} == set(range(len(apps)))
    atoms = set().union(*(atom_bases(f) for f in spec.formulas))
    assert atoms <= expression_atoms(e)
    assert len(set(spec.formulas)) == len(spec.formulas)
