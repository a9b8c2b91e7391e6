import pytest
from hypothesis import settings, strategies as st

from wfveri.formula import Always, And, Atom, Eventually, Iff, Implies, Not, Or
from wfveri.patterns import default_library, fixture_path, formula2_library
from wfveri.workflow import parse_workflow

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

NAMES = ("p", "q", "r")


def atoms_st(names=NAMES, markers=False):
    plain = st.sampled_from(names).map(Atom)
    if not markers:
        return plain
    marked = st.tuples(st.sampled_from(names), st.sampled_from(["execution", "condition"])) \
        .map(lambda t: Atom(t[0], t[1]))
    return st.one_of(plain, marked)


def formulas(names=NAMES, max_leaves=12, markers=False):
    leaf = atoms_st(names, markers)

    def extend(children):
        return st.one_of(
            children.map(Not), children.map(Always), children.map(Eventually),
            st.builds(And, children, children), st.builds(Or, children, children),
            st.builds(Implies, children, children), st.builds(Iff, children, children),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)


@pytest.fixture(scope="session")
def lib():
    return default_library()


@pytest.fixture(scope="session")
def lib2():
    return formula2_library()


@pytest.fixture(scope="session")
def example6():
    return parse_workflow(fixture_path("example6.wfx").read_text())


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT
    if REPORT:
        terminalreporter.section("acceptance")
        for line in REPORT:
            terminalreporter.write_line(line)
