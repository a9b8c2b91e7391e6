"""Workflow patterns compiled to temporal-logic specifications, and a
semantic-tableaux prover for the []/<> fragment of LTL."""

__version__ = "0.1.0"

from .formula import Formula, parse_formula, print_formula  # noqa: E402
from .generator import LogicalSpecification, generate  # noqa: E402
from .patterns import PatternLibrary, default_library, parse_pattern_set  # noqa: E402
from .tableau import Answer, Budget, BudgetExceeded, TableauVerdict, decide  # noqa: E402
from .workflow import parse_workflow  # noqa: E402

__all__ = [
    "Answer", "Budget", "BudgetExceeded", "Formula", "LogicalSpecification",
    "PatternLibrary", "TableauVerdict", "decide", "default_library", "generate",
    "parse_formula", "parse_pattern_set", "parse_workflow", "print_formula",
]
