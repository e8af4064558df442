import pytest
from hypothesis import given

from helpers import formulas
from ltlenforce.ltl import equivalent, is_satisfiable, parse_formula as P
from ltlenforce.ltl.sat import to_nnf
from ltlenforce.oracle import is_bad


@pytest.mark.parametrize("f, expected", [
    ("G a & F !a", False),
    ("(G a & F !a) | b", True),
    ("G F a & G F b & G (!a | !b)", True),
    ("X a & X !a", False),
    ("a U b & G !b", False),
    ("G (a -> X !a) & G a", False),
    ("a R b & F !b & G !a", False),
    ("true", True),
    ("false", False),
    ("!(G a | F b)", True),
])
def test_cases(f, expected):
    assert is_satisfiable(P(f)) is expected


def test_equivalent():
    assert equivalent(P("!(a U b)"), P("!a R !b"))
    assert equivalent(P("G a"), P("false R a"))
    assert not equivalent(P("F a"), P("G a"))


@given(formulas(max_depth=4))
def test_agrees_with_bounded_oracle(f):
    # a bounded witness proves satisfiability
    assert is_satisfiable(f) == (not is_bad(f, [], 3))


@given(formulas(max_depth=4))
def test_nnf_equisatisfiable(f):
    assert is_satisfiable(to_nnf(f)) == is_satisfiable(f)
