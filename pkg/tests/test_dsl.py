import random

import pytest
from hypothesis import given, settings, strategies as st

from contactnf.dsl import parse_form, parse_form_with_names, print_form
from contactnf.errors import ParseError
from contactnf.exterior import KForm
from contactnf.jets import Jet

import gen

E1 = "theta*d(theta) + (1/2)*(x1*d(x2) - x2*d(x1))"
E2 = "x1*d(theta) + (theta - x2)*d(x1)"


def test_first_example():
    a, names = parse_form_with_names(E1, 6)
    assert names == ["theta", "x1", "x2"]
    th, x1, x2 = Jet.variables(3, 6)
    assert a == KForm.one_form([th, -x2 / 2, x1 / 2]).truncate(a.degree)


def test_second_example_inferred_order():
    a, names = parse_form_with_names(E2, 6)
    assert names[0] == "theta"
    th, x1, x2 = Jet.variables(3, 6)
    assert a.equal_mod(KForm.one_form([x1, th - x2, 0 * th]), 6)


def test_header_and_comments():
    a, names = parse_form_with_names("vars: theta, a, b  # order\n a*d(b) # tail\n", 4)
    assert names == ["theta", "a", "b"]
    assert a[(2,)] == Jet.var(1, 3, a.degree)


def test_zero_two_form():
    f = parse_form("d(x1)*d(x1)", 4)
    assert f.grade == 2 and f.is_zero()


def test_power_alias():
    assert parse_form("x^2*d(y)", 4) == parse_form("x**2*d(y)", 4)


@pytest.mark.parametrize("text, where", [
    ("theta*", (1, 7)),
    ("x*d(y", (1, 6)),
    ("x $ y", (1, 3)),
])
def test_syntax_errors_have_positions(text, where):
    with pytest.raises(ParseError) as ei:
        parse_form(text, 4)
    assert (ei.value.line, ei.value.column) == where


def test_unknown_variable():
    with pytest.raises(ParseError):
        parse_form("vars: x, y\n z*d(x)", 4)


def test_degree_overflow():
    with pytest.raises(ParseError):
        parse_form("x^9*d(y)", 4)


def test_repeated_differential_is_zero():
    f = parse_form("d(x)^2 + x*d(x)*d(x)", 4)
    assert f.grade == 2 and f.is_zero()


def test_mixed_grades_rejected():
    with pytest.raises(ParseError):
        parse_form("x + d(x)", 4)


def test_print_parse_round_trip_examples():
    for text in (E1, E2, "d(x1)*d(x2) + x1*x2*d(x2)*d(x3)"):
        f, names = parse_form_with_names(text, 6)
        assert parse_form(print_form(f, names), 6) == f


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([0, 1, 2]))
def test_print_parse_round_trip_random(seed, grade):
    rng = random.Random(seed)
    f = gen.form(rng, grade, 3, 5)
    names = ["theta", "x1", "x2"]
    g = parse_form(print_form(f, names), 5)
    assert g.grade == f.grade
    assert g.equal_mod(f, 5)
