import random

import pytest

from contactnf.contact import (TANGENT, TANGENT_DEGENERATE, TRANSVERSAL, check_nondegenerate,
                               classify_singularity, full_normalize, kernel_field, prenormalize)
from contactnf.dsl import parse_form
from contactnf.errors import NotSingular, TangencyNotGeneric
from contactnf.exterior import VectorField, d, interior, is_basic
from contactnf.jets import Jet

import gen

E1 = "theta*d(theta) + (1/2)*(x1*d(x2) - x2*d(x1))"
E2 = "x1*d(theta) + (theta - x2)*d(x1)"
FIXTURE = "vars: theta, x1, x2\n3*theta^2*d(theta) - theta*d(x1) - x1*d(theta) + (1/2)*(x1*d(x2) - x2*d(x1))"


def test_first_example_flags_and_kernel():
    a = parse_form(E1, 8)
    diag = check_nondegenerate(a)
    assert diag.cond_presymplectic and diag.cond_diffeo
    Z = kernel_field(a)
    assert interior(Z, d(a)).is_zero()
    assert Z.value_at_origin()[0] != 0 and all(c == 0 for c in Z.value_at_origin()[1:])


def test_independence_fixtures():
    a = parse_form("x0*d(x0) + x1*d(x1) + x2*d(x2)", 6)
    diag = check_nondegenerate(a)
    assert (diag.cond_presymplectic, diag.cond_diffeo) == (False, True)
    b = parse_form("x1*d(x1) + x1*d(x2)", 6, names=["x0", "x1", "x2"])
    diag = check_nondegenerate(b)
    assert (diag.cond_presymplectic, diag.cond_diffeo) == (True, False)


def test_not_singular():
    with pytest.raises(NotSingular):
        check_nondegenerate(parse_form("d(theta) + x1*d(x2)", 6, names=["theta", "x1", "x2"]))


def test_classification_fixtures():
    assert classify_singularity(parse_form(E1, 8)).tangency == TRANSVERSAL
    assert classify_singularity(parse_form(E2, 8)).tangency == TANGENT_DEGENERATE
    assert classify_singularity(parse_form(FIXTURE, 8)).tangency == TANGENT


def test_second_example_f_theta():
    diag = classify_singularity(parse_form(E2, 8))
    assert diag.f_theta == Jet.var(1, 3, diag.f_theta.degree)


def test_second_example_is_not_normalized():
    with pytest.raises(TangencyNotGeneric):
        prenormalize(parse_form(E2, 8))


def test_first_example_unchanged():
    a = parse_form(E1, 8)
    nf = prenormalize(a)
    assert nf.case == TRANSVERSAL and nf.sign == 1
    ok, deg = nf.round_trip_ok()
    assert ok and deg >= 7
    assert nf.normal_form().equal_mod(a, 7)


def test_random_transversal_round_trip():
    rng = random.Random(23)
    for _ in range(3):
        a = gen.transversal_form(rng, 6)
        nf = prenormalize(a)
        ok, deg = nf.round_trip_ok()
        assert nf.case == TRANSVERSAL and ok and deg >= 6
        assert is_basic(gen.embed_form(nf.gamma, 3, [1, 2]), 0)


def test_tangent_fixture_prenormalizes():
    a = parse_form(FIXTURE, 16)
    nf = prenormalize(a)
    assert nf.case == TANGENT
    ok, deg = nf.round_trip_ok()
    assert ok and deg >= 8


def test_tangent_fixture_conjugated():
    rng = random.Random(2)
    a = parse_form(FIXTURE, 16)
    from contactnf.exterior import pullback
    b = pullback(gen.random_change(rng, 3, 16, shear=False, terms=2), a)
    nf = prenormalize(b)
    ok, deg = nf.round_trip_ok()
    assert nf.case == TANGENT and ok and deg >= 8


def test_full_normalize_first_example():
    nf = full_normalize(parse_form(E1, 10))
    rep = nf.primitive
    assert rep.spectral.as_strings() == ["1/2", "1/2"]
    assert rep.R.is_zero()
    assert rep.flags["linearizable"]


def test_obstruction_witness():
    # gamma = (1/2)(x dy - y dx) with phi = x^2 + y: X(phi) - phi/2 != 0
    from contactnf.contact import linearization_witness
    x, y = Jet.variables(2, 6)
    from fractions import Fraction
    h = Fraction(1, 2)
    X = VectorField([h * x, h * y])
    lam, w = linearization_witness(X, x * x + y)
    assert lam == h and not w.is_zero()
    assert w == h * x * x
