import random
from fractions import Fraction

from contactnf.dsl import parse_form
from contactnf.exterior import (KForm, VectorField, bracket, d, interior, is_basic,
                                lie_derivative, pullback, wedge)
from contactnf.jets import Jet

import gen

E1 = "theta*d(theta) + (1/2)*(x1*d(x2) - x2*d(x1))"
E2 = "x1*d(theta) + (theta - x2)*d(x1)"


def test_d_of_first_example():
    a = parse_form(E1, 6)
    assert d(a) == KForm(2, {(1, 2): Jet.const(1, 3, 6)}, 3, 6)


def test_d_of_second_example_is_closed():
    a = parse_form(E2, 6)
    da = d(a)
    # d(x1 dθ) = dx1∧dθ = -dθ∧dx1; d((θ - x2) dx1) = dθ∧dx1 - dx2∧dx1
    assert da[(0, 1)].is_zero()
    assert da[(1, 2)] == Jet.const(1, 3, 6)
    assert d(da).is_zero()


def test_contact_condition_of_first_example():
    a = parse_form(E1, 6)
    c = wedge(a, d(a))[(0, 1, 2)]
    assert c.const_term() == 0
    assert c.coeff((1, 0, 0)) == 1


def test_kernel_of_first_example():
    a = parse_form(E1, 6)
    Z = VectorField([Jet.const(1, 3, 6), Jet.zero(3, 6), Jet.zero(3, 6)])
    assert interior(Z, d(a)).is_zero()


def test_dd_zero_random():
    rng = random.Random(1)
    for k in range(3):
        f = gen.form(rng, k, 4, 6)
        assert d(d(f)).is_zero()


def test_cartan_formula_random():
    rng = random.Random(2)
    for _ in range(10):
        X = gen.field(rng, 3, 6)
        a = gen.form(rng, 1, 3, 6)
        lhs = lie_derivative(X, a)
        rhs = d(interior(X, a)) + interior(X, d(a))
        assert lhs.equal_mod(rhs, min(lhs.degree, rhs.degree))


def test_interior_is_antiderivation():
    rng = random.Random(3)
    for _ in range(10):
        X = gen.field(rng, 3, 6)
        a, b = gen.form(rng, 1, 3, 6), gen.form(rng, 1, 3, 6)
        lhs = interior(X, wedge(a, b))
        rhs = wedge(interior(X, a), b) - wedge(a, interior(X, b))
        assert lhs.equal_mod(rhs, min(lhs.degree, rhs.degree))


def test_pullback_commutes_with_d():
    rng = random.Random(4)
    for _ in range(6):
        phi = gen.near_identity(rng, 3, 6)
        a = gen.form(rng, 1, 3, 6)
        lhs, rhs = d(pullback(phi, a)), pullback(phi, d(a))
        assert lhs.equal_mod(rhs, min(lhs.degree, rhs.degree))


def test_wedge_graded_commutative():
    rng = random.Random(5)
    a, b = gen.form(rng, 1, 4, 5), gen.form(rng, 2, 4, 5)
    assert wedge(a, b) == wedge(b, a)
    assert wedge(a, a).is_zero()


def test_canonical_power_sign():
    om = KForm.canonical(2, 4)
    top = wedge(om, om)
    # sorted basis convention: (dx0∧dx2 + dx1∧dx3)^2 = -2 dx0∧dx1∧dx2∧dx3
    assert top[(0, 1, 2, 3)].const_term() == -2


def test_bracket_jacobi():
    rng = random.Random(6)
    X, Y, Z = (gen.field(rng, 2, 6, lo=1) for _ in range(3))
    s = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
    assert s.truncate(s.degree).is_zero()


def test_liouville_example():
    x, y = Jet.variables(2, 8)
    X = VectorField([(2 + 3 * x * y ** 2) * x, -(1 + 2 * x * y ** 2) * y])
    w = KForm(2, {(0, 1): Jet.const(1, 2, 8)}, 2, 8)
    assert lie_derivative(X, w).equal_mod(w, 7)


def test_is_basic():
    a = parse_form(E1, 6)
    assert not is_basic(a, 0)
    assert is_basic(parse_form("x1*d(x2)", 6, names=["theta", "x1", "x2"]), 0)
    assert Fraction(1, 2) == parse_form(E1, 6)[(2,)].coeff((0, 1, 0))
