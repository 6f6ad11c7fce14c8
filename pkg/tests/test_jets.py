import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from contactnf.errors import ContactNFError
from contactnf.jets import (Jet, JetMap, compose, divmod_monic, even_odd_split, hensel_solve,
                            invert_map, nth_root, weierstrass_prepare)

import gen

X = sympy.symbols("x0:4")


def test_product_matches_sympy():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.choice([2, 3])
        a, b = gen.jet(rng, n, 6), gen.jet(rng, n, 6)
        want = gen.truncated_terms(gen.to_sympy(a, X[:n]) * gen.to_sympy(b, X[:n]), X[:n], 6)
        assert gen.terms_of(a * b) == want


def test_product_precision_rule():
    x, y = Jet.variables(2, 4)
    p = (x * x).truncate(4)
    q = Jet.variables(2, 6)[1]
    # min(max(4, 6), 4 + 1, 6 + 2)
    assert (p * q).degree == 5


def test_weighted_truncation():
    th, x = Jet.variables(2, 6, (1, 2))
    f = th ** 3 * x ** 2
    assert f.is_zero()
    assert (th ** 2 * x ** 2).coeff((2, 2)) == 1


def test_composition_matches_sympy():
    rng = random.Random(5)
    for _ in range(20):
        f = gen.jet(rng, 2, 6)
        maps = gen.near_identity(rng, 2, 6)
        sub = {X[0]: gen.to_sympy(maps[0], X[:2]), X[1]: gen.to_sympy(maps[1], X[:2])}
        want = gen.truncated_terms(gen.to_sympy(f, X[:2]).subs(sub, simultaneous=True), X[:2], 6)
        assert gen.terms_of(compose(f, list(maps))) == want


def test_inverse_round_trip():
    rng = random.Random(3)
    for n in (2, 3):
        phi = gen.near_identity(rng, n, 7)
        psi = invert_map(phi)
        assert phi.compose(psi).is_identity()
        assert psi.compose(phi).is_identity()


def test_inverse_weighted():
    th, x = Jet.variables(2, 10, (1, 2))
    phi = JetMap([th + x + th ** 3, x + th ** 2 + x * th])
    psi = phi.inverse()
    assert phi.compose(psi).is_identity() and psi.compose(phi).is_identity()


def test_inverse_needs_invertible_linear_part():
    x, y = Jet.variables(2, 4)
    with pytest.raises(ContactNFError):
        JetMap([x + y, x + y]).inverse()


def test_hensel_root():
    x, y = Jet.variables(2, 8)
    g = hensel_solve(y ** 2 + y - x, 0)
    x1, = Jet.variables(1, 8)
    assert (g * g + g - x1).is_zero()


def test_nth_root():
    x, = Jet.variables(1, 6)
    assert nth_root(8 * (1 + x) ** 3, 3) == 2 * (1 + x)
    r = nth_root(1 + x, 2)
    assert (r * r - (1 + x)).is_zero()


def test_nth_root_rejects_irrational_constant():
    x, = Jet.variables(1, 6)
    with pytest.raises(ContactNFError):
        nth_root(2 + x, 2)


def test_even_odd_split():
    t, = Jet.variables(1, 6)
    f = 1 + t + 2 * t ** 2 + 3 * t ** 3
    h1, h2 = even_odd_split(f, 0)
    assert h1.coeff((0,)) == 1 and h1.coeff((1,)) == 2
    assert h2.coeff((0,)) == 1 and h2.coeff((1,)) == 3


def test_divmod_monic():
    th, a = Jet.variables(2, 8, (1, 2))
    f = (1 + th + a) * (th ** 2 - a) + 3 * th + a
    q, r = divmod_monic(f, 0, [-a, a * 0])
    assert q * (th ** 2 - a) + r == f
    assert r.max_exponent(0) <= 1


def test_weierstrass_prepare():
    th, a = Jet.variables(2, 12, (1, 2))
    f = (1 + a + th) * (th ** 2 + a * th - a)
    u, c1, c0, _ = weierstrass_prepare(f, 0)
    assert (u * (th ** 2 + c1 * th + c0) - f).is_zero()
    assert not c1.depends_on(0) and not c0.depends_on(0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_ring_axioms(cs):
    x, y = Jet.variables(2, 5)
    a = cs[0] + cs[1] * x + cs[2] * y * x
    b = cs[3] * y + cs[4] * x ** 2 + cs[5]
    c = 1 + x - y
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
