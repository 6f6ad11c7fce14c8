import random
from fractions import Fraction

from contactnf.exterior import KForm, VectorField, bracket, d
from contactnf.jets import Jet
from contactnf.normalizer import (equivariant_darboux, flow_integrate, poincare_dulac, rectify,
                                  toric_degree)
from contactnf.spectrum import SpectralData, parse_constants

import gen

D = 7


def test_liouville_fixture_is_unchanged():
    x, y = Jet.variables(2, D)
    X = VectorField([(2 + 3 * x * y ** 2) * x, -(1 + 2 * x * y ** 2) * y])
    r = poincare_dulac(X, D)
    assert r.nf == X
    assert r.change.is_identity()
    assert r.spectral.as_strings() == ["2", "-1"]


def test_nonresonant_term_removed():
    x, y = Jet.variables(2, D)
    X = VectorField([2 * x, -y + x * y])
    r = poincare_dulac(X, D)
    assert r.nf.equal_mod(VectorField([2 * x, -y]), D)
    assert r.change.pull_field(X).equal_mod(r.nf, D)


def test_random_perturbation_of_diag():
    rng = random.Random(7)
    Xs = VectorField(list(Jet.variables(2, D)))
    Xs = VectorField([2 * Xs[0], -Xs[1]])
    for _ in range(5):
        X = Xs + gen.field(rng, 2, D, lo=2, hi=5)
        r = poincare_dulac(X, D)
        assert bracket(Xs, r.nf).truncate(D).is_zero()
        assert r.change.pull_field(X).equal_mod(r.nf, D)
        assert r.change.round_trip_ok()


def test_half_jordan_block():
    x, y = Jet.variables(2, D)
    h = Fraction(1, 2)
    X = VectorField([h * x + y + x * y, h * y + x ** 2 + y ** 3])
    r = poincare_dulac(X, D)
    assert r.change.pull_field(X).equal_mod(r.nf, D)


def test_flow_time_one_map():
    # dx/dt = x^2 has time-1 map x / (1 - x)
    x, t = Jet.variables(2, D, (1, 0))
    phi = flow_integrate(VectorField([x * x]), D)
    assert all(phi[0].coeff((k,)) == 1 for k in range(1, D + 1))


def test_equivariant_darboux_planar():
    x, y = Jet.variables(2, D + 2)
    om = KForm(2, {(0, 1): 1 + x * y ** 2}, 2, D + 2)
    Xs = VectorField([2 * x, -y])
    ch = equivariant_darboux(om, Xs)
    assert ch.pull_form(om).equal_mod(KForm.canonical(1, D + 2), D + 1)
    assert ch.pull_field(Xs).equal_mod(Xs, D)


def test_equivariant_darboux_dim4():
    rng = random.Random(3)
    lam = (2, 3, -1, -2)
    beta = gen.weighted_one_form(rng, lam, 6)
    om = KForm.canonical(2, 7) + d(beta)
    vs = Jet.variables(4, 7)
    Xs = VectorField([l * v for l, v in zip(lam, vs)])
    ch = equivariant_darboux(om, Xs)
    assert ch.pull_form(om).equal_mod(KForm.canonical(2, 7), 6)
    assert ch.pull_field(Xs).equal_mod(Xs, 6)


def test_rectify():
    x, y = Jet.variables(2, 6)
    Z = VectorField([1 + y, 0 * x])
    ch = rectify(Z, 6)
    e = VectorField([Jet.const(1, 2, 6), Jet.zero(2, 6)])
    assert ch.pull_field(Z).equal_mod(e, 5)
    Z = VectorField([1 + 0 * x, x])
    assert rectify(Z, 6).pull_field(Z).equal_mod(e, 5)


def test_toric_degree():
    assert toric_degree(SpectralData.from_values([2, -1])) == 1
    cs = parse_constants("s=1.4142135623730951:sqrt2")
    assert toric_degree(SpectralData.from_values(["s", "1-s"], cs)) == 2
