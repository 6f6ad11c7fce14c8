import random
from fractions import Fraction

import pytest

from contactnf.errors import UndecidableAtTolerance
from contactnf.exterior import KForm, VectorField, interior, d, pullback
from contactnf.jets import Jet, JetMap
from contactnf.primitive import (bruno_check, condition_A_check, conformal_field, hyperbolicity,
                                 is_linearizable, normalize_primitive, resonance_support)
from contactnf.spectrum import SpectralData, parse_constants

import gen

H = Fraction(1, 2)
SQRT2 = parse_constants("s=1.4142135623730951:sqrt2")


def brute_resonances(lam, D):
    n = len(lam)
    return sorted((e for e in gen.exponents(n, 3, D)
                   if sum(a * l for a, l in zip(e, lam)) == 1),
                  key=lambda e: (sum(e), tuple(-a for a in e)))


def test_rotation_form():
    x, y = Jet.variables(2, 8)
    g = KForm.one_form([-H * y, H * x])
    X = conformal_field(g)
    assert X == VectorField([H * x, H * y])
    rep = normalize_primitive(g, 6)
    assert rep.spectral.as_strings() == ["1/2", "1/2"]
    assert [c.tag for _, c in rep.gamma_blocks] == ["Zero"]
    assert rep.R.is_zero() and rep.Q.is_zero()
    assert rep.flags["linearizable"]


def test_conformal_field_identity():
    rng = random.Random(4)
    g = gen.primitive_form(rng, (2, 3, -1, -2), 5)
    X = conformal_field(g)
    assert interior(X, d(g)).equal_mod(g, 5)


def _resonant_example(D):
    x, y = Jet.variables(2, D + 2)
    F = x * x * y ** 3 + x ** 3 + x * x * y ** 4
    return KForm.one_form([y + F.deriv(0), 2 * x + F.deriv(1)]), x, y


def test_resonant_example_keeps_resonant_monomial():
    g, x, y = _resonant_example(7)
    rep = normalize_primitive(g, 7)
    assert rep.R_support == [((2, 3), 1)]
    assert rep.flags["resonant_support_ok"]
    assert not rep.flags["linearizable"]


def test_resonant_example_after_change():
    g, x, y = _resonant_example(7)
    g2 = pullback(JetMap([x + y * y + x * y, y - x * x]), g)
    rep = normalize_primitive(g2, 7)
    assert [e for e, _ in rep.R_support] == [(2, 3)]
    assert rep.reconstruct().equal_mod(rep.gamma_nf, 8)
    assert rep.change.pull_form(g2).equal_mod(rep.gamma_nf, 7)


@pytest.mark.parametrize("lam", [(2, 3, -1, -2), (H, 2, H, -1), (0, 0, 1, 1)])
def test_random_reconstruction(lam):
    rng = random.Random(len(lam) + int(2 * lam[0]))
    g = gen.primitive_form(rng, lam, 6)
    rep = normalize_primitive(g, 6)
    assert rep.reconstruct().equal_mod(rep.gamma_nf, 7)
    assert rep.flags["resonant_support_ok"]
    assert rep.flags["q_literal"]


def test_resonance_support_examples():
    assert resonance_support(SpectralData.from_values([2, -1]), 6) == [(2, 3)]
    assert resonance_support(SpectralData.from_values([1, 0]), 3) == [(1, 2)]


@pytest.mark.parametrize("lam", [(2, -1), (H, H), (0, 1), (3, 1, -2, 0), (H, H, H, H),
                                 (Fraction(1, 3), 2, Fraction(2, 3), -1)])
def test_resonance_support_brute_force(lam):
    got = resonance_support(SpectralData.from_values(list(lam)), 8)
    assert got == brute_resonances(lam, 8)


def test_declared_constant_spectrum_has_no_resonance():
    sd = SpectralData.from_values(["s", "1-s"], SQRT2)
    assert resonance_support(sd, 8) == []


def test_linearizable_sqrt2():
    sd = SpectralData.from_values(["s", "1-s"], SQRT2)
    v = is_linearizable(sd, 8)
    assert v.value and v.certificate == "unconditional"


def test_linearizable_resonant():
    v = is_linearizable(SpectralData.from_values([2, -1]), 8)
    assert not v.value and v.certificate == "resonant"


def test_bruno_integer_spectrum():
    assert all(s == 0 for s in bruno_check(SpectralData.from_values([2, -1]), 12))


def test_bruno_half_bounded_by_ln2():
    import math
    sums = bruno_check(SpectralData.from_values([H, H]), 16)
    assert all(s <= math.log(2) + 1e-12 for s in sums)
    assert sums == sorted(sums)


def test_bruno_rejects_low_precision_constant():
    cs = parse_constants("s=1.414:sqrt2")
    with pytest.raises(UndecidableAtTolerance):
        bruno_check(SpectralData.from_values(["s", "1-s"], cs), 20)


def test_hyperbolicity():
    assert hyperbolicity(SpectralData.from_values([2, -1]))
    assert not hyperbolicity(SpectralData.from_values([1, 0]))


def test_condition_A():
    x, y = Jet.variables(2, 8)
    Xa = VectorField([(2 + 3 * x * y * y) * x, -(1 + 2 * x * y * y) * y])
    Xb = VectorField([(1 + x * y * y) * 2 * x, -(1 + x * y * y) * y])
    assert not condition_A_check(Xa)
    assert condition_A_check(Xb)
