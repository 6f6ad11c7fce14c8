"""The four tangent stages on explicit and random ``h``; each stage is checked by its own identity."""

import random
from fractions import Fraction

import pytest

from contactnf.errors import ContactNFError
from contactnf.jets import Jet
from contactnf.tangent import (curve_change, eq17_residual, eq18_residual, final_residual,
                               tangent_curve_ell, tangent_final, tangent_psi, tangent_rescale,
                               tangent_weights, theta_curve_residual, transform_h)

import gen

P = 14


def _vars():
    return Jet.variables(3, P, tangent_weights(3))


def run_stages(h):
    g = tangent_curve_ell(h)
    assert theta_curve_residual(h, g).is_zero()
    h1 = transform_h(h, curve_change(g))
    assert theta_curve_residual(h1, h1.zero_like()).is_zero()
    h2 = transform_h(h1, tangent_rescale(h1))
    assert eq17_residual(h2).is_zero()
    h3 = transform_h(h2, tangent_psi(h2))
    assert eq18_residual(h3).is_zero()
    h4 = transform_h(h3, tangent_final(h3))
    assert final_residual(h4).is_zero()
    return g, h4


def test_weights():
    assert tangent_weights(4) == (1, 2, 2, 2)


def test_constant_h_needs_no_curve():
    th, x, p = _vars()
    g, h4 = run_stages(th * 0 + 1)
    assert g.is_zero()


def test_curve_start_value():
    th, x, p = _vars()
    # balance residual is the oracle; the start value is -G(0)/h(0,0) = +1/4
    g, _ = run_stages(1 + th)
    assert g.const_term() == Fraction(1, 4)
    g, _ = run_stages(1 + x * th)
    assert g.const_term() == 0 and g.coeff((0, 1, 0)) == Fraction(1, 4)


@pytest.mark.parametrize("which", range(3))
def test_explicit_h(which):
    th, x, p = _vars()
    h = [1 + x * th, 1 + th + x * p + th * th * p + 2 * th ** 3, 8 + 3 * th - x * x][which]
    run_stages(h)


def test_random_admissible():
    rng = random.Random(17)
    for _ in range(4):
        run_stages(gen.admissible_h(rng, P))


def test_non_cube_constant_is_refused():
    th, x, p = _vars()
    with pytest.raises(ContactNFError):
        run_stages(2 + th)
