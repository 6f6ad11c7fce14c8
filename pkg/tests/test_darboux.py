import random
from fractions import Fraction

from contactnf import linalg as la
from contactnf.darboux import darboux, homotopy_primitive, interior_solve, symplectic_basis
from contactnf.exterior import KForm, d, interior
from contactnf.jets import Jet
from contactnf.linear import standard_matrix

import gen


def _random_symplectic(rng, D=6):
    om = KForm.canonical(2, D + 2)
    return om + d(gen.form(rng, 1, 4, D + 2, lo=2, hi=4, terms=3))


def test_homotopy_primitive():
    rng = random.Random(1)
    sigma = d(gen.form(rng, 1, 3, 6, lo=2))
    zeta = homotopy_primitive(sigma)
    assert d(zeta).equal_mod(sigma, zeta.degree - 1)


def test_interior_solve():
    rng = random.Random(2)
    om = _random_symplectic(rng)
    eta = gen.form(rng, 1, 4, 6, lo=1)
    X = interior_solve(om, eta)
    assert interior(X, om).equal_mod(eta, 6)


def test_symplectic_basis_keep_first():
    W = [[Fraction(x) for x in r] for r in
         [[0, 2, 1, 0], [-2, 0, 0, 3], [-1, 0, 0, 1], [0, -3, -1, 0]]]
    T, Ti = symplectic_basis(W, keep_first=True)
    assert la.matmul(la.matmul(la.transpose(T), W), T) == standard_matrix(2)
    assert Ti[0] == [1, 0, 0, 0]


def test_darboux_random():
    rng = random.Random(3)
    for keep in (False, True):
        om = _random_symplectic(rng)
        ch = darboux(om, keep_first=keep)
        assert ch.pull_form(om).equal_mod(KForm.canonical(2, 8), 6)
        if keep:
            assert ch.forward[0] == Jet.var(0, 4, ch.forward[0].degree)
