import random
from fractions import Fraction

import pytest

from contactnf import linalg as la
from contactnf.errors import ContactNFError, IrrationalSpectrum
from contactnf.linear import (canonical_linear_data, conformal_block_structure, eigen_structure,
                              liouville_defect, sn_decompose, standard_matrix)

F = Fraction


def _random_invertible(rng, n):
    while True:
        A = [[F(rng.randint(-2, 2)) + (1 if i == j else 0) for j in range(n)] for i in range(n)]
        if la.rank(A) == n:
            return A


def _conjugate(L0, W0, A):
    Ai = la.inverse(A)
    L = la.matmul(la.matmul(A, L0), Ai)
    W = la.matmul(la.matmul(la.transpose(Ai), W0), Ai)
    return L, W


def _diag(vals):
    n = len(vals)
    return [[F(vals[i]) if i == j else F(0) for j in range(n)] for i in range(n)]


def test_sn_decompose_jordan_block():
    L = [[F(2), F(1), F(0)], [F(0), F(2), F(0)], [F(0), F(0), F(3)]]
    S, N = sn_decompose(L)
    assert S == _diag([2, 2, 3])
    assert la.matmul(S, N) == la.matmul(N, S)
    assert la.is_zero(la.power(N, 3))


def test_sn_decompose_conjugated():
    rng = random.Random(9)
    L0 = [[F(1), F(1), F(0)], [F(0), F(1), F(0)], [F(0), F(0), F(-1)]]
    A = _random_invertible(rng, 3)
    L = la.matmul(la.matmul(A, L0), la.inverse(A))
    S, N = sn_decompose(L)
    assert la.add(S, N) == L
    assert la.matmul(S, N) == la.matmul(N, S)
    assert la.is_zero(la.power(N, 3))
    assert la.rank(la.sub(S, _diag([1, 1, 1]))) == 1


def test_eigen_structure_pairs():
    sd = eigen_structure(_diag([2, -1]))
    assert sd.as_strings() == ["2", "-1"]
    assert sd.pairing is not None


def test_block_structure_example():
    sd = conformal_block_structure(_diag([2, -1]), standard_matrix(1))
    assert len(sd.blocks) == 1 and sd.blocks[0].lam.to_str() == "2"


def test_not_conformal():
    with pytest.raises(ContactNFError):
        conformal_block_structure(_diag([1, 1]), standard_matrix(1))


@pytest.mark.parametrize("lams", [(2, F(1, 3)), (F(1, 2), F(1, 2)), (3, 3), (0, 5)])
def test_canonical_linear_data_random_conjugates(lams):
    rng = random.Random(hash(lams) & 0xFFFF)
    n = len(lams)
    L0 = _diag(list(lams) + [1 - F(v) for v in lams])
    W0 = standard_matrix(n)
    for _ in range(3):
        L, W = _conjugate(L0, W0, _random_invertible(rng, 2 * n))
        assert la.is_zero(liouville_defect(L, W))
        res = canonical_linear_data(L, W)
        T, Ti = res.T, res.Tinv
        assert la.matmul(la.matmul(la.transpose(T), W), T) == W0
        S, N = sn_decompose(la.matmul(la.matmul(Ti, L), T))
        assert la.is_zero(N)
        assert all(S[i][j] == 0 for i in range(2 * n) for j in range(2 * n) if i != j)


def test_half_jordan_block():
    # X = x d/dx ... with nilpotent part mixing the two coordinates of [[1/2]]
    L0 = [[F(1, 2), F(0)], [F(1), F(1, 2)]]
    W0 = standard_matrix(1)
    assert la.is_zero(liouville_defect(L0, W0))
    res = canonical_linear_data(L0, W0)
    T = res.T
    assert la.matmul(la.matmul(la.transpose(T), W0), T) == W0
    assert res.spectral.blocks[0].tag != "Zero"


def test_rotation_spectrum_is_irrational():
    with pytest.raises(IrrationalSpectrum):
        eigen_structure([[F(0), F(1)], [F(-1), F(0)]])
