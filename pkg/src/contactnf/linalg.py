"""Small exact matrix toolkit over a scalar field (lists of lists)."""

import sympy

from .errors import SingularLinearPart
from .scalar import EXACT, mpq


def identity(n, field=EXACT):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(n, m=None, field=EXACT):
    return [[field.zero] * (n if m is None else m) for _ in range(n)]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def scale(A, c):
    return [[a * c for a in r] for r in A]


def is_zero(A):
    return all(x == 0 for r in A for x in r)


def rref(A, field=EXACT):
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    piv = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if not field.is_zero(M[i][c])), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = field.one / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and not field.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return M, piv


def rank(A, field=EXACT):
    if not A:
        return 0
    return len(rref(A, field)[1])


def nullspace(A, field=EXACT):
    """Basis of ``{v : A v = 0}`` as a list of vectors."""
    if not A:
        return []
    cols = len(A[0])
    M, piv = rref(A, field)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [field.zero] * cols
        v[f] = field.one
        for i, p in enumerate(piv):
            v[p] = -M[i][f]
        basis.append(v)
    return basis


def inverse(A, field=EXACT):
    n = len(A)
    aug = [list(r) + e for r, e in zip(A, identity(n, field))]
    M, piv = rref(aug, field)
    if piv[:n] != list(range(n)):
        raise SingularLinearPart("matrix is singular")
    return [r[n:] for r in M]


def solve(A, b, field=EXACT):
    """Solve ``A x = b`` for square invertible ``A``."""
    return matvec(inverse(A, field), b)


def columns(vectors):
    """Matrix whose columns are the given vectors."""
    return [list(r) for r in zip(*vectors)]


def power(A, k, field=EXACT):
    R = identity(len(A), field)
    for _ in range(k):
        R = matmul(R, A)
    return R


def to_sympy(A):
    return sympy.Matrix([[sympy.Rational(int(mpq(x).numerator), int(mpq(x).denominator))
                          for x in r] for r in A])


def from_rational(x):
    x = sympy.Rational(x)
    return mpq(int(x.p), int(x.q))


def charpoly(A):
    """Characteristic polynomial as a sympy ``Poly`` over QQ."""
    t = sympy.Symbol("t")
    return to_sympy(A).charpoly(t).as_poly(t, domain="QQ")


def poly_at_matrix(p, A, field=EXACT):
    """Evaluate a sympy polynomial at a square matrix (Horner)."""
    n = len(A)
    R = zeros(n, field=field)
    for c in p.all_coeffs():
        R = matmul(R, A)
        c = from_rational(c)
        for i in range(n):
            R[i][i] += c
    return R
