"""Darboux coordinates for a symplectic jet, optionally keeping ``x_0`` as a coordinate."""

from . import linalg as la
from .change import CoordinateChange
from .errors import Degenerate, VerificationFailure
from .exterior import KForm, VectorField, two_form_to_matrix
from .jets import Jet
from .linear import standard_matrix
from .normalizer import moser_path, rectify
from .scalar import mpq


def interior_solve(omega, eta):
    """The field ``X`` with ``i_X omega = eta`` (``omega`` nondegenerate at 0)."""
    n = omega.nvars
    field = omega.field
    W = two_form_to_matrix(omega)
    W0 = [[W[i][j].const_term() for j in range(n)] for i in range(n)]
    if la.rank(W0, field) < n:
        raise Degenerate("two-form is degenerate at the origin")
    W0inv = la.inverse(W0, field)
    # i_X omega = -W X
    g = [-eta.coeffs[(j,)] for j in range(n)]
    v = [_comb(W0inv[i], g) for i in range(n)]
    K = [[_comb(W0inv[i], [W[l][j] - W0[l][j] for l in range(n)]) for j in range(n)]
         for i in range(n)]
    X = list(v)
    term = v
    for _ in range(max(c.degree for c in g) + 2):
        term = [-_comb([1] * n, [K[i][j] * term[j] for j in range(n)]) for i in range(n)]
        if all(c.is_zero() for c in term):
            break
        X = [a + b for a, b in zip(X, term)]
    return VectorField(X)


def _comb(row, jets):
    acc = None
    for c, j in zip(row, jets):
        if c == 0:
            continue
        t = j * c
        acc = t if acc is None else acc + t
    return acc if acc is not None else jets[0].zero_like()


def homotopy_primitive(sigma):
    """A 1-form ``zeta`` with ``d zeta = sigma`` for a closed 2-form vanishing at 0."""
    n = sigma.nvars
    w = sigma.weights
    xs = Jet.variables(n, sigma.degree, w, sigma.field)
    out = {}
    for j in range(n):
        acc = xs[0].zero_like()
        for i in range(n):
            if i == j or w[i] == 0:
                continue
            c = sigma.coeffs[(i, j) if i < j else (j, i)]
            if c.is_zero():
                continue
            acc = acc + (xs[i] * c * w[i] if i < j else xs[i] * c * (-w[i]))
        terms = {e: v / (acc.wdeg(e) + w[j]) for e, v in acc.coeffs.items()}
        out[(j,)] = acc.like(terms)
    return KForm(1, out, n, sigma.degree, w, sigma.field)


def _bil(W, u, v):
    return sum((u[i] * W[i][j] * v[j] for i in range(len(u)) for j in range(len(v))
                if u[i] != 0 and v[j] != 0), mpq(0))


def symplectic_basis(W, keep_first=False):
    """Columns ``T`` with ``T^T W T`` standard.

    With ``keep_first`` the first new coordinate (row 0 of ``T^{-1}``)
    equals ``x_0``.
    """
    n2 = len(W)
    n = n2 // 2
    basis = [[mpq(1) if i == j else mpq(0) for i in range(n2)] for j in range(n2)]
    As, Bs = [], []
    V = basis
    if keep_first:
        e0 = basis[0]
        b1 = la.matvec(la.inverse(W), e0)
        a1 = e0
        As.append(a1)
        Bs.append(b1)
        V = _complement(W, V, [a1, b1])
    while V:
        u = V[0]
        j = next((k for k in range(1, len(V)) if _bil(W, u, V[k]) != 0), None)
        if j is None:
            raise Degenerate("constant two-form is degenerate")
        v = V[j]
        s = _bil(W, u, v)
        v = [x / s for x in v]
        As.append(u)
        Bs.append(v)
        V = _complement(W, V, [u, v])
    T = la.columns(As + Bs)
    Tinv = la.inverse(T)
    if la.matmul(la.transpose(T), la.matmul(W, T)) != standard_matrix(n):
        raise VerificationFailure("symplectic basis check failed")
    return T, Tinv


def _complement(W, V, span):
    rows = [[_bil(W, s, v) for v in V] for s in span]
    coeffs = la.nullspace(rows)
    out = []
    for c in coeffs:
        vec = [mpq(0)] * len(V[0])
        for k, a in enumerate(c):
            if a != 0:
                vec = [x + a * y for x, y in zip(vec, V[k])]
        out.append(vec)
    return out


def darboux(omega, D=None, keep_first=False):
    """Coordinate change taking ``omega`` to ``sum dx_i ^ dx_{n+i}``.

    ``D`` is the coefficient precision.  With ``keep_first`` the change
    satisfies ``x_0(old) = x_0(new)``: the Hamiltonian field of ``x_0`` is
    straightened first, so the Moser flow never moves ``x_0``.
    """
    field = omega.field
    n2 = omega.nvars
    n = n2 // 2
    w = omega.weights
    Dc = omega.degree - 2 if D is None else D
    omega = omega.truncate(Dc + 2)
    W0 = omega.matrix_at_origin()
    T, Tinv = symplectic_basis(W0, keep_first)
    ch = CoordinateChange.from_matrix(T, Tinv, Dc + 2, w, field, [{"stage": "darboux_linear"}])
    om = ch.pull_form(omega).truncate(Dc + 2)
    omega0 = KForm.canonical(n, Dc + 2, nvars=n2, weights=w, field=field)
    if keep_first and not om.equal_mod(omega0, Dc + 2):
        x0 = Jet.var(0, n2, Dc + 1, w, field)
        eta = KForm.one_form([-c for c in _d_coords(x0)])
        H = interior_solve(om, eta)
        rc = rectify(H, Dc + 1, theta=n)
        ch = ch.then(rc)
        om = rc.pull_form(om).truncate(Dc + 2)
    if not om.equal_mod(omega0, Dc + 2):
        zeta = homotopy_primitive(om - omega0)
        mc = moser_path(om, zeta, Dc)
        ch = ch.then(mc)
    if keep_first:
        x0 = Jet.var(0, n2, ch.degree, w, field)
        if not ch.forward[0].equal_mod(x0, ch.degree):
            raise VerificationFailure("first coordinate moved")
    return ch


def _d_coords(f):
    return [f.deriv(i) for i in range(f.nvars)]
