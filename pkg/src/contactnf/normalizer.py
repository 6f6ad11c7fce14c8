"""Degree-by-degree normalization of vector fields and symplectic forms."""

from dataclasses import dataclass, field as dc_field

from . import linalg as la
from .change import CoordinateChange
from .errors import (
    Degenerate,
    NotConformal,
    PreconditionError,
    RequiresExactSpectrum,
    SmallDivisor,
    VanishingAtOrigin,
)
from .exterior import KForm, VectorField, bracket, interior, lie_derivative, two_form_to_matrix
from .jets import Jet, JetMap, compose, invert_map
from .linear import jordan_chains, sn_decompose, _generalized_eigenspace, _rational_roots
from .spectrum import SpectralData


@dataclass
class PDNormalForm:
    spectral: SpectralData
    nf: VectorField
    change: CoordinateChange
    resonant_terms: dict = dc_field(default_factory=dict)
    generators: list = dc_field(default_factory=list)


def lie_series_function(h, f, degree):
    """``exp(h) f = sum h^m(f)/m!`` truncated at ``degree``."""
    acc = f.truncate(degree) if f.degree >= degree else f
    term = acc
    m = 0
    while True:
        m += 1
        term = h.apply(term).truncate(degree) * (1 / f.field(m) if not f.field.exact else f.field(1) / m)
        if term.is_zero():
            break
        acc = acc + term
    return acc


def lie_series_field(h, X, degree):
    """``exp(ad_h) X = sum ad_h^m X / m!`` truncated at component degree ``degree``."""
    acc = X.truncate(degree)
    term = acc
    m = 0
    f = X.field
    while True:
        m += 1
        term = bracket(h, term).truncate(degree) * (f.one / m)
        if term.is_zero():
            break
        acc = acc + term
    return acc


def diagonal_of(L):
    n = len(L)
    return [L[i][i] for i in range(n)]


def _is_diagonal(S):
    return all(S[i][j] == 0 for i in range(len(S)) for j in range(len(S)) if i != j)


def jordan_basis(L):
    """Rational basis with ``T^{-1} L T`` diagonal plus Jordan chains."""
    L = [list(r) for r in L]
    roots = _rational_roots(la.charpoly(L))
    distinct = []
    for r in roots:
        if all(r.vec != d.vec for d in distinct):
            distinct.append(r)
    distinct.sort(key=lambda e: e.sort_key(), reverse=True)
    cols = []
    for lam in distinct:
        mult = sum(1 for r in roots if r.vec == lam.vec)
        V, M = _generalized_eigenspace(L, lam.value, mult)
        for ch in jordan_chains(M, V):
            cols += ch
    T = la.columns(cols)
    return T, la.inverse(T)


def poincare_dulac(X, D=None, linear="auto"):
    """Poincare-Dulac normal form of ``X`` up to degree ``D``.

    The linear part is first brought to Jordan form (skipped when its
    semisimple part is already diagonal, or when ``linear="keep"``).  Then
    for each degree ``k = 2..D`` a homogeneous generator ``h_k`` with no
    resonant component solves the homological equation and the field is
    replaced by ``exp(ad h_k) X``.
    """
    field = X.field
    n = X.nvars
    D = X.degree if D is None else D
    X = X.truncate(D)
    for c in X:
        if not field.is_zero(c.const_term()):
            raise PreconditionError("the field does not vanish at the origin")
    L = X.linear_matrix()
    total = CoordinateChange.identity(n, D + 1, X.weights, field)
    if field.exact:
        S, _ = sn_decompose(L, field)
        if not _is_diagonal(S):
            if linear == "keep":
                raise PreconditionError("semisimple part is not diagonal")
            T, Tinv = jordan_basis(L)
            lin = CoordinateChange.from_matrix(T, Tinv, D + 1, X.weights, field,
                                               log=[{"stage": "jordan"}])
            X = lin.pull_field(X).truncate(D)
            total = lin
            L = X.linear_matrix()
            S, _ = sn_decompose(L, field)
    else:
        S = [[L[i][j] if i == j else field.zero for j in range(n)] for i in range(n)]
        if any(not field.is_zero(L[i][j]) and not field.is_zero(L[i][i] - L[j][j])
               for i in range(n) for j in range(n) if i != j):
            raise PreconditionError("float mode needs a diagonal semisimple part")
    lam = diagonal_of(S)
    N = la.sub(L, S)
    Nfield = VectorField.linear(N, D, X.weights, field)
    nil_zero = la.is_zero(N)
    gens = []
    resonant = {}
    for k in range(2, D + 1):
        part = X.homogeneous_part(k)
        res_c, non_c = [], []
        for i, c in enumerate(part):
            r, b = {}, {}
            for e, v in c.coeffs.items():
                div = sum(a * l for a, l in zip(e, lam)) - lam[i]
                if field.is_zero(div):
                    if not field.exact and div != 0:
                        raise SmallDivisor(f"divisor {div} below tolerance")
                    r[e] = v
                else:
                    b[e] = v
            res_c.append(c.like(r))
            non_c.append(c.like(b))
        resonant[k] = [(i, e, v) for i, c in enumerate(res_c) for e, v in c.terms()]
        b = VectorField(non_c)
        if b.is_zero():
            continue
        h = _solve_homological(b, lam, Nfield, nil_zero, k)
        gens.append(h)
        X = lie_series_field(h, X, D)
    fwd, inv = _maps_from_generators(gens, n, D + 1, X.weights, field)
    nl = CoordinateChange(fwd, inv, [{"stage": "poincare_dulac", "generators": len(gens)}])
    total = total.then(nl) if not total.is_identity() else nl
    sd = SpectralData.from_values(lam) if field.exact else SpectralData([], ())
    return PDNormalForm(sd, X, total, resonant, gens)


def _inv_LS(v, lam):
    out = []
    for i, c in enumerate(v):
        d = {}
        for e, x in c.coeffs.items():
            div = sum(a * l for a, l in zip(e, lam)) - lam[i]
            d[e] = x / div
        out.append(c.like(d))
    return VectorField(out)


def _solve_homological(b, lam, Nfield, nil_zero, k):
    """``h`` with ``[S + N, h] = b`` on the nonresonant part."""
    term = _inv_LS(b, lam)
    h = term
    if nil_zero:
        return h
    for _ in range(4 * k * len(lam) + 8):
        term = -_inv_LS(bracket(Nfield, term).homogeneous_part(k), lam)
        if term.is_zero():
            break
        h = h + term
    return h


def _maps_from_generators(gens, n, degree, weights, field):
    """Forward map ``x = exp(h_P)...exp(h_2) x`` and its inverse."""
    xs = Jet.variables(n, degree, weights, field)
    lifted = [VectorField(c.lift(degree) for c in h) for h in gens]
    fwd = []
    inv = []
    for i in range(n):
        f = xs[i]
        for h in lifted:
            f = lie_series_function(h, f, degree)
        fwd.append(f)
        g = xs[i]
        for h in reversed(lifted):
            g = lie_series_function(-h, g, degree)
        inv.append(g)
    return JetMap(fwd), JetMap(inv)


def flow_integrate(Y, D=None):
    """Time-1 map of ``dx/dt = Y(x, t)``.

    ``Y`` has ``n`` component jets in ``n + 1`` variables, the last one being
    time with weight 0.  The flow is found by Picard iteration, raising the
    precision one degree at a time.  Returns a :class:`JetMap` in ``n``
    variables.
    """
    n = len(Y)
    m = Y[0].nvars
    if m != n + 1 or Y[0].weights[-1] != 0:
        raise PreconditionError("time must be the last variable, with weight 0")
    field = Y[0].field
    wx = Y[0].weights[:n]
    P = Y.degree if D is None else D
    for c in Y:
        if not field.is_zero(_const_in_space(c)):
            raise PreconditionError("Y_t must vanish at the origin")
    xs = Jet.variables(m, P, Y[0].weights, field)
    t = xs[-1]
    X = [xs[i] for i in range(n)]
    wmin = min(w for w in wx if w > 0)
    for p in range(wmin, P + 1):
        cur = [c.truncate(p) for c in X]
        for it in range(4 * n + 8):
            new = []
            for i in range(n):
                rhs = compose(Y[i], cur + [t.truncate(p)], p)
                new.append((xs[i].truncate(p) + rhs.integrate(n)).truncate(p))
            # the first pass only lifts cur to precision p, so it cannot certify a fixed point
            settled = it > 0 and all(a.equal_mod(b, p) for a, b in zip(new, cur))
            cur = new
            if settled:
                break
        else:
            raise PreconditionError("Picard iteration did not settle")
        X = cur
    out = []
    for c in X:
        d = {}
        for e, v in c.coeffs.items():
            key = e[:n]
            d[key] = d.get(key, 0) + v
        out.append(Jet(n, c.degree, {k: v for k, v in d.items() if v != 0}, wx, field))
    return JetMap(out)


def _const_in_space(c):
    tot = c.field.zero
    for e, v in c.coeffs.items():
        if all(a == 0 for a in e[:-1]):
            tot += v
    return tot


def with_time(J, tpos=None):
    """Embed a jet in ``n`` variables into ``n + 1`` with a weight-0 time."""
    n = J.nvars
    return J.embed(n + 1, list(range(n)), weights=tuple(J.weights) + (0,))


def equivariant_darboux(omega, Xs, D=None):
    """Moser path from ``omega`` to its constant part, commuting with ``Xs``.

    ``zeta = i_{Xs}(omega - omega0)`` and ``Y_t`` solves
    ``i_{Y_t} omega_t = -zeta`` with ``omega_t = omega0 + t(omega - omega0)``.
    Returns the time-1 map of ``Y_t`` as a :class:`CoordinateChange`.
    """
    field = omega.field
    n = omega.nvars
    Dc = omega.degree - 2 if D is None else D
    omega = omega.truncate(Dc + 2)
    if not lie_derivative(Xs, omega).equal_mod(omega, Dc + 2):
        raise NotConformal("L_{Xs} omega != omega")
    W = two_form_to_matrix(omega)
    W0 = [[W[i][j].const_term() for j in range(n)] for i in range(n)]
    if la.rank(W0, field) < n:
        raise Degenerate("omega is degenerate at the origin")
    omega0 = KForm.constant_two_form(W0, n, omega.degree, omega.weights, field)
    if omega.equal_mod(omega0, Dc + 2):
        return CoordinateChange.identity(n, Dc + 1, omega.weights, field)
    P = Dc + 1
    Xs = Xs.lift(P + 1)
    zeta = interior(Xs, omega - omega0)
    return moser_path(omega, zeta, Dc)


def moser_path(omega, zeta, D=None):
    """Time-1 map taking ``omega`` to its constant part, given ``d(zeta) = omega - omega0``.

    ``Y_t`` solves ``i_{Y_t} omega_t = -zeta`` along
    ``omega_t = omega0 + t(omega - omega0)``.
    """
    field = omega.field
    n = omega.nvars
    Dc = omega.degree - 2 if D is None else D
    P = Dc + 1
    W = two_form_to_matrix(omega)
    W0 = [[W[i][j].const_term() for j in range(n)] for i in range(n)]
    W0inv = la.inverse(W0, field)
    m = n + 1
    wt = tuple(omega.weights) + (0,)
    tj = Jet.var(n, m, P, wt, field)
    W1 = [[with_time(W[i][j] - W0[i][j]) for j in range(n)] for i in range(n)]
    # K = W0^{-1} W1, Winv_t = sum (-t)^k K^k W0^{-1}
    K = [[sum((W1[l][j] * W0inv[i][l] for l in range(n) if W0inv[i][l] != 0),
              tj.zero_like()) for j in range(n)] for i in range(n)]
    z = [with_time(zeta.coeffs[(j,)]) for j in range(n)]
    # Y = Winv_t zeta computed as sum (-t)^k K^k (W0^{-1} zeta)
    v = [sum((z[j] * W0inv[i][j] for j in range(n) if W0inv[i][j] != 0), tj.zero_like())
         for i in range(n)]
    Y = list(v)
    term = v
    for k in range(1, P + 2):
        term = [sum((K[i][j] * term[j] * (-1) for j in range(n)), tj.zero_like()) for i in range(n)]
        term = [c * tj for c in term]
        term = [c.truncate(P) for c in term]
        if all(c.is_zero() for c in term):
            break
        Y = [a + b for a, b in zip(Y, term)]
    phi = flow_integrate(VectorField(Y), P)
    psi = invert_map(phi)
    return CoordinateChange(phi, psi, [{"stage": "moser"}])


def rectify(Z, D=None, theta=0):
    """Flow-box coordinates in which ``Z`` becomes ``d/dtheta``.

    If ``Z(0)`` has no ``theta`` component the coordinates are first
    permuted.  Returns a :class:`CoordinateChange`; ``change.pull_field(Z)``
    equals ``d/dx_theta`` to the working precision.
    """
    field = Z.field
    n = Z.nvars
    P = Z.degree if D is None else D
    z0 = Z.value_at_origin()
    if all(field.is_zero(c) for c in z0):
        raise VanishingAtOrigin("Z(0) = 0")
    pre = None
    if field.is_zero(z0[theta]):
        j = next(i for i, c in enumerate(z0) if not field.is_zero(c))
        perm = list(range(n))
        perm[theta], perm[j] = j, theta
        Pm = [[field.one if perm[i] == k else field.zero for k in range(n)] for i in range(n)]
        pre = CoordinateChange.from_matrix(Pm, la.transpose(Pm), P + 1, Z.weights, field)
        Z = pre.pull_field(Z)
    comps = _flow_box(Z, P + 1, theta)
    phi = JetMap(comps)
    psi = invert_map(phi)
    ch = CoordinateChange(phi, psi, [{"stage": "rectify"}])
    return pre.then(ch) if pre is not None else ch


def _flow_box(Z, degree, theta):
    n = Z.nvars
    field = Z.field
    xs = Jet.variables(n, degree, Z.weights, field)
    th = xs[theta]
    comps = []
    for i in range(n):
        f = xs[i]
        acc = f.subs_zero(theta)
        thk = th.const_like(1)
        fact = field.one
        k = 0
        # theta^k terms with k * w_theta > degree are truncated away
        while (k + 1) * Z.weights[theta] <= degree:
            k += 1
            f = Z.apply(f)
            if f.degree < 0 or f.is_zero():
                break
            fact = fact * k
            thk = thk * th
            acc = acc + (thk * f.subs_zero(theta)) * (field.one / fact)
        comps.append(acc.truncate(degree))
    return comps


def semisimple_field(X):
    """Diagonal field of the semisimple part of the linear part of ``X``."""
    S, _ = sn_decompose(X.linear_matrix(), X.field)
    if not _is_diagonal(S):
        raise PreconditionError("semisimple part is not diagonal in these coordinates")
    return VectorField.euler(diagonal_of(S), X.nvars, X[0].degree, X.weights, X.field)


def verify_conservation(X, omega, D=None):
    """``(L_X omega == omega, L_{X^s} omega == omega)`` modulo degree ``D + 1``."""
    Dc = omega.degree - omega.grade if D is None else D
    top = Dc + omega.grade
    Xs = semisimple_field(X)
    a = lie_derivative(X, omega).equal_mod(omega, top)
    b = lie_derivative(Xs, omega).equal_mod(omega, top)
    return a, b


def toric_degree(spectral):
    """Rational rank of the span of the eigenvalues."""
    vecs = [list(e.vec) for e in spectral.eigenvalues]
    if not vecs:
        return 0
    try:
        return la.rank(vecs)
    except TypeError as exc:
        raise RequiresExactSpectrum(str(exc)) from exc
