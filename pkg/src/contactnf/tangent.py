"""The four coordinate changes that bring ``h (theta^2 - x) dtheta`` to ``(theta^2 - x) dtheta``.

Jets live in ``(theta, x, p_2, ...)`` with ``theta`` of weight 1 and every
other variable of weight 2, so that ``theta^2 - x`` is homogeneous.  The
``p`` variables are parameters: nothing is ever evaluated pointwise.
Each stage returns a :class:`CoordinateChange`; the matching ``*_residual``
function re-checks the identity the stage is meant to establish.
"""

from fractions import Fraction

from .change import CoordinateChange
from .errors import FactorizationFailure, PreconditionError, VerificationFailure
from .jets import Jet, JetMap, compose, divmod_monic, even_odd_split, hensel_solve, invert_map

TANGENT_THETA = 0
TANGENT_X = 1


def tangent_weights(nvars):
    return (1,) + (2,) * (nvars - 1)


def _xs(h, degree=None):
    # generous precision: these build exact polynomials
    return list(Jet.variables(h.nvars, h.degree + 8 if degree is None else degree, h.weights, h.field))


def _fr(h, p, q=1):
    return h.field(Fraction(p, q))


def _exact_div(f, i, m, what):
    """``f / x_i**m``, which must be exact."""
    zero = f.zero_like()
    q, r = divmod_monic(f, i, [zero] * m)
    if not r.is_zero():
        raise FactorizationFailure(f"{what}: division by x_{i}^{m} leaves a remainder")
    return q


def _n_form(h):
    xs = _xs(h)
    return xs[0] * xs[0] - xs[1]


def h_from_coefficient(f):
    """``h`` with ``f = h (theta^2 - x)``; the division must be exact."""
    xs = _xs(f)
    q, r = divmod_monic(f, 0, [-xs[1], f.zero_like()])
    if not r.is_zero():
        raise VerificationFailure("dtheta coefficient does not vanish on N = {theta^2 = x}")
    return q


def transform_h(h, change):
    """``h`` after the change (it must preserve ``d/dtheta`` and ``N``)."""
    phi = change.forward
    f = h * _n_form(h)
    g = compose(f, list(phi)) * phi[0].deriv(0)
    return h_from_coefficient(g)


def _primitive_in_theta(h):
    """``I(theta, x) = int_0^theta h(x, s)(s^2 - x) ds``."""
    return (h * _n_form(h)).integrate(0)


def _on_x_only(J):
    """Drop the ``theta`` slot of a theta-free jet: ``(theta, x, p) -> (x, p)``."""
    n = J.nvars
    out = {e[1:]: c for e, c in J.coeffs.items()}
    return Jet(n - 1, J.degree, out, J.weights[1:], J.field)


def _to_full(J, nvars, weights):
    """Embed a jet in ``(x, p)`` back into ``(theta, x, p)``."""
    return J.embed(nvars, list(range(1, nvars)), weights)


# stage 1 ---------------------------------------------------------------
def tangent_curve_ell(h, D=None):
    """The function ``g`` of the balancing curve ``theta = x g(x)``.

    ``F(x) = int_0^x h_2(x, t)(t - x) dt = 2 x^2 G(x)`` and ``g`` solves
    ``int_0^g h(x, x z)(x z^2 - 1) dz = G(x)``.  At ``x = 0`` this reads
    ``-h(0,0) g(0) = G(0)``, so ``g(0) = -G(0)/h(0,0)``.
    Returned as a theta-free jet in the same ring as ``h``.
    """
    n = h.nvars
    w = h.weights
    P = h.degree if D is None else D
    h00 = h.const_term()
    if h.field.is_zero(h00):
        raise PreconditionError("h(0, 0) must be nonzero")
    _, h2 = even_odd_split(h, 0)
    ts = list(Jet.variables(n, h2.degree + 8, h2.weights, h.field))
    t, x = ts[0], ts[1]
    I2 = (h2 * (t - x)).integrate(0)
    F = compose(I2, [x] + ts[1:])
    F = Jet(n, F.degree, F.coeffs, w, h.field)
    G = _exact_div(F, 1, 2, "F = 2 x^2 G") * _fr(h, 1, 2)
    # ring (x, p..., z) with z of weight 0
    rw = tuple(w[1:]) + (0,)
    rs = list(Jet.variables(n, P + 8, rw, h.field))
    z = rs[-1]
    xr = rs[0]
    hz = compose(h, [xr * z] + rs[:-1], P)
    S = (hz * (xr * z * z - 1)).integrate(n - 1)
    Gr = G.embed(n, [n - 1] + list(range(n - 1)), rw)  # theta slot unused
    Gr = Jet(n, Gr.degree, {e: c for e, c in Gr.coeffs.items()}, rw, h.field)
    S = S - Gr
    y0 = -G.const_term() / h00
    g = hensel_solve(S, y0)
    return _to_full(g, n, w)


def theta_curve_residual(h, g):
    """``I(x g(x)) - (I(sqrt x) + I(-sqrt x))/2`` as a jet in ``x`` (zero when balanced)."""
    xs = _xs(h)
    x = xs[1]
    I = _primitive_in_theta(h)
    left = compose(I, [x * g] + xs[1:])
    even, _ = even_odd_split(I, 0)
    es = list(Jet.variables(h.nvars, even.degree + 8, even.weights, h.field))
    right = compose(even, [es[1]] + es[1:])
    right = Jet(h.nvars, right.degree, right.coeffs, h.weights, h.field)
    return left - right


def curve_change(g):
    """Change with ``theta_old = x g(x) + theta (1 - theta g(theta^2))``."""
    xs = _xs(g)
    th, x = xs[0], xs[1]
    g_sq = compose(g, [th, th * th] + xs[2:])
    fwd = [x * g + th * (1 - th * g_sq)] + xs[1:]
    phi = JetMap(fwd)
    return CoordinateChange(phi, invert_map(phi), [{"stage": "tangent_curve"}])


# stage 2 ---------------------------------------------------------------
def _Q_of(h):
    """``Q(z) = int_0^z h(z^2, s)(s^2 - z^2) ds`` in the theta slot."""
    xs = _xs(h)
    th = xs[0]
    I = _primitive_in_theta(h)
    return compose(I, [th, th * th] + xs[2:])


def tangent_rescale(h, D=None):
    """Coordinates ``y = x c(x)^{2/3}``, ``eta = theta c(x)^{1/3}``.

    ``c = (3/2)(h(0,0) - K)`` where ``Q(z) = z^3(-h(0,0) + K(z^2))`` is built
    from the even part of ``h``.
    """
    n = h.nvars
    w = h.weights
    h1 = h.part_where(lambda e: e[0] % 2 == 0)
    h00 = h.const_term()
    Q = _Q_of(h1)
    Qz = _exact_div(Q, 0, 3, "Q = z^3 (...)") + h00
    K, odd = even_odd_split(Qz, 0)
    if not odd.is_zero():
        raise VerificationFailure("Q is not odd in z")
    # K(t, p) with t = z^2 in the theta slot -> K(x, p)
    Kx = Jet(n, K.degree, {(0, e[0] + e[1]) + e[2:]: c for e, c in K.coeffs.items()}, w, h.field)
    c = (Kx * (-1) + h00) * _fr(h, 3, 2)
    r = c.nth_root(3)
    xs = _xs(h)
    inv = [xs[0] * r, xs[1] * r * r] + xs[2:]
    psi = JetMap(inv)
    return CoordinateChange(invert_map(psi), psi, [{"stage": "tangent_rescale"}])


def eq17_residual(h):
    """``int_0^{sqrt x} beta + (2/3) x^{3/2}`` divided by ``x^{3/2}``, as ``Q(z)/z^3 + 2/3``."""
    Q = _Q_of(h)
    return _exact_div(Q, 0, 3, "eq 1.7") + _fr(h, 2, 3)


# stage 3 ---------------------------------------------------------------
def tangent_psi(h, D=None):
    """``theta_new = psi_0(theta) - x theta L(theta)`` with ``psi_0 = (3F)^{1/3} = theta + theta^3 L``."""
    if not h.field.equal(h.const_term(), h.field.one):
        raise PreconditionError("h(0, 0) must be 1 after the rescaling stage")
    e1 = tuple(1 if i == 0 else 0 for i in range(h.nvars))
    if not h.field.is_zero(h.coeff(e1)):
        raise VerificationFailure("h_2(0, 0) != 0")
    xs = _xs(h)
    th, x = xs[0], xs[1]
    h0 = h.subs_zero(1)
    F = (h0 * th * th).integrate(0)
    u = _exact_div(F * 3, 0, 3, "F = theta^3 (...)")
    psi0 = th * u.nth_root(3)
    L = _exact_div(psi0 - th, 0, 3, "psi_0 = theta + theta^3 L")
    inv = [psi0 - x * th * L] + xs[1:]
    psi = JetMap(inv)
    return CoordinateChange(invert_map(psi), psi, [{"stage": "tangent_psi"}])


def eq18_residual(h):
    """``h(0, theta) - 1`` (equivalently ``int_0^theta h(0,s) s^2 ds - theta^3/3``)."""
    return h.subs_zero(1) - 1


# stage 4 ---------------------------------------------------------------
def tangent_final(h, D=None):
    """``xi = theta + x (theta^2 - x) mu`` solving ``int_0^theta beta = xi^3/3 - x xi``."""
    n = h.nvars
    xs = _xs(h)
    th, x = xs[0], xs[1]
    F = _primitive_in_theta(h)
    G = _exact_div(F - th * th * th * _fr(h, 1, 3), 1, 1, "F - theta^3/3 = x (...)") + th
    zero = G.zero_like()
    U, r = divmod_monic(G, 0, [x * x, zero, x * (-2), zero])
    if not r.is_zero():
        raise FactorizationFailure("G is not divisible by (theta^2 - x)^2")
    # S(theta, x, p, mu) = mu + x theta mu^2 + x^2 (theta^2 - x) mu^3 / 3 - U
    rw = tuple(h.weights) + (0,)
    P = U.degree
    rs = list(Jet.variables(n + 1, P + 8, rw, h.field))
    mu = rs[-1]
    Ur = U.embed(n + 1, list(range(n)), rw)
    tr, xr = rs[0], rs[1]
    S = (mu + xr * tr * mu * mu + xr * xr * (tr * tr - xr) * mu * mu * mu * _fr(h, 1, 3)) - Ur
    m = hensel_solve(S, U.const_term())
    ys = _xs(h)
    xi = ys[0] + ys[1] * (ys[0] * ys[0] - ys[1]) * m.lift(m.degree)
    inv = [xi] + ys[1:]
    psi = JetMap(inv)
    return CoordinateChange(invert_map(psi), psi, [{"stage": "tangent_final"}])


def final_residual(h):
    """``h - 1``: zero exactly when ``beta = (theta^2 - x) dtheta``."""
    return h - 1
