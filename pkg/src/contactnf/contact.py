"""Singular contact forms: diagnosis, kernel field, and the two pre-normal forms."""

import math
from dataclasses import dataclass, field as dc_field

from . import linalg as la
from .change import CoordinateChange
from .darboux import darboux
from .errors import (DegeneratePresymplectic, DimensionMismatch, NotSingular, PreconditionError,
                     TangencyNotGeneric, VerificationFailure)
from .exterior import KForm, VectorField, d, is_basic, wedge
from .jets import (Jet, JetMap, divmod_monic, hensel_solve, invert_map, preparation_index,
                   weierstrass_prepare)
from .normalizer import rectify
from .primitive import normalize_primitive
from .tangent import (curve_change, eq17_residual, eq18_residual, final_residual,
                      h_from_coefficient, tangent_curve_ell, tangent_final, tangent_psi,
                      tangent_rescale, tangent_weights, theta_curve_residual)

TRANSVERSAL = "transversal"
TANGENT = "tangent"
TANGENT_DEGENERATE = "tangent_degenerate"

# the tangent stages normalize h / KAPPA, so the dtheta part ends as
# 3 (theta^2 - x1) dtheta = d(theta^3 - 3 x1 theta) + 3 theta dx1
KAPPA = 3


@dataclass
class ContactDiagnosis:
    cond_presymplectic: bool
    cond_diffeo: bool
    singular: bool = True
    kernel: VectorField = None
    f_theta: Jet = None
    tangency: str = None
    theta_order: int = None
    change: CoordinateChange = None
    form: KForm = None


@dataclass
class ContactNormalForm:
    case: str
    theta_part: KForm
    gamma: KForm
    change: CoordinateChange
    diagnosis: ContactDiagnosis
    sign: int = 1
    primitive: object = None
    phi: Jet = None
    witness: Jet = None
    ring_weights: tuple = None
    input_form: KForm = None
    flags: dict = dc_field(default_factory=dict)

    def normal_form(self):
        """The full 1-form ``theta_part + gamma`` in the normalized coordinates."""
        N = self.theta_part.nvars
        w = self.theta_part.weights
        g = self.gamma_nf if self.primitive is not None else self.gamma
        g = _reweight_form(g, w[1:]) if tuple(g.weights) != tuple(w[1:]) else g
        return self.theta_part + _embed_form(g, N, w)

    @property
    def gamma_nf(self):
        return self.primitive.gamma_nf if self.primitive is not None else self.gamma

    def residual(self):
        """Pullback of the normal form to the input coordinates minus the input."""
        back = self.change.push_form(self.normal_form())
        return back - self.input_form

    def round_trip_ok(self):
        back = self.change.push_form(self.normal_form())
        deg = min(back.degree, self.input_form.degree)
        return back.equal_mod(self.input_form, deg), deg


def _check_alpha(alpha):
    if alpha.grade != 1:
        raise DimensionMismatch("expected a 1-form")
    if alpha.nvars % 2 == 0:
        raise DimensionMismatch("a contact form needs an odd number of variables")


def check_nondegenerate(alpha):
    """The two nondegeneracy conditions at the origin."""
    _check_alpha(alpha)
    N = alpha.nvars
    field = alpha.field
    if any(not field.is_zero(alpha.coeffs[(i,)].const_term()) for i in range(N)):
        raise NotSingular("alpha does not vanish at the origin")
    W0 = d(alpha).matrix_at_origin()
    presym = la.rank(W0, field) == N - 1
    DF = [[alpha.coeffs[(i,)].linear_coeff(j) for j in range(N)] for i in range(N)]
    diffeo = la.rank(DF, field) == N
    diag = ContactDiagnosis(presym, diffeo)
    if presym:
        diag.kernel = kernel_field(alpha)
    return diag


def kernel_field(alpha):
    """``Z`` with ``i_Z (dtheta ^ dx_1 ^ ...) = (d alpha)^n / n!``."""
    _check_alpha(alpha)
    N = alpha.nvars
    n = (N - 1) // 2
    om = d(alpha)
    top = om
    for _ in range(n - 1):
        top = wedge(top, om)
    top = top * alpha.field(1) * (alpha.field.one / math.factorial(n))
    comps = []
    for j in range(N):
        J = tuple(i for i in range(N) if i != j)
        c = top.coeffs[J]
        comps.append(c if j % 2 == 0 else -c)
    Z = VectorField(comps)
    if all(alpha.field.is_zero(c) for c in Z.value_at_origin()):
        raise DegeneratePresymplectic("(d alpha)^n vanishes at the origin")
    return Z


def _drop_theta(J, nvars=None):
    """Jet in ``(theta, x)`` that does not depend on theta, as a jet in ``x``."""
    if J.depends_on(0):
        raise VerificationFailure("coefficient depends on theta")
    return Jet(J.nvars - 1, J.degree, {e[1:]: c for e, c in J.coeffs.items()}, J.weights[1:], J.field)


def _drop_theta_form(form):
    N = form.nvars
    co = {}
    for J, c in form.coeffs.items():
        if 0 in J:
            if not c.is_zero():
                raise VerificationFailure("form has a dtheta component")
            continue
        co[tuple(j - 1 for j in J)] = _drop_theta(c)
    return KForm(form.grade, co, N - 1, form.degree, form.weights[1:], form.field)


def _embed_form(form, N, weights):
    co = {}
    for J, c in form.coeffs.items():
        co[tuple(j + 1 for j in J)] = c.embed(N, list(range(1, N)), tuple(weights))
    return KForm(form.grade, co, N, form.degree, tuple(weights), form.field)


def _reweight_form(form, weights):
    co = {J: c.reweight(weights) for J, c in form.coeffs.items()}
    return KForm(form.grade, co, form.nvars, form.degree, tuple(weights), form.field)


def extend_change(ch, weights):
    """Lift a change of the ``x`` variables to ``(theta, x)`` with theta fixed."""
    N = ch.nvars + 1
    w = tuple(weights)

    def lift(m):
        th = Jet.var(0, N, m.degree + 2, w, m.field)
        return JetMap([th] + [c.embed(N, list(range(1, N)), w) for c in m])

    return CoordinateChange(lift(ch.forward), lift(ch.inverse), ch.log, ch.meta)


def _tangency(f):
    field = f.field
    N = f.nvars
    if not field.is_zero(f.linear_coeff(0)):
        return TRANSVERSAL, 1
    axis = [e[0] for e in f.coeffs if all(a == 0 for a in e[1:])]
    order = min(axis) if axis else None
    transverse_x = any(not field.is_zero(f.linear_coeff(j)) for j in range(1, N))
    if order == 2 and transverse_x:
        return TANGENT, 2
    return TANGENT_DEGENERATE, order


def straighten_and_split(alpha, D=None, darboux_x=True):
    """Rectify the kernel field to ``d/dtheta``; optionally make ``d alpha`` canonical in ``x``.

    Returns ``(change, diagnosis)``; ``diagnosis.form`` is ``alpha`` in the new
    coordinates and ``diagnosis.f_theta`` its ``dtheta`` coefficient.
    """
    diag = check_nondegenerate(alpha)
    if not diag.cond_presymplectic:
        raise DegeneratePresymplectic("(d alpha)^n(0) = 0")
    N = alpha.nvars
    Z = diag.kernel
    change = rectify(Z, D)
    a = change.pull_form(alpha)
    if darboux_x:
        om = d(a)
        if not is_basic(om, 0):
            raise VerificationFailure("d alpha is not basic after rectification")
        omx = _drop_theta_form(om)
        n = (N - 1) // 2
        canon = KForm.canonical(n, omx.degree, nvars=N - 1, weights=omx.weights, field=omx.field)
        if not omx.equal_mod(canon, omx.degree):
            dc = extend_change(darboux(omx), a.weights)
            change = change.then(dc)
            a = dc.pull_form(a)
    diag.change = change
    diag.form = a
    diag.f_theta = a.coeffs[(0,)]
    diag.tangency, diag.theta_order = _tangency(diag.f_theta)
    return change, diag


def classify_singularity(alpha, D=None):
    """Transversal, generic (order 2) tangent, or degenerate tangent."""
    _, diag = straighten_and_split(alpha, D, darboux_x=False)
    return diag


def prenormalize_transversal(alpha, D=None):
    """``alpha = sign * theta dtheta + gamma`` with ``gamma`` basic and ``d gamma`` canonical."""
    change, diag = straighten_and_split(alpha, D)
    if diag.tangency != TRANSVERSAL:
        raise PreconditionError("singularity is not transversal")
    a = diag.form
    N = a.nvars
    w = a.weights
    field = a.field
    f = diag.f_theta
    # N = {theta = theta_N(x)} as a graph
    S = f.embed(N, [N - 1] + list(range(N - 1)))
    tN = hensel_solve(S, 0)
    tN = tN.embed(N, list(range(1, N)), w)
    xs = list(Jet.variables(N, a.degree + 8, w, field))
    shift = CoordinateChange([xs[0] + tN] + xs[1:], [xs[0] - tN] + xs[1:], [{"stage": "graph"}])
    a = shift.pull_form(a)
    f = a.coeffs[(0,)]
    H = f.integrate(0)
    zero = H.zero_like()
    E, r = divmod_monic(H, 0, [zero, zero])
    if not r.is_zero():
        raise VerificationFailure("the primitive along the kernel is not of order 2")
    e0 = E.const_term()
    sign = field.sign(e0)
    root = (E * (2 * sign)).sqrt()
    psi = JetMap([xs[0] * root] + xs[1:])
    scale = CoordinateChange(invert_map(psi), psi, [{"stage": "morse"}])
    a = scale.pull_form(a)
    th = Jet.var(0, N, a.degree + 8, w, field)
    theta_part = KForm.one_form([th * sign] + [zero.zero_like()] * (N - 1))
    g_full = a - theta_part
    gamma = _drop_theta_form(g_full)
    nf = ContactNormalForm(TRANSVERSAL, theta_part, gamma, change.then(shift).then(scale), diag,
                           sign=sign, ring_weights=w, input_form=alpha)
    return nf


def prenormalize_tangent(alpha, D=None):
    """``alpha = d(theta^3 - x_1 theta) + gamma`` for an order-2 tangency.

    Works in the grading where theta has weight 1 and every other
    variable weight 2.  ``x_1`` is kept as the first canonical coordinate
    of ``d gamma``.
    """
    change, diag = straighten_and_split(alpha, D, darboux_x=False)
    if diag.tangency != TANGENT:
        raise TangencyNotGeneric(f"tangency order along the kernel is {diag.theta_order}, not 2")
    N = alpha.nvars
    n = (N - 1) // 2
    w = tangent_weights(N)
    field = alpha.field
    a = _reweight_form(diag.form, w)
    change = change.reweight(w)
    prep = weierstrass_prepare(a.coeffs[(0,)], 0)
    k = preparation_index(prep.c1, prep.c0, 0)
    if k is None:
        raise TangencyNotGeneric("N is singular at the origin")
    wc = CoordinateChange(invert_map(prep.change), prep.change, [{"stage": "weierstrass"}])
    if k != 1:
        P = [[field.one if (i == j and i not in (1, k)) or {i, j} == {1, k} else field.zero
              for j in range(N)] for i in range(N)]
        wc = wc.then(CoordinateChange.from_matrix(P, P, a.degree + 2, w, field))
    change = change.then(wc)
    a = wc.pull_form(a)
    stages = [
        ("curve", lambda h: curve_change(_checked_curve(h)), lambda h: theta_curve_residual(h, h.zero_like())),
        ("rescale", tangent_rescale, eq17_residual),
        ("psi", tangent_psi, eq18_residual),
        ("final", tangent_final, final_residual),
    ]
    log = []
    for name, build, check in stages:
        h = h_from_coefficient(a.coeffs[(0,)]) * (field.one / KAPPA)
        st = build(h)
        change = change.then(st)
        a = st.pull_form(a)
        h = h_from_coefficient(a.coeffs[(0,)]) * (field.one / KAPPA)
        res = check(h)
        if not res.is_zero():
            raise VerificationFailure(f"tangent stage {name} failed its identity check")
        log.append({"stage": name, "degree": h.degree})
    xs = list(Jet.variables(N, a.degree + 8, w, field))
    th, x1 = xs[0], xs[1]
    t3 = KForm.function(th * th * th - x1 * th * KAPPA)
    g_full = a - d(t3)
    gamma = _drop_theta_form(g_full)
    # Darboux with x1 kept, in the total grading of the x variables
    gx = _reweight_form(gamma, (1,) * (N - 1))
    dc = darboux(d(gx), keep_first=True)
    dc = extend_change(dc.reweight((2,) * (N - 1)), w)
    # x1 -> x1 / 3, x_{n+1} -> 3 x_{n+1} turns d(theta^3 - 3 x1 theta) into d(theta^3 - x1 theta)
    T = [[field.zero] * N for _ in range(N)]
    Tinv = [[field.zero] * N for _ in range(N)]
    for i in range(N):
        s = field.one
        if i == 1:
            s = field.one / KAPPA
        elif i == n + 1:
            s = field(KAPPA)
        T[i][i] = s
        Tinv[i][i] = field.one / s
    sc = CoordinateChange.from_matrix(T, Tinv, a.degree + 2, w, field, [{"stage": "erase_third"}])
    tail = dc.then(sc)
    change = change.then(tail)
    a = tail.pull_form(a)
    t3 = KForm.function(th * th * th - x1 * th)
    gamma = _drop_theta_form(a - d(t3))
    nf = ContactNormalForm(TANGENT, d(t3), gamma, change, diag, ring_weights=w,
                           input_form=_reweight_form(alpha, w))
    nf.flags["stages"] = log
    return nf


def _checked_curve(h):
    g = tangent_curve_ell(h)
    if not theta_curve_residual(h, g).is_zero():
        raise VerificationFailure("balancing curve does not satisfy its identity")
    return g


def prenormalize(alpha, D=None):
    diag = classify_singularity(alpha, D)
    if diag.tangency == TRANSVERSAL:
        return prenormalize_transversal(alpha, D)
    if diag.tangency == TANGENT:
        return prenormalize_tangent(alpha, D)
    raise TangencyNotGeneric("degenerate tangency: no normal form is provided")


def linearization_witness(X, phi):
    """``X(phi) - lam phi`` for the eigenvalue ``lam`` of the linear part of ``phi``.

    Zero only if ``phi`` is an eigenfunction of ``X``, which is required for
    ``phi`` to be linear in coordinates where ``X`` is linear.  Returns
    ``(lam, witness)``; ``lam`` is None if the linear part of ``phi`` is not
    an eigenvector.
    """
    lin = phi.homogeneous_part(1)
    Xl = VectorField(c.homogeneous_part(1) for c in X)
    img = Xl.apply(lin)
    lam = None
    for e, c in lin.coeffs.items():
        lam = img.coeff(e) / c
        break
    if lam is None or not (img - lin * lam).is_zero():
        return None, None
    return lam, X.apply(phi) - phi * lam


def full_normalize(alpha, D=None, bruno_depth=12):
    """Pre-normal form followed by the normal form of the primitive part."""
    pre = prenormalize(alpha, D)
    gamma = pre.gamma
    w = pre.ring_weights
    if pre.case == TANGENT:
        gamma = _reweight_form(gamma, (1,) * gamma.nvars)
    Dg = None if D is None else min(D, gamma.degree - 1)
    rep = normalize_primitive(gamma, Dg, bruno_depth=bruno_depth)
    gch = rep.change
    if pre.case == TANGENT:
        gch = gch.reweight(w[1:])
    ext = extend_change(gch, w)
    pre.change = pre.change.then(ext)
    pre.primitive = rep
    if pre.case == TANGENT:
        phi = rep.change.forward[0]
        pre.phi = phi
        lam, wit = linearization_witness(rep.field_nf, phi)
        pre.witness = wit
        pre.flags["phi_eigenvalue"] = lam
        pre.flags["phi_linearizable_with_gamma"] = (wit is not None and wit.is_zero())
        N = alpha.nvars
        phiN = phi.reweight(w[1:]).embed(N, list(range(1, N)), w)
        th = Jet.var(0, N, phiN.degree + 8, w, alpha.field)
        pre.theta_part = d(KForm.function(th * th * th - phiN * th))
    return pre
