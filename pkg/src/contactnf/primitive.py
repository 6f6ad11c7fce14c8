"""Primitive 1-forms: conformal field, normal form and arithmetic predicates."""

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.optimize import linprog

from .change import CoordinateChange
from .darboux import interior_solve
from .errors import Degenerate, DegenerateDifferential, RequiresExactSpectrum, UndecidableAtTolerance
from .exterior import KForm, VectorField, d, interior
from .jets import Jet, divmod_monic
from .linear import canonical_linear_data, classify_quadratic
from .normalizer import equivariant_darboux, poincare_dulac
from .scalar import mpq


def conformal_field(gamma):
    """The field ``X`` with ``i_X d(gamma) = gamma``."""
    try:
        return interior_solve(d(gamma), gamma)
    except Degenerate as exc:
        raise DegenerateDifferential("d(gamma) is degenerate at the origin") from exc


def _sum(items):
    acc = items[0]
    for t in items[1:]:
        acc = acc + t
    return acc


def potential(eta):
    """Function ``F`` with ``dF = eta`` for a closed 1-form, ``F(0) = 0``."""
    n = eta.nvars
    xs = Jet.variables(n, eta.degree, eta.weights, eta.field)
    E = _sum([xs[i] * eta.coeffs[(i,)] for i in range(n)])
    out = {}
    for e, c in E.coeffs.items():
        k = E.wdeg(e)
        out[e] = c / k
    return E.like(out)


def gamma_block_form(lam, start, size, n, degree, field=None):
    """``sum_j lam x_j dx_{n+j} + (lam - 1) x_{n+j} dx_j`` over one block."""
    xs = Jet.variables(2 * n, degree)
    co = {}
    for j in range(start, start + size):
        co[(n + j,)] = xs[j] * lam
        co[(j,)] = xs[n + j] * (lam - 1)
    return KForm(1, co, 2 * n, degree + 1)


@dataclass
class PrimitiveReport:
    spectral: object
    gamma_blocks: list
    R: Jet
    R_support: list
    Q: Jet
    change: CoordinateChange
    gamma_nf: KForm
    field_nf: VectorField
    flags: dict = dc_field(default_factory=dict)

    def reconstruct(self):
        """``sum(gamma_i + dQ_i) + dR``."""
        acc = None
        for g, case in self.gamma_blocks:
            t = g + d(KForm.function(case.Q.lift(self.R.degree)))
            acc = t if acc is None else acc + t
        return acc + d(KForm.function(self.R))


def normalize_primitive(gamma, D=None, bruno_depth=12):
    """Normal form of a primitive 1-form vanishing at the origin.

    Steps: conformal field, symplectic linear normal form, Poincare-Dulac
    on the nonlinear terms, equivariant Darboux to make ``d(gamma)``
    constant, then the split into block forms, quadratics and the resonant
    function ``R``.
    """
    Dc = gamma.degree - 1 if D is None else D
    gamma = gamma.truncate(Dc + 1)
    n2 = gamma.nvars
    n = n2 // 2
    field = gamma.field
    X = conformal_field(gamma)
    omega = d(gamma)
    L = X.linear_matrix()
    W0 = [[c for c in row] for row in omega.matrix_at_origin()]
    lin = canonical_linear_data(L, W0, Dc + 1, field)
    c1 = lin.change
    g1 = c1.pull_form(gamma)
    X1 = conformal_field(g1)
    pd = poincare_dulac(X1, Dc, linear="keep")
    c2 = pd.change
    g2 = c2.pull_form(g1)
    lam = [e.value for e in lin.spectral.eigenvalues]
    Xs = VectorField.euler(lam, n2, Dc + 1, field=field)
    c3 = equivariant_darboux(d(g2), Xs, Dc)
    g3 = c3.pull_form(g2).truncate(Dc + 1)
    change = c1.then(c2).then(c3)
    X3 = conformal_field(g3)
    omega0 = KForm.canonical(n, Dc + 1, field=field)
    lin_form = interior(Xs, omega0)
    eta = g3 - lin_form
    F = potential(eta)
    Q = F.homogeneous_part(2)
    R = F.part_where(lambda e: sum(e) >= 3)
    Xnil = VectorField(c.homogeneous_part(1) for c in X3) - Xs
    blocks = []
    for i, b in enumerate(lin.spectral.blocks):
        case = classify_quadratic(b, Xnil, omega0, i)
        gi = gamma_block_form(b.lam.value, b.start, b.size, n, Dc)
        blocks.append((gi, case))
    support = [(e, c) for e, c in R.terms()]
    rep = PrimitiveReport(lin.spectral, blocks, R, support, Q, change, g3, X3)
    sd = lin.spectral
    semis = all(case.tag == "Zero" for _, case in blocks)
    lin_verdict = is_linearizable(sd, Dc, semisimple=semis)
    rep.flags = {
        "linearizable": lin_verdict.value,
        "linearizable_certificate": lin_verdict.certificate,
        "hyperbolic": hyperbolicity(sd),
        "bruno_partial_sums": bruno_check(sd, bruno_depth),
        "resonant_support_ok": all(_resonant(e, sd) for e, _ in support),
        "q_literal": all(case.literal for _, case in blocks),
    }
    return rep


def _resonant(e, sd):
    vec = [mpq(0)] * len(sd.eigenvalues[0].vec)
    for a, lam in zip(e, sd.eigenvalues):
        vec = [x + a * y for x, y in zip(vec, lam.vec)]
    one = [mpq(1)] + [mpq(0)] * (len(vec) - 1)
    return vec == one and sum(e) >= 3


def _require_exact(spectral):
    if not spectral.eigenvalues:
        raise RequiresExactSpectrum("no exact eigenvalues available")


def resonance_support(spectral, D):
    """All ``alpha`` with ``3 <= |alpha| <= D`` and ``sum alpha_i lam_i = 1``.

    Indices sharing an eigenvalue are grouped; the search runs over how
    many factors each distinct eigenvalue contributes, and only matching
    totals are expanded back into multi-indices.
    """
    _require_exact(spectral)
    eig = spectral.eigenvalues
    nn = len(eig)
    classes = []
    for i, e in enumerate(eig):
        for cl in classes:
            if cl[0].vec == e.vec:
                cl[1].append(i)
                break
        else:
            classes.append((e, [i]))
    width = len(eig[0].vec)
    target = tuple([mpq(1)] + [mpq(0)] * (width - 1))
    found = []

    def rec(ci, remaining, acc, counts):
        if ci == len(classes):
            tot = D - remaining
            if tot >= 3 and tuple(acc) == target:
                found.append(list(counts))
            return
        vec = classes[ci][0].vec
        for m in range(remaining + 1):
            rec(ci + 1, remaining - m, [a + m * v for a, v in zip(acc, vec)], counts + [m])

    rec(0, D, [mpq(0)] * width, [])
    out = set()
    for counts in found:
        parts = [list(_compositions(m, len(cl[1]))) for m, cl in zip(counts, classes)]
        for choice in product(*parts):
            alpha = [0] * nn
            for comp, cl in zip(choice, classes):
                for a, idx in zip(comp, cl[1]):
                    alpha[idx] = a
            out.add(tuple(alpha))
    return sorted(out, key=lambda a: (sum(a), tuple(-x for x in a)))


def _compositions(m, k):
    if k == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in _compositions(m - first, k - 1):
            yield (first,) + rest


@dataclass
class Verdict:
    value: bool
    certificate: str
    degree_bound: object = None

    def __bool__(self):
        return self.value


def is_linearizable(spectral, D, semisimple=True):
    """Linearizability verdict with the kind of certificate it rests on.

    ``certificate`` is ``"unconditional"`` when a positive linear
    functional bounds the degree of every possible resonance below what
    was enumerated, ``"up_to_degree"`` when only the finite search is
    available, and ``"resonant"``/``"nilpotent"`` for negative answers.
    """
    _require_exact(spectral)
    if not semisimple:
        return Verdict(False, "nilpotent")
    res = resonance_support(spectral, D)
    if res:
        return Verdict(False, "resonant")
    bound = _degree_bound(spectral)
    if bound is not None and bound <= D:
        return Verdict(True, "unconditional", bound)
    return Verdict(True, "up_to_degree", bound)


def _degree_bound(spectral):
    """Exact bound ``|alpha| <= c.e0 / min_i c.v_i`` from an LP functional."""
    vecs = [e.vec for e in spectral.eigenvalues]
    m = len(vecs[0])
    A = np.array([[float(x) for x in v] for v in vecs])
    # maximize delta: -c.v_i + delta <= 0, variables (c, delta)
    A_ub = np.hstack([-A, np.ones((len(vecs), 1))])
    b_ub = np.zeros(len(vecs))
    cost = np.zeros(m + 1)
    cost[-1] = -1.0
    bounds = [(-1, 1)] * m + [(None, 1)]
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success or res.x[-1] <= 1e-9:
        return None
    c = [mpq(Fraction(float(x)).limit_denominator(10 ** 6)) for x in res.x[:m]]
    delta = min(sum(a * b for a, b in zip(c, v)) for v in vecs)
    if delta <= 0:
        return None
    return int(math.floor(c[0] / delta)) if c[0] >= 0 else -1


def bruno_check(spectral, K=12, max_points=2 * 10 ** 7):
    """Partial sums ``sum_{k<=K} 2^{-k} ln(1/omega_k)``.

    ``omega_k`` is the smallest nonzero ``|sum l_s lam_s - lam_r|`` over
    ``l`` in ``N^{2n}`` with ``|l| < 2^k``.  Indices with equal eigenvalues
    are merged.  With two distinct values the last multiplicity is chosen
    by rounding; exact zeros are detected on integer vectors.
    """
    _require_exact(spectral)
    distinct = []
    for e in spectral.eigenvalues:
        if all(e.vec != f.vec for f in distinct):
            distinct.append(e)
    den = 1
    for e in distinct:
        for x in e.vec:
            den = den * int(x.denominator) // math.gcd(den, int(x.denominator))
    ivec = np.array([[int(x * den) for x in e.vec] for e in distinct], dtype=np.int64)
    vals = np.array([complex(e.mp_approx()) for e in distinct])
    real = bool(np.all(vals.imag == 0))
    # rational spectra: nonzero divisors lie in (g/den)Z, so omega_k stalls once it reaches g/den
    g = math.gcd(*(int(v) for v in ivec[:, 0])) if spectral.is_rational() else 0
    floor = g / den if g else None
    sums = []
    total = 0.0
    best = math.inf
    for k in range(1, K + 1):
        bound = 2 ** k - 1
        if floor is None or not math.isclose(best, floor, rel_tol=1e-12):
            best = math.inf
            for r in range(len(distinct)):
                best = min(best, _min_divisor(ivec, vals, r, bound, real, max_points))
        if not math.isfinite(best):
            best = 1.0
        if best <= 1e-13 * 2 ** k:
            raise UndecidableAtTolerance(
                f"small divisor {best:.3e} at scale 2^{k} is below float resolution")
        total += 2.0 ** (-k) * math.log(1.0 / best)
        sums.append(total)
    return sums


def _min_divisor(ivec, vals, r, bound, real, max_points):
    d = len(vals)
    if d == 1:
        m = np.arange(0, bound + 1)
        iv = np.outer(m, ivec[0]) - ivec[r]
        nz = np.any(iv != 0, axis=1)
        v = np.abs(m * vals[0] - vals[r])
        return float(np.min(v[nz])) if np.any(nz) else math.inf
    lead = d - 1 if real else d
    count = math.comb(bound + lead, lead)
    if count > max_points:
        raise RequiresExactSpectrum(f"Bruno search too large ({count} points)")
    grids = _simplex_points(lead, bound)
    base = grids @ vals[:lead] - vals[r]
    ibase = grids @ ivec[:lead] - ivec[r]
    if not real:
        nz = np.any(ibase != 0, axis=1)
        v = np.abs(base)
        return float(np.min(v[nz])) if np.any(nz) else math.inf
    mu = vals[-1].real
    rem = bound - grids.sum(axis=1)
    best = math.inf
    if mu == 0:
        cands = [np.zeros(len(grids), dtype=np.int64)]
    else:
        t = -base.real / mu
        f = np.floor(t).astype(np.int64)
        cands = [f - 1, f, f + 1, f + 2, np.zeros(len(grids), dtype=np.int64), rem]
    for c in cands:
        c = np.clip(c, 0, rem)
        v = np.abs(base.real + c * mu)
        iv = ibase + np.outer(c, ivec[-1])
        nz = np.any(iv != 0, axis=1)
        if np.any(nz):
            best = min(best, float(np.min(v[nz])))
        # exact zeros at the rounded point: also try neighbours
        for shift in (-1, 1):
            c2 = np.clip(c + shift, 0, rem)
            v2 = np.abs(base.real + c2 * mu)
            iv2 = ibase + np.outer(c2, ivec[-1])
            nz2 = np.any(iv2 != 0, axis=1)
            if np.any(nz2):
                best = min(best, float(np.min(v2[nz2])))
    return best


def _simplex_points(dim, bound):
    """All non-negative integer vectors of length ``dim`` with sum <= bound."""
    if dim == 1:
        return np.arange(0, bound + 1, dtype=np.int64).reshape(-1, 1)
    pts = []
    for first in range(bound + 1):
        sub = _simplex_points(dim - 1, bound - first)
        pts.append(np.hstack([np.full((len(sub), 1), first, dtype=np.int64), sub]))
    return np.vstack(pts)


def condition_A_check(nf):
    """Is the normal form a scalar multiple ``u X^(1)`` with ``u(0) = 1``?"""
    X = nf.nf if hasattr(nf, "nf") else nf
    X1 = [c.homogeneous_part(1) for c in X]
    u = None
    for c, l in zip(X, X1):
        if l.is_zero():
            continue
        u = _divide_by_linear(c, l)
        if u is None:
            return False
        break
    if u is None:
        return all(c.is_zero() for c in X)
    if u.const_term() != 1:
        return False
    for c, l in zip(X, X1):
        if not (u * l).equal_mod(c, min(c.degree, (u * l).degree)):
            return False
    return True


def _divide_by_linear(f, l):
    """Exact quotient ``f / l`` for a linear form ``l``, or None."""
    j = next(i for i in range(l.nvars) if l.linear_coeff(i) != 0)
    cj = l.linear_coeff(j)
    rest = (l - l.like({tuple(1 if k == j else 0 for k in range(l.nvars)): cj})) * (1 / cj)
    q, r = divmod_monic(f * (1 / cj), j, [rest])
    if not r.is_zero():
        return None
    return q


def hyperbolicity(spectral):
    """No eigenvalue (with its partner) on the imaginary axis."""
    _require_exact(spectral)
    for e in spectral.eigenvalues:
        if all(x == 0 for x in e.real_part_vec()):
            return False
        if all(x == 0 for x in e.complement().real_part_vec()):
            return False
    return True
