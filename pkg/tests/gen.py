"""Seeded random jets, forms, fields and changes for the test suite."""

import itertools
from fractions import Fraction

from contactnf.exterior import KForm, VectorField
from contactnf.jets import Jet, JetMap


def coef(rng, span=3, den=(1, 2, 3)):
    c = Fraction(rng.randint(-span, span), rng.choice(den))
    return c if c else Fraction(1)


def jet(rng, n, D, lo=0, hi=None, terms=6, weights=None):
    hi = D if hi is None else hi
    w = weights or (1,) * n
    cands = [e for e in exponents(n, 0, hi) if lo <= sum(a * b for a, b in zip(e, w)) <= hi]
    out = Jet.zero(n, D, weights)
    for e in rng.sample(cands, min(terms, len(cands))):
        out = out + Jet.monomial(e, coef(rng), D, weights)
    return out


def form(rng, grade, n, D, lo=0, hi=None, terms=4):
    coeffs = {}
    for J in itertools.combinations(range(n), grade):
        if rng.random() < 0.7:
            coeffs[J] = jet(rng, n, D, lo, hi, terms)
    return KForm(grade, coeffs, n, D) if coeffs else KForm.zero(grade, n, D)


def field(rng, n, D, lo=0, hi=None, terms=4):
    return VectorField([jet(rng, n, D, lo, hi, terms) for _ in range(n)])


def near_identity(rng, n, D, terms=3, lo=2, weights=None):
    """``x_i + (random terms of weighted degree >= lo)``, optionally with a shear."""
    vs = Jet.variables(n, D, weights)
    return JetMap([vs[i] + jet(rng, n, D, lo, min(D, lo + 2), terms, weights) for i in range(n)])


def to_sympy(J, syms):
    import sympy
    out = sympy.Integer(0)
    for e, c in J.terms():
        m = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, k in zip(syms, e):
            m *= s ** k
        out += m
    return out


def truncated_terms(expr, syms, D, weights=None):
    """Monomials of a sympy polynomial with weighted degree <= D, as ``{exp: Fraction}``."""
    import sympy
    w = weights or (1,) * len(syms)
    poly = sympy.Poly(sympy.expand(expr), *syms)
    out = {}
    for e, c in poly.terms():
        if sum(a * b for a, b in zip(e, w)) <= D and c != 0:
            out[tuple(e)] = Fraction(int(c.p), int(c.q))
    return out


def terms_of(J):
    return {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in J.terms()}


def exponents(n, lo, hi):
    for k in range(lo, hi + 1):
        for c in itertools.combinations_with_replacement(range(n), k):
            e = [0] * n
            for i in c:
                e[i] += 1
            yield tuple(e)


def weighted_one_form(rng, lam, D, lo=2, terms=4):
    """Random 1-form ``beta`` with ``L_Xs beta = beta`` for ``Xs = sum lam_i x_i d/dx_i``."""
    n = len(lam)
    cands = [(e, i) for e in exponents(n, lo, D) for i in range(n)
             if sum(a * l for a, l in zip(e, lam)) + lam[i] == 1]
    comps = [Jet.zero(n, D + 1) for _ in range(n)]
    for e, i in rng.sample(cands, min(terms, len(cands))):
        comps[i] = comps[i] + Jet.monomial(e, coef(rng), D + 1)
    return KForm.one_form(comps)


def resonant_field(rng, lam, D, terms=3, lo=2):
    """``Xs`` plus random terms ``x^alpha d/dx_i`` with ``alpha.lam = lam_i`` (and others if asked)."""
    n = len(lam)
    vs = Jet.variables(n, D)
    comps = [lam[i] * vs[i] for i in range(n)]
    cands = [(e, i) for e in exponents(n, lo, D) for i in range(n)
             if sum(a * l for a, l in zip(e, lam)) == lam[i]]
    for e, i in rng.sample(cands, min(terms, len(cands))):
        comps[i] = comps[i] + Jet.monomial(e, coef(rng), D)
    return VectorField(comps)


def linear_form_part(lam, D):
    """``i_Xs omega0`` for ``omega0 = sum dx_i ^ dx_{n+i}``."""
    n2 = len(lam)
    n = n2 // 2
    vs = Jet.variables(n2, D)
    comps = [Jet.zero(n2, D) for _ in range(n2)]
    for i in range(n):
        comps[n + i] = lam[i] * vs[i]
        comps[i] = -lam[n + i] * vs[n + i]
    return KForm.one_form(comps)


def random_change(rng, n, D, shear=True, terms=3):
    """Random invertible map: a unipotent linear part and nonlinear terms."""
    vs = Jet.variables(n, D)
    out = []
    for i in range(n):
        c = vs[i]
        if shear and i + 1 < n and rng.random() < 0.6:
            c = c + rng.randint(-1, 1) * vs[i + 1]
        out.append(c + jet(rng, n, D, 2, min(D, 4), terms))
    return JetMap(out)


def primitive_form(rng, lam, D, terms=3, quadratic=None):
    """``phi^*(i_Xs omega0 + dF)`` with ``F`` of order >= 3 and a random change ``phi``.

    ``quadratic`` (exponent -> coefficient) is added to ``F``; it must be a
    nilpotent Hamiltonian commuting with ``Xs`` to keep the spectrum.
    """
    from contactnf.exterior import d, pullback
    n2 = len(lam)
    F = jet(rng, n2, D + 1, 3, min(D + 1, 5), terms)
    for e, c in (quadratic or {}).items():
        F = F + Jet.monomial(e, c, D + 1)
    g0 = linear_form_part(lam, D + 1) + d(KForm.function(F))
    return pullback(random_change(rng, n2, D + 1), g0)


def admissible_h(rng, D, nvars=3, terms=5):
    """Random ``h(theta, x, ...)`` in the tangent grading with ``h(0,0)`` a positive rational cube."""
    from contactnf.tangent import tangent_weights
    w = tangent_weights(nvars)
    c = Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2]))
    h = Jet.const(c ** 3, nvars, D, w)
    for _ in range(terms):
        e = tuple(rng.randint(0, 3) for _ in range(nvars))
        if 0 < sum(a * b for a, b in zip(e, w)) <= D:
            h = h + Jet.monomial(e, coef(rng), D, w)
    return h


def embed_form(form, nvars, index_map):
    comps = [Jet.zero(nvars, form.degree) for _ in range(nvars)]
    for (i,), c in form.nonzero_items():
        comps[index_map[i]] = c.embed(nvars, index_map)
    return KForm.one_form(comps)


def transversal_form(rng, D, lam=None):
    """``phi^*(u(theta) theta dtheta + gamma(x))`` in dimension 3 with ``u(0) = 1``."""
    from contactnf.exterior import pullback
    lam = lam or rng.choice([(2, -1), (Fraction(1, 3), Fraction(2, 3)), (3, -2)])
    gamma = embed_form(primitive_form(rng, lam, D), 3, [1, 2])
    th = Jet.var(0, 3, D + 1)
    u = 1 + rng.randint(-2, 2) * th + rng.randint(-2, 2) * th * th
    theta_part = KForm.one_form([u * th, Jet.zero(3, D + 1), Jet.zero(3, D + 1)])
    return pullback(random_change(rng, 3, D + 1), theta_part + gamma)
