"""Truncated multivariate power series (jets).

A :class:`Jet` is a sparse map from exponent tuples to scalars, together
with a *precision* ``degree``: every term of weighted degree at most
``degree`` is known, everything above it has been discarded.  Variables may
carry positive integer weights (weight 0 is allowed for bookkeeping
variables such as time); the weighted degree of ``x**e`` is ``sum(w*e)``.

Precision is tracked through every operation, so a jet never claims more
than it knows.  For polynomial inputs use :meth:`Jet.lift` to declare a
higher precision explicitly.
"""

import math
from fractions import Fraction
from operator import add
from typing import NamedTuple

from .errors import (
    DegenerateJacobian,
    DimensionMismatch,
    PreconditionError,
    RootNotInField,
    SingularLinearPart,
    WrongOrder,
)
from .scalar import EXACT

DEFAULT_DEGREE = 8



def wdeg(e, w):
    return sum(a * b for a, b in zip(e, w))


def _mul(a, b, P, w):
    """Product of two coefficient dicts keeping weighted degree <= P."""
    if not a or not b or P < 0:
        return {}
    if len(a) > len(b):
        a, b = b, a
    bb = sorted(((wdeg(e, w), e, c) for e, c in b.items()), key=lambda t: t[0])
    out = {}
    get = out.get
    for ea, ca in a.items():
        lim = P - wdeg(ea, w)
        if lim < 0:
            continue
        for db, eb, cb in bb:
            if db > lim:
                break
            e = tuple(map(add, ea, eb))
            out[e] = get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def _add_into(out, d, s=1):
    get = out.get
    for e, c in d.items():
        v = get(e, 0) + (c if s == 1 else -c)
        if v == 0:
            out.pop(e, None)
        else:
            out[e] = v


class Jet:
    """Truncated power series in ``nvars`` variables.

    Parameters
    ----------
    nvars : int
        Number of variables.
    degree : int
        Precision: all terms of weighted degree <= ``degree`` are exact.
    coeffs : dict, optional
        Map from exponent tuples to scalars.  Zero entries are dropped and
        terms above ``degree`` are truncated.
    weights : tuple of int, optional
        Variable weights, default all ones.
    field : ExactField or FloatField
    """

    __slots__ = ("nvars", "degree", "coeffs", "weights", "field")
    __hash__ = None

    def __init__(self, nvars, degree, coeffs=None, weights=None, field=EXACT, _trusted=False):
        self.nvars = nvars
        self.degree = degree
        self.weights = tuple(weights) if weights is not None else (1,) * nvars
        self.field = field
        if len(self.weights) != nvars:
            raise DimensionMismatch("weights length differs from nvars")
        if coeffs is None:
            self.coeffs = {}
        elif _trusted:
            self.coeffs = coeffs
        else:
            w = self.weights
            cf = {}
            for e, c in coeffs.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise DimensionMismatch("exponent length differs from nvars")
                if wdeg(e, w) <= degree:
                    c = field(c)
                    if c != 0:
                        cf[e] = c
            self.coeffs = cf

    # construction --------------------------------------------------------
    def _new(self, coeffs, degree=None):
        return Jet(self.nvars, self.degree if degree is None else degree, coeffs,
                   self.weights, self.field, _trusted=True)

    @classmethod
    def zero(cls, nvars, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        return cls(nvars, degree, {}, weights, field)

    @classmethod
    def const(cls, c, nvars, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        return cls(nvars, degree, {(0,) * nvars: c}, weights, field)

    @classmethod
    def var(cls, i, nvars, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, degree, {tuple(e): 1}, weights, field)

    @classmethod
    def variables(cls, nvars, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        return tuple(cls.var(i, nvars, degree, weights, field) for i in range(nvars))

    @classmethod
    def monomial(cls, e, c, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        return cls(len(e), degree, {tuple(e): c}, weights, field)

    def like(self, coeffs=None, degree=None):
        """A jet in the same ring (validated coefficients)."""
        return Jet(self.nvars, self.degree if degree is None else degree,
                   coeffs or {}, self.weights, self.field)

    def zero_like(self, degree=None):
        return self._new({}, degree)

    def const_like(self, c, degree=None):
        c = self.field(c)
        return self._new({(0,) * self.nvars: c} if c != 0 else {}, degree)

    # basic queries -----------------------------------------------------------
    def wdeg(self, e):
        return wdeg(e, self.weights)

    def valuation(self):
        """Lowest weighted degree present (``degree + 1`` for the zero jet)."""
        if not self.coeffs:
            return self.degree + 1
        w = self.weights
        return min(wdeg(e, w) for e in self.coeffs)

    def is_zero(self):
        if self.field.exact:
            return not self.coeffs
        return all(self.field.is_zero(c) for c in self.coeffs.values())

    def const_term(self):
        return self.coeffs.get((0,) * self.nvars, self.field.zero)

    def coeff(self, e):
        return self.coeffs.get(tuple(e), self.field.zero)

    def linear_coeff(self, j):
        e = [0] * self.nvars
        e[j] = 1
        return self.coeff(e)

    def terms(self):
        """Terms sorted graded-lexicographically."""
        w = self.weights
        return sorted(self.coeffs.items(), key=lambda t: (wdeg(t[0], w), tuple(-a for a in t[0])))

    def max_exponent(self, i):
        return max((e[i] for e in self.coeffs), default=0)

    def __repr__(self):
        return f"Jet({self.nvars}, degree={self.degree}, {self.to_string()})"

    def to_string(self, names=None):
        if not self.coeffs:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.terms():
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
            cs = self.field.to_str(c)
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(parts)

    # precision management ------------------------------------------------
    def truncate(self, degree):
        if degree >= self.degree:
            return self if degree == self.degree else self._new(self.coeffs, self.degree)
        w = self.weights
        return self._new({e: c for e, c in self.coeffs.items() if wdeg(e, w) <= degree}, degree)

    def lift(self, degree):
        """Declare precision ``degree``; valid when the jet is a polynomial."""
        if degree <= self.degree:
            return self.truncate(degree)
        return self._new(dict(self.coeffs), degree)

    def homogeneous_part(self, k):
        w = self.weights
        return self._new({e: c for e, c in self.coeffs.items() if wdeg(e, w) == k})

    def part_where(self, pred):
        return self._new({e: c for e, c in self.coeffs.items() if pred(e)})

    def map_coeffs(self, fn):
        out = {}
        for e, c in self.coeffs.items():
            v = fn(c)
            if v != 0:
                out[e] = v
        return self._new(out)

    def reweight(self, weights, degree=None):
        """Re-grade with new weights, lowering precision as needed."""
        weights = tuple(weights)
        if degree is None:
            degree = self._reweight_precision(weights)
        return Jet(self.nvars, degree, self.coeffs, weights, self.field)

    def _reweight_precision(self, weights):
        ratio = max(Fraction(a, b) for a, b in zip(self.weights, weights) if b > 0)
        if any(b == 0 and a > 0 for a, b in zip(self.weights, weights)):
            raise PreconditionError("cannot move a weighted variable to weight 0")
        return int(Fraction(self.degree) / ratio) if ratio > 0 else self.degree

    # ring structure ----------------------------------------------------------
    def _check(self, other):
        if self.nvars != other.nvars or self.weights != other.weights:
            raise DimensionMismatch("jets live in different rings")
        if self.field != other.field:
            raise DimensionMismatch("jets over different scalar fields")

    def _coerce(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            c = self.field(other)
            out = dict(self.coeffs)
            _add_into(out, {(0,) * self.nvars: c})
            return self._new(out)
        P = min(self.degree, o.degree)
        out = dict(self.truncate(P).coeffs)
        _add_into(out, o.truncate(P).coeffs)
        return self._new(out, P)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return self + (-self.field(other))
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            c = self.field(other)
            if c == 0:
                return self._new({})
            return self._new({e: v * c for e, v in self.coeffs.items()})
        P = min(max(self.degree, o.degree),
                self.degree + o.valuation(), o.degree + self.valuation())
        return self._new(_mul(self.coeffs, o.coeffs, P, self.weights), P)

    __rmul__ = __mul__

    def mul_trunc(self, other, degree):
        """Product truncated at ``min(degree, natural precision)``."""
        P = min(degree, max(self.degree, other.degree),
                self.degree + other.valuation(), other.degree + self.valuation())
        return self._new(_mul(self.coeffs, other.coeffs, P, self.weights), P)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        c = self.field(other)
        if self.field.is_zero(c):
            raise ZeroDivisionError("division by zero scalar")
        inv = self.field.one / c
        return self._new({e: v * inv for e, v in self.coeffs.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = self.const_like(1, degree=self.degree)
        base = self
        first = True
        while n:
            if n & 1:
                result = base if first else result * base
                first = False
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Jet):
            if self.nvars != other.nvars:
                return False
            if self.field.exact:
                return self.coeffs == other.coeffs
            return (self - other.lift(self.degree).truncate(self.degree)).is_zero() and \
                (other - self.lift(other.degree).truncate(other.degree)).is_zero()
        try:
            return self == self.const_like(other)
        except (TypeError, ValueError):
            return NotImplemented

    def equal_mod(self, other, degree):
        """Equality of all terms of weighted degree <= ``degree``."""
        a = self.lift(max(self.degree, degree)).truncate(degree)
        b = other.lift(max(other.degree, degree)).truncate(degree)
        if self.field.exact:
            return a.coeffs == b.coeffs
        return (a - b).is_zero()

    # calculus ------------------------------------------------------------------
    def deriv(self, i):
        out = {}
        for e, c in self.coeffs.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                out[tuple(f)] = c * k
        return self._new(out, self.degree - self.weights[i])

    def integrate(self, i):
        """Antiderivative in variable ``i`` with no ``x_i``-free terms added."""
        out = {}
        for e, c in self.coeffs.items():
            f = list(e)
            f[i] = e[i] + 1
            out[tuple(f)] = c / (e[i] + 1) if self.field.exact else c / self.field(e[i] + 1)
        return self._new(out, self.degree + self.weights[i])

    def coefficient_in(self, i, k):
        """Coefficient of ``x_i**k`` (a jet not depending on ``x_i``)."""
        out = {}
        for e, c in self.coeffs.items():
            if e[i] == k:
                f = list(e)
                f[i] = 0
                out[tuple(f)] = c
        return self._new(out, self.degree - k * self.weights[i])

    def subs_zero(self, i):
        return self.coefficient_in(i, 0)

    def depends_on(self, i):
        return any(e[i] for e in self.coeffs)

    def embed(self, nvars, index_map, weights=None, degree=None):
        """Rename variables: old variable ``k`` becomes new ``index_map[k]``."""
        out = {}
        for e, c in self.coeffs.items():
            f = [0] * nvars
            for k, a in enumerate(e):
                if a:
                    f[index_map[k]] += a
            out[tuple(f)] = c
        if weights is None:
            weights = [1] * nvars
            for k, j in enumerate(index_map):
                weights[j] = self.weights[k]
        return Jet(nvars, self.degree if degree is None else degree, out, weights, self.field)

    # series ------------------------------------------------------------
    def _series(self, coeffs_fn, degree=None):
        """Evaluate ``sum_k a_k u**k`` with ``u = self`` of positive valuation."""
        P = self.degree if degree is None else degree
        v = self.valuation()
        if v <= 0 and self.coeffs:
            raise PreconditionError("series argument must have positive valuation")
        K = P // v if v <= P else 0
        acc = self.const_like(coeffs_fn(K), degree=P)
        for k in range(K - 1, -1, -1):
            acc = acc.mul_trunc(self, P) + coeffs_fn(k)
        return acc

    def reciprocal(self):
        c = self.const_term()
        if self.field.is_zero(c):
            raise ZeroDivisionError("reciprocal of a non-unit jet")
        inv = self.field.one / c
        u = (self * inv) - 1
        return u._series(lambda k: inv if k % 2 == 0 else -inv, self.degree)

    def nth_root(self, n):
        """Principal ``n``-th root; the constant term's root must lie in the field."""
        return nth_root(self, n)

    def sqrt(self):
        return nth_root(self, 2)


def binomial_coefficients(r, K, field):
    out = [field.one]
    for k in range(1, K + 1):
        out.append(out[-1] * (r - (k - 1)) / k)
    return out


def nth_root(f, n):
    """``g`` with ``g**n == f`` to the precision of ``f`` and ``g(0) > 0`` principal."""
    if n < 1:
        raise ValueError("n must be positive")
    field = f.field
    c = f.const_term()
    if field.is_zero(c):
        raise RootNotInField("constant term is zero; no unit root exists")
    r0 = field.root(c, n)
    if n == 1:
        return f
    u = f * (field.one / c) - 1
    P = f.degree
    v = u.valuation()
    K = P // v if v <= P else 0
    r = field(Fraction(1, n)) if field.exact else field.one / n
    bc = binomial_coefficients(r, K, field)
    return u._series(lambda k: bc[k], P) * r0


def compose(f, maps, degree=None, exact=False):
    """Substitute ``x_i -> maps[i]`` in ``f``.

    The result lives in the ring of the maps.  Its precision is the largest
    degree certified by the precisions of ``f`` and the maps (capped by
    ``degree`` when given, otherwise by the largest map precision).  Maps
    whose valuation is below the weight of the variable they replace are
    accepted; the precision estimate then treats ``f`` through its
    derivatives, which is exact when ``f`` is a polynomial.
    """
    maps = list(maps)
    if len(maps) != f.nvars:
        raise DimensionMismatch(f"compose: {f.nvars} variables but {len(maps)} maps")
    if not maps:
        raise DimensionMismatch("compose needs at least one map")
    m0 = maps[0]
    for m in maps[1:]:
        m0._check(m)
    if f.field != m0.field:
        raise DimensionMismatch("compose: scalar fields differ")
    vals = [m.valuation() for m in maps]
    used = [any(e[i] for e in f.coeffs) for i in range(f.nvars)]
    cap = max(m.degree for m in maps) if degree is None else degree
    P = cap if exact else min(cap, _pf_bound(f, vals))
    # errors of the maps
    for e in f.coeffs:
        s = sum(a * v for a, v in zip(e, vals))
        for i, a in enumerate(e):
            if a:
                P = min(P, maps[i].degree + s - vals[i])
    w = m0.weights
    field = m0.field
    nv = m0.nvars
    zero_e = (0,) * nv
    mapd = [m.truncate(P).coeffs if used[i] else None for i, m in enumerate(maps)]
    powers = [[{zero_e: field.one}] for _ in maps]

    def power(i, k):
        pw = powers[i]
        while len(pw) <= k:
            pw.append(_mul(pw[-1], mapd[i], P, w))
        return pw[k]

    def rec(fd, i, Pl):
        if i == f.nvars:
            s = sum(fd.values())
            return {zero_e: s} if s != 0 else {}
        groups = {}
        for e, c in fd.items():
            groups.setdefault(e[i], {})[e] = c
        out = {}
        for k, sub in groups.items():
            lim = Pl - k * vals[i]
            if lim < 0:
                continue
            inner = rec(sub, i + 1, lim)
            if not inner:
                continue
            if k == 0:
                _add_into(out, inner)
            else:
                _add_into(out, _mul(inner, power(i, k), Pl, w))
        return out

    res = rec(f.coeffs, 0, P)
    return Jet(nv, P, {e: c for e, c in res.items() if wdeg(e, w) <= P}, w, field, _trusted=True)


def _pf_bound(f, vals):
    """Precision guaranteed by the truncation of ``f`` under substitution."""
    ratios = [Fraction(v, w) for v, w in zip(vals, f.weights) if w > 0]
    r = min(ratios) if ratios else Fraction(1)
    if r <= 0:
        return -1
    # omitted terms have weighted degree >= f.degree + 1
    return math.ceil((f.degree + 1) * r) - 1


class JetMap:
    """A formal map ``(phi_1, ..., phi_m)`` given by jets in a common ring."""

    __slots__ = ("components",)

    def __init__(self, components):
        comps = list(components)
        if not comps:
            raise DimensionMismatch("empty map")
        for c in comps[1:]:
            comps[0]._check(c)
        self.components = tuple(comps)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __repr__(self):
        return f"JetMap({list(self.components)!r})"

    @property
    def nvars(self):
        return self.components[0].nvars

    @property
    def degree(self):
        return min(c.degree for c in self.components)

    @property
    def weights(self):
        return self.components[0].weights

    @property
    def field(self):
        return self.components[0].field

    @classmethod
    def identity(cls, nvars, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        return cls(Jet.variables(nvars, degree, weights, field))

    def is_identity(self):
        n = self.nvars
        for i, c in enumerate(self.components):
            e = [0] * n
            e[i] = 1
            if c.coeffs != {tuple(e): c.field.one}:
                return False
        return len(self.components) == n

    def compose(self, inner, degree=None):
        """``self o inner``: substitute ``inner`` into every component."""
        return JetMap(compose(c, inner.components, degree) for c in self.components)

    def truncate(self, degree):
        return JetMap(c.truncate(degree) for c in self.components)

    def lift(self, degree):
        return JetMap(c.lift(degree) for c in self.components)

    def equal_mod(self, other, degree):
        return all(a.equal_mod(b, degree) for a, b in zip(self, other))

    def __eq__(self, other):
        return isinstance(other, JetMap) and len(self) == len(other) and \
            all(a == b for a, b in zip(self, other))

    __hash__ = None

    def linear_matrix(self):
        """Matrix of coefficients of the variables of matching weight."""
        n = self.nvars
        w = self.weights
        rows = []
        for i, c in enumerate(self.components):
            row = []
            for j in range(n):
                row.append(c.linear_coeff(j) if w[j] == w[i] else c.field.zero)
            rows.append(row)
        return rows

    def inverse(self, degree=None):
        return invert_map(self, degree)


def solve_linear(A, b, field):
    """Solve ``A x = b`` by Gaussian elimination; ``b`` is a list of columns."""
    n = len(A)
    M = [list(row) + list(rhs) for row, rhs in zip(A, b)]
    m = len(M[0])
    for col in range(n):
        piv = None
        best = None
        for r in range(col, n):
            x = M[r][col]
            if not field.is_zero(x):
                if field.exact:
                    piv = r
                    break
                if best is None or abs(x) > best:
                    best, piv = abs(x), r
        if piv is None:
            raise SingularLinearPart("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = field.one / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not field.is_zero(M[r][col]):
                f = M[r][col]
                M[r] = [a - f * b_ for a, b_ in zip(M[r], M[col])]
    return [row[n:m] for row in M]


def invert_matrix(A, field):
    n = len(A)
    eye = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    return solve_linear(A, eye, field)


def invert_map(phi, degree=None):
    """Compositional inverse of a map fixing the origin.

    Precision is raised one weighted degree at a time; at each step a
    fixed-point iteration ``psi = A^{-1} (y - N(psi))`` is run until it
    stabilizes, which also covers weighted maps whose leading part is a
    triangular polynomial map.
    """
    if not isinstance(phi, JetMap):
        phi = JetMap(phi)
    n = phi.nvars
    if len(phi) != n:
        raise DimensionMismatch("invert_map needs a square map")
    field = phi.field
    w = phi.weights
    D = phi.degree if degree is None else min(degree, phi.degree)
    for c in phi:
        if not field.is_zero(c.const_term()):
            raise PreconditionError("map does not fix the origin")
    for i, c in enumerate(phi):
        if c.valuation() < w[i]:
            raise SingularLinearPart("component has valuation below its weight")
    A = phi.linear_matrix()
    Ainv = invert_matrix(A, field)
    ys = Jet.variables(n, D, w, field)
    N = []
    for i, c in enumerate(phi):
        e_lin = {}
        for j in range(n):
            if w[j] == w[i]:
                e = [0] * n
                e[j] = 1
                e_lin[tuple(e)] = True
        N.append(c.part_where(lambda e, d=e_lin: tuple(e) not in d).truncate(D))
    wmin = min(x for x in w if x > 0)
    psi = [sum((ys[j] * Ainv[i][j] for j in range(n) if not field.is_zero(Ainv[i][j])),
               ys[0].zero_like()) for i in range(n)]
    for p in range(wmin, D + 1):
        ysp = [y.truncate(p) for y in ys]
        cur = [q.truncate(p) for q in psi]
        for _ in range(4 * n + 8):
            nv = [q.lift(p) for q in cur]
            vals = [compose(N[i].truncate(p), nv, p) for i in range(n)]
            rhs = [(ysp[i] - vals[i]).lift(p).truncate(p) for i in range(n)]
            new = []
            for i in range(n):
                acc = ysp[0].zero_like()
                for j in range(n):
                    if not field.is_zero(Ainv[i][j]):
                        acc = acc + rhs[j] * Ainv[i][j]
                new.append(acc.lift(p).truncate(p))
            if all(a.equal_mod(b, p) for a, b in zip(new, cur)):
                break
            cur = new
        else:
            raise SingularLinearPart("inversion fixed point did not stabilize")
        psi = cur
    return JetMap(q.lift(D).truncate(D) for q in psi)


def hensel_solve(S, y0, degree=None):
    """Solve ``S(x, g(x)) = 0`` with ``g(0) = y0``; ``y`` is the last variable.

    When ``y0 != 0`` the last variable must have weight 0 so that the
    substitution ``y -> g`` is graded.
    """
    field = S.field
    y0 = field(y0)
    m = S.nvars - 1
    wy = S.weights[-1]
    if not field.is_zero(y0) and wy != 0:
        raise PreconditionError("nonzero start value needs a weight-0 unknown")
    wx = S.weights[:-1]
    D = S.degree if degree is None else degree
    Sy = S.deriv(m)
    at0 = _eval_last(S, y0)
    if not field.is_zero(at0):
        raise PreconditionError("S(0, y0) != 0")
    d0 = _eval_last(Sy, y0)
    if field.is_zero(d0):
        raise DegenerateJacobian("dS/dy vanishes at the start point")
    xs = list(Jet.variables(m, D, wx, field))
    g = Jet.const(y0, m, D, wx, field)
    inv0 = field.one / d0
    # simple contraction g <- g - S(x,g)/S_y(0,y0); one degree per sweep
    prev = None
    for _ in range(2 * D + 4):
        r = compose(S, xs + [g], D)
        if r.is_zero():
            break
        if prev is not None and r.valuation() <= prev:
            # Newton step with full derivative for robustness
            dv = compose(Sy, xs + [g], D)
            g = (g - r * dv.reciprocal()).truncate(D)
        else:
            g = (g - r * inv0).truncate(D)
        prev = r.valuation()
    r = compose(S, xs + [g], D)
    if not r.is_zero():
        raise DegenerateJacobian("Hensel iteration did not converge")
    return g.lift(D).truncate(min(D, r.degree)) if r.degree < D else g


def _eval_last(J, y0):
    """Constant term of ``J(0, y0)`` for the last variable set to ``y0``."""
    tot = J.field.zero
    for e, c in J.coeffs.items():
        if all(a == 0 for a in e[:-1]):
            tot += c * y0 ** e[-1]
    return tot


def even_odd_split(f, i):
    """``f = h1(x, u) + x_i * h2(x, u)`` with ``u = x_i**2`` put in slot ``i``."""
    w = list(f.weights)
    wi = w[i]
    w[i] = 2 * wi
    h1, h2 = {}, {}
    for e, c in f.coeffs.items():
        g = list(e)
        if e[i] % 2 == 0:
            g[i] = e[i] // 2
            h1[tuple(g)] = c
        else:
            g[i] = (e[i] - 1) // 2
            h2[tuple(g)] = c
    return (Jet(f.nvars, f.degree, h1, w, f.field),
            Jet(f.nvars, f.degree - wi, h2, w, f.field))


def divmod_monic(f, i, lower):
    """Divide ``f`` by the monic polynomial ``x_i**m + sum lower[k] x_i**k``.

    ``lower`` lists ``m`` jets free of ``x_i``.  Returns ``(q, r)`` with
    ``f = q p + r`` and ``r`` of degree below ``m`` in ``x_i``.
    """
    m = len(lower)
    wi = f.weights[i]
    n = f.nvars
    P = f.degree
    rem = dict(f.coeffs)
    q = {}
    lowers = [l.truncate(P).coeffs for l in lower]
    w = f.weights
    while True:
        top = max((e[i] for e in rem), default=-1)
        if top < m:
            break
        layer = {e: c for e, c in rem.items() if e[i] == top}
        for e, c in layer.items():
            g = list(e)
            g[i] = top - m
            g = tuple(g)
            q[g] = q.get(g, 0) + c
            del rem[e]
            for k, lk in enumerate(lowers):
                for el, cl in lk.items():
                    h = list(map(add, g, el))
                    h[i] += k
                    h = tuple(h)
                    if wdeg(h, w) <= P:
                        v = rem.get(h, 0) - c * cl
                        if v == 0:
                            rem.pop(h, None)
                        else:
                            rem[h] = v
    qd = {e: c for e, c in q.items() if c != 0}
    return (Jet(n, P - m * wi, qd, w, f.field), Jet(n, P, rem, w, f.field))


class Preparation(NamedTuple):
    unit: Jet
    c1: Jet
    c0: Jet
    change: JetMap


def weierstrass_prepare(f, i=0):
    """Formal Weierstrass preparation of order 2 in the variable ``x_i``.

    Returns ``(unit, c1, c0, change)`` with ``f = unit*(x_i**2 + c1 x_i + c0)``,
    ``c1``, ``c0`` free of ``x_i`` and vanishing at 0.  ``change`` expresses
    new coordinates in terms of old ones; in the new coordinates the zero
    set of ``f`` is ``{x_i**2 = x_k}`` with ``k = preparation_index(c1, c0, i)``.

    The division is graded by giving ``x_i`` weight 1 and the other
    variables weight 2.  Inputs graded otherwise are regraded, which halves
    the precision of the result in the worst case.
    """
    w = f.weights
    n = f.nvars
    good = tuple(1 if j == i else 2 for j in range(n))
    if all(w[j] >= 2 * w[i] for j in range(n) if j != i):
        return _prepare_graded(f, i)
    g = f.reweight(good)
    res = _prepare_graded(g, i)
    back = lambda J: J.reweight(w)
    return Preparation(back(res.unit), back(res.c1), back(res.c0),
                       JetMap(back(c) for c in res.change))


def preparation_index(c1, c0, i):
    """First variable on which ``c1**2/4 - c0`` depends linearly (or None)."""
    msq = c1 * c1 * c1.field(Fraction(1, 4)) - c0
    for j in range(msq.nvars):
        if j != i and not msq.field.is_zero(msq.linear_coeff(j)):
            return j
    return None


def _prepare_graded(f, i):
    field = f.field
    n = f.nvars
    axis = f.part_where(lambda e: all(a == 0 for j, a in enumerate(e) if j != i))
    order = min((e[i] for e in axis.coeffs), default=None)
    if order != 2:
        raise WrongOrder(f"order along the axis is {order}, expected 2")
    P = f.degree
    wi = f.weights[i]
    vd = {}
    for e, c in axis.coeffs.items():
        g = list(e)
        g[i] -= 2
        vd[tuple(g)] = c
    vinv = Jet(n, P - 2 * wi, vd, f.weights, field).reciprocal()
    f1 = f - axis
    th = Jet.var(i, n, P, f.weights, field)
    t2 = th * th

    def alpha(g):
        out = {}
        for e, c in g.coeffs.items():
            if e[i] >= 2:
                h = list(e)
                h[i] -= 2
                out[tuple(h)] = c
        return Jet(n, g.degree - 2 * wi, out, g.weights, field)

    # s = q v solves s = alpha(x_i^2 - (s/v) f1)
    s = alpha(t2)
    for _ in range(2 * P + 4):
        s_new = alpha(t2 - s * vinv * f1)
        if s_new.equal_mod(s, s_new.degree):
            s = s_new
            break
        s = s_new
    else:
        raise WrongOrder("Weierstrass division did not stabilize")
    q = s * vinv
    r = (t2 - q * f1).part_where(lambda e: e[i] < 2)
    unit = q.reciprocal()
    c1 = (-r).coefficient_in(i, 1)
    c0 = (-r).coefficient_in(i, 0)
    check = unit * (t2 + c1 * th + c0)
    if not check.equal_mod(f, min(check.degree, f.degree)):
        raise WrongOrder("Weierstrass preparation failed to verify")
    comps = list(Jet.variables(n, P, f.weights, field))
    comps[i] = comps[i] + c1 * field(Fraction(1, 2))
    k = preparation_index(c1, c0, i)
    if k is not None:
        comps[k] = (c1 * c1 * field(Fraction(1, 4)) - c0).lift(P)
    return Preparation(unit, c1, c0, JetMap(comps))
