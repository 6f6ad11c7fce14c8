"""Differential forms and vector fields with jet coefficients.

A :class:`KForm` of grade ``k`` stores one coefficient jet for every
increasing index tuple ``J``; the term is ``c_J dx_{j1} ^ ... ^ dx_{jk}``.
Each coefficient keeps its own precision.  The precision of the form is
``min_J (deg c_J + w(J))`` where ``w(J)`` sums the weights of the
differentials, a quantity that ``d`` and pullbacks preserve.

A :class:`VectorField` is a list of component jets ``X_i`` for ``X_i d/dx_i``.
"""

from itertools import combinations

from .errors import DimensionMismatch
from .jets import DEFAULT_DEGREE, Jet, JetMap, compose
from .scalar import EXACT


def sort_sign(seq):
    """``(sign, sorted tuple)`` of a sequence of indices, sign 0 if repeated."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


class KForm:
    """A differential ``k``-form on a single chart around the origin."""

    __slots__ = ("grade", "nvars", "weights", "field", "coeffs")
    __hash__ = None

    def __init__(self, grade, coeffs, nvars=None, degree=DEFAULT_DEGREE, weights=None, field=None):
        coeffs = dict(coeffs)
        sample = next((c for c in coeffs.values() if isinstance(c, Jet)), None)
        if nvars is None:
            if sample is None:
                raise DimensionMismatch("cannot infer the number of variables")
            nvars = sample.nvars
        if weights is None:
            weights = sample.weights if sample is not None else (1,) * nvars
        if field is None:
            field = sample.field if sample is not None else EXACT
        self.grade = grade
        self.nvars = nvars
        self.weights = tuple(weights)
        self.field = field
        full = {}
        for J, c in coeffs.items():
            s, K = sort_sign(J)
            if s == 0:
                continue
            if not isinstance(c, Jet):
                c = Jet.const(c, nvars, degree - self._w(K), self.weights, field)
            elif c.nvars != nvars or c.weights != self.weights:
                raise DimensionMismatch("coefficient ring differs from form ring")
            c = c if s == 1 else -c
            full[K] = full[K] + c if K in full else c
        for K in combinations(range(nvars), grade):
            if K not in full:
                full[K] = Jet.zero(nvars, degree - self._w(K), self.weights, field)
        self.coeffs = full

    def _w(self, J):
        return sum(self.weights[j] for j in J)

    # construction --------------------------------------------------------
    @classmethod
    def zero(cls, grade, nvars, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        return cls(grade, {}, nvars, degree, weights, field)

    @classmethod
    def function(cls, f):
        return cls(0, {(): f})

    @classmethod
    def one_form(cls, comps):
        """``sum comps[i] dx_i`` from a list of jets."""
        return cls(1, {(i,): c for i, c in enumerate(comps)})

    @classmethod
    def constant_two_form(cls, matrix, nvars=None, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        """``sum_{i<j} W_ij dx_i ^ dx_j`` from an antisymmetric matrix."""
        n = len(matrix) if nvars is None else nvars
        co = {}
        for i in range(n):
            for j in range(i + 1, n):
                if matrix[i][j] != 0:
                    co[(i, j)] = matrix[i][j]
        return cls(2, co, n, degree, weights, field)

    @classmethod
    def canonical(cls, npairs, degree=DEFAULT_DEGREE, offset=0, nvars=None, weights=None, field=EXACT):
        """``sum dx_{o+i} ^ dx_{o+n+i}`` on ``nvars`` variables."""
        nv = 2 * npairs + offset if nvars is None else nvars
        co = {(offset + i, offset + npairs + i): 1 for i in range(npairs)}
        return cls(2, co, nv, degree, weights, field)

    def _like(self, grade, coeffs):
        return KForm(grade, coeffs, self.nvars, self.degree, self.weights, self.field)

    # queries -----------------------------------------------------------
    @property
    def degree(self):
        if not self.coeffs:
            return 10 ** 9
        return min(c.degree + self._w(J) for J, c in self.coeffs.items())

    def __getitem__(self, J):
        s, K = sort_sign(J if isinstance(J, tuple) else (J,))
        if s == 0:
            return Jet.zero(self.nvars, self.degree, self.weights, self.field)
        c = self.coeffs[K]
        return c if s == 1 else -c

    def component(self, i):
        """Coefficient of ``dx_i`` for a 1-form."""
        return self.coeffs[(i,)]

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs.values())

    def nonzero_items(self):
        return [(J, c) for J, c in sorted(self.coeffs.items()) if not c.is_zero()]

    def __repr__(self):
        body = ", ".join(f"{J}: {c.to_string()}" for J, c in self.nonzero_items())
        return f"KForm(grade={self.grade}, {{{body}}})"

    def __eq__(self, other):
        if not isinstance(other, KForm) or other.grade != self.grade or other.nvars != self.nvars:
            return NotImplemented
        return all(self.coeffs[J] == other.coeffs[J] for J in self.coeffs)

    def equal_mod(self, other, degree):
        """Compare the terms of total weight <= ``degree``."""
        return all(self.coeffs[J].equal_mod(other.coeffs[J], degree - self._w(J))
                   for J in self.coeffs)

    def at_origin(self):
        return {J: c.const_term() for J, c in self.coeffs.items()}

    def matrix_at_origin(self):
        """Antisymmetric matrix ``W`` with ``W_ij`` the ``dx_i ^ dx_j`` value at 0."""
        n = self.nvars
        W = [[self.field.zero] * n for _ in range(n)]
        for (i, j), c in self.coeffs.items():
            v = c.const_term()
            W[i][j] = v
            W[j][i] = -v
        return W

    # algebra -------------------------------------------------------------
    def _check(self, other):
        if self.grade != other.grade or self.nvars != other.nvars:
            raise DimensionMismatch("forms of different grade or dimension")

    def __add__(self, other):
        self._check(other)
        return self._like(self.grade, {J: c + other.coeffs[J] for J, c in self.coeffs.items()})

    def __sub__(self, other):
        self._check(other)
        return self._like(self.grade, {J: c - other.coeffs[J] for J, c in self.coeffs.items()})

    def __neg__(self):
        return self._like(self.grade, {J: -c for J, c in self.coeffs.items()})

    def __mul__(self, f):
        """Multiply by a scalar or a function jet."""
        return self._like(self.grade, {J: c * f for J, c in self.coeffs.items()})

    __rmul__ = __mul__

    def truncate(self, degree):
        return self._like(self.grade, {J: c.truncate(degree - self._w(J))
                                       for J, c in self.coeffs.items()})

    def lift(self, degree):
        return self._like(self.grade, {J: c.lift(degree - self._w(J))
                                       for J, c in self.coeffs.items()})

    def map_coeffs(self, fn):
        return self._like(self.grade, {J: fn(c) for J, c in self.coeffs.items()})


def d(form):
    """Exterior derivative."""
    n = form.nvars
    k = form.grade
    out = {}
    for J, c in form.coeffs.items():
        for i in range(n):
            if i in J:
                continue
            s, K = sort_sign((i,) + J)
            t = c.deriv(i)
            t = t if s == 1 else -t
            out[K] = out[K] + t if K in out else t
    return KForm(k + 1, out, n, form.degree, form.weights, form.field)


def wedge(a, b):
    """Graded wedge product; zero form when the grades exceed the dimension."""
    if a.nvars != b.nvars:
        raise DimensionMismatch("forms in different dimensions")
    n = a.nvars
    k = a.grade + b.grade
    deg = min(a.degree, b.degree) if k <= n else 0
    if k > n:
        return KForm(k, {}, n, deg, a.weights, a.field)
    out = {}
    bnz = [(J, c) for J, c in b.coeffs.items()]
    for I, ca in a.coeffs.items():
        for J, cb in bnz:
            if set(I) & set(J):
                continue
            s, K = sort_sign(I + J)
            t = ca * cb
            t = t if s == 1 else -t
            out[K] = out[K] + t if K in out else t
    return KForm(k, out, n, a.degree + b.degree, a.weights, a.field)


def interior(X, form):
    """Contraction of ``X`` into the first slot."""
    n = form.nvars
    if form.grade == 0:
        raise DimensionMismatch("cannot contract a 0-form")
    out = {}
    for J, c in form.coeffs.items():
        for r, j in enumerate(J):
            K = J[:r] + J[r + 1:]
            t = X[j] * c
            t = t if r % 2 == 0 else -t
            out[K] = out[K] + t if K in out else t
    return KForm(form.grade - 1, out, n, form.degree, form.weights, form.field)


class VectorField:
    """A formal vector field ``sum X_i d/dx_i``."""

    __slots__ = ("components",)
    __hash__ = None

    def __init__(self, components):
        comps = list(components)
        for c in comps[1:]:
            comps[0]._check(c)
        self.components = tuple(comps)

    @classmethod
    def zero(cls, nvars, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        return cls(Jet.zero(nvars, degree, weights, field) for _ in range(nvars))

    @classmethod
    def euler(cls, coeffs, nvars=None, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        """Diagonal linear field ``sum coeffs[i] x_i d/dx_i``."""
        n = len(coeffs) if nvars is None else nvars
        vs = Jet.variables(n, degree, weights, field)
        return cls(vs[i] * coeffs[i] for i in range(n))

    @classmethod
    def linear(cls, L, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        """Field ``X_i = sum_j L[i][j] x_j``."""
        n = len(L)
        vs = Jet.variables(n, degree, weights, field)
        comps = []
        for i in range(n):
            acc = vs[0].zero_like()
            for j in range(n):
                if L[i][j] != 0:
                    acc = acc + vs[j] * L[i][j]
            comps.append(acc)
        return cls(comps)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    @property
    def nvars(self):
        return self.components[0].nvars

    @property
    def weights(self):
        return self.components[0].weights

    @property
    def field(self):
        return self.components[0].field

    @property
    def degree(self):
        """Component precision normalized to unit weight."""
        w = self.weights
        return min(c.degree - w[i] + 1 for i, c in enumerate(self.components))

    def __repr__(self):
        return "VectorField([" + ", ".join(c.to_string() for c in self.components) + "])"

    def __eq__(self, other):
        return isinstance(other, VectorField) and len(self) == len(other) and \
            all(a == b for a, b in zip(self, other))

    def equal_mod(self, other, degree):
        w = self.weights
        return all(a.equal_mod(b, degree + w[i] - 1) for i, (a, b) in enumerate(zip(self, other)))

    def __add__(self, other):
        return VectorField(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return VectorField(a - b for a, b in zip(self, other))

    def __neg__(self):
        return VectorField(-a for a in self)

    def __mul__(self, f):
        return VectorField(a * f for a in self)

    __rmul__ = __mul__

    def truncate(self, degree):
        w = self.weights
        return VectorField(c.truncate(degree + w[i] - 1) for i, c in enumerate(self))

    def lift(self, degree):
        w = self.weights
        return VectorField(c.lift(degree + w[i] - 1) for i, c in enumerate(self))

    def apply(self, f):
        """Derivative ``X(f)`` of a function jet."""
        acc = None
        for i, c in enumerate(self.components):
            if not f.depends_on(i):
                continue
            t = c * f.deriv(i)
            acc = t if acc is None else acc + t
        if acc is None:
            return f.zero_like()
        return acc

    def value_at_origin(self):
        return [c.const_term() for c in self.components]

    def linear_matrix(self):
        n = self.nvars
        return [[c.linear_coeff(j) for j in range(n)] for c in self.components]

    def homogeneous_part(self, k):
        """Terms ``x^a d/dx_i`` with ``wdeg(a) - w_i = k - 1``."""
        w = self.weights
        return VectorField(c.homogeneous_part(k - 1 + w[i]) for i, c in enumerate(self))

    def is_zero(self):
        return all(c.is_zero() for c in self)


def bracket(X, Y):
    """Lie bracket ``[X, Y]_i = X(Y_i) - Y(X_i)``."""
    return VectorField(X.apply(b) - Y.apply(a) for a, b in zip(X, Y))


def lie_derivative(X, T):
    """Lie derivative of a form (Cartan's formula) or a field (bracket)."""
    if isinstance(T, VectorField):
        return bracket(X, T)
    if T.grade == 0:
        return KForm.function(X.apply(T.coeffs[()]))
    if T.grade == T.nvars:
        return d(interior(X, T))
    return interior(X, d(T)) + d(interior(X, T))


def pullback(phi, form):
    """Pull ``form`` back by ``phi`` (old coordinates as jets in new ones)."""
    if not isinstance(phi, JetMap):
        phi = JetMap(phi)
    if len(phi) != form.nvars:
        raise DimensionMismatch("map size differs from form dimension")
    n = phi.nvars
    k = form.grade
    dphi = [d(KForm.function(c)) for c in phi]
    top = max(c.degree for c in phi) + 1
    cache = {(): KForm.function(Jet.const(1, n, top, phi.weights, phi.field))}

    def prod(J):
        if J not in cache:
            cache[J] = wedge(prod(J[:-1]), dphi[J[-1]])
        return cache[J]

    out = None
    for J, c in form.coeffs.items():
        cf = compose(c, phi.components)
        term = prod(J) * cf
        out = term if out is None else out + term
    if out is None:
        return KForm(k, {}, n, phi.degree, phi.weights, phi.field)
    return out


def transform_field(X, forward, inverse):
    """Express ``X`` in new coordinates: ``Y_i = X(psi_i) o phi``."""
    return VectorField(compose(X.apply(p), forward.components) for p in inverse)


def one_form_components(form):
    return [form.coeffs[(i,)] for i in range(form.nvars)]


def two_form_to_matrix(form):
    """Antisymmetric matrix of jets ``W`` with ``W_ij`` the ``dx_i ^ dx_j`` coefficient."""
    n = form.nvars
    W = [[None] * n for _ in range(n)]
    deg = form.degree
    zero = Jet.zero(n, deg, form.weights, form.field)
    for i in range(n):
        W[i][i] = zero
    for (i, j), c in form.coeffs.items():
        W[i][j] = c
        W[j][i] = -c
    return W


def is_basic(form, var):
    """No ``dx_var`` component and no dependence on ``x_var``."""
    for J, c in form.coeffs.items():
        if c.is_zero():
            continue
        if var in J or c.depends_on(var):
            return False
    return True
