"""Linear algebra of the 1-jet of a conformal field.

Matrices are lists of rows over the rationals.  A linear field ``L`` acts
as ``X_i = sum_j L[i][j] x_j``.  A constant 2-form is its antisymmetric
matrix ``W`` (``W[i][j]`` is the coefficient of ``dx_i ^ dx_j``) and the
linear Liouville condition reads ``L^T W + W L = W``.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy

from . import linalg as la
from .change import CoordinateChange
from .errors import (
    FloatModeRefused,
    IrrationalSpectrum,
    NotConformal,
    UnclassifiableNilpotent,
)
from .exterior import KForm, VectorField, interior
from .jets import DEFAULT_DEGREE, Jet
from .scalar import EXACT, mpq
from .spectrum import Block, Eigenvalue, SpectralData

HALF = mpq(1, 2)


def _check_exact(field):
    if not field.exact:
        raise FloatModeRefused("exact rational arithmetic is required here")


def as_matrix(M):
    return [[mpq(Fraction(x) if isinstance(x, (float, str)) else x) for x in r] for r in M]


def liouville_defect(L, W):
    """``L^T W + W L - W`` (zero iff ``L`` is a linear Liouville field of ``W``)."""
    return la.sub(la.add(la.matmul(la.transpose(L), W), la.matmul(W, L)), W)


def sn_decompose(L, field=EXACT):
    """Jordan-Chevalley decomposition ``L = S + N`` computed rationally.

    ``S`` is obtained as a polynomial in ``L`` by Newton iteration on the
    squarefree part of the characteristic polynomial, so no eigenvalue is
    ever extracted.
    """
    _check_exact(field)
    L = as_matrix(L)
    n = len(L)
    p = la.charpoly(L)
    t = p.gens[0]
    g = sympy.gcd(p, p.diff(t))
    q = sympy.quo(p, g)
    dq = q.diff(t)
    S = [list(r) for r in L]
    for _ in range(n + 2):
        qS = la.poly_at_matrix(q, S)
        if la.is_zero(qS):
            break
        S = la.sub(S, la.matmul(qS, la.inverse(la.poly_at_matrix(dq, S))))
    N = la.sub(L, S)
    return S, N


def _rational_roots(p, constants=()):
    """Roots of a rational polynomial with multiplicity, as Eigenvalues."""
    roots = []
    _, factors = sympy.factor_list(p.as_expr(), p.gens[0])
    t = p.gens[0]
    for fac, mult in factors:
        fp = sympy.Poly(fac, t)
        if fp.degree() == 1:
            a, b = fp.all_coeffs()
            r = sympy.Rational(-b, a)
            roots += [Eigenvalue.rational(mpq(int(r.p), int(r.q)), constants)] * mult
        elif fp.degree() == 2 and constants:
            pair = _match_quadratic(fp, constants)
            if pair is None:
                raise IrrationalSpectrum(f"factor {fac} not expressible in declared constants")
            roots += list(pair) * mult
        else:
            raise IrrationalSpectrum(f"characteristic factor {fac} has no rational roots")
    return roots


def _match_quadratic(fp, constants):
    a, b, c = [sympy.Rational(x) for x in fp.all_coeffs()]
    b, c = b / a, c / a
    disc = b * b / 4 - c
    with mpmath.workdps(50):
        root = mpmath.sqrt(mpmath.mpf(disc.p) / disc.q)
        for k, const in enumerate(constants):
            ratio = root / mpmath.mpc(const.value)
            if abs(ratio.imag) > mpmath.mpf(10) ** -30:
                continue
            fr = Fraction(str(mpmath.nstr(ratio.real, 40))).limit_denominator(10 ** 6)
            if abs(ratio.real - mpmath.mpf(fr.numerator) / fr.denominator) > mpmath.mpf(10) ** -25:
                continue
            base = -b / 2
            v0 = mpq(int(base.p), int(base.q))
            r1 = mpq(fr)
            vec_p = [v0] + [mpq(0)] * len(constants)
            vec_m = list(vec_p)
            vec_p[k + 1] = r1
            vec_m[k + 1] = -r1
            return (Eigenvalue(tuple(vec_p), tuple(constants)),
                    Eigenvalue(tuple(vec_m), tuple(constants)))
    return None


def _representative(lam):
    """Pick the member of ``{lam, 1-lam}`` placed in the first half."""
    comp = lam.complement()
    return lam if lam.sort_key() >= comp.sort_key() else comp


def eigen_structure(L, constants=(), field=EXACT):
    """Eigenvalues with multiplicity, canonically ordered.

    When the multiset is invariant under ``lam -> 1 - lam`` the result is
    ordered so that ``lam_i + lam_{n+i} = 1`` with the representatives
    (ascending) in the first half; otherwise it is sorted descending.
    """
    _check_exact(field)
    L = as_matrix(L)
    roots = _rational_roots(la.charpoly(L), tuple(constants))
    ordered = _pair_order(roots)
    if ordered is None:
        ordered = sorted(roots, key=lambda e: e.sort_key(), reverse=True)
    return SpectralData.from_values(ordered, tuple(constants))


def _pair_order(roots):
    pool = list(roots)
    if len(pool) % 2:
        return None
    reps = []
    partners = []
    pool.sort(key=lambda e: e.sort_key(), reverse=True)
    while pool:
        lam = pool.pop(0)
        comp = lam.complement()
        idx = next((i for i, e in enumerate(pool) if e.vec == comp.vec), None)
        if idx is None:
            return None
        mate = pool.pop(idx)
        rep = _representative(lam)
        reps.append(rep)
        partners.append(mate if rep is lam else lam)
    order = sorted(range(len(reps)), key=lambda i: reps[i].sort_key())
    return [reps[i] for i in order] + [partners[i] for i in order]


def conformal_block_structure(L, omega0, field=EXACT):
    """Group the spectrum into the paired blocks ``[[lam]]``."""
    _check_exact(field)
    L = as_matrix(L)
    W = as_matrix(omega0)
    if not la.is_zero(liouville_defect(L, W)):
        raise NotConformal("L is not a linear Liouville field of omega0")
    sd = eigen_structure(L, field=field)
    if sd.pairing is None:
        raise NotConformal("spectrum is not paired by lam -> 1 - lam")
    n = sd.dim // 2
    blocks = []
    i = 0
    while i < n:
        lam = sd.eigenvalues[i]
        j = i
        while j < n and sd.eigenvalues[j].vec == lam.vec:
            j += 1
        blocks.append(Block(lam, i, j - i, tag="[[{}]]".format(lam.to_str())))
        i = j
    sd.blocks = blocks
    return sd


def jordan_chains(N, basis):
    """Jordan chains of a nilpotent ``N`` restricted to ``span(basis)``.

    Returns chains ``[e_1, ..., e_k]`` with ``N e_1 = 0`` and
    ``N e_{i+1} = e_i``, longest first.
    """
    if not basis:
        return []
    dim = len(basis)
    kernels = [[]]
    k = 0
    while True:
        k += 1
        Nk = la.power(N, k)
        imgs = [la.matvec(Nk, v) for v in basis]
        coeffs = la.nullspace(la.columns(imgs)) if any(any(x != 0 for x in v) for v in imgs) \
            else [[mpq(1) if a == b else mpq(0) for a in range(dim)] for b in range(dim)]
        K = [_lin_comb(basis, c) for c in coeffs]
        kernels.append(K)
        if len(K) == dim:
            break
    chosen = []
    for j in range(k, 0, -1):
        span = list(kernels[j - 1])
        for top, length in chosen:
            if length >= j:
                span.append(la.matvec(la.power(N, length - j), top))
        r = la.rank(span) if span else 0
        for v in kernels[j]:
            trial = span + [v]
            r2 = la.rank(trial)
            if r2 > r:
                chosen.append((v, j))
                span, r = trial, r2
    chains = []
    for top, length in chosen:
        chain = [top]
        for _ in range(length - 1):
            chain.append(la.matvec(N, chain[-1]))
        chains.append(list(reversed(chain)))
    return chains


def _lin_comb(vectors, coeffs):
    n = len(vectors[0])
    out = [mpq(0)] * n
    for c, v in zip(coeffs, vectors):
        if c != 0:
            out = [a + c * b for a, b in zip(out, v)]
    return out


def _bil(W, u, v):
    return sum(u[i] * W[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] != 0 and v[j] != 0)


def _generalized_eigenspace(L, lam, mult):
    n = len(L)
    M = [[L[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    return la.nullspace(la.power(M, mult)), M


def _squarefree_class(q):
    """Representative of ``q`` modulo nonzero rational squares (sign times squarefree)."""
    q = mpq(q)
    num = int(q.numerator) * int(q.denominator)
    sign = -1 if num < 0 else 1
    num = abs(num)
    out = 1
    for p, e in sympy.factorint(num).items():
        if e % 2:
            out *= p
    r = sign * out
    t2 = mpq(r) / q
    return mpq(r), t2


def _split_half_block(N, W, basis):
    """Decompose the ``lam = 1/2`` space into indecomposable pieces.

    Returns a list of ``(tag, m, a_vectors, b_vectors, q)``.
    """
    pieces = []
    V = [list(v) for v in basis]
    while V:
        dim = len(V)
        k = 1
        while any(any(x != 0 for x in la.matvec(la.power(N, k), v)) for v in V):
            k += 1
        Nk1 = la.power(N, k - 1)
        if k % 2 == 0:
            u = _find_symmetric(V, lambda x, y: _bil(W, x, la.matvec(Nk1, y)))
            c = _bil(W, u, la.matvec(Nk1, u))
            for r in range(k - 3, 0, -2):
                p = k - 1 - r
                br = _bil(W, u, la.matvec(la.power(N, r), u))
                if br != 0:
                    a = -br / (2 * c)
                    u = [x + a * y for x, y in zip(u, la.matvec(la.power(N, p), u))]
            c = _bil(W, u, la.matvec(Nk1, u))
            m = k // 2
            chain = [u]
            for _ in range(k - 1):
                chain.append(la.matvec(N, chain[-1]))
            if m == 1:
                # Q = q b^2, chain b -> a with N b = 2 q a
                qraw = -c / 2
                qc, t2 = _squarefree_class(qraw)
                t = _sqrt_rational(t2)
                b = [x * t for x in u]
                a = [x / (2 * qc) for x in la.matvec(N, b)]
                pieces.append(("HalfSquare", 1, [a], [b], qc))
            else:
                qraw = c / mpq(2) ** (2 * m - 1)
                qc, t2 = _squarefree_class(qraw)
                t = _sqrt_rational(t2)
                chain = [[x * t for x in v] for v in chain]
                a = [[x / mpq(2) ** j for x in chain[j]] for j in range(m)]
                bm = [x / ((-1) ** (m + 1) * mpq(2) ** m * qc) for x in chain[m]]
                b = [None] * m
                b[m - 1] = bm
                for pidx in range(1, m):
                    b[m - 1 - pidx] = [x / mpq(-2) ** pidx for x in la.matvec(la.power(N, pidx), bm)]
                pieces.append(("HalfChainSquare", m, a, b, qc))
            span = chain
        else:
            u, w = _find_pair(V, lambda x, y: _bil(W, x, la.matvec(Nk1, y)))
            Np = [la.power(N, j) for j in range(k)]

            def B(x, j, y):
                return _bil(W, x, la.matvec(Np[j], y)) if j < k else mpq(0)

            bw = B(u, k - 1, w)
            w = [x / bw for x in w]
            for r in range(k - 2, 0, -1):
                if r % 2 == 0:
                    continue
                p = k - 1 - r
                ar = B(u, r, u)
                if ar != 0:
                    u = [x + (-ar / 2) * y for x, y in zip(u, la.matvec(Np[p], w))]
            for r in range(k - 2, 0, -1):
                if r % 2 == 0:
                    continue
                p = k - 1 - r
                cr = B(w, r, w)
                if cr != 0:
                    w = [x + (cr / 2) * y for x, y in zip(w, la.matvec(Np[p], u))]
            nb = B(u, k - 1, w)
            w = [x / nb for x in w]
            for r in range(k - 2, -1, -1):
                er = B(u, r, w)
                if er != 0:
                    p = k - 1 - r
                    w = [x - er * y for x, y in zip(w, la.matvec(Np[p], w))]
            m = k
            a = [[x / mpq(2) ** j for x in la.matvec(Np[j], u)] for j in range(m)]
            # b_m = s w with B(a_1, N^{m-1} b_m) = 2^{m-1}
            s = mpq(2) ** (m - 1) / B(u, m - 1, w)
            bm = [x * s for x in w]
            b = [[x / mpq(-2) ** (m - 1 - j) for x in la.matvec(Np[m - 1 - j], bm)] for j in range(m)]
            pieces.append(("HalfChainOdd" if m >= 3 else "Zero", m, a, b, None))
            span = [la.matvec(Np[j], u) for j in range(k)] + [la.matvec(Np[j], w) for j in range(k)]
        V = _symplectic_complement(W, V, span)
        if len(V) >= dim:
            raise UnclassifiableNilpotent("lam = 1/2 splitting made no progress")
    return pieces


def _sqrt_rational(x):
    return EXACT.root(x, 2)


def _find_symmetric(V, form):
    for v in V:
        if form(v, v) != 0:
            return list(v)
    for i in range(len(V)):
        for j in range(i + 1, len(V)):
            s = [a + b for a, b in zip(V[i], V[j])]
            if form(s, s) != 0:
                return s
    raise UnclassifiableNilpotent("no vector with nonzero top pairing")


def _find_pair(V, form):
    for v in V:
        for w in V:
            if form(v, w) != 0:
                return list(v), list(w)
    raise UnclassifiableNilpotent("no pair with nonzero top pairing")


def _symplectic_complement(W, V, span):
    """Basis of ``{v in span(V) : B(s, v) = 0 for s in span}``."""
    rows = [[_bil(W, s, v) for v in V] for s in span]
    coeffs = la.nullspace(rows)
    return [_lin_comb(V, c) for c in coeffs]


@dataclass
class LinearNormalization:
    change: CoordinateChange
    spectral: SpectralData
    T: list
    Tinv: list


def canonical_linear_coords(L, omega0, degree=DEFAULT_DEGREE, field=EXACT, constants=()):
    """Linear symplectic coordinates putting ``L`` in block normal form.

    Afterwards ``omega0 = sum dx_i ^ dx_{n+i}``, the semisimple part is
    diagonal with the representatives of each pair ``(lam, 1-lam)`` in the
    first half, and the nilpotent part has the chain shape of the normal
    form.  Returns a :class:`CoordinateChange` with the block data in
    ``change.meta["spectral"]``.
    """
    res = canonical_linear_data(L, omega0, degree, field)
    return res.change


def canonical_linear_data(L, omega0, degree=DEFAULT_DEGREE, field=EXACT):
    _check_exact(field)
    L = as_matrix(L)
    W = as_matrix(omega0)
    sd = conformal_block_structure(L, W, field)
    n = sd.dim // 2
    distinct = []
    for e in sd.eigenvalues[:n]:
        if not distinct or distinct[-1].vec != e.vec:
            distinct.append(e)
    firsts, seconds, blocks = [], [], []
    for lam in distinct:
        mult = sum(1 for e in sd.eigenvalues[:n] if e.vec == lam.vec)
        lv = lam.value
        if lv == HALF:
            V, M = _generalized_eigenspace(L, HALF, 2 * mult)
            for tag, m, a, b, q in _split_half_block(M, W, V):
                blocks.append(Block(lam, len(firsts), m, tag, q))
                firsts += a
                seconds += b
        else:
            V, M = _generalized_eigenspace(L, lv, mult)
            U, _ = _generalized_eigenspace(L, 1 - lv, mult)
            chains = jordan_chains(M, V)
            es = [v for ch in chains for v in ch]
            G = [[_bil(W, e, g) for g in U] for e in es]
            Ginv = la.inverse(G)
            fs = [_lin_comb(U, [Ginv[k][j] for k in range(len(U))]) for j in range(len(es))]
            pos = 0
            for ch in chains:
                blocks.append(Block(lam, len(firsts) + pos, len(ch),
                                    "Chain" if len(ch) >= 2 else "Zero"))
                pos += len(ch)
            firsts += es
            seconds += fs
    T = la.columns(firsts + seconds)
    Tinv = la.inverse(T)
    lam_list = [b.lam for b in blocks for _ in range(b.size)]
    eig = lam_list + [x.complement() for x in lam_list]
    spectral = SpectralData.from_values(eig)
    spectral.blocks = blocks
    spectral.nilpotent_chains = [b.size for b in blocks]
    _verify_canonical(L, W, T, Tinv, spectral)
    ch = CoordinateChange.from_matrix(T, Tinv, degree, field=field,
                                      log=[{"stage": "linear", "blocks": len(blocks)}])
    ch.meta["spectral"] = spectral
    return LinearNormalization(ch, spectral, T, Tinv)


def standard_matrix(n):
    J = la.zeros(2 * n)
    for i in range(n):
        J[i][n + i] = mpq(1)
        J[n + i][i] = mpq(-1)
    return J


def _verify_canonical(L, W, T, Tinv, sd):
    n = sd.dim // 2
    Wn = la.matmul(la.transpose(T), la.matmul(W, T))
    if Wn != standard_matrix(n):
        raise UnclassifiableNilpotent("canonical basis is not symplectic")
    Ln = la.matmul(Tinv, la.matmul(L, T))
    for i in range(2 * n):
        for j in range(2 * n):
            if i != j and Ln[i][j] != 0 and sd.eigenvalues[i].vec != sd.eigenvalues[j].vec:
                raise UnclassifiableNilpotent("nilpotent part mixes eigenvalues")
        if Ln[i][i] != sd.eigenvalues[i].value:
            raise UnclassifiableNilpotent("semisimple part is not diagonal")


@dataclass
class QuadraticCase:
    tag: str
    block: int
    Q: Jet
    q: object = None

    @property
    def literal(self):
        """True when the shape matches the listed case with unit coefficient."""
        return self.q is None or self.q == 1


def quadratic_of_linear_field(Xnil, omega0):
    """``Q`` with ``i_{Xnil} omega0 = dQ`` for a linear field."""
    eta = interior(Xnil, omega0)
    n = eta.nvars
    xs = Jet.variables(n, eta.degree, eta.weights, eta.field)
    acc = xs[0].zero_like()
    for i in range(n):
        acc = acc + xs[i] * eta.coeffs[(i,)]
    return acc * HALF


def expected_quadratic(tag, start, size, n, q=None, degree=DEFAULT_DEGREE):
    """The listed quadratic for a block (0-based ``start``) in ``2n`` variables."""
    xs = Jet.variables(2 * n, degree)
    Q = xs[0].zero_like()
    a = lambda j: xs[start + j]
    b = lambda j: xs[n + start + j]
    if tag == "Chain":
        for j in range(size - 1):
            Q = Q + a(j + 1) * b(j)
    elif tag == "HalfSquare":
        Q = b(0) * b(0) * (1 if q is None else q)
    elif tag in ("HalfChainSquare", "HalfChainOdd"):
        for j in range(size - 1):
            Q = Q + a(j) * b(j + 1) * 2
        if tag == "HalfChainSquare":
            Q = Q + a(size - 1) * a(size - 1) * ((-1) ** size * (1 if q is None else q))
    return Q


def _block_vars(block, n):
    idx = set(range(block.start, block.start + block.size))
    return idx | {n + i for i in idx}


def classify_quadratic(block, Xnil, omega0, block_index=0):
    """Identify the quadratic ``Q`` of one block with a listed case."""
    n = omega0.nvars // 2
    Q = quadratic_of_linear_field(Xnil, omega0)
    own = _block_vars(block, n)
    Qb = Q.part_where(lambda e: any(e[i] for i in own))
    if any(any(e[i] for i in range(2 * n) if i not in own) for e in Qb.coeffs):
        raise UnclassifiableNilpotent("quadratic couples different blocks")
    lam = block.lam.value if block.lam.is_rational() else None
    if Qb.is_zero():
        return QuadraticCase("Zero", block_index, Qb)
    candidates = ["Chain"] if lam != HALF else ["HalfSquare", "HalfChainSquare", "HalfChainOdd"]
    for tag in candidates:
        if tag == "HalfSquare" and block.size != 1:
            continue
        if tag == "HalfChainOdd" and (block.size < 3 or block.size % 2 == 0):
            continue
        q = None
        if tag == "HalfSquare":
            e = [0] * (2 * n)
            e[n + block.start] = 2
            q = Qb.coeff(e)
            if q == 0:
                continue
        elif tag == "HalfChainSquare":
            e = [0] * (2 * n)
            e[block.start + block.size - 1] = 2
            q = Qb.coeff(e) * (-1) ** block.size
            if q == 0:
                continue
        exp = expected_quadratic(tag, block.start, block.size, n, q, Qb.degree)
        if exp.equal_mod(Qb, 2):
            return QuadraticCase(tag, block_index, Qb, q)
    raise UnclassifiableNilpotent(f"block {block_index} quadratic matches no listed case")


def nilpotent_field(L, degree=DEFAULT_DEGREE, field=EXACT):
    """Linear field of the nilpotent part of ``L``."""
    _, N = sn_decompose(L, field)
    return VectorField.linear(N, degree, field=field)


def constant_form(W, degree=DEFAULT_DEGREE):
    return KForm.constant_two_form(W, degree=degree)
