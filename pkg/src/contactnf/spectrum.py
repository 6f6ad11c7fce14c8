"""Eigenvalues as exact vectors over declared constants.

An eigenvalue is stored as a tuple ``(r0, r1, ..., rm)`` of rationals
meaning ``r0 + r1*c1 + ... + rm*cm`` where the ``ck`` are user-declared
constants.  Declared constants are assumed linearly independent over the
rationals together with 1, so all resonance questions become exact linear
algebra.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath
import sympy

from .errors import PreconditionError, RequiresExactSpectrum
from .scalar import mpq


@dataclass(frozen=True)
class DeclaredConstant:
    """A named constant with a numerical value (real or purely imaginary)."""

    name: str
    value: complex
    label: str = ""

    @property
    def imaginary(self):
        return self.value.real == 0 and self.value.imag != 0

    @classmethod
    def parse(cls, text):
        """Parse ``name=value[:label]``; ``value`` may end in ``j`` or ``i``."""
        name, _, rest = text.partition("=")
        val, _, label = rest.partition(":")
        val = val.strip()
        if val.endswith("i"):
            val = val[:-1] + "j"
        if val in ("j", "+j"):
            val = "1j"
        if val == "-j":
            val = "-1j"
        return cls(name.strip(), complex(val), label.strip())


def parse_constants(text):
    if not text:
        return ()
    return tuple(DeclaredConstant.parse(t) for t in text.split(",") if t.strip())


@dataclass(frozen=True)
class Eigenvalue:
    vec: tuple
    constants: tuple = ()

    @classmethod
    def rational(cls, r, constants=()):
        return cls((mpq(r),) + (mpq(0),) * len(constants), tuple(constants))

    @classmethod
    def parse(cls, text, constants=()):
        syms = {c.name: sympy.Symbol(c.name) for c in constants}
        expr = sympy.sympify(str(text), locals=syms)
        expr = sympy.expand(expr)
        poly = sympy.Poly(expr, *[syms[c.name] for c in constants]) if constants else None
        if poly is None:
            r = sympy.Rational(expr)
            return cls.rational(mpq(int(r.p), int(r.q)))
        if poly.total_degree() > 1:
            raise PreconditionError(f"eigenvalue {text} is not linear in the constants")
        vec = []
        base = poly.coeff_monomial(1)
        for v in [base] + [poly.coeff_monomial(syms[c.name]) for c in constants]:
            v = sympy.Rational(v)
            vec.append(mpq(int(v.p), int(v.q)))
        return cls(tuple(vec), tuple(constants))

    def is_rational(self):
        return all(x == 0 for x in self.vec[1:])

    @property
    def value(self):
        if not self.is_rational():
            raise RequiresExactSpectrum("eigenvalue is not rational")
        return self.vec[0]

    def approx(self):
        z = complex(float(self.vec[0]))
        for r, c in zip(self.vec[1:], self.constants):
            z += float(r) * c.value
        return z

    def mp_approx(self, dps=40):
        with mpmath.workdps(dps):
            z = mpmath.mpc(mpmath.mpf(int(self.vec[0].numerator)) / int(self.vec[0].denominator))
            for r, c in zip(self.vec[1:], self.constants):
                z += mpmath.mpf(int(r.numerator)) / int(r.denominator) * mpmath.mpc(c.value)
            return z

    def real_part_vec(self):
        """Coefficient vector of the real part (imaginary constants dropped)."""
        out = [self.vec[0]]
        for r, c in zip(self.vec[1:], self.constants):
            out.append(mpq(0) if c.imaginary else r)
        return tuple(out)

    def complement(self):
        """``1 - lambda``."""
        return Eigenvalue((1 - self.vec[0],) + tuple(-x for x in self.vec[1:]), self.constants)

    def __add__(self, other):
        return Eigenvalue(tuple(a + b for a, b in zip(self.vec, other.vec)), self.constants)

    def __sub__(self, other):
        return Eigenvalue(tuple(a - b for a, b in zip(self.vec, other.vec)), self.constants)

    def scaled(self, k):
        return Eigenvalue(tuple(a * k for a in self.vec), self.constants)

    def is_zero(self):
        return all(x == 0 for x in self.vec)

    def sort_key(self):
        z = self.approx()
        return (round(z.real, 12), round(z.imag, 12), self.vec)

    def to_str(self):
        parts = []
        for k, r in enumerate(self.vec):
            if r == 0:
                continue
            rs = str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"
            if k == 0:
                parts.append(rs)
            else:
                nm = self.constants[k - 1].name
                parts.append(nm if rs == "1" else (f"-{nm}" if rs == "-1" else f"{rs}*{nm}"))
        if not parts:
            return "0"
        s = parts[0]
        for p in parts[1:]:
            s += p if p.startswith("-") else "+" + p
        return s

    def __repr__(self):
        return f"Eigenvalue({self.to_str()})"


@dataclass
class Block:
    """One indecomposable piece of the linear part.

    ``start`` is the 0-based index of its first coordinate in the first
    half; it occupies ``start .. start+size-1`` and the partners
    ``n+start .. n+start+size-1``.
    """

    lam: Eigenvalue
    start: int
    size: int
    tag: str = "Zero"
    q: object = None


@dataclass
class SpectralData:
    eigenvalues: list
    constants: tuple = ()
    pairing: list = None
    blocks: list = dc_field(default_factory=list)
    nilpotent_chains: list = dc_field(default_factory=list)

    @classmethod
    def from_values(cls, values, constants=()):
        """Build from rationals or strings such as ``"1-s"``."""
        constants = tuple(constants)
        eig = []
        for v in values:
            if isinstance(v, Eigenvalue):
                eig.append(v)
            elif isinstance(v, str):
                eig.append(Eigenvalue.parse(v, constants))
            else:
                eig.append(Eigenvalue.rational(mpq(Fraction(v) if isinstance(v, float) else v),
                                               constants))
        sd = cls(eig, constants)
        sd.pairing = sd._detect_pairing()
        return sd

    @property
    def dim(self):
        return len(self.eigenvalues)

    def is_rational(self):
        return all(e.is_rational() for e in self.eigenvalues)

    def rational_values(self):
        return [e.value for e in self.eigenvalues]

    def vectors(self):
        return [e.vec for e in self.eigenvalues]

    def _detect_pairing(self):
        n2 = len(self.eigenvalues)
        if n2 % 2:
            return None
        n = n2 // 2
        pairs = [(i, n + i) for i in range(n)]
        ok = all((self.eigenvalues[i] + self.eigenvalues[j]).vec ==
                 Eigenvalue.rational(1, self.constants).vec for i, j in pairs)
        return pairs if ok else None

    def as_strings(self):
        return [e.to_str() for e in self.eigenvalues]

    @property
    def block_starts(self):
        """The integers ``n_1 = 1 < ... < n_{k+1} = n + 1`` (1-based)."""
        n = self.dim // 2
        return [b.start + 1 for b in self.blocks] + [n + 1]
