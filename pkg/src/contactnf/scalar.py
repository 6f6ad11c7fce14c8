"""Scalar fields: exact rationals (gmpy2) and big floats (mpmath)."""

from fractions import Fraction

import gmpy2
import mpmath

from .errors import NegativeBase, RootNotInField, UndecidableAtTolerance

mpq = gmpy2.mpq


class ExactField:
    """The rational numbers, backed by ``gmpy2.mpq``."""

    mode = "exact"
    exact = True

    def __eq__(self, other):
        return isinstance(other, ExactField)

    def __hash__(self):
        return hash("exact")

    def __repr__(self):
        return "ExactField()"

    def __call__(self, value):
        if isinstance(value, str):
            return mpq(Fraction(value.strip()))
        if isinstance(value, float):
            return mpq(Fraction(value))
        return mpq(value)

    zero = property(lambda self: mpq(0))
    one = property(lambda self: mpq(1))

    def is_zero(self, x):
        return x == 0

    def equal(self, a, b):
        return a == b

    def sign(self, x):
        return (x > 0) - (x < 0)

    def root(self, c, n):
        """Principal real ``n``-th root of a rational, or ``RootNotInField``."""
        c = mpq(c)
        if c == 0:
            return c
        neg = c < 0
        if neg and n % 2 == 0:
            raise RootNotInField(f"{c} has no real {n}-th root")
        a = -c if neg else c
        num, ok1 = gmpy2.iroot(a.numerator, n)
        den, ok2 = gmpy2.iroot(a.denominator, n)
        if not (ok1 and ok2):
            raise RootNotInField(f"{c} is not the {n}-th power of a rational")
        r = mpq(num, den)
        return -r if neg else r

    def to_str(self, x):
        x = mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def to_float(self, x):
        return float(x)


class FloatField:
    """Real big floats with ``prec`` bits and tolerance ``2**(-prec/2)``."""

    mode = "float"
    exact = False

    def __init__(self, prec=106, eps=None):
        if prec < 53:
            raise ValueError("precision must be at least 53 bits")
        self.prec = prec
        self.ctx = mpmath.MPContext()
        self.ctx.prec = prec
        self.eps = self.ctx.mpf(2) ** (-(prec // 2)) if eps is None else self.ctx.mpf(eps)

    def __eq__(self, other):
        return isinstance(other, FloatField) and other.prec == self.prec

    def __hash__(self):
        return hash(("float", self.prec))

    def __repr__(self):
        return f"FloatField(prec={self.prec})"

    def __call__(self, value):
        ctx = self.ctx
        if isinstance(value, (Fraction, type(mpq(0)))):
            return ctx.mpf(int(value.numerator)) / int(value.denominator)
        if isinstance(value, str):
            if "/" in value:
                return self(Fraction(value.strip()))
            return ctx.mpf(value.strip())
        return ctx.mpf(value)

    zero = property(lambda self: self.ctx.mpf(0))
    one = property(lambda self: self.ctx.mpf(1))

    def is_zero(self, x):
        return abs(x) <= self.eps

    def equal(self, a, b):
        scale = max(abs(a), abs(b), 1)
        return abs(a - b) <= self.eps * scale

    def sign(self, x):
        if abs(x) <= self.eps:
            raise UndecidableAtTolerance(f"sign of {x} below tolerance")
        return 1 if x > 0 else -1

    def root(self, c, n):
        c = self(c)
        if c < 0:
            if n % 2 == 0:
                raise NegativeBase(f"{c} has no real {n}-th root")
            return -self.ctx.root(-c, n)
        return self.ctx.root(c, n)

    def to_str(self, x):
        return mpmath.nstr(x, max(15, int(self.prec * 0.30103)))

    def to_float(self, x):
        return float(x)


EXACT = ExactField()
