"""Formal coordinate changes carrying both directions."""

from .exterior import pullback, transform_field
from .jets import DEFAULT_DEGREE, Jet, JetMap, compose, invert_map
from .scalar import EXACT


class CoordinateChange:
    """A formal diffeomorphism fixing the origin.

    ``forward`` gives the old coordinates as jets in the new ones
    (``x = phi(y)``) and ``inverse`` gives the new coordinates in terms of
    the old ones.  Pulling back by ``forward`` moves an object into the new
    coordinates; pulling back by ``inverse`` moves it back.
    """

    __slots__ = ("forward", "inverse", "log", "meta")

    def __init__(self, forward, inverse=None, log=None, meta=None):
        self.forward = forward if isinstance(forward, JetMap) else JetMap(forward)
        if inverse is None:
            inverse = invert_map(self.forward)
        self.inverse = inverse if isinstance(inverse, JetMap) else JetMap(inverse)
        self.log = list(log or [])
        self.meta = dict(meta or {})

    @classmethod
    def identity(cls, nvars, degree=DEFAULT_DEGREE, weights=None, field=EXACT):
        ident = JetMap.identity(nvars, degree, weights, field)
        return cls(ident, ident)

    @classmethod
    def from_matrix(cls, T, Tinv, degree=DEFAULT_DEGREE, weights=None, field=EXACT, log=None):
        """Linear change ``x = T y`` with ``y = Tinv x``."""
        n = len(T)
        ys = Jet.variables(n, degree, weights, field)

        def lin(M):
            out = []
            for i in range(n):
                acc = ys[0].zero_like()
                for j in range(n):
                    if M[i][j] != 0:
                        acc = acc + ys[j] * M[i][j]
                out.append(acc)
            return JetMap(out)

        return cls(lin(T), lin(Tinv), log)

    @property
    def nvars(self):
        return self.forward.nvars

    @property
    def degree(self):
        return min(self.forward.degree, self.inverse.degree)

    def is_identity(self):
        return self.forward.is_identity() and self.inverse.is_identity()

    def then(self, other):
        """Apply ``self`` first, then ``other`` (coordinates of ``other`` are newest)."""
        fwd = self.forward.compose(other.forward)
        inv = other.inverse.compose(self.inverse)
        return CoordinateChange(fwd, inv, self.log + other.log, {**self.meta, **other.meta})

    def truncate(self, degree):
        return CoordinateChange(self.forward.truncate(degree), self.inverse.truncate(degree),
                                self.log, self.meta)

    def lift(self, degree):
        return CoordinateChange(self.forward.lift(degree), self.inverse.lift(degree),
                                self.log, self.meta)

    def round_trip_ok(self, degree=None):
        D = self.degree if degree is None else degree
        a = self.forward.compose(self.inverse)
        b = self.inverse.compose(self.forward)
        ident = JetMap.identity(self.nvars, D, self.forward.weights, self.forward.field)
        return a.equal_mod(ident, min(D, a.degree)) and b.equal_mod(ident, min(D, b.degree))

    # actions -------------------------------------------------------------
    def pull_form(self, form):
        """The form expressed in the new coordinates."""
        return pullback(self.forward, form)

    def push_form(self, form):
        """A form given in new coordinates expressed in the old ones."""
        return pullback(self.inverse, form)

    def pull_function(self, f):
        return compose(f, self.forward.components)

    def push_function(self, f):
        return compose(f, self.inverse.components)

    def pull_field(self, X):
        """The field expressed in the new coordinates."""
        return transform_field(X, self.forward, self.inverse)

    def push_field(self, X):
        return transform_field(X, self.inverse, self.forward)

    def reweight(self, weights):
        return CoordinateChange(JetMap(c.reweight(weights) for c in self.forward),
                                JetMap(c.reweight(weights) for c in self.inverse),
                                self.log, self.meta)

    def __repr__(self):
        return f"CoordinateChange(forward={self.forward!r}, inverse={self.inverse!r})"

