"""Exact Gaussian rationals a + b*i with a, b arbitrary-precision rationals."""

from fractions import Fraction

from gmpy2 import mpq

_MPQ = type(mpq(0))


def as_rational(x):
    """Coerce an int, Fraction, mpq or 'p/q' string into an mpq."""
    if type(x) is _MPQ:
        return x
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, int):
        return mpq(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fmt_rational(q):
    """Decimal-integer fraction string, e.g. '-3/4' or '2'."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Scalar:
    """Element of Q(i). Immutable; equality is exact."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_rational(re))
        object.__setattr__(self, "im", as_rational(im))

    @classmethod
    def _raw(cls, re, im):
        s = object.__new__(cls)
        object.__setattr__(s, "re", re)
        object.__setattr__(s, "im", im)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def coerce(x):
        if type(x) is Scalar:
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact")
        if isinstance(x, float):
            raise TypeError("floats are not exact")
        return Scalar._raw(as_rational(x), _ZQ)

    @classmethod
    def parse(cls, re, im="0"):
        return cls(mpq(re), mpq(im))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = other if type(other) is Scalar else Scalar.coerce(other)
        return Scalar._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = other if type(other) is Scalar else Scalar.coerce(other)
        return Scalar._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        o = other if type(other) is Scalar else Scalar.coerce(other)
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return Scalar._raw(a * c, _ZQ)
        return Scalar._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if type(other) is Scalar else Scalar.coerce(other)
        c, d = o.re, o.im
        if not d:
            if not c:
                raise ZeroDivisionError("division by zero Scalar")
            return Scalar._raw(self.re / c, self.im / c)
        n = c * c + d * d
        a, b = self.re, self.im
        return Scalar._raw((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("only integer powers")
        if n < 0:
            return ONE / (self ** -n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return Scalar._raw(self.re, -self.im)

    def norm2(self):
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    # predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self):
        return not self.re and not self.im

    def is_real(self):
        return not self.im

    def __eq__(self, other):
        if type(other) is Scalar:
            return self.re == other.re and self.im == other.im
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # formatting -------------------------------------------------------
    def __repr__(self):
        return f"Scalar({fmt_rational(self.re)!r}, {fmt_rational(self.im)!r})"

    def __str__(self):
        if not self.im:
            return fmt_rational(self.re)
        im = f"{fmt_rational(abs(self.im))}i" if abs(self.im) != 1 else "i"
        if not self.re:
            return ("-" if self.im < 0 else "") + im
        return f"{fmt_rational(self.re)}{'-' if self.im < 0 else '+'}{im}"

    def to_json(self):
        return {"re": fmt_rational(self.re), "im": fmt_rational(self.im)}

    @classmethod
    def from_json(cls, d):
        return cls.parse(d["re"], d.get("im", "0"))


_ZQ = mpq(0)
ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def S(re=0, im=0):
    """Shorthand constructor."""
    return Scalar(re, im)


def qsum(values):
    """Exact sum of an iterable of Scalars (or coercibles)."""
    re, im = mpq(0), mpq(0)
    for v in values:
        v = v if type(v) is Scalar else Scalar.coerce(v)
        re += v.re
        im += v.im
    return Scalar._raw(re, im)
