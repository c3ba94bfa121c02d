"""Exact arithmetic in Q and in real quadratic fields Q(sqrt(d)).

Rationals are plain :class:`fractions.Fraction` (or ``int``).  Irrational
values are :class:`QField` instances ``a + b*sqrt(d)`` with rational ``a``,
``b`` and square-free ``d > 1``.  Every value with ``b == 0`` is collapsed to
``d == 0`` so that equality is componentwise and hashing agrees with
``Fraction``.

Only one radical may appear in an expression: combining ``sqrt(2)`` with
``sqrt(5)`` raises :class:`MixedField`.
"""

from __future__ import annotations

import math
import numbers
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import mpmath

from .errors import MixedField, ParseError

Rat = Fraction
Number = Union[int, Fraction, "QField"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, numbers.Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"not an exact rational: {x!r}")


@lru_cache(maxsize=4096)
def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s*s*f`` and ``f`` square-free."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 0
    s, f = 1, 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                f *= p
        p += 1 if p == 2 else 2
    f *= m
    return s, f


class QField:
    """An immutable number ``a + b*sqrt(d)``.

    >>> QField(1, 1, 2) * QField(1, 1, 2)
    QField('3+2*sqrt(2)')
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 0):
        a = _frac(a)
        b = _frac(b)
        d = int(d)
        if d < 0:
            raise ValueError("only real quadratic fields are supported")
        if d == 0 and b != 0:
            raise ValueError("b must be 0 when d is 0")
        if b != 0:
            s, f = squarefree_decompose(d)
            b *= s
            d = f
            if d == 1:
                a, b, d = a + b, Fraction(0), 0
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> "QField":
        self = object.__new__(cls)
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("QField is immutable")

    def __reduce__(self):
        return (QField, (self.a, self.b, self.d))

    # -- structure ---------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def conjugate(self) -> "QField":
        return QField._raw(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def sign(self) -> int:
        return qf_sign(self)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        y = as_qfield(other)
        if y is NotImplemented:
            return NotImplemented
        return qf_add(self, y)

    __radd__ = __add__

    def __sub__(self, other):
        y = as_qfield(other)
        if y is NotImplemented:
            return NotImplemented
        return qf_add(self, -y)

    def __rsub__(self, other):
        y = as_qfield(other)
        if y is NotImplemented:
            return NotImplemented
        return qf_add(y, -self)

    def __mul__(self, other):
        y = as_qfield(other)
        if y is NotImplemented:
            return NotImplemented
        return qf_mul(self, y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        y = as_qfield(other)
        if y is NotImplemented:
            return NotImplemented
        return qf_mul(self, y.inverse())

    def __rtruediv__(self, other):
        y = as_qfield(other)
        if y is NotImplemented:
            return NotImplemented
        return qf_mul(y, self.inverse())

    def inverse(self) -> "QField":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QField._raw(self.a / n, -self.b / n, self.d)

    def __neg__(self):
        return QField._raw(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if qf_sign(self) < 0 else self

    def __pow__(self, k):
        if not isinstance(k, numbers.Integral):
            return NotImplemented
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = QField._raw(Fraction(1), Fraction(0), 0)
        base = self
        while k:
            if k & 1:
                result = qf_mul(result, base)
            base = qf_mul(base, base)
            k >>= 1
        return result

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        y = as_qfield(other)
        if y is NotImplemented:
            return NotImplemented
        return self.a == y.a and self.b == y.b and self.d == y.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def _cmp(self, other):
        y = as_qfield(other)
        if y is NotImplemented:
            return NotImplemented
        return qf_cmp(self, y)

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- conversion --------------------------------------------------------

    def approx(self, dps: int = 30) -> mpmath.mpf:
        with mpmath.workdps(dps):
            v = mpmath.mpf(self.a.numerator) / self.a.denominator
            if self.b:
                v += mpmath.mpf(self.b.numerator) / self.b.denominator * mpmath.sqrt(self.d)
            return +v

    def __float__(self):
        return float(self.approx(20))

    def __str__(self):
        return format_number(self)

    def __repr__(self):
        return f"QField('{format_number(self)}')"


def as_qfield(x) -> QField:
    """Coerce ints, Fractions and QField values to QField."""
    if isinstance(x, QField):
        return x
    if isinstance(x, numbers.Rational):
        return QField._raw(_frac(x), Fraction(0), 0)
    return NotImplemented


def field_of(values: Iterable) -> int:
    """Common radicand of ``values`` (0 when all rational); MixedField if two differ."""
    d = 0
    for v in values:
        vd = v.d if isinstance(v, QField) else 0
        if vd and d and vd != d:
            raise MixedField(f"sqrt({d}) and sqrt({vd}) in one expression")
        d = d or vd
    return d


def _join(x: QField, y: QField) -> int:
    if x.d and y.d and x.d != y.d:
        raise MixedField(f"sqrt({x.d}) and sqrt({y.d}) in one expression")
    return x.d or y.d


def qf_add(x: QField, y: QField) -> QField:
    d = _join(x, y)
    return QField._raw(x.a + y.a, x.b + y.b, d)


def qf_mul(x: QField, y: QField) -> QField:
    d = _join(x, y)
    if x.b == 0 and y.b == 0:
        return QField._raw(x.a * y.a, Fraction(0), 0)
    return QField._raw(x.a * y.a + x.b * y.b * d, x.a * y.b + y.a * x.b, d)


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def _sign_parts(a, b, d) -> int:
    # sign of a + b*sqrt(d); a, b any exact rationals (int/Fraction)
    sa, sb = _sgn(a), _sgn(b)
    if sb == 0 or d == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: the larger of |a| and |b| sqrt(d) wins
    if isinstance(a, numbers.Integral) and isinstance(b, numbers.Integral):
        # cheap bracket m <= 2^64 sqrt(d) < m + 1 settles almost every big-integer case
        m = _sqrt_bracket(d)
        lhs, B = abs(a) << 64, abs(b)
        if lhs >= B * (m + 1):
            return sa
        if lhs < B * m:
            return sb
    return sa * _sgn(a * a - b * b * d)


@lru_cache(maxsize=256)
def _sqrt_bracket(d: int) -> int:
    return math.isqrt(d << 128)


def qf_sign(x) -> int:
    """Exact sign of ``x`` in {-1, 0, 1}."""
    if isinstance(x, QField):
        return _sign_parts(x.a, x.b, x.d)
    return _sgn(x)


def qf_cmp(x, y) -> int:
    """-1, 0 or 1 as ``x`` is less than, equal to or greater than ``y``."""
    x, y = as_qfield(x), as_qfield(y)
    if x is NotImplemented or y is NotImplemented:
        raise TypeError("qf_cmp needs exact numbers")
    return qf_sign(qf_add(x, -y))


def sign_sub_scaled(x, r, y) -> int:
    """Sign of ``x - r*y``.

    Fast path for rational/integer ``x`` and ``y`` (including gmpy2 ``mpz``):
    the test is done on integers after clearing the denominators of ``r``,
    so no Fraction or QField temporaries are built from the big operands.
    """
    if isinstance(x, QField) or isinstance(y, QField):
        return qf_sign(as_qfield(x) - as_qfield(r) * as_qfield(y))
    if not isinstance(r, QField) or r.b == 0:
        rr = r.a if isinstance(r, QField) else r
        if isinstance(rr, numbers.Integral) and isinstance(x, numbers.Integral) \
                and isinstance(y, numbers.Integral):
            return _sgn(x - rr * y)
        return _sgn(_frac(x) - _frac(rr) * _frac(y))
    # r = (A + B sqrt(d)) / D with integers A, B and D > 0
    den = r.a.denominator * r.b.denominator // math.gcd(r.a.denominator, r.b.denominator)
    A = r.a.numerator * (den // r.a.denominator)
    B = r.b.numerator * (den // r.b.denominator)
    if isinstance(x, numbers.Integral) and isinstance(y, numbers.Integral):
        t = den * x - A * y
        return _sign_parts(t, -B * y, r.d)
    xf, yf = _frac(x), _frac(y)
    # scale by both denominators (positive, sign unchanged)
    xi = xf.numerator * yf.denominator
    yi = yf.numerator * xf.denominator
    return _sign_parts(den * xi - A * yi, -B * yi, r.d)


def sqrt_rational(q) -> QField:
    """Exact square root of a nonnegative rational as a QField."""
    q = _frac(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    p, s = q.numerator, q.denominator
    # sqrt(p/s) = sqrt(p*s)/s
    k, f = squarefree_decompose(p * s)
    if f <= 1:
        return QField._raw(Fraction(k * f, s) if f else Fraction(0), Fraction(0), 0)
    return QField._raw(Fraction(0), Fraction(k, s), f)


def golden(r) -> QField:
    """Positive root of t^2 - t - r = 0, i.e. (1 + sqrt(1+4r)) / 2, for rational r."""
    r = _frac(r)
    return (1 + sqrt_rational(1 + 4 * r)) / 2


# r0 = (3+sqrt5)/2 and r1 = 1+sqrt2
R0 = QField(Fraction(3, 2), Fraction(1, 2), 5)
R1 = QField(1, 1, 2)


def qdiv(x, y):
    """Exact quotient of two exact numbers."""
    if isinstance(x, QField) or isinstance(y, QField):
        return normalize(as_qfield(x) / as_qfield(y))
    return normalize(_frac(x) / _frac(y))


def to_mpf(x, dps: int = 30) -> mpmath.mpf:
    """Numeric approximation of an exact value, for diagnostics only."""
    if isinstance(x, QField):
        return x.approx(dps)
    x = _frac(x)
    with mpmath.workdps(dps):
        return mpmath.mpf(x.numerator) / x.denominator


def is_exact(x) -> bool:
    return isinstance(x, (QField, numbers.Rational))


def normalize(x):
    """Canonical exact value: ``int`` for integers, ``Fraction`` for rationals, else QField."""
    if isinstance(x, QField):
        if x.b == 0:
            x = x.a
        else:
            return x
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, numbers.Rational):
        x = _frac(x)
        return int(x.numerator) if x.denominator == 1 else x
    raise TypeError(f"not an exact number: {x!r}")


# -- text form ---------------------------------------------------------------

def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_number(x) -> str:
    """Text form: ``p/q`` or ``p/q+s/t*sqrt(d)``; round-trips through :func:`parse_number`."""
    if isinstance(x, QField):
        if x.b == 0:
            return _fmt_rat(x.a)
        b = x.b
        if b == 1:
            rad = f"sqrt({x.d})"
        elif b == -1:
            rad = f"-sqrt({x.d})"
        else:
            rad = f"{_fmt_rat(b)}*sqrt({x.d})"
        if x.a == 0:
            return rad
        sep = "" if rad.startswith("-") else "+"
        return f"{_fmt_rat(x.a)}{sep}{rad}"
    return _fmt_rat(_frac(x))


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif ident is not None:
            out.append(("id", ident))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    # expr := term (('+'|'-') term)*
    # term := unary (('*'|'/') unary)*
    # unary := ('+'|'-') unary | power
    # power := atom ('^' integer)?
    # atom := number | '(' expr ')' | sqrt(expr) | phi(expr) | r0 | r1

    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"cannot parse {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty number")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                if w == 0:
                    raise ParseError(f"division by zero in {self.text!r}")
                v = v / w
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            k = int(self.take("num")[1])
            v = as_qfield(v) ** (-k if neg else k)
        return v

    def _rational_arg(self, name):
        self.take("op", "(")
        arg = as_qfield(self.expr())
        self.take("op", ")")
        if not arg.is_rational:
            raise ParseError(f"{name}() needs a rational argument")
        return arg.a

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return QField(Fraction(val))
        if kind == "op" and val == "(":
            self.take()
            v = self.expr()
            self.take("op", ")")
            return v
        if kind == "id":
            self.take()
            if val == "r0":
                return R0
            if val == "r1":
                return R1
            if val == "sqrt":
                arg = self._rational_arg("sqrt")
                if arg < 0:
                    raise ParseError("sqrt of a negative number")
                return sqrt_rational(arg)
            if val == "phi":
                return golden(self._rational_arg("phi"))
            raise ParseError(f"unknown name {val!r}")
        raise ParseError(f"cannot parse {self.text!r}")


def parse_number(text: str):
    """Parse the exact text form, e.g. ``3/2``, ``1+sqrt(2)``, ``r0``, ``phi(2)``.

    Returns ``int``, ``Fraction`` or ``QField`` (see :func:`normalize`).
    """
    try:
        return normalize(_Parser(str(text)).parse())
    except MixedField:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc


def parse_numbers(text: str) -> list:
    """Parse a comma-separated list of exact numbers (optional surrounding braces)."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    if not text.strip():
        return []
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [parse_number(p) for p in parts]
