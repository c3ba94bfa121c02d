"""Finite zero-padded sequences and the operators L and L_r.

A :class:`Seq` stores a window of a two-sided sequence; every index outside
the window holds 0.  ``L_r`` maps ``a`` to ``b_k = a_k^2 - r a_{k-1} a_{k+1}``,
which sends the zero padding to zero, so the window never has to grow.

Integer sequences with an integer ``r`` are iterated with gmpy2 integers;
the entries of ``L^i`` of a Pascal row reach millions of bits.
"""

from __future__ import annotations

import math
import numbers
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import gmpy2

from .errors import NegativeEntry, RNotSupported
from .exactnum import (
    QField,
    field_of,
    format_number,
    normalize,
    parse_numbers,
    qf_sign,
    sign_sub_scaled,
)

_MPZ = type(gmpy2.mpz(0))


def _exact(v):
    if type(v) is _MPZ:
        return v
    return normalize(v)


def _plain(v):
    # gmpy2 integers do not mix cleanly with Fraction
    return int(v) if type(v) is _MPZ else v


def _is_integral(v) -> bool:
    return isinstance(v, numbers.Integral)


@dataclass(frozen=True)
class Seq:
    """A finite window ``values`` of a zero-padded sequence starting at index ``offset``."""

    values: tuple
    offset: int = 0

    def __post_init__(self):
        vals = tuple(_exact(v) for v in self.values)
        field_of(vals)
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, values: Iterable, offset: int = 0) -> "Seq":
        return cls(tuple(values), offset)

    @classmethod
    def parse(cls, text: str) -> "Seq":
        return cls(tuple(parse_numbers(text)))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, k: int):
        i = k - self.offset
        if 0 <= i < len(self.values):
            return self.values[i]
        return 0

    @property
    def indices(self) -> range:
        return range(self.offset, self.offset + len(self.values))

    @property
    def field(self) -> int:
        return field_of(self.values)

    def padded(self, left: int = 1, right: int = 1) -> "Seq":
        """Same sequence with ``left``/``right`` explicit zeros added to the window."""
        return Seq((0,) * left + self.values + (0,) * right, self.offset - left)

    def trimmed(self) -> "Seq":
        vals = list(self.values)
        off = self.offset
        while vals and qf_sign(vals[0]) == 0:
            vals.pop(0)
            off += 1
        while vals and qf_sign(vals[-1]) == 0:
            vals.pop()
        return Seq(tuple(vals), off if vals else 0)

    def first_negative(self) -> Optional[int]:
        for k, v in zip(self.indices, self.values):
            if qf_sign(v) < 0:
                return k
        return None

    def is_nonnegative(self) -> bool:
        return self.first_negative() is None

    def require_nonnegative(self) -> "Seq":
        k = self.first_negative()
        if k is not None:
            raise NegativeEntry(f"entry {k} is negative: {format_number(self[k])}")
        return self

    def is_symmetric(self) -> bool:
        t = self.trimmed().values
        return all(t[i] == t[-1 - i] for i in range(len(t) // 2))

    def text(self) -> list[str]:
        return [format_number(_plain(v)) for v in self.values]

    def __str__(self):
        return "{" + ",".join(self.text()) + "}"


def check_r(r, *, allow_small_r: bool = False):
    """Validate the operator parameter; 0 < r < 1 needs ``allow_small_r``."""
    r = normalize(r)
    if qf_sign(r) <= 0:
        raise RNotSupported(f"r must be positive, got {format_number(r)}")
    if qf_sign(r - 1) < 0:
        if not allow_small_r:
            raise RNotSupported(f"r must be >= 1, got {format_number(r)}")
        warnings.warn(f"r = {format_number(r)} < 1: results are not log-concavity statements",
                      stacklevel=3)
    return r


def _lr_values(vals: Sequence, r) -> list:
    n = len(vals)
    if n == 0:
        return []
    if all(_is_integral(v) for v in vals) and _is_integral(r):
        z = [gmpy2.mpz(v) for v in vals]
        rz = int(r)
        if n == 1:
            return [z[0] * z[0]]
        out = [z[0] * z[0]]
        if rz == 1:
            out.extend(z[k] * z[k] - z[k - 1] * z[k + 1] for k in range(1, n - 1))
        else:
            out.extend(z[k] * z[k] - rz * (z[k - 1] * z[k + 1]) for k in range(1, n - 1))
        out.append(z[-1] * z[-1])
        return out
    v = [_plain(x) for x in vals]
    r = _plain(r)
    out = []
    for k in range(n):
        b = v[k] * v[k]
        if 0 < k < n - 1:
            b = b - r * (v[k - 1] * v[k + 1])
        out.append(b)
    return out


def _integer_form(vals: Sequence, r):
    """Integer multiple of ``vals`` plus ``r = p/q``, or None when irrational values appear."""
    if isinstance(r, QField) or any(isinstance(v, QField) for v in vals):
        return None
    den = 1
    for v in vals:
        if not _is_integral(v):
            den = den * v.denominator // math.gcd(den, v.denominator)
    z = [gmpy2.mpz(v) * den if _is_integral(v) else gmpy2.mpz(v.numerator) * (den // v.denominator)
         for v in vals]
    p, q = (int(r), 1) if _is_integral(r) else (r.numerator, r.denominator)
    return _content_free(z), p, q


def _content_free(z: list) -> list:
    g = gmpy2.mpz(0)
    for v in z:
        g = gmpy2.gcd(g, v)
        if g == 1:
            return z
    return z if g == 0 else [v // g for v in z]


def _scaled_step(z: list, p: int, q: int) -> list:
    # q * L_{p/q}(z), with the common factor removed
    n = len(z)
    if n == 0:
        return []
    out = [q * z[0] * z[0]]
    out.extend(q * z[k] * z[k] - p * (z[k - 1] * z[k + 1]) for k in range(1, n - 1))
    if n > 1:
        out.append(q * z[-1] * z[-1])
    return _content_free(out)


def projective_orbit(values: Sequence, r) -> Iterator[tuple]:
    """Positive multiples of ``s, L_r(s), L_r^2(s), ...`` (lazily).

    Signs and r-factor log-concavity are invariant under positive scaling and
    ``L_r(t a) = t^2 L_r(a)``, so predicates can run on these integer
    representatives instead of the exact iterates.  Irrational inputs fall
    back to the exact iterates.
    """
    form = _integer_form(values, r)
    if form is None:
        vals = tuple(values)
        while True:
            yield vals
            vals = tuple(_lr_values(vals, r))
    z, p, q = form
    while True:
        yield tuple(z)
        z = _scaled_step(z, p, q)


def apply_lr(s: Seq, r=1, *, allow_small_r: bool = False) -> Seq:
    """One application of L_r: ``b_k = a_k^2 - r a_{k-1} a_{k+1}``."""
    r = check_r(r, allow_small_r=allow_small_r)
    field_of(s.values + (r,))
    return Seq(tuple(_lr_values(s.values, r)), s.offset)


def apply_l(s: Seq) -> Seq:
    """The classical operator L = L_1."""
    return apply_lr(s, 1)


def iterate_lr(s: Seq, r=1, i: int = 1, *, allow_small_r: bool = False) -> Seq:
    """``L_r`` composed ``i`` times (``i = 0`` is the identity)."""
    if i < 0:
        raise ValueError("iteration count must be >= 0")
    r = check_r(r, allow_small_r=allow_small_r)
    field_of(s.values + (r,))
    for _ in range(i):
        s = Seq(tuple(_lr_values(s.values, r)), s.offset)
    return s


@dataclass(frozen=True)
class LCVerdict:
    """Outcome of an r-factor log-concavity test; ``index`` is the first failing k."""

    ok: bool
    index: Optional[int] = None

    def __bool__(self):
        return self.ok


def first_lc_violation(s: Seq, r) -> Optional[int]:
    """Smallest k with ``a_k^2 < r a_{k-1} a_{k+1}``, or None."""
    vals = s.values
    n = len(vals)
    for i in range(1, n - 1):
        prod = vals[i - 1] * vals[i + 1]
        if sign_sub_scaled(vals[i] * vals[i], r, prod) < 0:
            return i + s.offset
    return None


def is_r_factor_lc(s: Seq, r) -> LCVerdict:
    """``a_k^2 >= r a_{k-1} a_{k+1}`` at every index of the padded sequence."""
    r = normalize(r)
    field_of(s.values + (r,))
    s.require_nonnegative()
    k = first_lc_violation(s, r)
    return LCVerdict(k is None, k)


@dataclass(frozen=True)
class FoldVerdict:
    """``ok`` or the first (iteration, index) where ``L_r^iteration`` is negative."""

    ok: bool
    iteration: Optional[int] = None
    index: Optional[int] = None

    def __bool__(self):
        return self.ok


def is_ifold_lc(s: Seq, r, i: int, *, allow_small_r: bool = False) -> FoldVerdict:
    """Nonnegativity of ``L_r^j(s)`` for ``j = 1..i``; stops at the first negative entry."""
    if i < 1:
        raise ValueError("fold count must be >= 1")
    r = check_r(r, allow_small_r=allow_small_r)
    field_of(s.values + (r,))
    s.require_nonnegative()
    orbit = projective_orbit(s.values, r)
    next(orbit)
    for j in range(1, i + 1):
        k = Seq(next(orbit), s.offset).first_negative()
        if k is not None:
            return FoldVerdict(False, j, k)
    return FoldVerdict(True)


PARITIES = ("even", "odd")


@dataclass(frozen=True)
class SymSeq:
    """Core ``(x_0..x_n)`` of ``{..,0,1,x_0,..,x_n[,x_n],..,x_0,1,0,..}``."""

    core: tuple
    parity: str = "even"

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        core = tuple(normalize(_plain(v)) for v in self.core)
        if not core:
            raise ValueError("core must have at least one entry")
        field_of(core)
        for j, v in enumerate(core):
            if qf_sign(v) <= 0:
                raise ValueError(f"core entry {j} must be positive")
        object.__setattr__(self, "core", core)

    @property
    def n(self) -> int:
        return len(self.core) - 1

    def materialize(self) -> Seq:
        return materialize(self)

    def to_json(self) -> dict:
        return {"core": [format_number(v) for v in self.core], "parity": self.parity}

    @classmethod
    def from_json(cls, obj: dict) -> "SymSeq":
        from .exactnum import parse_number
        return cls(tuple(parse_number(str(v)) for v in obj["core"]), obj.get("parity", "even"))


def materialize(sym: SymSeq) -> Seq:
    """Full sequence: length 2n+4 (even) or 2n+3 (odd), starting at index 0."""
    core = list(sym.core)
    mirror = core[::-1] if sym.parity == "even" else core[-2::-1]
    return Seq(tuple([1] + core + mirror + [1]))


def core_of(s: Seq, n: int, parity: str) -> SymSeq:
    """Read the core back from a materialized (or operator-image) sequence."""
    i0 = s.offset + 1
    return SymSeq(tuple(s[i0 + j] for j in range(n + 1)), parity)
