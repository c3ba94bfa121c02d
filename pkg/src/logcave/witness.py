"""Explicit members of R built from figurate-number exponents.

Given an r-factor log-concave core ``q`` the witness core is
``x_j = C^{S(j)} a^{j+1} q_j`` where ``S`` is the doubled pentagonal number
``P(j) = j(3j-1)`` or the triangular number ``T(j) = j(j+1)/2``.

Admissible constants (``c = phi_r^2``):

* pentagonal: ``0 < C`` and ``C^2 < r/c``  (i.e. ``C < 2 sqrt(r) / (1+sqrt(1+4r))``)
* triangular: ``0 < C < r/c``  (consecutive triangular numbers have second
  difference 1 instead of 6, so C enters unsquared)
* even: ``a > (1+r) C^{S(n-1)-S(n)}``;  odd: ``a > (phi_r/sqrt(r)) C^{S(n-1)-S(n)}``

``sqrt(r)`` is never formed; bounds involving it are compared squared.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import InvalidA, InvalidC, QNotRFactorLC
from .exactnum import QField, format_number, normalize, qdiv, qf_sign, sqrt_rational, to_mpf
from .region import _rational_r, is_member, phi_squared
from .seqcore import PARITIES, SymSeq, first_lc_violation, materialize


def pentagonal_number(n: int) -> int:
    """``n(3n-1)/2``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return n * (3 * n - 1) // 2


def pentagonal(n: int) -> int:
    """Doubled pentagonal number ``P(n) = n(3n-1)``, the witness exponent."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return n * (3 * n - 1)


def triangular(n: int) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    return n * (n + 1) // 2


SCHEMES = {"pentagonal": pentagonal, "triangular": triangular}


def c_bound_sq(r):
    """``r / phi_r^2``, the square of the pentagonal upper bound on C."""
    r = _rational_r(r)
    return qdiv(r, phi_squared(r))


def c_bound(r) -> QField:
    """``2 sqrt(r) / (1 + sqrt(1+4r))`` when it lives in one quadratic field.

    Raises MixedField when both ``r`` and ``1+4r`` (and their product) are
    non-squares; use :func:`c_bound_sq` then.
    """
    r = _rational_r(r)
    return normalize(2 * sqrt_rational(r) / (1 + sqrt_rational(1 + 4 * r)))


def is_valid_c(C, r, scheme: str = "pentagonal") -> bool:
    C = Fraction(C)
    if C <= 0:
        return False
    bound = c_bound_sq(r)
    if scheme == "pentagonal":
        return qf_sign(normalize(bound - C * C)) > 0
    if scheme == "triangular":
        return qf_sign(normalize(bound - C)) > 0
    raise ValueError(f"unknown scheme {scheme!r}")


def _gap_exponent(n: int, scheme: str) -> int:
    S = SCHEMES[scheme]
    return S(n - 1) - S(n)


def a_bound(r, C, n: int, parity: str = "even", scheme: str = "pentagonal",
            max_den: int = 10 ** 6) -> Fraction:
    """Rational ``u`` with ``u >= `` the lower bound on ``a`` (equal when the bound is rational).

    A valid ``a`` must be strictly greater than the true bound; see :func:`is_valid_a`.
    """
    r = _rational_r(r)
    C = Fraction(C)
    if n < 1:
        raise ValueError("n must be >= 1")
    if not is_valid_c(C, r, scheme):
        raise InvalidC(f"C = {C} is outside the admissible interval for r = {r}")
    k = _gap_exponent(n, scheme)
    if parity == "even":
        return (1 + r) * C ** k
    if parity != "odd":
        raise ValueError(f"unknown parity {parity!r}")
    sq = _odd_bound_sq(r, C, k)
    if not isinstance(sq, QField):
        root = sqrt_rational(sq)
        if root.is_rational:
            return root.a
    with mpmath.workdps(60):
        approx = mpmath.sqrt(to_mpf(sq, 60))
    u = Fraction(int(mpmath.ceil(approx * max_den)), max_den)
    while qf_sign(normalize(u * u - sq)) < 0:
        u += Fraction(1, max_den)
    return u


def _odd_bound_sq(r, C, k):
    # (phi_r / sqrt r)^2 C^{2k} = (c / r) C^{2k}
    return normalize(phi_squared(r) * (C ** (2 * k) / r))


def is_valid_a(a, r, C, n: int, parity: str = "even", scheme: str = "pentagonal") -> bool:
    """Strict ``a >`` bound, decided exactly."""
    r = _rational_r(r)
    a, C = Fraction(a), Fraction(C)
    k = _gap_exponent(n, scheme)
    if parity == "even":
        return a > (1 + r) * C ** k
    if a <= 0:
        return False
    return qf_sign(normalize(a * a - _odd_bound_sq(r, C, k))) > 0


def default_q(r, n: int) -> tuple:
    """Geometric r-factor log-concave core with ratios ``r^{n+1}, r^n, ..., r``."""
    r = _rational_r(r)
    q, cur = [], Fraction(1)
    for j in range(n + 1):
        cur *= r ** (n + 1 - j)
        q.append(normalize(cur))
    return tuple(q)


@dataclass(frozen=True)
class WitnessSpec:
    r: Fraction
    C: Fraction
    n: int
    scheme: str = "pentagonal"
    parity: str = "even"
    a: Optional[Fraction] = None
    q_core: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "r", _rational_r(self.r))
        object.__setattr__(self, "C", Fraction(self.C))
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.parity not in PARITIES:
            raise ValueError(f"unknown parity {self.parity!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.a is not None:
            object.__setattr__(self, "a", Fraction(self.a))
        if self.q_core is not None:
            q = tuple(normalize(v) for v in self.q_core)
            if len(q) != self.n + 1:
                raise ValueError(f"q_core must have n+1 = {self.n + 1} entries")
            object.__setattr__(self, "q_core", q)

    def resolved(self) -> "WitnessSpec":
        """Copy with ``q_core`` and ``a`` defaults filled in (``a = a_bound + 1``)."""
        q = self.q_core if self.q_core is not None else default_q(self.r, self.n)
        a = self.a
        if a is None:
            a = a_bound(self.r, self.C, self.n, self.parity, self.scheme) + 1
        return replace(self, q_core=q, a=a)

    def to_json(self) -> dict:
        s = self.resolved()
        return {"r": format_number(s.r), "C": format_number(s.C), "a": format_number(s.a),
                "n": s.n, "scheme": s.scheme, "parity": s.parity,
                "q_core": [format_number(v) for v in s.q_core]}


def build_witness(spec: WitnessSpec) -> SymSeq:
    """Core ``C^{S(j)} a^{j+1} q_j``; the result is checked to lie in R."""
    spec = spec.resolved()
    r, C, a, n = spec.r, spec.C, spec.a, spec.n
    if not is_valid_c(C, r, spec.scheme):
        raise InvalidC(f"C = {C} is outside the admissible interval for r = {r}")
    q = SymSeq(spec.q_core, spec.parity)
    k = first_lc_violation(materialize(q), r)
    if k is not None:
        raise QNotRFactorLC(f"q is not r-factor log-concave at index {k}")
    if not is_valid_a(a, r, C, n, spec.parity, spec.scheme):
        raise InvalidA(f"a = {a} does not exceed its lower bound")
    S = SCHEMES[spec.scheme]
    core = tuple(normalize(C ** S(j) * a ** (j + 1) * spec.q_core[j]) for j in range(n + 1))
    w = SymSeq(core, spec.parity)
    if not is_member(w, r):
        # would contradict the construction; never expected
        raise AssertionError("witness is not in R")
    return w
