"""r-factor hypersurfaces, membership in the region R, and closure under L_r.

A region point is the core ``(x_0..x_n)`` of a symmetric sequence
(:class:`~logcave.seqcore.SymSeq`).  Membership is the set of inequalities

* ``x_0^2 >= c x_1``                      (H_0, the outer 1 plays ``x_{-1}``)
* ``x_j^2 >= c x_{j-1} x_{j+1}``          (H_j, 0 < j < n)
* ``x_n >= (1+r) x_{n-1}``                (H_n, even)
* ``x_n^2 >= c x_{n-1}^2``                (H_n, odd)

with ``c = phi_r^2 = phi_r + r`` and ``phi_r = (1+sqrt(1+4r))/2``.  For
``n = 0`` only the H_n clause exists (against ``x_{-1} = 1``).  Boundary
points count as members.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import gmpy2
import mpmath

from .errors import InexactPower, InvalidGaps, NotInRegion, RNotRational, RNotSupported
from .exactnum import QField, field_of, format_number, golden, normalize, qdiv, qf_cmp, qf_sign, to_mpf
from .seqcore import PARITIES, SymSeq, apply_lr, core_of, materialize

RegionPoint = SymSeq


def _rational_r(r) -> Fraction:
    r = normalize(r)
    if isinstance(r, QField):
        raise RNotRational(f"r must be rational here, got {format_number(r)}")
    r = Fraction(r)
    if r < 1:
        raise RNotSupported(f"r must be >= 1, got {r}")
    return r


def phi(r):
    """``(1+sqrt(1+4r))/2`` for rational ``r >= 1``; satisfies ``t^2 - t - r = 0``.

    Rational (an ``int`` or Fraction) when ``1+4r`` is a square.
    """
    return normalize(golden(_rational_r(r)))


def phi_squared(r):
    """``phi_r^2``, computed as ``phi_r + r``."""
    return normalize(phi(r) + _rational_r(r))


def fixed_point(parity: str, r):
    """Positive fixed point of L_r on ``{1,x,x,1}`` (even) or ``{1,x,1}`` (odd)."""
    if parity == "even":
        r = normalize(r)
        if qf_sign(r - 1) < 0:
            raise RNotSupported("r must be >= 1")
        return normalize(1 + r)
    if parity == "odd":
        return normalize(phi(r))
    raise ValueError(f"unknown parity {parity!r}")


# -- hypersurfaces -----------------------------------------------------------

def exact_power(base: Fraction, e: Fraction) -> Fraction:
    """``base**e`` for rational ``e`` when the result is rational."""
    base = Fraction(base)
    e = Fraction(e)
    if base <= 0:
        raise InexactPower("base must be positive")
    p, q = e.numerator, e.denominator
    if q == 1:
        return base ** p
    num, ok1 = gmpy2.iroot(gmpy2.mpz(base.numerator), q)
    den, ok2 = gmpy2.iroot(gmpy2.mpz(base.denominator), q)
    if not (ok1 and ok2):
        raise InexactPower(f"({base})^({e}) is not rational")
    return Fraction(int(num), int(den)) ** p


@dataclass(frozen=True)
class HParams:
    """Parameters of one point on hypersurface ``surface`` (0..n).

    ``x = x_base ** (1/x_root)``.  ``gaps`` holds the n-1 free exponent gaps:
    ``d_2..d_n`` for H_0, ``d_1..d_j, d_{j+2}..d_n`` for H_j, and
    ``d_1..d_{n-1}`` for H_n.
    """

    r: Fraction
    n: int
    parity: str
    surface: int
    x_base: Fraction
    gaps: tuple = ()
    x_root: int = 1

    def __post_init__(self):
        object.__setattr__(self, "r", _rational_r(self.r))
        object.__setattr__(self, "x_base", Fraction(self.x_base))
        object.__setattr__(self, "gaps", tuple(Fraction(g) for g in self.gaps))
        if self.parity not in PARITIES:
            raise ValueError(f"unknown parity {self.parity!r}")
        if self.n < 0 or not 0 <= self.surface <= self.n:
            raise ValueError("need 0 <= surface <= n")
        if self.x_root < 1 or self.x_base < 1:
            raise ValueError("x must be >= 1")
        if len(self.gaps) != max(self.n - 1, 0):
            raise InvalidGaps(f"expected {max(self.n - 1, 0)} gaps, got {len(self.gaps)}")
        g = (Fraction(1),) + self.gaps + (Fraction(0),)
        if any(not g[i] > g[i + 1] for i in range(len(g) - 1)):
            raise InvalidGaps("gaps must satisfy 1 > d > ... > 0 strictly")

    def full_gaps(self) -> list[Fraction]:
        """``d_1..d_n`` with the surface's face condition filled in (empty for H_n)."""
        n, j, g = self.n, self.surface, list(self.gaps)
        if j == n:
            return g
        if j == 0:
            return [Fraction(1)] + g
        return g[:j] + [g[j - 1]] + g[j:]


def hypersurface_point(p: HParams) -> SymSeq:
    """The exact point of ``H_surface`` for parameters ``p``."""
    n, j = p.n, p.surface
    d = p.full_gaps()

    def xpow(e: Fraction):
        return exact_power(p.x_base, Fraction(e) / p.x_root)

    exps = [Fraction(1)]
    for i in range(1, n + (0 if j == n else 1)):
        exps.append(exps[-1] + d[i - 1])
    coords = [xpow(e) for e in exps]
    if j == n:
        # centre coordinate repeats the previous exponent
        prev = xpow(exps[n - 1]) if n >= 1 else Fraction(1)
        k = (1 + p.r) if p.parity == "even" else phi(p.r)
        coords = coords[:n] + [k * prev]
    else:
        coords[j] = phi(p.r) * coords[j]
    return SymSeq(tuple(coords), p.parity)


# -- membership --------------------------------------------------------------

def clause_signs(p: SymSeq, r) -> list[int]:
    """Sign of (lhs - rhs) for each clause H_0..H_n; >= 0 is the correct side."""
    r = _rational_r(r)
    c = phi_squared(r)
    x = p.core
    n = p.n
    field_of(x + (c,))
    if n == 0:
        if p.parity == "even":
            return [qf_sign(normalize(x[0] - (1 + r)))]
        return [qf_sign(normalize(x[0] * x[0] - c))]
    out = [qf_sign(normalize(x[0] * x[0] - c * x[1]))]
    for j in range(1, n):
        out.append(qf_sign(normalize(x[j] * x[j] - c * (x[j - 1] * x[j + 1]))))
    if p.parity == "even":
        out.append(qf_sign(normalize(x[n] - (1 + r) * x[n - 1])))
    else:
        out.append(qf_sign(normalize(x[n] * x[n] - c * (x[n - 1] * x[n - 1]))))
    return out


def correct_side(p: SymSeq, r) -> list[bool]:
    """Per-surface verdicts; the point is in R when all are True."""
    return [s >= 0 for s in clause_signs(p, r)]


def is_member(p: SymSeq, r) -> bool:
    return all(correct_side(p, r))


@dataclass(frozen=True)
class ClosureReport:
    ok: bool
    iterations: int
    violation: Optional[tuple[int, int]] = None
    final: Optional[SymSeq] = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "iterations": self.iterations,
            "violation": None if self.violation is None
            else {"iteration": self.violation[0], "surface": self.violation[1]},
            "final": None if self.final is None else self.final.to_json(),
        }


def closure_test(p: SymSeq, r, iters: int) -> ClosureReport:
    """Apply L_r ``iters`` times and confirm every image stays in R.

    A violation (iteration, surface) would contradict the closure theorem,
    so it points at a bug; surface -1 means a core entry stopped being positive.
    """
    r = _rational_r(r)
    if not is_member(p, r):
        raise NotInRegion("point is not on the correct side of every hypersurface")
    s = materialize(p)
    cur = p
    for it in range(1, iters + 1):
        s = apply_lr(s, r)
        try:
            cur = core_of(s, p.n, p.parity)
        except ValueError:
            return ClosureReport(False, it - 1, (it, -1), None)
        sides = correct_side(cur, r)
        if not all(sides):
            return ClosureReport(False, it - 1, (it, sides.index(False)), cur)
    return ClosureReport(True, iters, None, cur)


# -- decomposition into x and exponent gaps -----------------------------------

@dataclass(frozen=True)
class Decomposition:
    x: object
    gaps: tuple  # Fraction when exact, mpmath.mpf otherwise
    exact: tuple
    geometric: bool
    reason: Optional[str] = None


def _rational_log_ratio(ratio, base, approx, max_den: int = 64) -> Optional[Fraction]:
    if isinstance(ratio, QField) or isinstance(base, QField):
        return None
    ratio, base = Fraction(ratio), Fraction(base)
    for q in range(1, max_den + 1):
        pnum = int(mpmath.nint(approx * q))
        if pnum < 0:
            continue
        if ratio ** q == base ** pnum:
            return Fraction(pnum, q)
    return None


def decompose(p: SymSeq, dps: int = 30) -> Decomposition:
    """Write the core as ``x, x^{1+d_1}, x^{1+d_1+d_2}, ...`` with ``x = x_0``.

    Range and monotonicity decisions are exact comparisons of consecutive
    ratios (``d_j <= 1`` iff ``x_j/x_{j-1} <= x_0``; ``d_j >= d_{j+1}`` iff
    ``x_j^2 >= x_{j-1} x_{j+1}``).  Gap values are exact rationals when the
    ratio is a recognised rational power of ``x_0`` and ``dps``-digit
    logarithms otherwise; they are diagnostics only.
    """
    x = p.core
    if qf_cmp(x[0], 1) <= 0:
        raise ValueError("decompose needs x_0 > 1")
    ratios = [qdiv(x[j], x[j - 1]) for j in range(1, len(x))]
    gaps, exact = [], []
    with mpmath.workdps(dps):
        lx = mpmath.log(to_mpf(x[0], dps + 10))
        for q in ratios:
            val = mpmath.log(to_mpf(q, dps + 10)) / lx
            hit = _rational_log_ratio(q, x[0], val)
            gaps.append(hit if hit is not None else val)
            exact.append(hit is not None)
    reason = None
    for j, q in enumerate(ratios, start=1):
        if qf_cmp(q, 1) < 0:
            reason = f"d_{j} < 0"
            break
        if qf_cmp(q, x[0]) > 0:
            reason = f"d_{j} > 1"
            break
        if j < len(ratios) and qf_cmp(q, ratios[j]) < 0:
            reason = f"d_{j} < d_{j + 1}"
            break
    return Decomposition(x[0], tuple(gaps), tuple(exact), reason is None, reason)


# -- planar boundary samples ----------------------------------------------------

def boundary_rows(n: int, r, samples: int, x_max=4, parity: str = "even") -> list[dict]:
    """Points on every surface for ``n = 1`` (the planar case), ``samples`` per surface."""
    if n != 1:
        raise ValueError("boundary sampling is implemented for the planar case n = 1")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    r = _rational_r(r)
    x_max = Fraction(x_max)
    rows = []
    for i in range(samples):
        xv = 1 + (x_max - 1) * Fraction(i, samples - 1)
        for surface, d1 in ((0, Fraction(1)), (1, None)):
            pt = hypersurface_point(HParams(r, 1, parity, surface, xv))
            rows.append({
                "x": xv,
                "d1": d1,
                "coord0": pt.core[0],
                "coord1": pt.core[1],
                "surface": f"H{surface}",
            })
    return rows
