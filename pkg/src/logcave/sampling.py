"""Seeded random generators for property tests and the ``sample`` subcommands.

Every generator takes a :class:`random.Random` so a fixed seed reproduces
the same objects.  Sequences are built from ratios with a random margin
and then confirmed with the exact predicate, so approximation in the
construction can never leak into the result.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

import mpmath

from .exactnum import QField, normalize, qf_cmp, to_mpf
from .region import fixed_point, is_member, phi_squared
from .seqcore import PARITIES, Seq, SymSeq, first_lc_violation, materialize
from .witness import SCHEMES, WitnessSpec, a_bound, c_bound_sq, is_valid_c


def rand_rational(rng: random.Random, lo, hi, max_den: int = 12) -> Fraction:
    """Uniform-ish rational in ``[lo, hi]`` with denominator at most ``max_den``."""
    lo, hi = Fraction(lo), Fraction(hi)
    q = rng.randint(1, max_den)
    a = -((-lo * q).__floor__())  # ceil
    b = (hi * q).__floor__()
    if a > b:
        return lo
    return Fraction(rng.randint(a, b), q)


def rational_above(v, den: int = 10 ** 4) -> Fraction:
    """Smallest ``k/den >= v`` (exact check)."""
    if not isinstance(v, QField):
        return Fraction(v)
    u = Fraction(int(mpmath.ceil(to_mpf(v, 40) * den)), den)
    while qf_cmp(u, v) < 0:
        u += Fraction(1, den)
    return u


def rational_below(v, den: int = 10 ** 4) -> Fraction:
    if not isinstance(v, QField):
        return Fraction(v)
    u = Fraction(int(mpmath.floor(to_mpf(v, 40) * den)), den)
    while qf_cmp(u, v) > 0:
        u -= Fraction(1, den)
    return u


def _margin(rng: random.Random, tight: float = 0.25) -> Fraction:
    # exact zero margin part of the time, otherwise up to 1
    if rng.random() < tight:
        return Fraction(0)
    return rand_rational(rng, 0, 1, 40)


def random_rlc(rng: random.Random, r, max_len: int = 12, min_len: int = 1,
               tight: float = 0.25) -> Seq:
    """Positive r-factor log-concave sequence of length ``min_len..max_len``."""
    rr = rational_above(normalize(r))
    while True:
        n = rng.randint(min_len, max_len)
        rho = rand_rational(rng, Fraction(1, 4), 8, 8)
        vals = [rand_rational(rng, Fraction(1, 2), 4, 6)]
        for _ in range(n - 1):
            vals.append(vals[-1] * rho)
            rho = rho / (rr * (1 + _margin(rng, tight)))
        s = Seq(tuple(normalize(v) for v in vals))
        if first_lc_violation(s, r) is None:
            return s


def random_r(rng: random.Random, lo=1, hi=4, max_den: int = 8) -> Fraction:
    return rand_rational(rng, lo, hi, max_den)


def random_region_member(rng: random.Random, r, n: int, parity: str,
                         exact_boundary: Optional[bool] = None) -> SymSeq:
    """Point of R built from core ratios; sometimes exactly on the boundary (in Q(sqrt d))."""
    r = Fraction(r)
    c = phi_squared(r)
    if exact_boundary is None:
        exact_boundary = rng.random() < 0.2
    if exact_boundary:
        k, ch = fixed_point(parity, r), c
    else:
        k, ch = rational_above(fixed_point(parity, r)), rational_above(c)
    while True:
        ratios = [normalize(k * (1 + _margin(rng, 0.3 if not exact_boundary else 0.6)))]
        for _ in range(n):
            ratios.append(normalize(ratios[-1] * ch * (1 + _margin(rng, 0.3))))
        ratios.reverse()  # rho_0 .. rho_n
        core, cur = [], 1
        for q in ratios:
            cur = normalize(cur * q)
            core.append(cur)
        p = SymSeq(tuple(core), parity)
        if is_member(p, r):
            return p


def random_q_core(rng: random.Random, r, n: int, parity: str) -> tuple:
    """Core whose materialized symmetric sequence is r-factor log-concave."""
    r = Fraction(r)
    while True:
        ratios = [r * (1 + _margin(rng, 0.3))]
        for _ in range(n):
            ratios.append(ratios[-1] * r * (1 + _margin(rng, 0.3)))
        ratios.reverse()
        core, cur = [], Fraction(1)
        for q in ratios:
            cur *= q
            core.append(normalize(cur))
        if first_lc_violation(materialize(SymSeq(tuple(core), parity)), r) is None:
            return tuple(core)


def random_witness_spec(rng: random.Random, scheme: Optional[str] = None,
                        max_n: int = 4) -> WitnessSpec:
    r = random_r(rng, 1, 4, 6)
    scheme = scheme or rng.choice(sorted(SCHEMES))
    parity = rng.choice(PARITIES)
    n = rng.randint(1, max_n)
    top = to_mpf(c_bound_sq(r), 40)
    if scheme == "pentagonal":
        top = mpmath.sqrt(top)
    while True:
        C = Fraction(int(mpmath.floor(top * rng.uniform(0.2, 0.999) * 1000)), 1000)
        if C > 0 and is_valid_c(C, r, scheme):
            break
    q = random_q_core(rng, r, n, parity) if rng.random() < 0.7 else None
    a = a_bound(r, C, n, parity, scheme) * (1 + rand_rational(rng, Fraction(1, 100), 1, 100))
    return WitnessSpec(r, C, n, scheme, parity, a, q)


def random_geometric(rng: random.Random, r, max_n: int = 5) -> SymSeq:
    """r-factor log-concave symmetric sequence ``x, x^{1+d_1}, ...`` with exact rational powers.

    ``x = t^q`` and every gap has denominator ``q``, so each entry is an integer power of ``t``.
    """
    while True:
        n = rng.randint(0, max_n)
        t = rng.randint(2, 9)
        q = rng.randint(1, 6)
        incs = sorted((rng.randint(0, q) for _ in range(n)), reverse=True)
        e = [q]
        for d in incs:
            e.append(e[-1] + d)
        p = SymSeq(tuple(t ** k for k in e), rng.choice(PARITIES))
        if first_lc_violation(materialize(p), r) is None:
            return p
