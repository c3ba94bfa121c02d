"""Certificates of infinite log-concavity and the quartic necessary condition.

Three sufficient conditions are available:

``r0_classic``
    Some iterate ``L^i(a)`` is r-factor log-concave with ``r >= (3+sqrt5)/2``.
    Such an iterate stays r-factor log-concave under ``L`` forever, so ``a``
    is infinitely log-concave.  This is a proof.

``r1_generalized``
    Some iterate ``L_r^i(a)`` is r-factor log-concave with ``r >= 1+sqrt2``.
    This is **not** a proof: ``{1, 8/5, 1}`` is (1+sqrt2)-factor log-concave
    but ``L_{1+sqrt2}`` maps it to ``{1, 39/25 - sqrt2, 1}`` (middle term about
    0.146) and the next step is negative.  The certificate reports
    ``sound = False``.

``symmetric_lemma``
    Even symmetric sequences with ``a_k^2 >= (1+sqrt2) a_{k-1} a_{k+1}``
    below the centre and ``a_m >= (1+r) a_{m-1}`` at the centre.  Also
    ``sound = False``: ``{1, 5/2, 5/2, 1}`` passes with r = 1 and its
    ``L_{1+sqrt2}`` orbit is negative after two steps.

``step1_comparison`` runs the ``r0_classic`` loop with a constant below
(3+sqrt5)/2.  It only exists to count iterations for comparisons.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from .errors import NotRFactorLC, ParityUnsupported, ThresholdTooLow
from .exactnum import R0, R1, field_of, format_number, normalize, qf_cmp, qf_sign, sign_sub_scaled
from .seqcore import Seq, SymSeq, check_r, first_lc_violation, materialize, projective_orbit

CRITERIA = ("r0_classic", "r1_generalized", "symmetric_lemma", "step1_comparison")
SOUND = {"r0_classic": True, "r1_generalized": False, "symmetric_lemma": False,
         "step1_comparison": False}

DEFAULT_MAX_ITERS = 20


def default_max_iters() -> int:
    """20, or the value of ``LOGCAVE_MAX_ITERS``."""
    env = os.environ.get("LOGCAVE_MAX_ITERS")
    if env:
        try:
            v = int(env)
        except ValueError:
            raise ValueError(f"LOGCAVE_MAX_ITERS must be an integer, got {env!r}") from None
        if v < 0:
            raise ValueError("LOGCAVE_MAX_ITERS must be >= 0")
        return v
    return DEFAULT_MAX_ITERS


@dataclass(frozen=True)
class Certificate:
    verdict: str  # certified | refuted | inconclusive
    criterion: str
    r_used: object
    step_r: object
    iterations_applied: int
    failing: Optional[tuple[int, int]] = None
    sound: bool = field(default=False)

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "criterion": self.criterion,
            "r": format_number(self.r_used),
            "step_r": format_number(self.step_r),
            "iterations": self.iterations_applied,
            "failing": None if self.failing is None
            else {"iteration": self.failing[0], "index": self.failing[1]},
            "sound": self.sound,
        }


def _criterion_name(r_criterion, step_r, comparison: bool) -> str:
    if comparison:
        if step_r != 1:
            raise ValueError("comparison runs use step_r = 1")
        return "step1_comparison"
    if step_r == 1:
        if qf_cmp(r_criterion, R0) < 0:
            raise ThresholdTooLow(
                f"step_r = 1 needs r >= (3+sqrt5)/2, got {format_number(r_criterion)}")
        return "r0_classic"
    if step_r == r_criterion:
        if qf_cmp(r_criterion, R1) < 0:
            raise ThresholdTooLow(
                f"step_r = r needs r >= 1+sqrt2, got {format_number(r_criterion)}")
        return "r1_generalized"
    raise ValueError("step_r must be 1 or equal to r_criterion")


def certify_infinite(s: Seq, r_criterion=R0, step_r=1, max_iters: Optional[int] = None,
                     *, comparison: bool = False) -> Certificate:
    """Iterate ``L_{step_r}`` until an iterate is ``r_criterion``-factor log-concave.

    The test runs before the first application, so an already strong sequence
    certifies at iteration 0.  A negative entry in any iterate refutes.
    """
    r_criterion = normalize(r_criterion)
    step_r = check_r(step_r)
    if max_iters is None:
        max_iters = default_max_iters()
    if max_iters < 0:
        raise ValueError("max_iters must be >= 0")
    name = _criterion_name(r_criterion, step_r, comparison)
    field_of(s.values + (r_criterion, step_r))

    orbit = projective_orbit(s.values, step_r)
    for it in range(max_iters + 1):
        cur = Seq(next(orbit), s.offset)
        neg = cur.first_negative()
        if neg is not None:
            return Certificate("refuted", name, r_criterion, step_r, it, (it, neg), SOUND[name])
        if first_lc_violation(cur, r_criterion) is None:
            return Certificate("certified", name, r_criterion, step_r, it, None, SOUND[name])
    return Certificate("inconclusive", name, r_criterion, step_r, max_iters, None, SOUND[name])


def symmetric_criterion(sym: SymSeq, r=1) -> Certificate:
    """Two-clause test on an even symmetric sequence ``a_0..a_{2m+1}`` (``a_0 = 1``).

    (i) ``a_k^2 >= (1+sqrt2) a_{k-1} a_{k+1}`` for ``k < m``;
    (ii) ``a_m >= (1+r) a_{m-1}``.
    """
    if sym.parity != "even":
        raise ParityUnsupported("the symmetric criterion is defined for even sequences only")
    r = check_r(r)
    field_of(sym.core + (r,))
    a = materialize(sym).values
    m = sym.n + 1
    for k in range(1, m):
        if sign_sub_scaled(a[k] * a[k], R1, a[k - 1] * a[k + 1]) < 0:
            return Certificate("inconclusive", "symmetric_lemma", R1, R1, 0, (0, k), False)
    if qf_sign(a[m] - (1 + r) * a[m - 1]) < 0:
        return Certificate("inconclusive", "symmetric_lemma", R1, R1, 0, (0, m), False)
    return Certificate("certified", "symmetric_lemma", R1, R1, 0, None, False)


def quartic_check(s: Seq, r=1) -> Optional[int]:
    """First k with ``r^5 a_{k-2} a_{k-1} a_{k+1} a_{k+2} > a_k^4``, or None.

    Requires ``s`` nonnegative and r-factor log-concave.  Under that
    hypothesis the inequality always holds (multiply the three log-concavity
    inequalities around ``k``), so a returned index means the input was not
    what it claimed to be.
    """
    r = normalize(r)
    field_of(s.values + (r,))
    s.require_nonnegative()
    k = first_lc_violation(s, r)
    if k is not None:
        raise NotRFactorLC(f"input is not r-factor log-concave at index {k}")
    r5 = r ** 5
    for k in s.indices:
        prod = s[k - 2] * s[k - 1] * s[k + 1] * s[k + 2]
        ak2 = s[k] * s[k]
        if sign_sub_scaled(ak2 * ak2, r5, prod) < 0:
            return k
    return None


@dataclass(frozen=True)
class Comparison:
    r0: Certificate
    r1: Certificate

    @property
    def r1_not_later(self) -> Optional[bool]:
        """None unless both certified."""
        if self.r0.certified and self.r1.certified:
            return self.r1.iterations_applied <= self.r0.iterations_applied
        return None

    def to_json(self) -> dict:
        return {"r0": self.r0.to_json(), "r1": self.r1.to_json(),
                "r1_not_later": self.r1_not_later}


def compare_criteria(s: Seq, max_iters: Optional[int] = None) -> Comparison:
    """Iterations of ``L`` needed to reach (3+sqrt5)/2- and (1+sqrt2)-factor log-concavity."""
    s.require_nonnegative()
    return Comparison(
        certify_infinite(s, R0, 1, max_iters),
        certify_infinite(s, R1, 1, max_iters, comparison=True),
    )
