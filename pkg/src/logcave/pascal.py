"""Infinite log-concavity of rows of Pascal's triangle.

Modes:

``r0``    some ``L``-iterate is (3+sqrt5)/2-factor log-concave (a proof).
``r1``    the step-1 iteration count at 1+sqrt2 (comparison only) together
          with the generalized ``L_{1+sqrt2}`` run.  The latter is refuted
          at iteration 1 for every row n >= 4 (at index 1 once n >= 6,
          since ``n^2 < (1+sqrt2) n(n-1)/2`` there).
``both``  all three.

The step-1 certificates for r0 and the comparison share one orbit of ``L``,
which halves the cost on long rows.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .criteria import SOUND, Certificate, certify_infinite, default_max_iters
from .exactnum import R0, R1
from .seqcore import Seq, first_lc_violation, projective_orbit

MODES = ("r0", "r1", "both")


def binomial_row(n: int) -> Seq:
    """``C(n,0), ..., C(n,n)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Seq(tuple(math.comb(n, k) for k in range(n + 1)))


def _step1_scan(s: Seq, thresholds: dict, max_iters: int) -> dict:
    """One ``L`` orbit, tested against several thresholds; same output as certify_infinite."""
    pending = dict(thresholds)
    found = {}
    orbit = projective_orbit(s.values, 1)
    for it in range(max_iters + 1):
        cur = Seq(next(orbit), s.offset)
        neg = cur.first_negative()
        if neg is not None:
            for name, r in pending.items():
                found[name] = Certificate("refuted", name, r, 1, it, (it, neg), SOUND[name])
            return found
        for name in list(pending):
            if first_lc_violation(cur, pending[name]) is None:
                found[name] = Certificate("certified", name, pending.pop(name), 1, it, None,
                                          SOUND[name])
        if not pending:
            return found
    for name, r in pending.items():
        found[name] = Certificate("inconclusive", name, r, 1, max_iters, None, SOUND[name])
    return found


@dataclass(frozen=True)
class RowReport:
    n: int
    certificate_r0: Optional[Certificate]
    certificate_r1: Optional[Certificate]
    certificate_r1_generalized: Optional[Certificate]
    wall_time: float

    @property
    def r1_not_later(self) -> Optional[bool]:
        a, b = self.certificate_r0, self.certificate_r1
        if a is not None and b is not None and a.certified and b.certified:
            return b.iterations_applied <= a.iterations_applied
        return None

    @property
    def certified(self) -> bool:
        """Every step-1 certificate that was requested is certified."""
        cs = [c for c in (self.certificate_r0, self.certificate_r1) if c is not None]
        return bool(cs) and all(c.certified for c in cs)

    def to_json(self, timing: bool = False) -> dict:
        def cj(c):
            return None if c is None else c.to_json()

        out = {
            "n": self.n,
            "certificate_r0": cj(self.certificate_r0),
            "certificate_r1": cj(self.certificate_r1),
            "certificate_r1_generalized": cj(self.certificate_r1_generalized),
            "r1_not_later": self.r1_not_later,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out

    def csv_row(self) -> dict:
        def it(c):
            return "" if c is None or not c.certified else c.iterations_applied

        def v(c):
            return "" if c is None else c.verdict

        return {
            "n": self.n,
            "r0_iters": it(self.certificate_r0),
            "r1_iters": it(self.certificate_r1),
            "r0_verdict": v(self.certificate_r0),
            "r1_verdict": v(self.certificate_r1),
            "r1_generalized_verdict": v(self.certificate_r1_generalized),
        }


def verify_row(n: int, mode: str = "both", max_iters: Optional[int] = None) -> RowReport:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if max_iters is None:
        max_iters = default_max_iters()
    t0 = time.perf_counter()
    row = binomial_row(n)
    wanted = {}
    if mode in ("r0", "both"):
        wanted["r0_classic"] = R0
    if mode in ("r1", "both"):
        wanted["step1_comparison"] = R1
    certs = _step1_scan(row, wanted, max_iters)
    gen = None
    if mode in ("r1", "both"):
        gen = certify_infinite(row, R1, R1, max_iters)
    return RowReport(n, certs.get("r0_classic"), certs.get("step1_comparison"), gen,
                     time.perf_counter() - t0)


@dataclass(frozen=True)
class RangeSummary:
    rows: int
    certified: int
    max_iterations_r0: Optional[int]
    max_iterations_r1: Optional[int]
    r1_not_later_violations: int
    total_time: float

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "rows": self.rows,
            "certified": self.certified,
            "max_iterations_r0": self.max_iterations_r0,
            "max_iterations_r1": self.max_iterations_r1,
            "r1_not_later_violations": self.r1_not_later_violations,
        }
        if timing:
            out["total_time"] = round(self.total_time, 6)
        return out


def verify_range(lo: int, hi: int, mode: str = "both", max_iters: Optional[int] = None,
                 jobs: int = 1) -> list[RowReport]:
    """Reports for rows ``lo..hi`` inclusive, ordered by n whatever ``jobs`` is."""
    if lo > hi:
        raise ValueError("need lo <= hi")
    if lo < 0:
        raise ValueError("rows start at 0")
    if max_iters is None:
        max_iters = default_max_iters()
    tasks = [(n, mode, max_iters) for n in range(lo, hi + 1)]
    if jobs <= 1 or len(tasks) == 1:
        return [verify_row(*t) for t in tasks]
    # submit the largest rows first so they start early
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futures = {t[0]: ex.submit(verify_row, *t) for t in sorted(tasks, reverse=True)}
        return [futures[n].result() for n in range(lo, hi + 1)]


def summarize(reports: list[RowReport]) -> RangeSummary:
    def mx(attr):
        its = [getattr(r, attr).iterations_applied for r in reports
               if getattr(r, attr) is not None and getattr(r, attr).certified]
        return max(its) if its else None

    return RangeSummary(
        rows=len(reports),
        certified=sum(r.certified for r in reports),
        max_iterations_r0=mx("certificate_r0"),
        max_iterations_r1=mx("certificate_r1"),
        r1_not_later_violations=sum(r.r1_not_later is False for r in reports),
        total_time=sum(r.wall_time for r in reports),
    )
