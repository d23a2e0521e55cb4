"""Continued-fraction reduction of the huge index bounds.

Two inhomogeneous inequalities come out of |Lambda| < 3^-m and
|Lambda| < 1.55^-n:

    |m*theta - n + gamma| < delta * 3^-m        (m >= n)
    |n*theta' - m + gamma'| < delta' * 1.55^-n  (n >= m)

For a convergent p/q of theta with q > 6M and
eps = ||gamma q|| - M ||theta q|| > 0 there is no solution with
log(delta q / eps) / log a <= m <= M.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence

from flint import arb, ctx

from .balls import PREC_CAP, lt, nearest_integer, to_json, upper_floor
from .errors import DomainError, InapplicableError, PrecisionError, PrecisionExhausted
from .linforms import BW_M_MAX, BW_N_MAX, linform_instance
from .pell import sequence, SeqKind
from .ring import QuadInt, format_element, in_Sc, is_excluded

DEFAULT_SCHEDULE = (512, 1024, 2048, 4096)
MAX_CONVERGENT_TRIES = 10


class Convergent(NamedTuple):
    p: int
    q: int
    index: int


class Instance(enum.Enum):
    Ineq333 = "333"
    Ineq155 = "155"

    @property
    def base(self) -> Fraction:
        return Fraction(3) if self is Instance.Ineq333 else Fraction(155, 100)


class Status(enum.Enum):
    Reduced = "Reduced"
    EpsilonNonpositive = "EpsilonNonpositive"
    PrecisionExhausted = "PrecisionExhausted"


def partial_quotients(theta: arb) -> Iterator[int]:
    """Certified partial quotients of ``theta``.

    Stops (StopIteration) when ``theta`` is an exact rational whose expansion
    has ended; raises PrecisionError when the ball is too wide to continue.
    """
    x = arb(theta)
    while True:
        a = x.floor().unique_fmpz()
        if a is None:
            raise PrecisionError(f"partial quotient of {x} is not certified", "continued fraction")
        a = int(a)
        yield a
        frac = x - a
        if frac.is_exact() and frac.is_zero():
            return
        if not frac > 0:
            raise PrecisionError("remainder not certified positive", "continued fraction")
        x = 1 / frac


def convergents(theta: arb) -> Iterator[Convergent]:
    p0, q0, p1, q1 = 1, 0, 0, 1
    for k, a in enumerate(partial_quotients(theta)):
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        yield Convergent(p0, q0, k)


def cf_expand(theta: arb, q_min: int) -> Convergent:
    """First convergent of ``theta`` with ``q > q_min``."""
    for conv in convergents(theta):
        if conv.q > q_min:
            return conv
    raise DomainError(f"expansion of {theta} terminates before q > {q_min}")


def convergents_after(theta: arb, q_min: int, count: int) -> list[Convergent]:
    """Up to ``count`` consecutive convergents beyond ``q_min``; stops early at precision limits."""
    out = []
    try:
        for conv in convergents(theta):
            if conv.q > q_min:
                out.append(conv)
                if len(out) == count:
                    break
    except PrecisionError:
        if not out:
            raise
    if not out:
        raise DomainError(f"expansion of {theta} terminates before q > {q_min}")
    return out


def _dist(x: arb, what: str) -> arb:
    """``||x||``; falls back to the floor when x sits near a half-integer."""
    try:
        return abs(x - nearest_integer(x, what))
    except PrecisionError:
        n = x.floor().unique_fmpz()
        if n is None:
            raise
        f = x - int(n)
        return f if lt(f, 1 - f, what) else 1 - f


class StepResult(NamedTuple):
    q: int
    eps_hat: arb
    new_bound: Optional[int]


def reduction_step(theta: arb, gamma: arb, delta: arb, a, M_bound: int,
                   conv: Convergent) -> StepResult:
    """One application of the convergent lemma; ``new_bound`` is None when eps <= 0."""
    if conv.q <= 6 * M_bound:
        raise DomainError("the convergent must satisfy q > 6M")
    q = conv.q
    eps_hat = _dist(gamma * q, "||gamma q||") - M_bound * _dist(theta * q, "||theta q||")
    if not eps_hat > 0:
        return StepResult(q, eps_hat, None)
    a = Fraction(a)
    log_a = (arb(a.numerator) / a.denominator).log()
    bound = upper_floor((delta * q / eps_hat).log() / log_a)
    return StepResult(q, eps_hat, min(bound, M_bound))


@dataclass
class ReductionOutcome:
    c: QuadInt
    instance: Instance
    initial_bound: int
    steps: list = field(default_factory=list)  # StepResult with new_bound set
    final_bound: int = 0
    status: Status = Status.Reduced
    prec: int = 0
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "c": format_element(self.c),
            "instance": self.instance.value,
            "initial_bound": str(self.initial_bound),
            "steps": [
                {"q": str(s.q), "eps_hat": to_json(s.eps_hat, self.prec), "new_bound": s.new_bound}
                for s in self.steps
            ],
            "final_bound": self.final_bound if self.final_bound < 10**6 else str(self.final_bound),
            "status": self.status.value,
            "prec_bits": self.prec,
            "detail": self.detail,
        }


def instance_data(c: QuadInt, instance: Instance, prec: int) -> tuple[arb, arb, arb]:
    """``(theta, gamma, delta)`` of the chosen inequality at ``c``."""
    lf = linform_instance(c, prec)
    with ctx.workprec(prec):
        le, lt_, lx = lf.eta.log(), lf.theta.log(), lf.xi_const.log()
        if instance is Instance.Ineq333:
            return lt_ / le, -lx / le, 1 / le
        return le / lt_, lx / lt_, 1 / lt_


def _one_round(c, instance, M, prec) -> Optional[StepResult]:
    theta, gamma, delta = instance_data(c, instance, prec)
    with ctx.workprec(prec):
        for conv in convergents_after(theta, 6 * M, MAX_CONVERGENT_TRIES):
            step = reduction_step(theta, gamma, delta, instance.base, M, conv)
            if step.new_bound is not None:
                return step
    return None


def reduce_instance(c: QuadInt, instance: Instance, bound: int,
                    schedule: Sequence[int] = DEFAULT_SCHEDULE) -> ReductionOutcome:
    """Iterate the lemma until the bound stops shrinking twice in a row."""
    out = ReductionOutcome(c, instance, bound, final_bound=bound)
    M = bound
    stale = 0
    level = 0
    while stale < 2:
        step = None
        while level < len(schedule):
            prec = schedule[level]
            try:
                step = _one_round(c, instance, M, prec)
            except PrecisionError as exc:
                out.detail = str(exc)
                step = None
            out.prec = max(out.prec, prec)
            if step is not None:
                break
            level += 1
        if step is None:
            # no convergent worked even at the top precision: keep what we have
            if not out.steps:
                out.status = Status.EpsilonNonpositive if "certified" not in out.detail else Status.PrecisionExhausted
            break
        out.steps.append(step)
        if step.new_bound < M:
            M = step.new_bound
            stale = 0
        else:
            stale += 1
    out.final_bound = M
    if out.steps and out.status is Status.Reduced:
        out.detail = ""
    return out


def check_reducible(c: QuadInt) -> None:
    if is_excluded(c):
        raise DomainError(f"c = {c.pretty()} is excluded")
    if in_Sc(c):
        raise InapplicableError(f"c = {c.pretty()} lies in S_c")
    if c.x <= 0:
        raise InapplicableError("reduction needs Re(c) > 0 (Re(c) = 0 closes otherwise; negate c first)")
    if c.norm() < 2:
        raise InapplicableError("reduction needs |c| >= sqrt(2)")


def reduce_for_c(c: QuadInt, bw_bounds: tuple[int, int] = (BW_M_MAX, BW_N_MAX),
                 prec_schedule: Sequence[int] = DEFAULT_SCHEDULE
                 ) -> tuple[ReductionOutcome, ReductionOutcome]:
    check_reducible(c)
    schedule = [p for p in prec_schedule if p <= PREC_CAP]
    if not schedule:
        raise DomainError("empty precision schedule")
    first = reduce_instance(c, Instance.Ineq333, bw_bounds[0], schedule)
    second = reduce_instance(c, Instance.Ineq155, bw_bounds[1], schedule)
    for o in (first, second):
        if o.status is Status.PrecisionExhausted:
            raise PrecisionExhausted(f"reduction at c = {c}: {o.detail}", f"reduction {o.instance.value}",
                                     schedule[-1])
    return first, second


def search_box(first: ReductionOutcome, second: ReductionOutcome) -> int:
    """Side of the square of (m, n) left after reduction.

    m >= n forces m <= B1, n >= m forces n <= B2; both cases fit in
    ``[1, max(B1, B2)]^2``.
    """
    return max(first.final_bound, second.final_bound)


def finish_small_indices(c: QuadInt, m_max: int, n_max: int) -> list[tuple[int, int, int]]:
    """All ``(m, n, sign)`` with ``1 <= m <= m_max``, ``1 <= n <= n_max``, ``u_m = sign u'_n``."""
    if m_max > 10**4 or n_max > 10**4:
        raise DomainError("index box too large for exhaustive search")
    us = sequence(c, 1, SeqKind.U_plus, m_max + 1)
    ups = sequence(c, 1, SeqKind.U_minus, n_max + 1)
    where = {}
    for n in range(1, n_max + 1):
        where.setdefault(ups[n], []).append((n, 1))
        where.setdefault(-ups[n], []).append((n, -1))
    hits = []
    for m in range(1, m_max + 1):
        for n, sign in where.get(us[m], ()):
            hits.append((m, n, sign))
    return hits
