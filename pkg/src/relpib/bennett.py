"""Upper bounds for large |c| from the simultaneous-approximation theorem.

Inputs to the theorem are m = 2, a1 = 2, a2 = -2, M = 2, T = c, so every
quantity depends on ``t = |c|`` only.  All of them are certified balls.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from flint import arb, ctx

from .balls import DEFAULT_PREC, adaptive, lt, rel_width, to_json
from .errors import DomainError, InapplicableError
from .pell import eps_for_mu, solves_system
from .ring import QuadInt, RingSpec, in_Sc, units

AbsLike = Union[int, Fraction, arb, QuadInt]

LARGE_C = 159108
LAMBDA_WINDOW = 155352


def abs_ball(c_abs: AbsLike, prec: int = DEFAULT_PREC) -> arb:
    """Ball for ``|c|``; a QuadInt is converted through its exact norm."""
    with ctx.workprec(prec):
        if isinstance(c_abs, QuadInt):
            return arb(c_abs.norm()).sqrt()
        if isinstance(c_abs, Fraction):
            return arb(c_abs.numerator) / c_abs.denominator
        if isinstance(c_abs, float):
            raise DomainError("pass |c| exactly (int, Fraction, ball or element), not a float")
        return arb(c_abs)


@dataclass
class BennettReport:
    c_abs: arb
    l: arb
    L: arb
    p_small: arb
    P_big: arb
    lam: arb
    C_inv: arb
    prec: int
    theorem_applicable: bool
    two_minus_lambda_positive: bool
    lower_log_U: arb
    upper_log_U: Optional[arb] = None
    excludes_nontrivial: bool = False

    def to_json(self) -> dict:
        out = {}
        for key in ("c_abs", "l", "L", "p_small", "P_big", "lam", "C_inv", "lower_log_U"):
            out[key] = to_json(getattr(self, key), self.prec)
        out["upper_log_U"] = to_json(self.upper_log_U, self.prec) if self.upper_log_U is not None else None
        out["theorem_applicable"] = self.theorem_applicable
        out["two_minus_lambda_positive"] = self.two_minus_lambda_positive
        out["excludes_nontrivial"] = self.excludes_nontrivial
        return out


def two_minus_lambda(t: arb) -> arb:
    """``f(t) = 2 - lambda(t)``."""
    return 1 - (arb(1024).log() + (t + 3).log()) / (arb(27).log() - arb(4096).log() + 2 * (t - 2).log())


def bennett_params(c_abs: AbsLike, prec: int = DEFAULT_PREC) -> BennettReport:
    """Every theorem input for ``|c| = c_abs``, plus both bounds on ``log|U|``.

    The decision flags are certified; an undecidable comparison raises
    PrecisionError so callers can retry at higher precision.
    """
    with ctx.workprec(prec):
        t = abs_ball(c_abs, prec)
        if not t > 2:
            raise DomainError(f"the approximation theorem needs |c| > 2, got {t}")
        l = arb(27) / 64 * t / (t - 2)
        L = arb(27) / 4096 * (t - 2) ** 2
        p_small = ((t + 3) / (t - 2)).sqrt()
        P_big = 1024 * (t + 3)
        applicable = lt(arb(1), L, "L > 1")
        lam = 1 + P_big.log() / L.log() if applicable else arb("nan")
        two_l = 2 * l
        scale = two_l if lt(arb(1), two_l, "2l > 1") else arb(1)
        C_inv = 4 * p_small * P_big * (scale ** (lam - 1) if applicable else arb(1))
        lower = ((2 * t + arb(1) / 4).sqrt() - arb(1) / 2) * (2 * t - 3).log()
        report = BennettReport(t, l, L, p_small, P_big, lam, C_inv, prec, applicable, False, lower)
        if not applicable:
            return report
        window = 2 - lam
        report.two_minus_lambda_positive = lt(arb(0), window, "2 - lambda > 0")
        if not report.two_minus_lambda_positive:
            return report
        upper = (2 * C_inv / (t * (t - 2)).sqrt()).log() / window
        report.upper_log_U = upper
        report.excludes_nontrivial = not lt(lower, upper, "lower vs upper bound on log|U|")
        return report


def final_inequality_sides(c_abs: AbsLike, prec: int = DEFAULT_PREC) -> tuple[arb, arb]:
    """Both sides of the closing comparison, written exactly as derived in print.

    Left: ``(sqrt(2t+1/4) - 1/2) log(2t-3)``.  Right:
    ``log(8192 (t+3)/sqrt(t(t-2)) sqrt((t+3)/(t-2))) / (1 - log(1024(t+3)) / log(27/4096 (t-2)^2))``.
    """
    with ctx.workprec(prec):
        t = abs_ball(c_abs, prec)
        lhs = ((2 * t + arb(1) / 4).sqrt() - arb(1) / 2) * (2 * t - 3).log()
        num = (8192 * (t + 3) / (t * (t - 2)).sqrt() * ((t + 3) / (t - 2)).sqrt()).log()
        den = 1 - (1024 * (t + 3)).log() / (arb(27) / 4096 * (t - 2) ** 2).log()
        return lhs, num / den


def approximation_bound(c_abs: AbsLike, U_abs: AbsLike, prec: int = DEFAULT_PREC) -> arb:
    """``2 / sqrt(|c|(|c|-2)) * |U|^-2``."""
    with ctx.workprec(prec):
        t = abs_ball(c_abs, prec)
        u = abs_ball(U_abs, prec)
        if not t > 2:
            raise DomainError("the approximation lemma needs |c| > 2")
        if not u > 0:
            raise DomainError("U must be nonzero")
        return 2 / (t * (t - 2)).sqrt() / (u * u)


def resolve_large_c(c_abs: AbsLike, prec: Optional[int] = None) -> bool:
    """True iff the certified bounds leave only the trivial solutions.

    With ``prec`` given a single evaluation is made (PrecisionError if the
    comparison is undecidable); otherwise precision is raised adaptively.
    """
    if prec is not None:
        return bennett_params(c_abs, prec).excludes_nontrivial
    return adaptive(lambda p: bennett_params(c_abs, p).excludes_nontrivial)


def certified_margin(c_abs: AbsLike, prec: int = DEFAULT_PREC) -> tuple[arb, float]:
    """``lower - upper`` and the worst relative ball width among the two sides."""
    r = bennett_params(c_abs, prec)
    if r.upper_log_U is None:
        raise InapplicableError("no upper bound: 2 - lambda is not positive")
    return r.lower_log_U - r.upper_log_U, max(rel_width(r.lower_log_U), rel_width(r.upper_log_U))


def trivial_solution_set(ring: RingSpec, mu: QuadInt) -> list[tuple[QuadInt, QuadInt, QuadInt]]:
    """The eight triples ``(+-eps, +-eps, +-eps)``.

    Both residuals are affine in c, so checking them at c = 0 and c = 1 proves
    the triples solve the system for every c.
    """
    eps = eps_for_mu(mu)
    out = []
    for su in (1, -1):
        for sv in (1, -1):
            for sz in (1, -1):
                triple = (su * eps, sv * eps, sz * eps)
                for c in (ring.zero, ring.one):
                    if not solves_system(*triple, c, mu):
                        raise AssertionError(f"{triple} does not solve the system")
                out.append(triple)
    return out


def thue_solutions_large_c(ring: RingSpec, mu: QuadInt, c: Optional[QuadInt] = None
                           ) -> list[tuple[QuadInt, QuadInt]]:
    """Thue solutions forced by the trivial Pell triples.

    With ``U, V, Z`` all in ``{+-eps}``, ``V + Z = 4pq`` is 0 or ``+-2 eps``;
    ``|2pq|`` is 0 or at least 2, so ``pq = 0`` and the nonzero entry is a unit
    whose fourth power is ``mu``.  The candidates ``{0} u units`` are checked
    exhaustively.
    """
    if c is not None:
        if c.ring != ring:
            raise DomainError("c lives in a different ring")
        if in_Sc(c):
            raise InapplicableError("c lies in S_c")
        if c.norm() < LARGE_C * LARGE_C:
            raise InapplicableError(f"|c| < {LARGE_C}: large-|c| classification does not apply")
    eps = eps_for_mu(mu)
    triples = set(trivial_solution_set(ring, mu))
    cands = [ring.zero] + units(ring)
    out = []
    for p in cands:
        for q in cands:
            p2, q2, pq = p * p, q * q, p * q
            U, V, Z = p2 + q2, p2 + 2 * pq - q2, -p2 + 2 * pq + q2
            if (U, V, Z) not in triples:
                continue
            if (V + Z) not in (ring.zero, 2 * eps, -2 * eps):
                raise AssertionError("V + Z outside {0, +-2 eps}")
            if not pq.is_zero():
                continue
            if p2 * p2 + q2 * q2 == mu:
                out.append((p, q))
    out.sort(key=lambda pq: (pq[0].sort_key(), pq[1].sort_key()))
    return out
