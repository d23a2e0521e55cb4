"""Linear forms in three logarithms attached to u_m = +-u'_n.

With s = sqrt(c) sqrt(c+2) and s' = sqrt(c) sqrt(c-2) (principal roots),

    P = (c + s)(c + 1 + s)^m / sqrt(c+2),   Q = (c + s')(c - 1 + s')^n / sqrt(c-2),

and Lambda = log|Q| - log|P| = n log eta - m log theta + log xi.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from flint import acb, arb, ctx

from .balls import DEFAULT_PREC, adaptive, lt, principal_sqrt
from .errors import AnomalyError, DomainError, InapplicableError
from .pell import surd_sign, u_seq, uprime_seq
from .ring import QuadInt, embed, in_Sc

BW_M_MAX = 67 * 10**35
BW_N_MAX = 1715 * 10**34
HEIGHT_CAP = Fraction(2812, 100)
HEIGHT_CAP_XI = Fraction(27182, 100)


def normalize_c(c: QuadInt) -> tuple[QuadInt, bool]:
    """``(-c, True)`` when Re(c) < 0 (V and Z trade places), else ``(c, False)``."""
    if c.x < 0:
        return -c, True
    return c, False


def _check_domain(c: QuadInt):
    if c.x < 0:
        raise DomainError("expected Re(c) >= 0; apply normalize_c first")
    if c.y == 0 and c.x in (0, 2, 4, -2, -4):
        raise DomainError(f"c = {c.pretty()} is degenerate for P and Q")


def _roots(c: QuadInt, prec: int):
    cc = embed(c, prec)
    rc = principal_sqrt(cc, "sqrt(c)")
    rp = principal_sqrt(cc + 2, "sqrt(c+2)")
    rm = principal_sqrt(cc - 2, "sqrt(c-2)")
    return cc, rc, rp, rm


def build_P(c: QuadInt, m: int, prec: int = DEFAULT_PREC) -> acb:
    _check_domain(c)
    with ctx.workprec(prec):
        cc, rc, rp, _ = _roots(c, prec)
        s = rc * rp
        return (cc + s) * (cc + 1 + s) ** m / rp


def build_Q(c: QuadInt, n: int, prec: int = DEFAULT_PREC) -> acb:
    _check_domain(c)
    with ctx.workprec(prec):
        cc, rc, _, rm = _roots(c, prec)
        s = rc * rm
        return (cc + s) * (cc - 1 + s) ** n / rm


class Coefficient(enum.Enum):
    """Candidate coefficients of ``P^-1`` in the reconstruction of ``u_m``."""

    C_PLUS_2 = "2c/(c+2)"
    C_PLUS_1 = "2c/(c+1)"


def reconstruct_u(c: QuadInt, eps: QuadInt, m: int, prec: int = DEFAULT_PREC,
                  coefficient: Coefficient = Coefficient.C_PLUS_2) -> acb:
    """``eps/(2 sqrt c) (P + k P^-1)`` with ``k`` the chosen coefficient."""
    with ctx.workprec(prec):
        cc = embed(c, prec)
        P = build_P(c, m, prec)
        k = 2 * cc / (cc + (2 if coefficient is Coefficient.C_PLUS_2 else 1))
        return embed(eps, prec) / (2 * principal_sqrt(cc)) * (P + k / P)


def reconstruct_uprime(c: QuadInt, eps: QuadInt, n: int, prec: int = DEFAULT_PREC) -> acb:
    """``eps/(2 sqrt c) (Q - 2c/(c-2) Q^-1)``."""
    with ctx.workprec(prec):
        cc = embed(c, prec)
        Q = build_Q(c, n, prec)
        return embed(eps, prec) / (2 * principal_sqrt(cc)) * (Q - 2 * cc / (cc - 2) / Q)


def reconstruction_verdict(c: QuadInt, eps: QuadInt, m: int, prec: int = DEFAULT_PREC) -> dict:
    """Which coefficient candidate reproduces ``u_m`` (exact value inside the ball)."""
    exact = embed(u_seq(c, eps, m), prec)
    return {k.value: reconstruct_u(c, eps, m, prec, k).overlaps(exact) for k in Coefficient}


def _eta_theta_xi(c: QuadInt, prec: int) -> tuple[arb, arb, arb]:
    cc, rc, rp, rm = _roots(c, prec)
    eta = abs(cc - 1 + rc * rm)
    theta = abs(cc + 1 + rc * rp)
    xi = abs(rp * (rc + rm) / (rm * (rc + rp)))
    return eta, theta, xi


def lambda_value(c: QuadInt, m: int, n: int, prec: int = DEFAULT_PREC) -> arb:
    """Ball for Lambda; the two expressions for it must overlap."""
    _check_domain(c)
    with ctx.workprec(prec):
        eta, theta, xi = _eta_theta_xi(c, prec)
        three_term = n * eta.log() - m * theta.log() + xi.log()
        direct = abs(build_Q(c, n, prec)).log() - abs(build_P(c, m, prec)).log()
        if not three_term.overlaps(direct):
            raise AnomalyError(f"Lambda expressions disagree at c = {c}: {three_term} vs {direct}")
        return three_term


def lambda_upper_bounds(m: int, n: int, prec: int = DEFAULT_PREC) -> tuple[arb, arb]:
    """``(3^-m, 1.55^-n)``; valid bounds on |Lambda| only when u_m = +-u'_n, m, n >= 2."""
    with ctx.workprec(prec):
        return arb(3) ** (-m), (arb(155) / 100) ** (-n)


class LambdaStatus(enum.Enum):
    NonzeroCertified = "nonzero"
    ZeroPossible_ReZero = "re_zero"


def lambda_nonzero(c: QuadInt) -> LambdaStatus:
    """Lambda vanishes for no (m, n) exactly when Re(c) != 0.

    For Re(c) = 0 the intersection equation has no solutions with m, n > 0,
    which closes those parameters without linear forms.
    """
    if in_Sc(c):
        raise InapplicableError(f"c = {c.pretty()} lies in S_c")
    return LambdaStatus.NonzeroCertified if c.x != 0 else LambdaStatus.ZeroPossible_ReZero


def p_differs_from_pm_q(c: QuadInt) -> bool:
    """``|2c/(c^2-4)| < 256 <= |P|^2``, so P = +-Q is impossible (exact)."""
    return c.norm() * 4 < 256 * 256 * (c * c - 4).norm()


def exclude_index_one(c: QuadInt, prec: int = DEFAULT_PREC) -> bool:
    """No intersection ``u_m = +-u'_n`` with ``min(m, n) = 1`` (and ``m, n >= 1``).

    The numeric links ``2|c|+1 < (2 sqrt(1+|c|^2)-1)(2|c|-1)`` and
    ``2|c|+1 < (2 sqrt(1+|c|^2)-1)^2`` are certified.  The lower bounds on
    ``|u_m|, |u'_n|`` used to finish the chain fail for small |c| (c = 3
    gives |u'_2| = 19 < 26.6), so the chain is closed exactly instead:
    ``|u_1| < |u'_2|``, ``|u'_1| < |u_2|``, both sequences nondecreasing in
    modulus (|c+1|, |c-1| >= 1 and |2c+-1| >= 1), and ``u_1 != +-u'_1``.
    """
    N = c.norm()
    if N < 2:
        raise DomainError("needs |c| >= sqrt(2)")
    if c.x < 0:
        raise DomainError("needs Re(c) >= 0")
    u1, v1 = u_seq(c, 1, 1), uprime_seq(c, 1, 1)
    # |u_1|, |u'_1| <= 2|c|+1, i.e. norm <= 4N + 1 + 4 sqrt(N)
    for a in (u1, v1):
        if surd_sign(4 * N + 1 - a.norm(), 4, N) < 0:
            return False
    with ctx.workprec(prec):
        t = arb(N).sqrt()
        k = 2 * (1 + arb(N)).sqrt() - 1
        if not lt(2 * t + 1, k * (2 * t - 1), "index-one chain for u'"):
            return False
        if not lt(2 * t + 1, k * k, "index-one chain for u"):
            return False
    if (c + 1).norm() < 1 or (c - 1).norm() < 1 or u1.norm() < 1 or v1.norm() < 1:
        return False
    if not (u1.norm() < uprime_seq(c, 1, 2).norm() and v1.norm() < u_seq(c, 1, 2).norm()):
        return False
    return u1 != v1 and u1 != -v1


# -- Baker-Wustholz constant and absolute bounds ---------------------------------


def bw_constant(prec: int = DEFAULT_PREC) -> arb:
    """``18 * 4! * 3^4 * (32*2048)^5 * h1 h2 h3 * log(2*3*2048)`` with the uniform height caps."""
    with ctx.workprec(prec):
        h = arb(HEIGHT_CAP.numerator) / HEIGHT_CAP.denominator
        hx = arb(HEIGHT_CAP_XI.numerator) / HEIGHT_CAP_XI.denominator
        return 18 * math.factorial(4) * 3**4 * arb(32 * 2048) ** 5 * h * h * hx * arb(2 * 3 * 2048).log()


def _rate(a: Fraction) -> arb:
    return (arb(a.numerator) / a.denominator).log()


def bw_threshold(a: Fraction, prec: int = 256) -> int:
    """Least integer ``k > e`` with ``k log a >= K log k`` (``k/log k`` is increasing)."""
    return adaptive(lambda p: _bw_threshold(a, p), start=prec)


def _bw_threshold(a: Fraction, prec: int) -> int:
    with ctx.workprec(prec):
        K = bw_constant(prec)
        ra = _rate(a)

        def holds(k: int) -> bool:
            k_b = arb(k)
            return not lt(k_b * ra, K * k_b.log(), "BW index threshold")

        hi = 3
        while not holds(hi):
            hi *= 2
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if holds(mid):
                hi = mid
            else:
                lo = mid
        return hi


def bw_global_bounds(prec: int = DEFAULT_PREC) -> tuple[int, int]:
    """``(6.7e36, 1.715e37)``: certified to make ``k log a < K log k`` fail.

    For |Lambda| < 3^-m (m >= n) and |Lambda| < 1.55^-n (n >= m) the lower
    bound ``-log|Lambda| <= K log B`` forces ``m log 3 < K log m`` and
    ``n log 1.55 < K log n``.
    """
    with ctx.workprec(prec):
        K = bw_constant(prec)
        if not lt(K, arb("8.6e34"), "BW constant"):
            raise AnomalyError(f"BW constant {K} is not below 8.6e34")
        for bound, a in ((BW_M_MAX, Fraction(3)), (BW_N_MAX, Fraction(155, 100))):
            b = arb(bound)
            if lt(b * _rate(a), K * b.log(), "BW cap"):
                raise AnomalyError(f"cap {bound} does not contradict the BW bound")
        return BW_M_MAX, BW_N_MAX


def height_bounds(c: QuadInt, prec: int = DEFAULT_PREC) -> tuple[arb, arb, arb]:
    """Closed-form bounds on the Weil heights of eta, theta and the xi-constant."""
    N = c.norm()
    if N > 200 * 200:
        raise DomainError("height bounds are used only for |c| <= 200")
    with ctx.workprec(prec):
        t = arb(N).sqrt()
        h_lin = (8 * (6 + 16 * t + 8 * arb(N))).log()
        h_xi = (32 * (t + 2) ** 16 * (6435 + 3168 * arb(N) + 112 * arb(N) ** 2 + 128 * arb(N) ** 3)).log()
        return h_lin, h_lin, h_xi


@dataclass
class LinFormInstance:
    c: QuadInt
    eta: arb
    theta: arb
    xi_const: arb
    prec: int
    m_bound: int = BW_M_MAX
    n_bound: int = BW_N_MAX
    ratio_minus_sq: Fraction = Fraction(0)  # |c/(c-2)|^2
    ratio_plus_sq: Fraction = Fraction(0)   # |c/(c+2)|^2


def linform_instance(c: QuadInt, prec: int = DEFAULT_PREC) -> LinFormInstance:
    """eta, theta, xi-constant for ``c`` with Re(c) >= 0; eta, theta > 1 certified."""
    _check_domain(c)
    if c.x == 0:
        raise InapplicableError("Re(c) = 0 is closed without linear forms")
    with ctx.workprec(prec):
        eta, theta, xi = _eta_theta_xi(c, prec)
        for name, val in (("eta", eta), ("theta", theta)):
            if not lt(arb(1), val, f"{name} > 1"):
                raise AnomalyError(f"{name} = {val} is not > 1 at c = {c}")
    inst = LinFormInstance(c, eta, theta, xi, prec)
    inst.ratio_minus_sq = Fraction(c.norm(), (c - 2).norm())
    inst.ratio_plus_sq = Fraction(c.norm(), (c + 2).norm())
    return inst
