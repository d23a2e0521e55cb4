"""The simultaneous Pellian system

    c V^2 - (c+2) U^2 = -2 mu,      (c-2) U^2 - c Z^2 = -2 mu

and the four second-order sequences describing its solutions.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Union

from flint import acb, arb, ctx

from .balls import principal_sqrt
from .errors import AnomalyError, DomainError, InapplicableError
from .ring import QuadInt, RingSpec, UnitRoot, congruent, embed, in_Sc

Unitish = Union[QuadInt, int]


class MuEps(NamedTuple):
    mu: QuadInt
    eps: QuadInt


def admissible_mu_eps(ring: RingSpec) -> list[MuEps]:
    """``(mu, eps)`` with ``mu = eps^2`` and ``eps`` in Z_M."""
    out = [MuEps(ring.one, ring.one)]
    if ring.D == 1:
        out.append(MuEps(-ring.one, UnitRoot.I.value_in(ring)))
    elif ring.D == 3:
        w = UnitRoot.OMEGA.value_in(ring)
        w2 = UnitRoot.OMEGA_SQ.value_in(ring)
        out += [MuEps(w, w2), MuEps(w2, w)]
    return out


def eps_for_mu(mu: QuadInt) -> QuadInt:
    for pair in admissible_mu_eps(mu.ring):
        if pair.mu == mu:
            return pair.eps
    raise DomainError(f"mu = {mu.pretty()} is not admissible for D={mu.ring.D}")


class SeqKind(enum.Enum):
    U_plus = "u"
    V_plus = "v"
    U_minus = "u'"
    Z_minus = "z"

    @property
    def first(self) -> int:
        """Constant term of the index-1 multiplier: ``x_1 = eps (2c + first)``."""
        return {"u": 1, "v": 3, "u'": -1, "z": -3}[self.value]

    @property
    def shift(self) -> int:
        """Recurrence ``x_{k+2} = (2c + shift) x_{k+1} - x_k``."""
        return 2 if self in (SeqKind.U_plus, SeqKind.V_plus) else -2


@dataclass(frozen=True)
class SeqState:
    """``current = x_index`` and ``previous = x_{index-1}`` for one sequence.

    Index 0 stores the backward-extended term ``x_{-1}`` as ``previous`` so
    that every state advances with the same rule.
    """

    c: QuadInt
    kind: SeqKind
    index: int
    current: QuadInt
    previous: QuadInt

    @classmethod
    def start(cls, c: QuadInt, eps: Unitish, kind: SeqKind) -> "SeqState":
        e = c.ring.of(eps)
        x1 = e * (2 * c + kind.first)
        x_prev = (2 * c + kind.shift) * e - x1
        return cls(c, kind, 0, e, x_prev)

    def advance(self) -> "SeqState":
        nxt = (2 * self.c + self.kind.shift) * self.current - self.previous
        return SeqState(self.c, self.kind, self.index + 1, nxt, self.current)

    def satisfies_recurrence(self, before: "SeqState") -> bool:
        return self.current == (2 * self.c + self.kind.shift) * before.current - before.previous


def _term(c: QuadInt, eps: Unitish, k: int, kind: SeqKind) -> QuadInt:
    if k < 0:
        raise DomainError("sequence index must be nonnegative")
    st = SeqState.start(c, eps, kind)
    for _ in range(k):
        st = st.advance()
    return st.current


def sequence(c: QuadInt, eps: Unitish, kind: SeqKind, count: int) -> list[QuadInt]:
    """The first ``count`` terms ``x_0, ..., x_{count-1}``."""
    st = SeqState.start(c, eps, kind)
    out = []
    for _ in range(count):
        out.append(st.current)
        st = st.advance()
    return out


def u_seq(c: QuadInt, eps: Unitish, m: int) -> QuadInt:
    return _term(c, eps, m, SeqKind.U_plus)


def v_seq(c: QuadInt, eps: Unitish, m: int) -> QuadInt:
    return _term(c, eps, m, SeqKind.V_plus)


def uprime_seq(c: QuadInt, eps: Unitish, n: int) -> QuadInt:
    return _term(c, eps, n, SeqKind.U_minus)


def z_seq(c: QuadInt, eps: Unitish, n: int) -> QuadInt:
    # z_{n+2} = (2c-2) z_{n+1} - z_n; mixing in u_n would break the second Pell equation
    return _term(c, eps, n, SeqKind.Z_minus)


def pell_residual_1(U: QuadInt, V: QuadInt, c: QuadInt, mu: Unitish) -> QuadInt:
    return c * V * V - (c + 2) * U * U + 2 * c.ring.of(mu)


def pell_residual_2(U: QuadInt, Z: QuadInt, c: QuadInt, mu: Unitish) -> QuadInt:
    return (c - 2) * U * U - c * Z * Z + 2 * c.ring.of(mu)


def solves_system(U, V, Z, c: QuadInt, mu: Unitish) -> bool:
    return pell_residual_1(U, V, c, mu).is_zero() and pell_residual_2(U, Z, c, mu).is_zero()


# -- closed forms -------------------------------------------------------------------


def _closed_form(c: QuadInt, eps: Unitish, k: int, shift: int, prec: int) -> acb:
    # eps/(2s) ((c+s) A^k - (c-s) B^k), s = sqrt(c) sqrt(c+shift), A,B = c+shift/2 +- s
    if c.x < 0:
        raise DomainError("closed forms assume Re(c) >= 0")
    if prec < 64:
        raise DomainError("closed forms need at least 64 bits")
    with ctx.workprec(prec):
        cc = embed(c, prec)
        e = embed(c.ring.of(eps), prec)
        s = principal_sqrt(cc, "sqrt(c)") * principal_sqrt(cc + shift, f"sqrt(c{shift:+d})")
        if not (s != 0):
            raise DomainError(f"closed form degenerates at c = {c.pretty()}")
        mid = cc + shift // 2
        a, b = mid + s, mid - s
        return e / (2 * s) * ((cc + s) * a ** k - (cc - s) * b ** k)


def _check_contains(ball: acb, exact: QuadInt, what: str) -> acb:
    if not ball.overlaps(embed(exact, max(64, ctx.prec))):
        raise AnomalyError(f"{what}: closed form {ball} misses exact value {exact}")
    return ball


def closed_form_u(c: QuadInt, eps: Unitish, m: int, prec: int = 128) -> acb:
    """Ball for ``u_m`` from the Binet formula; checked against the recurrence."""
    ball = _closed_form(c, eps, m, 2, prec)
    return _check_contains(ball, u_seq(c, eps, m), f"u_{m}")


def closed_form_uprime(c: QuadInt, eps: Unitish, n: int, prec: int = 128) -> acb:
    ball = _closed_form(c, eps, n, -2, prec)
    return _check_contains(ball, uprime_seq(c, eps, n), f"u'_{n}")


# -- growth bounds, exact ---------------------------------------------------------


def _surd_mul(a: tuple[int, int], b: tuple[int, int], N: int) -> tuple[int, int]:
    return (a[0] * b[0] + a[1] * b[1] * N, a[0] * b[1] + a[1] * b[0])


def _surd_pow(a: tuple[int, int], k: int, N: int) -> tuple[int, int]:
    out = (1, 0)
    for _ in range(k):
        out = _surd_mul(out, a, N)
    return out


def surd_sign(a: int, b: int, N: int) -> int:
    """Sign of ``a + b*sqrt(N)`` for ``N >= 0``, exactly."""
    if b == 0 or N == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if (a > 0) == (b > 0):
        return 1 if a > 0 else -1
    # opposite signs: compare a^2 with b^2 N
    diff = a * a - b * b * N
    if diff == 0:
        return 0
    return (1 if a > 0 else -1) if diff > 0 else (1 if b > 0 else -1)


def growth_bounds_check(c: QuadInt, eps: Unitish, kind: SeqKind, n_max: int) -> bool:
    """``(2|c|-3)^k <= |x_k| <= (2|c|+3)^k`` for ``k <= n_max`` (u or u')."""
    if kind not in (SeqKind.U_plus, SeqKind.U_minus):
        raise DomainError("growth bounds are stated for u and u' only")
    N = c.norm()
    if N < 4:
        raise DomainError("growth bounds need |c| >= 2")
    low, high = (-3, 2), (3, 2)  # 2 sqrt(N) -+ 3
    st = SeqState.start(c, eps, kind)
    for k in range(n_max + 1):
        nu = st.current.norm()  # |x_k|^2
        lo = _surd_pow(low, 2 * k, N)
        hi = _surd_pow(high, 2 * k, N)
        if surd_sign(nu - lo[0], -lo[1], N) < 0 or surd_sign(hi[0] - nu, hi[1], N) < 0:
            return False
        st = st.advance()
    return True


# -- congruences and the lower bound ------------------------------------------------


def congruence_residue_u(m: int, c: QuadInt, eps: Unitish) -> QuadInt:
    if m < 0:
        raise DomainError("index must be nonnegative")
    return c.ring.of(eps) * (1 + m * (m + 1) * c)


def congruence_residue_uprime(n: int, c: QuadInt, eps: Unitish) -> QuadInt:
    if n < 0:
        raise DomainError("index must be nonnegative")
    sign = -1 if n & 1 else 1
    return sign * c.ring.of(eps) * (1 - n * (n + 1) * c)


def congruence_holds(c: QuadInt, eps: Unitish, kind: SeqKind, k: int) -> bool:
    """Exact check of the mod ``4c^2`` congruence for ``u_k`` or ``u'_k``."""
    if kind is SeqKind.U_plus:
        return congruent(u_seq(c, eps, k), congruence_residue_u(k, c, eps), 4 * c * c)
    if kind is SeqKind.U_minus:
        return congruent(uprime_seq(c, eps, k), congruence_residue_uprime(k, c, eps), 4 * c * c)
    raise DomainError("congruences are stated for u and u' only")


def _require_outside_Sc(c: QuadInt):
    if in_Sc(c):
        raise InapplicableError(f"c = {c.pretty()} lies in the exceptional set S_c")


def min_nontrivial_index(c: QuadInt, prec: int = 128) -> arb:
    """``sqrt(2|c| + 1/4) - 1/2``: a nontrivial intersection needs m or n this large."""
    _require_outside_Sc(c)
    with ctx.workprec(prec):
        return (2 * arb(c.norm()).sqrt() + arb(1) / 4).sqrt() - arb(1) / 2


def lower_bound_U(c: QuadInt, prec: int = 128) -> arb:
    """Lower bound ``(2|c|-3)^k0`` for ``|U|``, U a solution other than ``+-eps``."""
    _require_outside_Sc(c)
    if c.norm() < 4:
        raise DomainError("the growth lemma behind this bound needs |c| >= 2")
    with ctx.workprec(prec):
        k0 = min_nontrivial_index(c, prec)
        base = 2 * arb(c.norm()).sqrt() - 3
        return base ** k0


def log_lower_bound_U(c: QuadInt, prec: int = 128) -> arb:
    """``log`` of :func:`lower_bound_U`, without forming the huge power."""
    _require_outside_Sc(c)
    if c.norm() < 4:
        raise DomainError("the growth lemma behind this bound needs |c| >= 2")
    with ctx.workprec(prec):
        return min_nontrivial_index(c, prec) * (2 * arb(c.norm()).sqrt() - 3).log()
