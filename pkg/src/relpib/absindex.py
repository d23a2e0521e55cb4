"""Absolute index: arithmetic in Z_M[xi] and the factor J(alpha).

For alpha = A + eps*alpha0 the product of all |alpha^(1,j1) - alpha^(2,j2)|
equals |Res(g, conj g)| with g the characteristic polynomial of alpha over
M, so it can be computed exactly from a Sylvester determinant.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from flint import arb, ctx

from .errors import AnomalyError, DomainError, InapplicableError
from .forms import QuarticParams, quartic_roots
from .ring import QuadInt, RingSpec, UnitRoot, embed, is_excluded

Poly = list  # coefficients as QuadInt, constant term first


@dataclass(frozen=True)
class OrderElement:
    """``a + x*xi + y*xi^2 + z*xi^3``."""

    a: QuadInt
    x: QuadInt
    y: QuadInt
    z: QuadInt

    @classmethod
    def from_coords(cls, coords: Sequence[QuadInt]) -> "OrderElement":
        return cls(*coords)

    @classmethod
    def scalar(cls, A: QuadInt) -> "OrderElement":
        zero = A.ring.zero
        return cls(A, zero, zero, zero)

    @property
    def coords(self) -> tuple[QuadInt, QuadInt, QuadInt, QuadInt]:
        return (self.a, self.x, self.y, self.z)

    def __add__(self, other: "OrderElement") -> "OrderElement":
        return OrderElement(*(s + o for s, o in zip(self.coords, other.coords)))

    def scale(self, k: QuadInt) -> "OrderElement":
        return OrderElement(*(k * s for s in self.coords))

    def conj(self) -> "OrderElement":
        return OrderElement(*(s.conj() for s in self.coords))


def xi_element(ring: RingSpec) -> OrderElement:
    z = ring.zero
    return OrderElement(z, ring.one, z, z)


def second_generator(params: QuarticParams) -> OrderElement:
    r = params.ring
    return OrderElement(r.zero, r.of(2), -2 * params.c, r.one)


def mul_mod_f(u: OrderElement, v: OrderElement, params: QuarticParams) -> OrderElement:
    """Product reduced with ``xi^4 = 2c xi^3 - 2 xi^2 - 2c xi - 1``."""
    zero = params.ring.zero
    prod = [zero] * 7
    for i, ui in enumerate(u.coords):
        if ui.is_zero():
            continue
        for j, vj in enumerate(v.coords):
            prod[i + j] = prod[i + j] + ui * vj
    c2 = 2 * params.c
    for k in (6, 5, 4):
        t = prod[k]
        if t.is_zero():
            continue
        prod[k] = zero
        prod[k - 1] = prod[k - 1] + c2 * t
        prod[k - 2] = prod[k - 2] - 2 * t
        prod[k - 3] = prod[k - 3] - c2 * t
        prod[k - 4] = prod[k - 4] - t
    return OrderElement(*prod[:4])


def multiplication_matrix(alpha: OrderElement, params: QuarticParams) -> list[list[QuadInt]]:
    """Column k holds the coordinates of ``alpha * xi^k``."""
    cols = []
    basis = xi_element(params.ring)
    cur = alpha
    for _ in range(4):
        cols.append(cur.coords)
        cur = mul_mod_f(cur, basis, params)
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def _berkowitz(A: list[list[QuadInt]], zero: QuadInt) -> list[QuadInt]:
    """Coefficients of ``det(tI - A)``, leading first; division free."""
    n = len(A)
    vect = [zero + 1, -A[0][0]]
    for r in range(1, n):
        R = A[r][:r]
        C = [A[i][r] for i in range(r)]
        sub = [row[:r] for row in A[:r]]
        q = [zero + 1, -A[r][r]]
        col = C
        for _ in range(r):
            q.append(-sum((R[i] * col[i] for i in range(r)), zero))
            col = [sum((sub[i][j] * col[j] for j in range(r)), zero) for i in range(r)]
        # Toeplitz (r+2) x (r+1) lower-triangular with first column q, times vect
        vect = [sum((q[i - j] * vect[j] for j in range(len(vect)) if 0 <= i - j < len(q)), zero)
                for i in range(r + 2)]
    return vect


def char_poly(alpha: OrderElement, params: QuarticParams) -> Poly:
    """Monic quartic ``det(tI - M_alpha)``, constant term first."""
    lead_first = _berkowitz(multiplication_matrix(alpha, params), params.ring.zero)
    return lead_first[::-1]


def conj_poly(g: Poly) -> Poly:
    return [a.conj() for a in g]


def _bareiss_det(M: list[list[QuadInt]]) -> QuadInt:
    n = len(M)
    M = [row[:] for row in M]
    zero = M[0][0].ring.zero
    sign = 1
    prev = zero + 1
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).exact_div(prev)
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def sylvester(g: Poly, h: Poly) -> list[list[QuadInt]]:
    dg, dh = len(g) - 1, len(h) - 1
    n = dg + dh
    zero = g[0].ring.zero
    rows = []
    gl, hl = g[::-1], h[::-1]
    for i in range(dh):
        rows.append([zero] * i + gl + [zero] * (n - i - dg - 1))
    for i in range(dg):
        rows.append([zero] * i + hl + [zero] * (n - i - dh - 1))
    return rows


def resultant(g: Poly, h: Poly) -> QuadInt:
    """``Res(g, h) = prod (alpha_i - beta_j)`` for monic g, h (exact)."""
    for p in (g, h):
        if len(p) < 2 or p[-1] != 1:
            raise DomainError("resultant expects monic polynomials of degree >= 1")
    res = _bareiss_det(sylvester(g, h))
    if len(g) == len(h) and conj_poly(g) == h and not res.is_rational():
        raise AnomalyError(f"Res(g, conj g) = {res} is not rational")
    return res


class Alpha0(enum.Enum):
    Xi = "xi"
    SecondGen = "2xi-2c*xi^2+xi^3"


def admissible_for_absindex(D: int) -> bool:
    """``-D = 2, 3 (mod 4)``, i.e. Z_M = Z[sqrt(-D)]."""
    return D % 4 in (1, 2)


@dataclass
class JVerdict:
    D: int
    p: int
    q: int
    b: int
    a: int
    eps: QuadInt
    alpha0: Alpha0
    R: int
    divisible_4096D2: bool
    J: Fraction
    divisible_256: bool

    def to_json(self) -> dict:
        return {
            "D": self.D, "p": self.p, "q": self.q, "a": self.a, "b": self.b,
            "eps": str(self.eps), "alpha0": self.alpha0.value,
            "R": str(self.R), "J": str(self.J),
            "divisible_4096D2": self.divisible_4096D2, "divisible_256": self.divisible_256,
        }


def _eps_value(ring: RingSpec, eps: Union[int, QuadInt, UnitRoot]) -> QuadInt:
    if isinstance(eps, UnitRoot):
        e = eps.value_in(ring)
    else:
        e = ring.of(eps)
    if not e.is_unit():
        raise DomainError(f"{e} is not a unit")
    return e


def alpha_for(ring: RingSpec, p: int, q: int, b: int, eps, alpha0: Alpha0, a: int = 0
              ) -> tuple[OrderElement, QuarticParams]:
    params = QuarticParams(ring(p, q))
    base = xi_element(ring) if alpha0 is Alpha0.Xi else second_generator(params)
    alpha = OrderElement.scalar(ring(a, b)) + base.scale(_eps_value(ring, eps))
    return alpha, params


def j_alpha_divisibility(D: int, p: int, q: int, b: int, eps_unit=1,
                         alpha0: Alpha0 = Alpha0.Xi, a: int = 0) -> JVerdict:
    """Exact ``R = Res(g, conj g)`` for ``alpha = a + b sqrt(-D) + eps*alpha0``."""
    if not admissible_for_absindex(D):
        raise InapplicableError(f"-D = 1 (mod 4) for D = {D}: not covered")
    ring = RingSpec(D)
    if is_excluded(ring(p, q)):
        raise DomainError("c must not be 0 or +-2")
    alpha, params = alpha_for(ring, p, q, b, eps_unit, alpha0, a)
    g = char_poly(alpha, params)
    R = resultant(g, conj_poly(g))
    R_int = R.x // 2
    norm = 16 * D * D
    J = Fraction(abs(R_int), norm)
    return JVerdict(D, p, q, b, a, _eps_value(ring, eps_unit), alpha0, R_int,
                    R_int % (4096 * D * D) == 0, J,
                    J.denominator == 1 and J.numerator % 256 == 0)


def conjugate_product_numeric(D: int, p: int, q: int, b: int, eps_unit=1,
                              alpha0: Alpha0 = Alpha0.Xi, a: int = 0, prec: int = 256) -> arb:
    """Ball for ``prod_{j1, j2} |alpha^(1,j1) - alpha^(2,j2)|`` from the roots of f."""
    ring = RingSpec(D)
    alpha, params = alpha_for(ring, p, q, b, eps_unit, alpha0, a)
    with ctx.workprec(prec):
        sides = []
        for cpar, el in ((params.c, alpha), (params.c.conj(), alpha.conj())):
            coeffs = [embed(k, prec) for k in el.coords]
            vals = []
            for r in quartic_roots(cpar, prec):
                vals.append(coeffs[0] + r * (coeffs[1] + r * (coeffs[2] + r * coeffs[3])))
            sides.append(vals)
        out = arb(1)
        for u in sides[0]:
            for v in sides[1]:
                out *= abs(u - v)
        return out
