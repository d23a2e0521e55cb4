"""Brute-force ground truth: disk enumeration, sequence intersections via
integer polynomials in c, and the c = +-1 special cases.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from flint import acb, ctx, fmpz_poly

from .errors import AnomalyError, DomainError, PrecisionError
from .forms import GeneratorTriple, QuarticParams, generator_from_pq, normalize_generator, thue_lhs
from .pell import admissible_mu_eps, solves_system
from .ring import QuadInt, RingSpec, enumerate_disk, exact_quotient, exact_sqrt, units

DEGREE_CAP = 64


# -- polynomials in c -----------------------------------------------------------


@lru_cache(maxsize=None)
def _seq_polys(shift: int, first: int, k: int) -> tuple:
    x = fmpz_poly([0, 1])
    out = [fmpz_poly([1]), 2 * x + first]
    mult = 2 * x + shift
    while len(out) <= k:
        out.append(mult * out[-1] - out[-2])
    return tuple(out[: k + 1])


def u_poly(m: int) -> fmpz_poly:
    """``U_m`` with ``u_m = eps * U_m(c)``."""
    if m < 0:
        raise DomainError("index must be nonnegative")
    p = _seq_polys(2, 1, m)[m]
    assert p.degree() == m and p[m] == 2**m
    return p


def uprime_poly(n: int) -> fmpz_poly:
    if n < 0:
        raise DomainError("index must be nonnegative")
    p = _seq_polys(-2, -1, n)[n]
    assert p.degree() == n and p[n] == 2**n
    return p


def eval_poly(poly: fmpz_poly, c: QuadInt) -> QuadInt:
    acc = c.ring.zero
    for k in range(poly.degree(), -1, -1):
        acc = acc * c + int(poly[k])
    return acc


@lru_cache(maxsize=4096)
def _difference_roots(m: int, n: int, sign: int, prec: int = 128) -> tuple:
    g = u_poly(m) - sign * uprime_poly(n)
    if g.is_zero():
        raise AnomalyError(f"U_{m} and {sign}*U'_{n} coincide as polynomials")
    if g.degree() < 1:
        return ()
    with ctx.workprec(prec):
        try:
            roots = g.complex_roots()
        except (ValueError, ArithmeticError) as exc:  # pragma: no cover - flint refines internally
            raise PrecisionError(f"root isolation failed for U_{m} - {sign} U'_{n}: {exc}",
                                 "intersection roots", prec)
    return tuple(r for r, _mult in roots)


def _lattice_near(ring: RingSpec, z: acb, radius: float) -> list[QuadInt]:
    """Elements of Z_M within ``radius`` of the ball centre ``z`` (a superset is fine)."""
    re = float(z.real.mid())
    im = float(z.imag.mid())
    D = ring.D
    sd = math.sqrt(D)
    out = []
    ylo = math.floor(2 * (im - radius) / sd) - 1
    yhi = math.ceil(2 * (im + radius) / sd) + 1
    for y in range(ylo, yhi + 1):
        if not ring.full and y & 1:
            continue
        xlo = math.floor(2 * (re - radius)) - 1
        xhi = math.ceil(2 * (re + radius)) + 1
        for x in range(xlo, xhi + 1):
            if ring.full and (x - y) & 1:
                continue
            if not ring.full and x & 1:
                continue
            if (x / 2 - re) ** 2 + (y * sd / 2 - im) ** 2 <= radius * radius:
                out.append(QuadInt(x, y, ring))
    return out


def intersection_roots(m: int, n: int, sign: int, ring: RingSpec, R) -> list[QuadInt]:
    """All ``c`` in Z_M with ``|c| <= R`` and ``U_m(c) = sign * U'_n(c)``.

    Each complex root of the difference is enclosed by a certified ball; every
    lattice point within 0.5 + radius of a ball centre is tested exactly, so a
    lattice root cannot be missed and no false root survives.
    """
    if m < 1 or n < 1:
        raise DomainError("indices must be at least 1")
    if m > DEGREE_CAP or n > DEGREE_CAP:
        raise DomainError(f"indices above {DEGREE_CAP} are not supported")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    R = Fraction(R)
    R2 = R * R
    g = u_poly(m) - sign * uprime_poly(n)
    found = set()
    for z in _difference_roots(m, n, sign):
        rad = float(max(z.real.rad(), z.imag.rad())) * 1.5
        if float(abs(z).lower()) > float(R) + rad + 1:
            continue
        for cand in _lattice_near(ring, z, 0.5 + rad):
            if cand.norm() <= R2 and eval_poly(g, cand).is_zero():
                found.add(cand)
    return sorted(found, key=QuadInt.sort_key)


# -- exhaustive searches ---------------------------------------------------------


def _as_complex(a: QuadInt) -> complex:
    return complex(a.x / 2, a.y * math.sqrt(a.ring.D) / 2)


def brute_thue(c: QuadInt, mu: QuadInt, H) -> list[tuple[QuadInt, QuadInt]]:
    """All ``(p, q)`` with ``|p|, |q| <= H`` and ``thue_lhs(p, q) = mu``.

    A double-precision pass discards pairs whose value is farther than 1/2
    from mu (rounding error is many orders below that for desk-size inputs);
    survivors are decided exactly.
    """
    params = QuarticParams(c)
    disk = list(enumerate_disk(c.ring, H))
    if float(Fraction(H)) ** 4 * (4 + 4 * math.sqrt(c.norm())) > 2.0 ** 40:
        raise DomainError("H too large for the floating-point prefilter")
    pw = []
    for a in disk:
        z = _as_complex(a)
        pw.append((a, z, z * z, z * z * z))
    c2 = 2 * _as_complex(c)
    target = _as_complex(mu)
    out = []
    for p, zp, zp2, zp3 in pw:
        zp4 = zp2 * zp2
        for q, zq, zq2, zq3 in pw:
            val = zp4 - c2 * zp3 * zq + 2 * zp2 * zq2 + c2 * zp * zq3 + zq2 * zq2
            if abs(val - target) < 0.5 and thue_lhs(p, q, params) == mu:
                out.append((p, q))
    out.sort(key=lambda t: (t[0].sort_key(), t[1].sort_key()))
    return out


def brute_system(c: QuadInt, mu: QuadInt, H) -> list[tuple[QuadInt, QuadInt, QuadInt]]:
    """All ``(U, V, Z)`` in the ``H``-disk solving both Pell equations."""
    if c.is_zero():
        raise DomainError("c = 0 makes the system degenerate")
    disk = list(enumerate_disk(c.ring, H))
    squares: dict = {}
    for v in disk:
        squares.setdefault(v * v, []).append(v)
    two_mu = 2 * mu
    out = []
    for U in disk:
        U2 = U * U
        v2 = exact_quotient((c + 2) * U2 - two_mu, c)
        z2 = exact_quotient((c - 2) * U2 + two_mu, c)
        if v2 is None or z2 is None:
            continue
        for V in squares.get(v2, ()):
            for Z in squares.get(z2, ()):
                assert solves_system(U, V, Z, c, mu)
                out.append((U, V, Z))
    out.sort(key=lambda t: tuple(x.sort_key() for x in t))
    return out


def pq_from_uvz(U: QuadInt, V: QuadInt, Z: QuadInt) -> list[tuple[QuadInt, QuadInt]]:
    """All ``(p, q)`` mapping to ``(U, V, Z)`` under ``U = p^2+q^2``, ``V``, ``Z``."""
    p2 = exact_quotient(2 * U + V - Z, U.ring.of(4))
    q2 = exact_quotient(2 * U - V + Z, U.ring.of(4))
    pq = exact_quotient(V + Z, U.ring.of(4))
    if p2 is None or q2 is None or pq is None:
        return []
    p, q = exact_sqrt(p2), exact_sqrt(q2)
    if p is None or q is None:
        return []
    out = set()
    for sp in (1, -1):
        for sq in (1, -1):
            if (sp * p) * (sq * q) == pq:
                out.add((sp * p, sq * q))
    return sorted(out, key=lambda t: (t[0].sort_key(), t[1].sort_key()))


# -- c = +-1 ------------------------------------------------------------------------


class CaseStatus(enum.Enum):
    Resolved = "Resolved"
    Undetermined = "Undetermined"


@dataclass
class SpecialCaseReport:
    D: int
    c: QuadInt
    status: CaseStatus
    mu_cases: list = field(default_factory=list)   # dicts: mu, system, thue
    generators: list = field(default_factory=list)
    witness_equation: str = ""
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "c": str(self.c),
            "status": self.status.value,
            "mu_cases": [
                {
                    "mu": str(mc["mu"]),
                    "system": [[str(a) for a in t] for t in mc["system"]],
                    "thue": [[str(a) for a in t] for t in mc["thue"]],
                }
                for mc in self.mu_cases
            ],
            "generators": [g.to_strs() for g in self.generators],
            "witness_equation": self.witness_equation,
            "witnesses": [[str(a) for a in t] for t in self.witnesses],
        }


def _divisors(n: QuadInt) -> list[QuadInt]:
    r2 = n.norm()
    return [d for d in enumerate_disk(n.ring, radius_sq=r2) if not d.is_zero() and d.divides(n)]


def _system_c1_gaussian(ring: RingSpec, mu: QuadInt) -> list[tuple[QuadInt, QuadInt, QuadInt]]:
    # U^2 + Z^2 = (U - iZ)(U + iZ) = 2 mu, with V^2 = 3U^2 - 2 mu
    i = units(ring)[2]
    two_mu = 2 * mu
    found = set()
    for d in _divisors(two_mu):
        e = two_mu.exact_div(d)
        U = exact_quotient(d + e, ring.of(2))
        Z = exact_quotient(e - d, 2 * i)
        if U is None or Z is None:
            continue
        V = exact_sqrt(3 * U * U - two_mu)
        if V is None:
            continue
        for v in {V, -V}:
            found.add((U, v, Z))
    return sorted(found, key=lambda t: tuple(x.sort_key() for x in t))


def _thue_c1_eisenstein(ring: RingSpec, mu: QuadInt) -> list[tuple[QuadInt, QuadInt]]:
    # X^2 + 3Y^2 = (X - sqrt(-3) Y)(X + sqrt(-3) Y) = mu with X = +-(p^2-pq-q^2), Y = +-pq
    s = ring.sqrt_neg_d
    found = set()
    for eta in units(ring):
        other = mu.exact_div(eta)
        X = exact_quotient(eta + other, ring.of(2))
        Y = exact_quotient(other - eta, 2 * s)
        if X is None or Y is None:
            continue
        if not Y.is_zero():
            raise AnomalyError(f"unexpected solution X={X}, Y={Y} with pq != 0")
        # pq = 0, so p = 0 (q^2 = -+X) or q = 0 (p^2 = +-X)
        for sx in (X, -X):
            r = exact_sqrt(sx)
            if r is None:
                continue
            for t in (r, -r):
                found.add((t, ring.zero))
                found.add((ring.zero, t))
    params = QuarticParams(ring.one)
    sols = [pq for pq in found if thue_lhs(pq[0], pq[1], params) == mu]
    return sorted(sols, key=lambda t: (t[0].sort_key(), t[1].sort_key()))


def special_case_c1(ring: RingSpec, sign: int = 1, witness_radius=4) -> SpecialCaseReport:
    """The parameters ``c = +1`` (``sign = 1``) and ``c = -1``.

    D = 1 factors ``U^2 + Z^2 = 2 mu`` over Z[i]; D = 3 factors the
    equivalent ``X^2 + 3Y^2 = mu`` over the Eisenstein integers.  For other D
    the classification is left open and small solutions of ``U^2 + Z^2 = 2``
    are reported as witnesses.  ``c = -1`` follows from ``(p, q) -> (q, p)``.
    """
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    c = ring.of(sign)
    report = SpecialCaseReport(ring.D, c, CaseStatus.Resolved)
    base = QuarticParams(ring.one)
    target = QuarticParams(c)
    if ring.D not in (1, 3):
        report.status = CaseStatus.Undetermined
        report.witness_equation = "U^2 + Z^2 = 2"
        two = ring.of(2)
        disk = list(enumerate_disk(ring, witness_radius))
        sq = {}
        for z in disk:
            sq.setdefault(z * z, []).append(z)
        for U in disk:
            for Z in sq.get(two - U * U, ()):
                report.witnesses.append((U, Z))
        report.witnesses.sort(key=lambda t: (t[0].sort_key(), t[1].sort_key()))
        return report
    gens = set()
    for me in admissible_mu_eps(ring):
        mu = me.mu
        if ring.D == 1:
            system = _system_c1_gaussian(ring, mu)
            thue = sorted({pq for t in system for pq in pq_from_uvz(*t)
                           if thue_lhs(pq[0], pq[1], base) == mu},
                          key=lambda t: (t[0].sort_key(), t[1].sort_key()))
        else:
            thue = _thue_c1_eisenstein(ring, mu)
            system = []
        if sign == -1:
            thue = sorted(((q, p) for p, q in thue), key=lambda t: (t[0].sort_key(), t[1].sort_key()))
            if system:
                system = sorted(((U, Z, V) for U, V, Z in system),
                                key=lambda t: tuple(x.sort_key() for x in t))
        for p, q in thue:
            if thue_lhs(p, q, target) != mu:
                raise AnomalyError(f"({p}, {q}) is not a Thue solution at c = {c}")
            gens.add(normalize_generator(generator_from_pq(p, q, target)))
        report.mu_cases.append({"mu": mu, "system": system, "thue": thue})
    report.generators = sorted(gens, key=lambda g: tuple(a.sort_key() for a in g))
    return report
