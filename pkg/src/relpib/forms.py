"""Index-form machinery for f(t) = t^4 - 2c t^3 + 2t^2 + 2c t + 1 over Z_M.

The generic quartic formulas (cubic form F, quadratics Q1 and Q2) are kept
only as oracles: every specialized evaluation is checked against them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from flint import acb, acb_poly, arb, ctx

from .errors import AnomalyError, DomainError, NotASolutionError, PrecisionError
from .ring import QuadInt, RingSpec, embed, enumerate_disk, is_excluded, units


@dataclass(frozen=True)
class QuarticParams:
    c: QuadInt

    def __post_init__(self):
        if is_excluded(self.c):
            raise DomainError(f"c = {self.c.pretty()} makes f reducible (c in {{0, 2, -2}})")

    @property
    def ring(self) -> RingSpec:
        return self.c.ring

    @property
    def coefficients(self) -> tuple[QuadInt, QuadInt, QuadInt, QuadInt]:
        """``(a1, a2, a3, a4)`` of the monic quartic."""
        r = self.ring
        return (-2 * self.c, r.of(2), 2 * self.c, r.one)

    def poly(self) -> list[QuadInt]:
        """Coefficients of f, constant term first."""
        a1, a2, a3, a4 = self.coefficients
        return [a4, a3, a2, a1, self.ring.one]


class GeneratorTriple(NamedTuple):
    """Coordinates of ``alpha = x*xi + y*xi^2 + z*xi^3``."""

    x: QuadInt
    y: QuadInt
    z: QuadInt

    def validate(self) -> "GeneratorTriple":
        if self.x.is_zero() and self.y.is_zero() and self.z.is_zero():
            raise DomainError("generator triple must be nonzero")
        return self

    def scaled(self, unit: QuadInt) -> "GeneratorTriple":
        return GeneratorTriple(unit * self.x, unit * self.y, unit * self.z)

    def to_strs(self) -> list[str]:
        return [str(self.x), str(self.y), str(self.z)]

    def pretty(self) -> str:
        terms = []
        for coef, power in ((self.x, "xi"), (self.y, "xi^2"), (self.z, "xi^3")):
            if coef.is_zero():
                continue
            if coef == 1:
                terms.append(power)
            elif coef == -1:
                terms.append(f"-{power}")
            else:
                text = coef.pretty()
                if coef.x and coef.y:
                    text = f"({text})"
                terms.append(f"{text}*{power}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


# -- generic oracles --------------------------------------------------------------


def generic_cubic_form(u: QuadInt, v: QuadInt, params: QuarticParams) -> QuadInt:
    a1, a2, a3, a4 = params.coefficients
    return (u * u * u - a2 * u * u * v + (a1 * a3 - 4 * a4) * u * v * v
            + (4 * a2 * a4 - a3 * a3 - a1 * a1 * a4) * v * v * v)


def generic_q1(x, y, z, params: QuarticParams) -> QuadInt:
    a1, a2, a3, a4 = params.coefficients
    return (x * x - x * y * a1 + y * y * a2 + x * z * (a1 * a1 - 2 * a2)
            + y * z * (a3 - a1 * a2) + z * z * (-a1 * a3 + a2 * a2 + a4))


def generic_q2(x, y, z, params: QuarticParams) -> QuadInt:
    a1, a2, _, _ = params.coefficients
    return y * y - x * z - y * z * a1 + a2 * z * z


# -- specialized forms ----------------------------------------------------------------


def cubic_form_F(u: QuadInt, v: QuadInt, params: QuarticParams) -> QuadInt:
    c = params.c
    value = (u + 2 * v) * (u - 2 * (c + 1) * v) * (u + 2 * (c - 1) * v)
    if value != generic_cubic_form(u, v, params):
        raise AnomalyError("factored cubic form disagrees with the generic form")
    return value


def q1(x: QuadInt, y: QuadInt, z: QuadInt, params: QuarticParams) -> QuadInt:
    c = params.c
    value = (x * x + 2 * c * x * y + 2 * y * y + 4 * (c * c - 1) * x * z
             + 6 * c * y * z + (4 * c * c + 5) * z * z)
    if value != generic_q1(x, y, z, params):
        raise AnomalyError("specialized Q1 disagrees with the generic form")
    return value


def q2(x: QuadInt, y: QuadInt, z: QuadInt, params: QuarticParams) -> QuadInt:
    c = params.c
    value = y * y - x * z + 2 * c * y * z + 2 * z * z
    if value != generic_q2(x, y, z, params):
        raise AnomalyError("specialized Q2 disagrees with the generic form")
    return value


def cubic_sweep(params: QuarticParams, radius=5) -> list[tuple[QuadInt, QuadInt]]:
    """Pairs ``(u, v)`` with ``v != 0``, ``|u|, |v| <= radius`` and ``F(u, v)`` a unit."""
    disk = list(enumerate_disk(params.ring, radius))
    hits = []
    for v in disk:
        if v.is_zero():
            continue
        for u in disk:
            if cubic_form_F(u, v, params).is_unit():
                hits.append((u, v))
    return hits


def solve_relative_cubic(params: QuarticParams, sweep_radius=5) -> list[tuple[QuadInt, QuadInt]]:
    """All solution classes of ``F(u, v) = unit``: exactly ``(eta, 0)``, eta a unit.

    The three linear factors are units, so their pairwise differences
    ``2(c+2)v``, ``2(c-2)v``, ``4cv`` all have modulus at most 2; that forces
    ``v = 0``.  ``sweep_radius`` runs a brute-force confirmation.
    """
    out = []
    for eta in units(params.ring):
        if not cubic_form_F(eta, params.ring.zero, params).is_unit():
            raise AnomalyError(f"F({eta}, 0) is not a unit")
        out.append((eta, params.ring.zero))
    if sweep_radius:
        extra = cubic_sweep(params, sweep_radius)
        if extra:
            raise AnomalyError(f"cubic form takes unit values with v != 0: {extra[:3]}")
    return out


def thue_lhs(p: QuadInt, q: QuadInt, params: QuarticParams) -> QuadInt:
    c = params.c
    p2, q2_ = p * p, q * q
    return p2 * p2 - 2 * c * p2 * p * q + 2 * p2 * q2_ + 2 * c * p * q2_ * q + q2_ * q2_


def uvz_from_pq(p: QuadInt, q: QuadInt) -> tuple[QuadInt, QuadInt, QuadInt]:
    p2, q2_, pq = p * p, q * q, p * q
    return p2 + q2_, p2 + 2 * pq - q2_, -p2 + 2 * pq + q2_


def generator_from_pq(p: QuadInt, q: QuadInt, params: QuarticParams) -> GeneratorTriple:
    """``(2q^2 + p^2 - 2cpq, pq - 2cq^2, q^2)`` for a Thue solution ``(p, q)``."""
    if not thue_lhs(p, q, params).is_unit():
        raise NotASolutionError(f"({p}, {q}) does not solve the Thue equation")
    c = params.c
    g = GeneratorTriple(2 * q * q + p * p - 2 * c * p * q, p * q - 2 * c * q * q, q * q)
    if not q2(*g, params).is_zero() or not q1(*g, params).is_unit():
        raise AnomalyError(f"generator {g} from ({p}, {q}) fails Q1 = unit, Q2 = 0")
    return g


def is_relative_generator(g: GeneratorTriple, params: QuarticParams) -> bool:
    """Exact test: ``Q2 = 0`` and ``Q1`` a unit (F(Q1, Q2) is then a unit)."""
    return q2(*g, params).is_zero() and q1(*g, params).is_unit()


def _printer_key(a: QuadInt) -> tuple[int, int]:
    x, y = a.basis_coords()
    return (-x, -y)


def normalize_generator(g: GeneratorTriple) -> GeneratorTriple:
    """Canonical representative of the unit orbit ``{eta * g}``."""
    orbit = [g.scaled(u) for u in units(g.x.ring)]
    return min(orbit, key=lambda t: (tuple(a.norm() for a in t),
                                     tuple(_printer_key(a) for a in t)))


def known_generators(params: QuarticParams) -> list[GeneratorTriple]:
    """Normalized ``xi`` and ``2xi - 2c xi^2 + xi^3``."""
    r = params.ring
    return [normalize_generator(GeneratorTriple(r.one, r.zero, r.zero)),
            normalize_generator(GeneratorTriple(r.of(2), -2 * params.c, r.one))]


# -- numeric relative index -------------------------------------------------------------


def quartic_roots(c: QuadInt, prec: int) -> list[acb]:
    """Certified enclosures of the four roots of f for the parameter ``c``."""
    # roots grow like |c|, so carry enough guard bits for an absolute tolerance
    work = prec + 32 + c.norm().bit_length()
    with ctx.workprec(work):
        cc = embed(c, work)
        poly = acb_poly([acb(1), 2 * cc, acb(2), -2 * cc, acb(1)])
        try:
            roots = poly.roots(tol=arb(2) ** (8 - prec), maxprec=4 * work)
        except ValueError as exc:
            raise PrecisionError(f"root isolation of f failed: {exc}", "roots of f", prec)
    if len(roots) != 4:
        raise PrecisionError("did not isolate four roots of f", "roots of f", prec)
    return list(roots)


def _pair_product(vals: list[acb]) -> arb:
    out = arb(1)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            out *= abs(vals[i] - vals[j])
    return out


def relative_index_numeric(g: GeneratorTriple, params: QuarticParams, prec: int = 128) -> arb:
    """Ball containing I(alpha) for ``alpha = x xi + y xi^2 + z xi^3``.

    Product over both conjugate fields of pairwise conjugate differences,
    divided by ``sqrt|N(disc f)|`` (the same product for ``xi`` itself).
    """
    if prec < 64:
        raise DomainError("relative index needs at least 64 bits")
    num = arb(1)
    den = arb(1)
    with ctx.workprec(prec):
        for cpar, coeffs in ((params.c, g), (params.c.conj(), tuple(a.conj() for a in g))):
            roots = quartic_roots(cpar, prec)
            ex, ey, ez = (embed(a, prec) for a in coeffs)
            alphas = [ex * r + ey * r * r + ez * r * r * r for r in roots]
            num *= _pair_product(alphas)
            den *= _pair_product(roots)
        return num / den
