"""Exact arithmetic in the ring of integers Z_M of M = Q(sqrt(-D)).

Every element is stored in half coordinates ``(x, y)`` meaning
``(x + y*sqrt(-D)) / 2``.  When ``-D = 1 (mod 4)`` the ring is
``Z[(1 + sqrt(-D))/2]`` and ``x = y (mod 2)``; otherwise the ring is
``Z[sqrt(-D)]`` and both coordinates are even.  One multiplication formula
then serves every ``D``.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from flint import acb, arb, ctx

from .errors import DomainError, ParseError, RingMismatchError


class Convention(enum.Enum):
    FULL_LATTICE = "full"  # -D = 1 (mod 4)
    HALF_LATTICE = "half"  # -D = 2, 3 (mod 4)


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


@dataclass(frozen=True)
class RingSpec:
    """The ring of integers of Q(sqrt(-D)) for a squarefree ``D > 0``."""

    D: int

    def __post_init__(self):
        if not isinstance(self.D, int) or self.D <= 0:
            raise DomainError(f"D must be a positive integer, got {self.D!r}")
        if not is_squarefree(self.D):
            raise DomainError(f"D = {self.D} is not squarefree")

    @property
    def convention(self) -> Convention:
        return Convention.FULL_LATTICE if self.D % 4 == 3 else Convention.HALF_LATTICE

    @property
    def full(self) -> bool:
        return self.D % 4 == 3

    # -- constructors ---------------------------------------------------
    def __call__(self, a: int = 0, b: int = 0) -> "QuadInt":
        """Element ``a + b*w`` in the integral basis ``{1, w}``."""
        if self.full:
            return QuadInt(2 * a + b, b, self)
        return QuadInt(2 * a, 2 * b, self)

    def half(self, x: int, y: int) -> "QuadInt":
        return QuadInt(x, y, self)

    def of(self, n: Union[int, "QuadInt"]) -> "QuadInt":
        if isinstance(n, QuadInt):
            if n.ring != self:
                raise RingMismatchError(f"element of D={n.ring.D} used in D={self.D}")
            return n
        return QuadInt(2 * n, 0, self)

    @property
    def zero(self) -> "QuadInt":
        return QuadInt(0, 0, self)

    @property
    def one(self) -> "QuadInt":
        return QuadInt(2, 0, self)

    @property
    def sqrt_neg_d(self) -> "QuadInt":
        return QuadInt(0, 2, self)

    @property
    def w(self) -> "QuadInt":
        return QuadInt(1, 1, self) if self.full else QuadInt(0, 2, self)

    def parse(self, text: str) -> "QuadInt":
        return parse_element(text, self)

    def __repr__(self):
        return f"RingSpec(D={self.D})"


class QuadInt:
    """Immutable element ``(x + y*sqrt(-D))/2`` of Z_M."""

    __slots__ = ("x", "y", "ring")

    def __init__(self, x: int, y: int, ring: RingSpec):
        if ring.full:
            if (x - y) & 1:
                raise DomainError(f"({x} + {y}*sqrt(-{ring.D}))/2 is not integral")
        elif (x & 1) or (y & 1):
            raise DomainError(f"({x} + {y}*sqrt(-{ring.D}))/2 is not in Z[sqrt(-{ring.D})]")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError("QuadInt is immutable")

    @classmethod
    def _raw(cls, x: int, y: int, ring: RingSpec) -> "QuadInt":
        obj = object.__new__(cls)
        object.__setattr__(obj, "x", x)
        object.__setattr__(obj, "y", y)
        object.__setattr__(obj, "ring", ring)
        return obj

    def _coerce(self, other) -> Optional["QuadInt"]:
        if isinstance(other, QuadInt):
            if other.ring.D != self.ring.D:
                raise RingMismatchError(
                    f"cannot combine elements of D={self.ring.D} and D={other.ring.D}"
                )
            return other
        if isinstance(other, int):
            return QuadInt._raw(2 * other, 0, self.ring)
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt._raw(self.x + o.x, self.y + o.y, self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt._raw(self.x - o.x, self.y - o.y, self.ring)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt._raw(o.x - self.x, o.y - self.y, self.ring)

    def __neg__(self):
        return QuadInt._raw(-self.x, -self.y, self.ring)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadInt._raw(self.x * other, self.y * other, self.ring)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        x1, y1, x2, y2 = self.x, self.y, o.x, o.y
        # both numerators are even for valid operands
        return QuadInt._raw(
            (x1 * x2 - self.ring.D * y1 * y2) >> 1, (x1 * y2 + x2 * y1) >> 1, self.ring
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "QuadInt":
        return QuadInt._raw(self.x, -self.y, self.ring)

    def norm(self) -> int:
        return (self.x * self.x + self.ring.D * self.y * self.y) >> 2

    abs_sq = norm

    def divides(self, other) -> bool:
        return exact_quotient(self._coerce(other), self) is not None

    def exact_div(self, d) -> "QuadInt":
        d = self._coerce(d)
        q = exact_quotient(self, d)
        if q is None:
            raise DomainError(f"{d} does not divide {self}")
        return q

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_rational(self) -> bool:
        return self.y == 0

    def re_sign(self) -> int:
        return (self.x > 0) - (self.x < 0)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, QuadInt):
            return self.ring.D == other.ring.D and self.x == other.x and self.y == other.y
        if isinstance(other, int):
            return self.y == 0 and self.x == 2 * other
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.ring.D))

    # -- presentation ---------------------------------------------------
    def basis_coords(self) -> tuple[int, int]:
        """Coordinates ``(a, b)`` with ``self = a + b*w``."""
        if self.ring.full:
            return (self.x - self.y) // 2, self.y
        return self.x // 2, self.y // 2

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm(), self.x, self.y)

    def __str__(self):
        a, b = self.basis_coords()
        return f"{a}{'+' if b >= 0 else '-'}{abs(b)}*w"

    def __repr__(self):
        return f"QuadInt('{self}', D={self.ring.D})"

    def pretty(self) -> str:
        """Human form in terms of sqrt(-D), e.g. ``(1+sqrt(-3))/2``."""
        x, y = self.x, self.y
        halves = (x | y) & 1
        if not halves:
            x, y = x // 2, y // 2
        root = "i" if self.ring.D == 1 else f"sqrt(-{self.ring.D})"
        if y == 0:
            body = str(x)
        else:
            coef = "" if abs(y) == 1 else f"{abs(y)}*"
            sign = "-" if y < 0 else ("+" if x else "")
            body = (str(x) if x else "") + sign + coef + root
        return f"({body})/2" if halves else body

    # -- numerics -------------------------------------------------------
    def embed(self, prec: int = 64) -> acb:
        return embed(self, prec)


def exact_quotient(a: QuadInt, d: QuadInt) -> Optional[QuadInt]:
    """``a / d`` if it lies in Z_M, else ``None``."""
    n = d.norm()
    if n == 0:
        raise DomainError("division by zero in Z_M")
    t = a * d.conj()
    if t.x % n or t.y % n:
        return None
    x, y = t.x // n, t.y // n
    ring = a.ring
    if ring.full:
        if (x - y) & 1:
            return None
    elif (x & 1) or (y & 1):
        return None
    return QuadInt._raw(x, y, ring)


def congruent(a: QuadInt, b: QuadInt, d: QuadInt) -> bool:
    """True iff ``d`` divides ``a - b`` in Z_M."""
    if d.is_zero():
        raise DomainError("congruence modulo zero")
    return exact_quotient(a - b, d) is not None


# -- units ------------------------------------------------------------------


class UnitRoot(enum.Enum):
    ONE = "1"
    MINUS_ONE = "-1"
    I = "i"
    MINUS_I = "-i"
    OMEGA = "omega"
    OMEGA_SQ = "omega^2"
    MINUS_OMEGA = "-omega"
    MINUS_OMEGA_SQ = "-omega^2"

    def value_in(self, ring: RingSpec) -> QuadInt:
        table = {
            UnitRoot.ONE: (2, 0, None),
            UnitRoot.MINUS_ONE: (-2, 0, None),
            UnitRoot.I: (0, 2, 1),
            UnitRoot.MINUS_I: (0, -2, 1),
            UnitRoot.OMEGA: (-1, 1, 3),
            UnitRoot.OMEGA_SQ: (-1, -1, 3),
            UnitRoot.MINUS_OMEGA: (1, -1, 3),
            UnitRoot.MINUS_OMEGA_SQ: (1, 1, 3),
        }
        x, y, need = table[self]
        if need is not None and ring.D != need:
            raise DomainError(f"{self.value} is not an element of Z_M for D={ring.D}")
        return QuadInt(x, y, ring)


def units(ring: RingSpec) -> list[QuadInt]:
    if ring.D == 1:
        tags = [UnitRoot.ONE, UnitRoot.MINUS_ONE, UnitRoot.I, UnitRoot.MINUS_I]
    elif ring.D == 3:
        tags = [UnitRoot.ONE, UnitRoot.MINUS_ONE, UnitRoot.OMEGA, UnitRoot.MINUS_OMEGA,
                UnitRoot.OMEGA_SQ, UnitRoot.MINUS_OMEGA_SQ]
    else:
        tags = [UnitRoot.ONE, UnitRoot.MINUS_ONE]
    return [t.value_in(ring) for t in tags]


def omega(ring: RingSpec) -> QuadInt:
    return UnitRoot.OMEGA.value_in(ring)


def imag_unit(ring: RingSpec) -> QuadInt:
    return UnitRoot.I.value_in(ring)


# -- disk enumeration ---------------------------------------------------------


def _as_fraction(r) -> Fraction:
    if isinstance(r, float):
        if not math.isfinite(r):
            raise DomainError("radius must be finite")
        return Fraction(r).limit_denominator(10**12)
    return Fraction(r)


def enumerate_disk(ring: RingSpec, radius=None, *, radius_sq=None) -> Iterator[QuadInt]:
    """Every ``c`` in Z_M with ``|c| <= radius``, ordered by ``(norm, x, y)``.

    Irrational radii are passed through ``radius_sq`` (an exact rational).
    """
    if radius_sq is None:
        if radius is None:
            raise DomainError("need radius or radius_sq")
        r = _as_fraction(radius)
        if r < 0:
            raise DomainError("radius must be nonnegative")
        r2 = r * r
    else:
        r2 = _as_fraction(radius_sq)
        if r2 < 0:
            raise DomainError("radius_sq must be nonnegative")
    bound = 4 * r2  # x^2 + D y^2 <= 4 R^2
    D = ring.D
    ymax = math.isqrt(int(bound // D)) if bound >= 0 else -1
    out = []
    for y in range(-ymax, ymax + 1):
        if not ring.full and y & 1:
            continue
        rest = bound - D * y * y
        if rest < 0:
            continue
        xmax = math.isqrt(int(rest))
        start = -xmax
        if ring.full:
            if (start - y) & 1:
                start += 1
        elif start & 1:
            start += 1
        for x in range(start, xmax + 1, 2):
            if x * x + D * y * y <= bound:
                out.append(QuadInt._raw(x, y, ring))
    out.sort(key=QuadInt.sort_key)
    return iter(out)


# -- exceptional parameter sets -------------------------------------------------
# half coordinates (x, y) with the D they require (None: every ring)

def _pm(*pairs):
    out = set()
    for x, y, D in pairs:
        for sx in (1, -1):
            for sy in (1, -1):
                out.add((sx * x, sy * y, D if y else None))
    return frozenset(out)


S_C = _pm(
    (2, 0, None),            # +-1
    (0, 2, 1),               # +-sqrt(-1)
    (2, 2, 1), (4, 2, 1),    # +-1+-sqrt(-1), +-2+-sqrt(-1)
    (2, 2, 2),               # +-1+-sqrt(-2)
    (2, 2, 3),               # +-1+-sqrt(-3)
    (1, 1, 3), (3, 1, 3),    # (+-1+-sqrt(-3))/2, (+-3+-sqrt(-3))/2
)


def _fixed(*items):
    return frozenset((x, y, D if y else None) for x, y, D in items)


T_SET = _fixed(
    (2, 2, 1), (2, -2, 1),
    (0, 2, 2), (0, -2, 2),
    (1, 1, 7), (1, -1, 7),
    (2, 2, 2), (2, -2, 2),
    (0, 2, 3), (0, -2, 3),
    (3, 1, 3), (3, -1, 3),
    (1, 1, 11), (1, -1, 11),
)

T1_SET = T_SET | _fixed(
    (0, 4, 1), (0, -4, 1),
    (3, 1, 7), (3, -1, 7),
    (1, 1, 15), (1, -1, 15),
    (2, 2, 3), (2, -2, 3),
)


def _member(c: QuadInt, table) -> bool:
    key = (c.x, c.y, c.ring.D if c.y else None)
    return key in table


def in_Sc(c: QuadInt) -> bool:
    return _member(c, S_C)


def in_T(c: QuadInt) -> bool:
    return _member(c, T_SET)


def in_T1(c: QuadInt) -> bool:
    return _member(c, T1_SET)


def is_excluded(c: QuadInt) -> bool:
    """``c`` in {0, 2, -2}, where the quartic is reducible."""
    return c.y == 0 and c.x in (0, 4, -4)


def Sc_elements(ring: RingSpec) -> list[QuadInt]:
    return sorted(
        (QuadInt(x, y, ring) for x, y, D in S_C if D is None or D == ring.D),
        key=QuadInt.sort_key,
    )


# -- numerics -------------------------------------------------------------------


def embed(a: QuadInt, prec: int = 64) -> acb:
    """Complex ball containing ``(x + y*i*sqrt(D))/2``."""
    if prec < 32:
        raise DomainError("embedding precision must be at least 32 bits")
    with ctx.workprec(prec):
        re = arb(a.x) / 2
        if a.y == 0:
            return acb(re, 0)
        im = arb(a.y) * arb(a.ring.D).sqrt() / 2
        return acb(re, im)


def modulus(a: QuadInt, prec: int = 64) -> arb:
    with ctx.workprec(prec):
        return arb(a.norm()).sqrt()


# -- textual syntax ---------------------------------------------------------------

_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*(\*?\s*w)?\s*")


def parse_element(text: str, ring: RingSpec) -> QuadInt:
    """Parse ``"a+b*w"`` (``w`` = sqrt(-D), or (1+sqrt(-D))/2 when -D = 1 mod 4)."""
    if re.search(r"\d\s+\d", text):
        raise ParseError(f"cannot parse element {text!r}")
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty element")
    a = b = 0
    pos = 0
    seen = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse element {text!r}")
        sign, digits, wpart = m.groups()
        if seen and not sign:
            raise ParseError(f"missing operator in {text!r}")
        if not digits and not wpart:
            raise ParseError(f"cannot parse element {text!r}")
        if wpart and wpart.startswith("*") and not digits:
            raise ParseError(f"dangling '*' in {text!r}")
        if digits and wpart and not wpart.startswith("*"):
            raise ParseError(f"write coefficients as 'b*w' in {text!r}")
        value = int(digits) if digits else 1
        if sign == "-":
            value = -value
        if wpart:
            b += value
        else:
            a += value
        pos = m.end()
        seen += 1
    return ring(a, b)


def format_element(a: QuadInt) -> str:
    return str(a)


def exact_sqrt(a: QuadInt) -> Optional[QuadInt]:
    """``b`` with ``b*b == a`` and ``b`` first in (x, y) order, or None."""
    if a.is_zero():
        return a
    s = math.isqrt(a.norm())
    if s * s != a.norm():
        return None
    # b = (x + y sqrt(-D))/2: x^2 + D y^2 = 4s and x^2 - D y^2 = 2X
    x2, dy2 = 2 * s + a.x, 2 * s - a.x
    D = a.ring.D
    if x2 < 0 or dy2 < 0 or dy2 % D:
        return None
    x, y = math.isqrt(x2), math.isqrt(dy2 // D)
    if x * x != x2 or y * y != dy2 // D:
        return None
    if x * y != a.y:
        y = -y
    if x * y != a.y or (x - y) & 1 or (not a.ring.full and (x & 1 or y & 1)):
        return None
    b = QuadInt(x, y, a.ring)
    return b if b * b == a else None
