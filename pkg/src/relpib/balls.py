"""Certified midpoint-radius balls.

Balls are python-flint ``arb`` (real) and ``acb`` (complex) values.  This
module adds the decisions the rest of the package needs: comparisons that
either certify or raise, an adaptive precision driver, and a stable JSON
encoding.  Working precision is always set per call via ``ctx.workprec``.
"""
from __future__ import annotations

import os
from typing import Callable, TypeVar, Union

from flint import acb, arb, ctx

from .errors import PrecisionError, PrecisionExhausted

Ball = Union[arb, acb]
T = TypeVar("T")

DEFAULT_PREC = int(os.environ.get("RELPIB_PREC", "128"))
PREC_CAP = 16384
JSON_DIGITS = 30


def lt(a: arb, b, quantity: str = "comparison") -> bool:
    """Certified ``a < b``; raises when the balls overlap."""
    if a < b:
        return True
    if a >= b:
        return False
    raise PrecisionError(f"cannot decide {quantity}: {a} vs {b}", quantity)


def gt(a: arb, b, quantity: str = "comparison") -> bool:
    return lt(b, a, quantity)


def positive(a: arb, quantity: str = "sign") -> bool:
    if a > 0:
        return True
    if a <= 0:
        return False
    raise PrecisionError(f"cannot decide sign of {quantity}: {a}", quantity)


def sign(a: arb, quantity: str = "sign") -> int:
    if a > 0:
        return 1
    if a < 0:
        return -1
    if a.is_zero():
        return 0
    raise PrecisionError(f"cannot decide sign of {quantity}: {a}", quantity)


def nearest_integer(x: arb, quantity: str = "nearest integer") -> int:
    """The integer nearest to every point of ``x``; raises if not unique."""
    n = (x + arb(0.5)).floor().unique_fmpz()
    if n is None:
        raise PrecisionError(f"nearest integer to {x} is not certified", quantity)
    return int(n)


def dist_to_int(x: arb, quantity: str = "distance to nearest integer") -> arb:
    """Ball for ``||x||``, the distance to the (certified) nearest integer."""
    n = nearest_integer(x, quantity)
    return abs(x - n)


def floor_int(x: arb, quantity: str = "floor") -> int:
    n = x.floor().unique_fmpz()
    if n is None:
        raise PrecisionError(f"floor of {x} is not certified", quantity)
    return int(n)


def upper_floor(x: arb) -> int:
    """``floor`` of the upper end of ``x``: a safe integer upper bound."""
    return int(x.upper().floor().unique_fmpz())


def adaptive(fn: Callable[[int], T], start: int = DEFAULT_PREC, cap: int = PREC_CAP) -> T:
    """Call ``fn(prec)`` with doubling precision until it stops raising PrecisionError."""
    prec = max(start, 32)
    last: PrecisionError | None = None
    while prec <= cap:
        try:
            with ctx.workprec(prec):
                return fn(prec)
        except PrecisionExhausted:
            raise
        except PrecisionError as exc:
            last = exc
            prec *= 2
    quantity = last.quantity if last else ""
    raise PrecisionExhausted(
        f"precision cap {cap} bits reached while certifying {quantity or 'a result'}: {last}",
        quantity,
        cap,
    )


def _dec(x: arb, digits: int) -> str:
    return x.str(digits, radius=False)


def to_json(x: Ball, prec: int | None = None, digits: int = JSON_DIGITS) -> dict:
    """``{mid_dec, rad_dec, prec_bits}``; complex balls get ``re``/``im`` parts."""
    if isinstance(x, acb):
        return {"re": to_json(x.real, prec, digits), "im": to_json(x.imag, prec, digits)}
    return {
        "mid_dec": _dec(x.mid(), digits),
        "rad_dec": _dec(x.rad(), 5),
        "prec_bits": int(prec if prec is not None else ctx.prec),
    }


def rel_width(x: arb) -> float:
    """Radius relative to the magnitude of the midpoint (inf for balls at 0)."""
    mid = abs(float(x.mid()))
    rad = float(x.rad())
    return rad / mid if mid else float("inf")


def exact_arb(q) -> arb:
    """Exact rational as a ball (the ball is exact when the dyadic is exact)."""
    from fractions import Fraction

    q = Fraction(q)
    return arb(q.numerator) / q.denominator


def principal_sqrt(z: acb, quantity: str = "square root") -> acb:
    """Principal square root, argument in ``(-pi, pi]``.

    A ball meeting the negative real axis is accepted only when it is exactly
    real (then the branch ``arg = pi`` is taken); otherwise the branch is
    ambiguous and a PrecisionError is raised.
    """
    z = acb(z)
    re, im = z.real, z.imag
    if re > 0 or im > 0 or im < 0:
        return z.sqrt()
    if im.is_exact() and im.is_zero():
        if re <= 0:
            return acb(0, (-re).sqrt())
    raise PrecisionError(f"{quantity}: ball {z} straddles the branch cut", quantity)
