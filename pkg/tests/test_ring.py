from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from relpib.errors import DomainError, ParseError, RingMismatchError
from relpib.ring import (
    Convention, QuadInt, RingSpec, Sc_elements, UnitRoot, congruent, embed, enumerate_disk, exact_quotient,
    exact_sqrt, in_Sc, in_T, in_T1, is_excluded, omega, parse_element, units,
)

from strategies import DS, elements, ring_and_elements, rings


def test_ring_construction():
    assert RingSpec(3).convention is Convention.FULL_LATTICE
    assert RingSpec(2).convention is Convention.HALF_LATTICE
    for bad in (0, -1, 4, 12, 18):
        with pytest.raises(DomainError):
            RingSpec(bad)


def test_parity_invariant():
    with pytest.raises(DomainError):
        QuadInt(1, 0, RingSpec(2))
    with pytest.raises(DomainError):
        QuadInt(1, 0, RingSpec(3))
    assert QuadInt(1, 1, RingSpec(3)) == RingSpec(3).w


def test_mul_examples():
    r1, r2, r3 = RingSpec(1), RingSpec(2), RingSpec(3)
    assert r1(1) * r1(0, 1) == UnitRoot.I.value_in(r1)
    w = omega(r3)
    assert w * w == QuadInt(-1, -1, r3)
    assert w * w * w == 1
    assert r2(1, 1) * r2(1, -1) == 3


def test_mixed_rings_rejected():
    with pytest.raises(RingMismatchError):
        RingSpec(2)(1) + RingSpec(5)(1)


def test_conj_and_norm_examples():
    r2, r3, r5 = RingSpec(2), RingSpec(3), RingSpec(5)
    assert r2(0, 1).conj() == r2(0, -1)
    assert omega(r3).conj() == omega(r3) * omega(r3)
    assert r5(3, 2).conj() == r5(3, -2)
    assert RingSpec(1)(1, 1).norm() == 2
    assert omega(r3).norm() == 1
    assert (2 * r2(1, 66)).norm() == 34852


def test_congruent_examples():
    r1 = RingSpec(1)
    assert congruent(r1(5), r1(1), r1(2))
    assert not congruent(r1(1), r1(0), r1(2))
    r2 = RingSpec(2)
    c = r2(3, 1)
    u2 = (2 * c + 2) * (2 * c + 1) - 1
    assert congruent(u2, 1 + 6 * c, 4 * c * c)
    with pytest.raises(DomainError):
        congruent(r1(1), r1(0), r1.zero)


def test_units():
    assert units(RingSpec(5)) == [RingSpec(5).one, -RingSpec(5).one]
    assert len(units(RingSpec(1))) == 4
    assert len(units(RingSpec(3))) == 6
    with pytest.raises(DomainError):
        UnitRoot.I.value_in(RingSpec(2))
    with pytest.raises(DomainError):
        UnitRoot.OMEGA.value_in(RingSpec(7))


def test_enumerate_disk_examples():
    r1, r2 = RingSpec(1), RingSpec(2)
    assert set(enumerate_disk(r1, 1)) == {r1.zero, r1(1), r1(-1), r1(0, 1), r1(0, -1)}
    assert set(enumerate_disk(r2, Fraction(3, 2))) == {r2.zero, r2(1), r2(-1), r2(0, 1), r2(0, -1)}
    r163 = RingSpec(163)
    assert set(enumerate_disk(r163, 1)) == {r163.zero, r163(1), r163(-1)}


def test_enumerate_disk_order_and_count():
    for D in DS:
        ring = RingSpec(D)
        for R in (0, 1, 3, 10):
            got = list(enumerate_disk(ring, R))
            assert got == sorted(got, key=QuadInt.sort_key)
            assert len(set(got)) == len(got)
            brute = set()
            for x in range(-2 * R - 1, 2 * R + 2):
                for y in range(-2 * R - 1, 2 * R + 2):
                    try:
                        a = QuadInt(x, y, ring)
                    except DomainError:
                        continue
                    if a.norm() <= R * R:
                        brute.add(a)
            assert set(got) == brute


def test_sets():
    for D in DS:
        assert in_Sc(RingSpec(D).one)
    r3 = RingSpec(3)
    assert in_Sc(QuadInt(1, 1, r3))
    assert in_T(RingSpec(2)(0, 1))
    assert in_T1(RingSpec(1)(0, 2))
    assert not in_T(RingSpec(1)(0, 2))
    assert all(is_excluded(RingSpec(D)(a)) for D in DS for a in (0, 2, -2))
    assert not is_excluded(RingSpec(1)(2, 1))


def test_Sc_moduli_small():
    for D in range(1, 40):
        try:
            ring = RingSpec(D)
        except DomainError:
            continue
        for c in Sc_elements(ring):
            # |c| <= sqrt(5) + 1
            assert c.norm() <= 5 or (c.norm() - 6) ** 2 <= 20


def test_embed():
    r1 = RingSpec(1)
    e = embed(r1(1), 64)
    assert e.real == 1 and e.imag == 0
    s2 = embed(RingSpec(2)(0, 1), 64)
    assert abs(float(s2.imag.mid()) - 2 ** 0.5) < 1e-15
    w = embed(omega(RingSpec(3)), 64)
    assert w.real == -0.5 and abs(float(w.imag.mid()) - 3 ** 0.5 / 2) < 1e-15


def test_parse_errors():
    r = RingSpec(2)
    for bad in ("", "1+", "2w", "1 2", "x", "*w", "1+*w"):
        with pytest.raises(ParseError):
            parse_element(bad, r)
    assert parse_element("-3-4*w", r) == r(-3, -4)
    assert parse_element("w", r) == r(0, 1)


# -- properties -----------------------------------------------------------------


@given(ring_and_elements(2))
def test_norm_multiplicative(t):
    _, a, b = t
    assert (a * b).norm() == a.norm() * b.norm()


@given(ring_and_elements(1))
def test_a_conj_a_is_norm(t):
    _, a = t
    prod = a * a.conj()
    assert prod.y == 0 and prod == a.norm()


@given(rings())
def test_units_are_norm_one(ring):
    assert set(enumerate_disk(ring, 1)) - {ring.zero} == set(units(ring))


@given(ring_and_elements(3, bound=15), st.integers(-20, 20))
def test_congruence_compatible(t, k):
    ring, a, b, d = t
    if d.is_zero():
        d = ring(3, 1)
    assert congruent(a, a, d)
    b2 = b + k * d
    assert congruent(b, b2, d) and congruent(b2, b, d)
    assert congruent(a + b, a + b2, d)
    assert congruent(a * b, a * b2, d)
    b3 = b2 + d * ring(1, 1)
    assert congruent(b, b3, d)


@given(rings(), st.integers(0, 6), st.integers(0, 6))
def test_disk_monotone(ring, r1, r2):
    lo, hi = sorted((r1, r2))
    assert set(enumerate_disk(ring, lo)) <= set(enumerate_disk(ring, hi))


@given(ring_and_elements(1, bound=10 ** 6))
def test_format_parse_round_trip(t):
    ring, a = t
    assert parse_element(str(a), ring) == a


@given(ring_and_elements(2, bound=40))
def test_exact_sqrt_and_quotient(t):
    _, a, b = t
    root = exact_sqrt(a * a)
    assert root is not None and root * root == a * a
    if not b.is_zero():
        assert exact_quotient(a * b, b) == a
