import random

import pytest
from hypothesis import given, strategies as st

from relpib.absindex import (
    Alpha0, OrderElement, char_poly, conj_poly, conjugate_product_numeric, j_alpha_divisibility,
    mul_mod_f, resultant, second_generator, xi_element,
)
from relpib.errors import DomainError, InapplicableError
from relpib.forms import QuarticParams, quartic_roots
from relpib.ring import RingSpec, embed, units

ABS_DS = (1, 2, 5, 6, 10, 13)


def test_mul_mod_f():
    r = RingSpec(2)
    c = r(1, 1)
    P = QuarticParams(c)
    z = r.zero
    xi = xi_element(r)
    xi3 = OrderElement(z, z, z, r.one)
    assert mul_mod_f(xi, xi3, P) == OrderElement(-r.one, -2 * c, r.of(-2), 2 * c)
    v = OrderElement(r(1, 2), r(3), r(0, -1), r(5))
    assert mul_mod_f(OrderElement.scalar(r.one), v, P) == v
    assert mul_mod_f(xi, xi, P) == OrderElement(z, z, r.one, z)


def test_char_poly_examples():
    r = RingSpec(2)
    P = QuarticParams(r(1, 1))
    assert char_poly(xi_element(r), P) == P.poly()
    A = r(3, -2)
    assert char_poly(OrderElement.scalar(A), P) == [A ** 4, -4 * A ** 3, 6 * A * A, -4 * A, r.one]


def test_char_poly_second_generator_norm():
    r = RingSpec(2)
    P = QuarticParams(r(3))
    alpha = second_generator(P)
    g = char_poly(alpha, P)
    assert len(g) == 5 and g[-1] == 1
    # the constant term is the norm of alpha: prod over the roots of f
    prod = 1
    for root in quartic_roots(P.c, 256):
        prod *= 2 * root - 6 * root ** 2 + root ** 3
    assert prod.overlaps(embed(g[0], 256))


def test_conj_poly():
    r = RingSpec(2)
    c = r(1, 1)
    assert conj_poly(QuarticParams(c).poly()) == QuarticParams(c.conj()).poly()
    real = [r(1), r(-3), r(2)]
    assert conj_poly(real) == real
    g = char_poly(second_generator(QuarticParams(c)), QuarticParams(c))
    assert conj_poly(conj_poly(g)) == g


def test_resultant_examples():
    r = RingSpec(5)
    a, b = r(3, 1), r(-2, 4)
    assert resultant([-a, r.one], [-b, r.one]) == a - b
    f = QuarticParams(r(3, 1)).poly()
    assert resultant(f, f).is_zero()
    r2 = RingSpec(2)
    f2 = QuarticParams(r2(1, 1)).poly()
    res = resultant(f2, conj_poly(f2))
    assert res.y == 0
    with pytest.raises(DomainError):
        resultant([r.one, r(2)], [r.one, r.one])


def test_divisibility_examples():
    v = j_alpha_divisibility(2, 1, 1, 0, 1, Alpha0.Xi)
    assert v.divisible_4096D2 and v.R % (4096 * 4) == 0
    v = j_alpha_divisibility(5, 3, 0, 2, -1, Alpha0.SecondGen)
    assert v.divisible_256 and v.J.numerator % 256 == 0
    i = units(RingSpec(1))[2]
    v = j_alpha_divisibility(1, 2, 1, 0, i, Alpha0.Xi)
    assert v.divisible_256 and v.divisible_4096D2
    with pytest.raises(InapplicableError):
        j_alpha_divisibility(7, 3, 1, 0)
    with pytest.raises(InapplicableError):
        j_alpha_divisibility(3, 3, 1, 0)
    with pytest.raises(DomainError):
        j_alpha_divisibility(2, 2, 0, 1)
    with pytest.raises(DomainError):
        j_alpha_divisibility(2, 3, 1, 0, 2)


def test_independent_of_a():
    for D, p, q, b in ((2, 1, 1, 0), (5, 3, -1, 2), (1, 2, 1, -1)):
        base = j_alpha_divisibility(D, p, q, b, 1, Alpha0.SecondGen).R
        for a in (-3, 1, 7):
            assert j_alpha_divisibility(D, p, q, b, 1, Alpha0.SecondGen, a=a).R == base


def test_numeric_cross_check():
    rng = random.Random(5)
    for _ in range(10):
        D = rng.choice(ABS_DS)
        p, q, b = rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(-3, 3)
        if q == 0 and p in (0, 2, -2):
            p = 3
        a0 = rng.choice(list(Alpha0))
        v = j_alpha_divisibility(D, p, q, b, 1, a0)
        assert conjugate_product_numeric(D, p, q, b, 1, a0, prec=256).contains(abs(v.R))


@given(st.sampled_from(ABS_DS), st.integers(-20, 20), st.integers(-20, 20))
def test_char_poly_xi_is_f(D, p, q):
    r = RingSpec(D)
    c = r(p, q)
    if c.y == 0 and c.x in (0, 4, -4):
        return
    P = QuarticParams(c)
    assert char_poly(xi_element(r), P) == P.poly()


@given(st.sampled_from(ABS_DS), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5),
       st.sampled_from(list(Alpha0)), st.data())
def test_divisibility_uniform(D, p, q, b, a0, data):
    r = RingSpec(D)
    if r(p, q).y == 0 and p in (0, 2, -2):
        return
    eps = data.draw(st.sampled_from([u for u in units(r) if D == 1 or u.y == 0]))
    v = j_alpha_divisibility(D, p, q, b, eps, a0)
    assert v.divisible_4096D2 and v.divisible_256
