from fractions import Fraction

import pytest
from flint import acb, arb, ctx
from hypothesis import given, strategies as st

from relpib.balls import principal_sqrt
from relpib.errors import DomainError, InapplicableError
from relpib.linforms import (
    BW_M_MAX, BW_N_MAX, Coefficient, LambdaStatus, build_P, build_Q, bw_constant, bw_global_bounds,
    bw_threshold, exclude_index_one, height_bounds, lambda_nonzero, lambda_upper_bounds, lambda_value,
    linform_instance, normalize_c, p_differs_from_pm_q, reconstruct_u, reconstruct_uprime, reconstruction_verdict,
)
from relpib.pell import admissible_mu_eps, u_seq, uprime_seq
from relpib.ring import RingSpec, embed, enumerate_disk

from strategies import generic_c


def test_normalize_c():
    r2 = RingSpec(2)
    assert normalize_c(r2(-3)) == (r2(3), True)
    assert normalize_c(r2(3, 1)) == (r2(3, 1), False)
    assert normalize_c(r2(0, 1)) == (r2(0, 1), False)


def test_principal_sqrt():
    with ctx.workprec(128):
        assert principal_sqrt(acb(-4)).overlaps(acb(0, 2))
        assert principal_sqrt(acb(0, 2)).overlaps(acb(1, 1))
        assert principal_sqrt(acb(1)).overlaps(acb(1))


def test_P_Q_sizes():
    for c in (RingSpec(2)(1, 1) + 1, RingSpec(1)(1, 1), RingSpec(5)(3), RingSpec(7)(1, 1)):
        if c.norm() < 2:
            continue
        for k in range(2, 8):
            assert abs(build_P(c, k)) >= 16
            assert abs(build_Q(c, k)) >= 9


def test_build_domain():
    for bad in (0, 1, 2):
        with pytest.raises(DomainError):
            build_P(RingSpec(1)(bad), 2)
    with pytest.raises(DomainError):
        build_Q(RingSpec(1)(-3), 2)


def test_e90_coefficient_verdict():
    # only 2c/(c+2) reproduces u_m
    r2 = RingSpec(2)
    for c in (r2(3, 1), r2(1, 66), RingSpec(1)(2, 1)):
        for m in range(1, 6):
            v = reconstruction_verdict(c, c.ring.one, m, 256)
            assert v[Coefficient.C_PLUS_2.value] and not v[Coefficient.C_PLUS_1.value]


def test_lambda_examples():
    c = RingSpec(2)(1, 66)
    with ctx.workprec(256):
        eta, theta, xi = (linform_instance(c, 256).eta, linform_instance(c, 256).theta,
                          linform_instance(c, 256).xi_const)
        assert lambda_value(c, 0, 0, 256).overlaps(xi.log())
        assert abs(lambda_value(c, 5, 5, 256)) < 5 * (theta.log() - eta.log()) + abs(xi.log()) + 1e-20


def test_lambda_upper_bounds():
    a, b = lambda_upper_bounds(2, 3)
    assert a.overlaps(arb(1) / 9)
    assert abs(float(b.mid()) - 0.26855) < 1e-4
    assert lambda_upper_bounds(10, 2)[0].overlaps(arb(3) ** -10)


def test_lambda_nonzero():
    assert lambda_nonzero(RingSpec(2)(3, 1)) is LambdaStatus.NonzeroCertified
    assert lambda_nonzero(RingSpec(1)(0, 5)) is LambdaStatus.ZeroPossible_ReZero
    with pytest.raises(InapplicableError):
        lambda_nonzero(RingSpec(1)(1))


def test_exclude_index_one():
    assert exclude_index_one(RingSpec(1)(3))
    assert exclude_index_one(RingSpec(1)(1, 1))
    c = RingSpec(5)(4, 3)
    assert u_seq(c, 1, 1) != uprime_seq(c, 1, 1) and u_seq(c, 1, 1) != -uprime_seq(c, 1, 1)


def test_bw():
    K = bw_constant(256)
    assert K < arb("8.6e34")
    assert bw_global_bounds(256) == (BW_M_MAX, BW_N_MAX)
    m_thr = bw_threshold(Fraction(3))
    n_thr = bw_threshold(Fraction(155, 100))
    assert m_thr <= 67 * 10 ** 35 and n_thr <= 1715 * 10 ** 34
    # the caps are tight to the printed precision
    assert m_thr > 66 * 10 ** 35 and n_thr > 1670 * 10 ** 34


def test_height_bounds():
    r = RingSpec(1)
    h1, h2, hx = height_bounds(r(200))
    assert abs(float(h1.mid()) - 14.765) < 1e-3 and h1.overlaps(h2)
    assert h1 < 28.12 and hx < 271.82
    small = height_bounds(RingSpec(2)(0, 1))
    assert small[0] < h1 and small[2] < hx
    with pytest.raises(DomainError):
        height_bounds(r(201))


def test_linform_instance():
    inst = linform_instance(RingSpec(2)(1, 66), 256)
    assert inst.eta > 1 and inst.theta > 1
    assert inst.ratio_minus_sq <= 25
    with pytest.raises(InapplicableError):
        linform_instance(RingSpec(1)(0, 5))


def test_conjugate_products_are_one():
    for c in (RingSpec(2)(1, 66), RingSpec(1)(3, 2), RingSpec(7)(5, 1)):
        with ctx.workprec(256):
            z = embed(c, 256)
            s_plus = (z * (z + 2)).sqrt()
            s_minus = (z * (z - 2)).sqrt()
            assert (abs(z + 1 + s_plus) * abs(z + 1 - s_plus)).contains(1)
            assert (abs(z - 1 + s_minus) * abs(z - 1 - s_minus)).contains(1)


def test_P_Q_gap_near_intersection():
    # ||P| - |Q|| <= 2|sqrt(c)| |u_m - s u'_n| + 1.24 for m, n >= 2; an exact
    # intersection makes the first term vanish
    for c in (RingSpec(2)(1, 66), RingSpec(1)(3, 2), RingSpec(5)(3), RingSpec(7)(1, 1)):
        with ctx.workprec(256):
            root = abs(embed(c, 256)).sqrt()
            for m in range(2, 7):
                for n in range(2, 7):
                    for s in (1, -1):
                        gap = abs(embed(u_seq(c, 1, m) - s * uprime_seq(c, 1, n), 256))
                        lhs = abs(abs(build_P(c, m, 256)) - abs(build_Q(c, n, 256)))
                        assert lhs < 2 * root * gap + arb("1.24")


def test_ratio_cap_over_disk():
    for D in (1, 2, 3, 5, 7, 11):
        for c in enumerate_disk(RingSpec(D), 12):
            if c.x >= 0 and not (c.y == 0 and c.x == 4) and c.norm() >= 2:
                assert 25 * (c - 2).norm() >= c.norm()


@given(generic_c(bound=15, positive_re=True), st.integers(0, 10))
def test_reconstructions(c, m):
    if c.norm() < 2 or (c.y == 0 and c.x in (2, 4)):
        return
    for me in admissible_mu_eps(c.ring):
        assert reconstruct_u(c, me.eps, m, 192).overlaps(embed(u_seq(c, me.eps, m), 192))
        assert reconstruct_uprime(c, me.eps, m, 192).overlaps(embed(uprime_seq(c, me.eps, m), 192))


@given(generic_c(bound=15, positive_re=True))
def test_p_not_pm_q(c):
    if c.norm() >= 2:
        assert p_differs_from_pm_q(c)
