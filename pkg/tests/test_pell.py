import pytest
from flint import arb, acb, ctx
from hypothesis import given, strategies as st

from relpib.errors import DomainError, InapplicableError
from relpib.pell import (
    SeqKind, SeqState, admissible_mu_eps, closed_form_u, closed_form_uprime, congruence_holds,
    congruence_residue_u, congruence_residue_uprime, growth_bounds_check, log_lower_bound_U, lower_bound_U,
    min_nontrivial_index, pell_residual_1, pell_residual_2, sequence, u_seq, uprime_seq, v_seq, z_seq,
)
from relpib.ring import QuadInt, RingSpec, congruent, embed, enumerate_disk, omega, units

from strategies import generic_c


def test_admissible_pairs():
    r7, r1, r3 = RingSpec(7), RingSpec(1), RingSpec(3)
    assert [(p.mu, p.eps) for p in admissible_mu_eps(r7)] == [(r7.one, r7.one)]
    i = units(r1)[2]
    assert {(p.mu, p.eps) for p in admissible_mu_eps(r1)} == {(r1.one, r1.one), (-r1.one, i)}
    w = omega(r3)
    assert {(p.mu, p.eps) for p in admissible_mu_eps(r3)} == {(r3.one, r3.one), (w, w * w), (w * w, w)}
    for D in (1, 2, 3, 7):
        for p in admissible_mu_eps(RingSpec(D)):
            assert p.eps * p.eps == p.mu


def test_sequence_examples():
    r = RingSpec(2)
    c = r(3, 1)
    assert u_seq(c, 1, 1) == 2 * c + 1
    one = RingSpec(1).one
    assert [u_seq(one, 1, m) for m in range(4)] == [1, 3, 11, 41]
    assert uprime_seq(c, 1, 2) == 4 * c * c - 6 * c + 1
    assert uprime_seq(r(3), 1, 2) == 19


def test_seq_state_advances():
    c = RingSpec(5)(3, 2)
    st_ = SeqState.start(c, 1, SeqKind.Z_minus)
    seen = []
    for _ in range(6):
        seen.append(st_.current)
        assert st_.satisfies_recurrence
        st_ = st_.advance()
    assert seen == sequence(c, 1, SeqKind.Z_minus, 6)


def test_residual_examples():
    r1 = RingSpec(1)
    c = r1(2, 1)
    assert pell_residual_1(r1.one, r1.one, c, 1).is_zero()
    for m in range(11):
        assert pell_residual_1(u_seq(c, 1, m), v_seq(c, 1, m), c, 1).is_zero()
    i = units(r1)[2]
    assert pell_residual_2(i, i, c, -1).is_zero()


def test_closed_form_examples():
    r = RingSpec(5)
    assert closed_form_u(r(3), 1, 0).contains(1)
    assert closed_form_u(r(3), 1, 1).contains(7)
    c = RingSpec(1)(2, 1)
    assert closed_form_u(c, 1, 5).contains(embed(u_seq(c, 1, 5), 256))


def test_closed_form_requires_re_nonneg():
    with pytest.raises(DomainError):
        closed_form_u(RingSpec(1)(-3, 1), 1, 2)


def test_growth_examples():
    assert growth_bounds_check(RingSpec(5)(3), 1, SeqKind.U_plus, 10)
    assert growth_bounds_check(RingSpec(5)(3), 1, SeqKind.U_minus, 10)
    assert growth_bounds_check(RingSpec(1)(2), 1, SeqKind.U_plus, 10)
    c = QuadInt(2, 2, RingSpec(3))  # 1 + sqrt(-3)
    assert c.norm() == 4
    assert growth_bounds_check(c, 1, SeqKind.U_plus, 8)
    assert growth_bounds_check(c, 1, SeqKind.U_minus, 8)


def test_congruence_examples():
    r2 = RingSpec(2)
    c = r2(3, 1)
    assert congruence_residue_u(0, c, 1) == 1
    assert congruence_residue_u(2, c, 1) == r2(19, 6)
    assert congruence_residue_uprime(1, c, 1) == 2 * c - 1


def test_min_index_and_lower_bounds():
    r = RingSpec(1)
    assert abs(float(min_nontrivial_index(r(4)).mid()) - 2.3723) < 1e-4
    assert abs(float(min_nontrivial_index(r(159108)).mid()) - 563.6) < 0.1
    assert abs(float(min_nontrivial_index(RingSpec(7)(1, 1) - 1).mid()) - 1.2544) < 1e-3
    with pytest.raises(InapplicableError):
        min_nontrivial_index(r(1))
    b8 = lower_bound_U(r(8))
    with ctx.workprec(64):
        assert b8.overlaps(arb(13) ** (arb("16.25").sqrt() - 0.5))
    assert float(log_lower_bound_U(r(159108)).mid()) / 2.302585 > 2800


def test_lower_bound_at_two_is_vacuous():
    c = RingSpec(1)(0, 2)  # |c| = 2
    assert lower_bound_U(c).contains(1)


def test_conjugate_pair_product():
    for c in (RingSpec(1)(2, 1), RingSpec(2)(1, 66), RingSpec(5)(3)):
        with ctx.workprec(256):
            z = embed(c, 256)
            s = (z * (z + 2)).sqrt()
            assert (abs(z + 1 + s) * abs(z + 1 - s)).contains(1)


# -- properties over the test disks -------------------------------------------------


@given(generic_c(bound=12), st.integers(0, 20))
def test_pell_preserved(c, m):
    for me in admissible_mu_eps(c.ring):
        assert pell_residual_1(u_seq(c, me.eps, m), v_seq(c, me.eps, m), c, me.mu).is_zero()
        assert pell_residual_2(uprime_seq(c, me.eps, m), z_seq(c, me.eps, m), c, me.mu).is_zero()


@given(generic_c(bound=12), st.integers(0, 30))
def test_congruences(c, k):
    for me in admissible_mu_eps(c.ring):
        assert congruent(u_seq(c, me.eps, k), congruence_residue_u(k, c, me.eps), 4 * c * c)
        assert congruent(uprime_seq(c, me.eps, k), congruence_residue_uprime(k, c, me.eps), 4 * c * c)
        assert congruence_holds(c, me.eps, SeqKind.U_plus, k)


@given(generic_c(bound=12, positive_re=True), st.integers(0, 15))
def test_closed_forms_agree(c, m):
    for me in admissible_mu_eps(c.ring):
        assert closed_form_u(c, me.eps, m, 192).contains(embed(u_seq(c, me.eps, m), 256))
        assert closed_form_uprime(c, me.eps, m, 192).contains(embed(uprime_seq(c, me.eps, m), 256))
