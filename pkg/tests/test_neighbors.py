from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import TEN_POLYS, enumeration_survivors, poly_id
from selfaffine.algebra import LatticePoint, QuadraticPoly
from selfaffine.neighbors import (
    DigitSystem,
    StateLimitExceeded,
    build_automaton,
    is_member,
    iterate,
    step,
)
from selfaffine.radix import parse_expansion, verify

small = st.integers(-9, 9)


@given(small, small)
def test_two_steps_from_three(b1, b2):
    poly = QuadraticPoly(1, 3)
    assert iterate(LatticePoint(3, 0), [b1, b2], poly) == LatticePoint(-(9 + b2), -(3 + b1))


def test_zero_is_fixed():
    assert step(LatticePoint(0, 0), 0, QuadraticPoly(2, 3)) == LatticePoint(0, 0)


@given(st.integers(1, 12), small, small)
def test_two_steps_from_m(m, b1, b2):
    poly = QuadraticPoly(2, 3)
    assert iterate(LatticePoint(m, 0), [b1, b2], poly) == LatticePoint(-(3 * m + b2), -(2 * m + b1))


@given(st.integers(2, 12), small, small, small)
def test_three_steps_real_roots(m, b1, b2, b3):
    got = iterate(LatticePoint(m - 1, 0), [b1, b2, b3], QuadraticPoly(1, -3))
    assert got == LatticePoint(-(3 * m - 3 + 3 * b1 + b3), 4 * m - 4 + b1 - b2)


@given(st.fractions(1, 10, max_denominator=20), st.lists(small, min_size=5, max_size=5))
def test_five_steps_real_roots(x, bs):
    b1, b2, b3, b4, b5 = bs
    got = iterate(LatticePoint(x, 0), bs, QuadraticPoly(1, -3))
    assert got.delta == 19 * x + 7 * b1 - 4 * b2 + b3 - b4
    assert got.gamma == -21 * x - 12 * b1 + 3 * b2 - 3 * b3 - b5


@given(st.fractions(-5, 5, max_denominator=7), st.fractions(-5, 5, max_denominator=7))
def test_empty_prefix(g, d):
    l = LatticePoint(g, d)
    assert iterate(l, [], QuadraticPoly(3, 3)) == l


def test_membership_examples():
    probe = DigitSystem(QuadraticPoly(-1, -3), (0, 1, 3))
    m = is_member((2, 0), probe)
    assert m.member
    assert m.witness == parse_expansion("0.(3)[3,0]")

    zero = is_member((0, 0), DigitSystem(QuadraticPoly(1, 3), (0, 1, 3)))
    assert zero.member and zero.witness == parse_expansion("0.[0]")

    assert not is_member((2, 0), DigitSystem(QuadraticPoly(1, 3), (0, 1, 3)))
    assert not is_member((3, 0), DigitSystem(QuadraticPoly(1, 3), (0, 1, 4)))


def test_single_digit_system():
    auto = build_automaton(DigitSystem(QuadraticPoly(1, 3), (0,)), targets=[(0, 0)])
    assert auto.alive == {(0, 0)}


def test_off_lattice_target_rejected():
    system = DigitSystem(QuadraticPoly(-1, -3), (0, 1, F(8, 5)))
    m = is_member((F(1, 3), 0), system)
    assert not m and m.reason == "off-lattice"


def test_out_of_box_rejected():
    m = is_member((9, 0), DigitSystem(QuadraticPoly(1, 3), (0, 1, 3)))
    assert not m and m.reason == "outside neighbor box"


def test_state_limit():
    system = DigitSystem(QuadraticPoly(4, -6), (0, 1, 3, 5, 7, 9))
    with pytest.raises(StateLimitExceeded):
        build_automaton(system, targets=[(2, 0)], state_limit=50)


@pytest.mark.parametrize("poly", TEN_POLYS, ids=poly_id)
@pytest.mark.parametrize("digits", [(0, 1, 2), (0, 1, 3), (0, 1, F(8, 5)), (0, 1, 4)])
def test_alive_set_invariants(poly, digits):
    system = DigitSystem(poly, digits)
    targets = [(g, d) for g in range(-4, 5) for d in range(-4, 5)]
    auto = build_automaton(system, targets=targets)
    assert auto.is_closed()
    M = system.max_difference
    for s in auto.alive:
        l = auto.unscale(s)
        assert abs(l.gamma) <= M * auto.bounds.alpha_bound
        assert abs(l.delta) <= M * auto.bounds.beta_bound
    # every alive state really has an alive successor under the step map
    for s in auto.alive:
        l = auto.unscale(s)
        assert any(auto.scale(step(l, b, poly)) in auto.alive for b in system.differences)


@pytest.mark.parametrize("poly", TEN_POLYS, ids=poly_id)
def test_witnesses_round_trip(poly):
    system = DigitSystem(poly, (0, 1, 3))
    auto = build_automaton(system)
    for g in range(-3, 4):
        for d in range(-3, 4):
            m = auto.query(LatticePoint(g, d))
            if m:
                assert verify(m.witness, m.target, poly, system.differences)


@pytest.mark.parametrize("digits", [(0, 1, 2), (0, 1, 3), (0, 1, F(5, 2))])
@pytest.mark.parametrize("poly", [p for p in TEN_POLYS if p.p > 0], ids=poly_id)
def test_sign_symmetry_of_membership(poly, digits):
    """T(A) - T(A) and T(-A) - T(-A) agree after flipping the Av coordinate."""
    sys_p = DigitSystem(poly, digits)
    sys_m = sys_p.with_poly(QuadraticPoly(-poly.p, poly.q))
    a_p, a_m = build_automaton(sys_p), build_automaton(sys_m)
    t = sys_p.denominator
    for g in range(-3 * t, 3 * t + 1):
        for d in (-1, 0, 1, F(1, t)):
            l = LatticePoint(F(g, t), d)
            assert bool(a_p.query(l)) == bool(a_m.query(LatticePoint(l.gamma, -l.delta)))


@pytest.mark.parametrize("poly", TEN_POLYS, ids=poly_id)
def test_edges_against_enumeration_oracle(poly):
    system = DigitSystem(poly, (0, 1, 2))
    for target in [(1, 0), (2, 0), (-1, 0), (0, 1), (1, 1)]:
        counts = enumeration_survivors(poly, system.differences, target, 12)
        oracle = len(counts) == 12 and counts[-1] > 0
        assert bool(is_member(target, system)) == oracle, (target, counts)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(TEN_POLYS),
    st.fractions(F(7, 6), 5, max_denominator=6),
    st.sampled_from([(1, 0), (F(1, 2), 0), (0, 0)]),
)
def test_member_implies_witness(poly, b, target):
    system = DigitSystem(poly, (0, 1, b))
    m = is_member(target, system)
    if m:
        assert verify(m.witness, LatticePoint(*target), poly, system.differences)


def test_translated_digits():
    s = DigitSystem.translated(QuadraticPoly(1, 3), (2, 3, 5))
    assert s.digits == (0, 1, 3)
    with pytest.raises(ValueError):
        DigitSystem(QuadraticPoly(1, 3), (1, 2))
