import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from twoslope.kernel import (
    BRANCH_WINDOW,
    KernelExponent,
    Segment,
    SegmentError,
    _power_integral,
    as_exponent,
    moments,
    segment_pair_energy,
    segment_pair_linear,
    self_segment_energy,
)

# reference values from the quadrature oracle at tolerance 1e-12
ORACLE_VALUES = {
    (0.3, 0): 0.7013138698826861,
    (0.3, 1): 0.19603296655532382,
    (0.3, 2): 0.041690922869801826,
    (0.5, 0): 0.7616753749604925,
    (0.5, 1): 0.14908798892916592,
    (0.5, 2): 0.4942509198492057,
    (0.7, 0): 0.8665359695247291,
    (0.7, 1): 0.1137077058978927,
    (0.7, 2): 7.0439106739937944,
}
PAIRS = [
    (Segment(0, 1, 0, 1), Segment(1, 2, 1, -2)),
    (Segment(0, 0.5, 0.3, 1), Segment(2, 3, -1, 1)),
    (Segment(-1e-3, 0, 1, -1000), Segment(0, 1, 0, 1)),
]


@pytest.mark.parametrize("s,idx", sorted(ORACLE_VALUES))
def test_pair_energy_matches_frozen_oracle(s, idx):
    a, b = PAIRS[idx]
    assert segment_pair_energy(a, b, s) == pytest.approx(ORACLE_VALUES[s, idx], rel=1e-12)


@pytest.mark.parametrize("s,expected", [(0.3, 2.380952380952381), (0.5, 4.0), (0.7, 8.333333333333334)])
def test_self_energy(s, expected):
    assert self_segment_energy(1.0, 2.0, s) == pytest.approx(expected, rel=1e-14)
    seg = Segment(0, 1, 5, 2)
    assert segment_pair_energy(seg, seg, s) == pytest.approx(expected, rel=1e-14)


def test_jump_pair_below_half():
    a, b = Segment(0, 1, 0, 1), Segment(1, 2, 0, 1)
    assert segment_pair_energy(a, b, 0.3, allow_jump=True) == pytest.approx(1.5287889981314284, rel=1e-12)
    with pytest.raises(SegmentError):
        segment_pair_energy(a, b, 0.3)
    with pytest.raises(SegmentError):
        segment_pair_energy(a, b, 0.5, allow_jump=True)


def test_linear_pair_is_log2_over_2():
    a, b = Segment(0, 1, 0, 1), Segment(1.5, 2, 0, -1)
    assert segment_pair_linear(a, b, 0.5) == pytest.approx(math.log(2) / 2, rel=1e-13)
    assert segment_pair_linear(b, a, 0.5) == pytest.approx(-math.log(2) / 2, rel=1e-13)


def test_overlap_rejected():
    with pytest.raises(SegmentError):
        segment_pair_energy(Segment(0, 1, 0, 1), Segment(0.5, 2, 0, 1), 0.5)


@pytest.mark.parametrize("bad", [-0.1, 1.0, 1.5, math.nan])
def test_exponent_range(bad):
    with pytest.raises(ValueError):
        KernelExponent(bad)


def test_degenerate_segment():
    with pytest.raises(ValueError):
        Segment(1, 1, 0, 1)


def test_power_integral_at_zero_exponent_is_log():
    assert float(_power_integral(2.0, 3.0, 0.0)) == pytest.approx(math.log(2.5), rel=1e-15)


def test_moments_match_quadrature():
    from scipy.integrate import quad

    r1, h, p = 0.3, 1.7, 1.6
    M = moments(np.array([r1]), np.array([h]), p, 3)[0]
    for m in range(4):
        ref, _ = quad(lambda t: t**m * (r1 + t) ** (-p), 0, h, epsabs=0, epsrel=1e-13, limit=200)
        assert M[m] == pytest.approx(ref, rel=1e-12)


segments = st.builds(
    lambda lo, ln, v, sl: Segment(lo, lo + ln, v, sl),
    st.floats(-3, 3),
    st.floats(1e-3, 3),
    st.floats(-2, 2),
    st.floats(-5, 5),
)


@given(a=segments, gap=st.floats(1e-4, 5), lb=st.floats(1e-3, 3), vb=st.floats(-2, 2),
       sb=st.floats(-5, 5), s=st.sampled_from([0.2, 0.5, 0.8]))
def test_swap_symmetry(a, gap, lb, vb, sb, s):
    b = Segment(a.hi + gap, a.hi + gap + lb, vb, sb)
    e1 = segment_pair_energy(a, b, s)
    assert e1 >= 0
    assert segment_pair_energy(b, a, s) == pytest.approx(e1, rel=1e-12, abs=1e-300)
    assert segment_pair_linear(b, a, s) == pytest.approx(-segment_pair_linear(a, b, s), rel=1e-12, abs=1e-14)


@given(a=segments, gap=st.floats(1e-4, 5), lb=st.floats(1e-3, 3), dx=st.floats(-10, 10),
       dv=st.floats(-10, 10), s=st.sampled_from([0.3, 0.5, 0.7]))
def test_translation_and_offset_invariance(a, gap, lb, dx, dv, s):
    b = Segment(a.hi + gap, a.hi + gap + lb, 0.4, -1.0)
    e = segment_pair_energy(a, b, s)
    moved = segment_pair_energy(a.shifted(dx, dv), b.shifted(dx, dv), s)
    assert moved == pytest.approx(e, rel=1e-9, abs=1e-12)


@given(gap=st.one_of(st.just(0.0), st.floats(1e-4, 1)), la=st.floats(1e-2, 2), lb=st.floats(1e-2, 2), side=st.sampled_from([-1, 1]))
def test_continuous_across_half(gap, la, lb, side):
    a = Segment(-la, 0.0, 0.5, 1.0)
    b = Segment(gap, gap + lb, a.value_at_hi if gap == 0 else -0.3, -2.0)
    at_half = segment_pair_energy(a, b, 0.5)
    near = segment_pair_energy(a, b, 0.5 + side * 1e-7)
    assert near == pytest.approx(at_half, rel=1e-5)


def test_branch_window_constant():
    assert BRANCH_WINDOW == 1e-6
    assert as_exponent(0.5 + 1e-7).near_half


def test_constant_blocks_with_unit_gap_in_value():
    rho, delta = 0.25, 0.01
    a = Segment(1 - rho, 1.0, 0.0, 0.0)
    b = Segment(1 + delta, 1 + delta + rho, 1.0, 0.0)
    expected = math.log(1 / delta) + math.log((delta + rho) ** 2 / (delta + 2 * rho))
    assert expected == pytest.approx(2.5843674433186377, rel=1e-15)
    assert segment_pair_energy(a, b, 0.5) == pytest.approx(expected, rel=1e-13)


def test_equal_constants_give_zero():
    assert segment_pair_energy(Segment(0, 1, 2.0, 0.0), Segment(3, 4, 2.0, 0.0), 0.4) == 0.0
