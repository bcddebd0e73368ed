import numpy as np
import pytest
from hypothesis import given, strategies as st

from twoslope.laplacian import KinkError, frac_laplacian_avg, frac_laplacian_point
from twoslope.oracle import oracle_point_laplacian
from twoslope.profile import ProblemParams, build_canonical, from_gaps

TWO = from_gaps((0.3, 1.7), ProblemParams(0.5, 1.0, 1.0, 2))

# (s, x) -> value from the symmetrised-integrand oracle
POINT_VALUES = {
    (0.3, 0.1): -1.71256825607788,
    (0.3, 1.05): -6.709823261340624,
    (0.3, 2.5): 3.6585690587912767,
    (0.7, 0.1): -4.153395720681704,
    (0.7, 1.05): -5.214981990086222,
    (0.7, 2.5): 2.347438494817486,
}


@pytest.mark.parametrize("s,x", sorted(POINT_VALUES))
def test_point_values_frozen(s, x):
    assert frac_laplacian_point(TWO, x, s) == pytest.approx(POINT_VALUES[s, x], rel=1e-11)


def test_point_value_canonical_half():
    prof = build_canonical(ProblemParams(0.5, 1.0, 0.5))
    assert frac_laplacian_point(prof, 0.1, 0.5) == pytest.approx(-4.49670886279172, rel=1e-12)
    ref = oracle_point_laplacian(prof.periodic, 0.1, 0.5)
    assert frac_laplacian_point(prof, 0.1, 0.5) == pytest.approx(ref, rel=1e-10)


def test_kink_rejected():
    with pytest.raises(KinkError):
        frac_laplacian_point(TWO, 0.0, 0.5)
    with pytest.raises(KinkError):
        frac_laplacian_point(TWO, TWO.T - 1.0, 0.5)


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("delta", [0.5, 0.1, 0.01])
def test_canonical_zero_average_and_midpoints(s, delta):
    prof = build_canonical(ProblemParams.normalized(s, delta))
    assert abs(frac_laplacian_avg(prof, (-delta, 0.0), s)) <= 1e-12
    assert abs(frac_laplacian_avg(prof, (0.0, 1.0), s)) <= 1e-12
    # the sawtooth is odd about the middle of each interval
    assert abs(frac_laplacian_point(prof, -delta / 2, s)) <= 1e-9
    assert abs(frac_laplacian_point(prof, 0.5, s)) <= 1e-9


@pytest.mark.parametrize("s", [0.3, 0.5, 0.7])
def test_average_is_integral_of_point_values(s):
    from scipy.integrate import quad

    a, b = 0.05, 0.25  # strictly inside the first gentle run
    ref, _ = quad(lambda x: frac_laplacian_point(TWO, x, s), a, b, epsabs=1e-11, limit=100)
    assert frac_laplacian_avg(TWO, (a, b), s) == pytest.approx(ref, rel=1e-8)


@given(st.floats(0.0, 3.0), st.sampled_from([0.3, 0.5, 0.7]))
def test_period_integral_vanishes(start, s):
    # over a full period the operator integrates to zero
    assert abs(frac_laplacian_avg(TWO, (start, start + TWO.T), s)) <= 1e-10


@given(st.floats(0.0, 3.0), st.floats(0.05, 1.0), st.floats(0.0, 1.0), st.sampled_from([0.3, 0.5, 0.7]))
def test_average_is_additive(a, w, frac, s):
    m = a + frac * w
    if m - a < 1e-6 or a + w - m < 1e-6:
        return
    whole = frac_laplacian_avg(TWO, (a, a + w), s)
    parts = frac_laplacian_avg(TWO, (a, m), s) + frac_laplacian_avg(TWO, (m, a + w), s)
    assert parts == pytest.approx(whole, rel=1e-9, abs=1e-10)


def test_bad_intervals():
    with pytest.raises(ValueError):
        frac_laplacian_avg(TWO, (1.0, 1.0), 0.5)
    with pytest.raises(ValueError):
        frac_laplacian_avg(TWO, (0.0, 2 * TWO.T), 0.5)
