import numpy as np
import pytest
from hypothesis import given, strategies as st

from twoslope.profile import (
    AdmissibilityError,
    GapConfiguration,
    PeriodicPiecewise,
    ProblemParams,
    TwoSlopeProfile,
    admissibility_errors,
    build_canonical,
    evaluate,
    from_gaps,
    gaps_of,
    mantissa_profile,
    segments_in_window,
)


def test_params_derive_period():
    pr = ProblemParams(0.5, 2.0, 0.25, 3)
    assert pr.T == pytest.approx(3 * 3 * 0.25)
    assert pr.gap_total == pytest.approx(1.5)
    with pytest.raises(ValueError):
        ProblemParams(0.5, 2.0, 0.25, 3, T=1.0)


@pytest.mark.parametrize("kw", [dict(s=1.2), dict(Lambda=0.0), dict(delta=-1.0), dict(L=0)])
def test_params_validation(kw):
    base = dict(s=0.5, Lambda=1.0, delta=0.5, L=1)
    base.update(kw)
    with pytest.raises(ValueError):
        ProblemParams(**base)


def test_canonical_values():
    prof = build_canonical(ProblemParams(0.5, 2.0, 0.5))
    # falls by Lambda delta = 1 on (-1/2, 0), rises with slope 1 on (0, 1)
    assert evaluate(prof, 0.0) == 0.0
    assert evaluate(prof, -0.5) == pytest.approx(1.0)
    assert evaluate(prof, 0.75) == pytest.approx(0.75)
    assert evaluate(prof, 1.25) == pytest.approx(0.5)
    assert admissibility_errors(prof.periodic, prof.params) == []


def test_canonical_mean_and_oscillation():
    # every segment runs between the values 0 and 1, so the mean is 1/2
    prof = build_canonical(ProblemParams.normalized(0.5, 0.1))
    assert prof.periodic.mean() == pytest.approx(0.5, rel=1e-14)
    assert prof.periodic.oscillation() == pytest.approx(1.0)


def test_overlap_and_count_rejected():
    pr = ProblemParams(0.5, 1.0, 0.5, 2)
    with pytest.raises(AdmissibilityError):
        TwoSlopeProfile(pr, (0.0, 0.2))
    with pytest.raises(AdmissibilityError):
        TwoSlopeProfile(pr, (0.0,))
    with pytest.raises(AdmissibilityError):
        from_gaps((0.2, 0.2), pr)


def test_touching_steep_intervals_merge():
    pr = ProblemParams(0.5, 1.0, 0.5, 2)
    prof = from_gaps((0.0, 1.0), pr)
    pw = prof.periodic
    assert len(pw) == 3
    assert admissibility_errors(pw, pr) == []


def test_admissibility_detects_bad_slopes_and_jumps():
    pr = ProblemParams(0.5, 1.0, 0.5)
    bad = PeriodicPiecewise([-0.5, 0.0], [0.0, 0.5], [0.5, 0.0], [-1.0, 2.0], 1.0)
    assert any("slopes" in e for e in admissibility_errors(bad, pr))
    assert admissibility_errors(mantissa_profile(), ProblemParams(0.3, 1.0, 0.5, 1, T=1.0))


def test_window_preserves_values():
    prof = from_gaps((0.3, 1.7), ProblemParams(0.5, 1.0, 1.0, 2))
    pw = prof.periodic
    w = pw.window(0.77)
    xs = np.linspace(-5, 5, 101)
    assert np.allclose(w.value(xs), pw.value(xs), atol=1e-13)
    assert len(segments_in_window(prof, -1, 1)) == 3 * len(pw)


gap_configs = st.lists(st.floats(0.0, 1.0), min_size=2, max_size=4).filter(lambda g: sum(g) > 0.1)


@given(gap_configs, st.floats(0.05, 0.5))
def test_gaps_round_trip(raw, delta):
    L = len(raw)
    lam = 1.0 / delta
    pr = ProblemParams(0.5, lam, delta, L)
    gaps = np.array(raw) / sum(raw) * pr.gap_total
    prof = from_gaps(GapConfiguration(tuple(gaps)), pr)
    assert np.allclose(gaps_of(prof).gaps, gaps, atol=1e-12 * pr.T)
    assert admissibility_errors(prof.periodic, pr) == []


@given(gap_configs, st.floats(-3, 3), st.floats(-2, 2))
def test_shift_translates_function(raw, t, x):
    pr = ProblemParams(0.5, 1.0, 0.5, len(raw))
    gaps = np.array(raw) / sum(raw) * pr.gap_total
    prof = from_gaps(tuple(gaps), pr)
    moved = prof.shifted(t)
    assert evaluate(moved, x + t) == pytest.approx(evaluate(prof, x), abs=1e-9)


@given(st.floats(-50, 50))
def test_periodicity(x):
    prof = from_gaps((0.3, 1.7), ProblemParams(0.5, 1.0, 1.0, 2))
    assert evaluate(prof, x + prof.T) == pytest.approx(evaluate(prof, x), abs=1e-10)


def test_gap_rotation():
    g = GapConfiguration((1.0, 2.0, 3.0))
    assert g.rotated(1).gaps == (2.0, 3.0, 1.0)
    with pytest.raises(AdmissibilityError):
        GapConfiguration((1.0, -0.1))


@pytest.mark.parametrize("start", [1e-22, -1e-22, 3.0 - 1e-17, 1.3 + 1e-16])
def test_window_at_rounding_distance_from_breakpoint(start):
    prof = from_gaps((0.3, 1.7), ProblemParams(0.5, 1.0, 1.0, 2))
    w = prof.periodic.window(start)
    assert np.all(w.length > 1e-12)
    xs = np.linspace(0.01, 2.99, 37)
    assert np.allclose(w.value(xs), prof.periodic.value(xs), atol=1e-12)
