import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from twoslope.misfit import (
    MisfitInputs,
    alpha_min,
    misfit_solve,
    plastic_slopes,
    prefactor,
    trace_energy_constant,
)


def test_trace_constant():
    assert trace_energy_constant(2 * math.pi, 0.0) == pytest.approx(1.0)
    assert trace_energy_constant(26, 0.3) == pytest.approx(5.9115, abs=5e-5)
    assert trace_energy_constant(52, 0.3) == pytest.approx(2 * trace_energy_constant(26, 0.3))
    with pytest.raises(ValueError):
        trace_energy_constant(-1, 0.3)
    with pytest.raises(ValueError):
        trace_energy_constant(1, 1.0)


def test_alpha_examples():
    assert alpha_min(MisfitInputs(30, 10, 0.3, 0.25, 1.0, 1.01)) == pytest.approx(7 / 29.5, rel=1e-15)
    assert alpha_min(MisfitInputs(5, 5, 0.2, 0.2, 1.0, 1.01)) == 0.5
    assert alpha_min(MisfitInputs(1, 1e12, 0.3, 0.3, 1.0, 1.01)) == pytest.approx(1.0, abs=1e-11)


def test_symmetric_prefactor():
    inp = MisfitInputs.symmetric(3.0, 0.25, 1.0, 0.01)
    assert prefactor(inp) == pytest.approx(3.0 / (4 * math.pi * 0.75), rel=1e-15)


moduli = st.floats(0.1, 100)
poisson = st.floats(-0.45, 0.49)


@given(moduli, moduli, poisson, poisson)
def test_alpha_is_grid_minimiser(gp, gm, nup, num):
    inp = MisfitInputs(gp, gm, nup, num, 1.0, 1.01)
    a = alpha_min(inp)
    assert 0 < a < 1
    Ap, Am = trace_energy_constant(gp, nup), trace_energy_constant(gm, num)
    grid = np.linspace(0, 1, 2001)
    f = grid**2 * Ap + (1 - grid) ** 2 * Am
    assert a**2 * Ap + (1 - a) ** 2 * Am <= f.min() * (1 + 1e-12)
    # the weighted constant at the optimum is the prefactor
    assert a**2 * Ap + (1 - a) ** 2 * Am == pytest.approx(prefactor(inp), rel=1e-12)


@given(moduli, moduli, poisson, poisson, st.floats(1.01, 10))
def test_alpha_monotone(gp, gm, nup, num, factor):
    a = alpha_min(MisfitInputs(gp, gm, nup, num, 1.0, 1.01))
    assert alpha_min(MisfitInputs(gp, gm * factor, nup, num, 1.0, 1.01)) >= a
    assert alpha_min(MisfitInputs(gp * factor, gm, nup, num, 1.0, 1.01)) <= a


@given(st.floats(0.01, 0.99))
def test_burgers_vectors_add_up(alpha):
    inp = MisfitInputs.symmetric(1.0, 0.3, 2.0, 0.01)
    (mp, mm), _ = plastic_slopes(inp, alpha)
    assert mp - mm == pytest.approx(-1 / (1 + alpha), rel=1e-14)
    eps = inp.c * (alpha + 1)
    assert -mp * eps + mm * eps == pytest.approx(inp.c, rel=1e-14)


def test_nonlinear_slopes_close_to_linear():
    inp = MisfitInputs.symmetric(1.0, 0.3, 1.0, 1e-3)
    (lp, lm), (npl, nm) = plastic_slopes(inp, 0.5)
    assert (1 - 0.5) * npl == pytest.approx(-0.5 * nm, rel=1e-14)
    assert npl == pytest.approx(lp, abs=1e-3) and nm == pytest.approx(lm, abs=1e-3)


def test_coherent_interface():
    rep = misfit_solve(MisfitInputs(1, 1, 0.3, 0.3, 1.0, 1.0))
    assert rep.coherent and rep.leading_density == 0 and rep.finite_delta_density == 0
    assert math.isinf(rep.Delta)


def test_report_fields():
    rep = misfit_solve(MisfitInputs.symmetric(1.0, 0.3, 1.0, 1e-2))
    assert rep.alpha_min == 0.5
    assert rep.epsilon_core == pytest.approx(1.5)
    assert rep.Delta == pytest.approx(100 + 1.5)
    assert rep.delta == pytest.approx(1.5e-2)
    ratio = rep.finite_delta_density / (rep.prefactor * rep.c * rep.m * math.log(1 / rep.m))
    assert 0.75 <= ratio <= 1.25
    assert rep.finite_delta_tail_bound <= 1e-9


def test_ratio_at_small_misfit_frozen():
    # the finite-delta density sits about 11% under the leading asymptote at m = 1e-3
    rep = misfit_solve(MisfitInputs.symmetric(1.0, 0.3, 1.0, 1e-3))
    ratio = rep.finite_delta_density / (rep.prefactor * rep.c * rep.m * math.log(1 / rep.m))
    assert ratio == pytest.approx(0.8939461829625989, rel=1e-9)


@given(st.floats(0.1, 10))
def test_dimensional_scaling(lam):
    base = misfit_solve(MisfitInputs(3.0, 2.0, 0.3, 0.2, 1.0, 1.02))
    stiff = misfit_solve(MisfitInputs(3.0 * lam, 2.0 * lam, 0.3, 0.2, 1.0, 1.02))
    long = misfit_solve(MisfitInputs(3.0, 2.0, 0.3, 0.2, lam, 1.02 * lam))
    assert stiff.leading_density == pytest.approx(lam * base.leading_density, rel=1e-12)
    assert long.leading_density == pytest.approx(lam * base.leading_density, rel=1e-12)
    assert long.finite_delta_density == pytest.approx(lam * base.finite_delta_density, rel=1e-9)


def test_large_misfit_warns():
    with pytest.warns(UserWarning):
        misfit_solve(MisfitInputs.symmetric(1.0, 0.3, 1.0, 0.3))


def test_input_validation():
    with pytest.raises(ValueError):
        MisfitInputs(1, 1, 0.3, 0.3, 1.1, 1.0)
    with pytest.raises(ValueError):
        MisfitInputs(1, 0, 0.3, 0.3, 1.0, 1.1)
