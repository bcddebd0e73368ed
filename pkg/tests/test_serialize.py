import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from twoslope.energy import EnergyResult
from twoslope.profile import GapConfiguration, ProblemParams, TwoSlopeProfile
from twoslope.serialize import (
    dumps,
    format_float,
    gaps_from_dict,
    gaps_to_dict,
    params_from_dict,
    params_to_dict,
    profile_from_dict,
    profile_to_dict,
    to_csv,
)

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(finite)
def test_float_round_trip(x):
    assert float(format_float(x)) == x


def test_seventeen_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(1.0) == "1"


def test_json_is_valid_and_stable():
    res = EnergyResult(0.42627839881750568, 4.8e-17, 2, "closed_form")
    text = dumps(res)
    assert json.loads(text) == {"value": 0.4262783988175057, "tail_bound": 4.8e-17,
                                "periods_summed": 2, "method": "closed_form"}
    assert dumps(res) == text


def test_json_non_finite_and_numpy():
    d = json.loads(dumps({"a": math.inf, "b": np.float64(2.5), "c": np.arange(3), "d": (True, None)}))
    assert d == {"a": None, "b": 2.5, "c": [0, 1, 2], "d": [True, None]}
    with pytest.raises(TypeError):
        dumps({"x": object()})


def test_csv():
    text = to_csv(("delta", "ratio"), [(0.1, 0.5), (0.01, 1 / 3)])
    assert text == "delta,ratio\n0.10000000000000001,0.5\n0.01,0.33333333333333331\n"


@given(st.floats(0, 1), st.floats(0.01, 10), st.floats(0.01, 10), st.integers(1, 5))
def test_params_round_trip(s, lam, delta, L):
    pr = ProblemParams(s, lam, delta, L)
    assert params_from_dict(json.loads(dumps(params_to_dict(pr)))) == pr


@given(st.lists(st.floats(0, 100), min_size=1, max_size=6))
def test_gaps_round_trip(g):
    cfg = GapConfiguration(tuple(g))
    assert gaps_from_dict(json.loads(dumps(gaps_to_dict(cfg)))) == cfg


@given(st.floats(0.0, 0.49), finite.filter(lambda v: abs(v) < 1e6))
def test_profile_round_trip(x0, anchor):
    prof = TwoSlopeProfile(ProblemParams(0.5, 1.0, 0.25, 2), (x0, x0 + 0.5), anchor)
    back = profile_from_dict(json.loads(dumps(profile_to_dict(prof))))
    assert back == prof
