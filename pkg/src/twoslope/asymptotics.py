"""Scaling of the minimal energy as the steep intervals shrink (Lambda delta = 1).

For s = 1/2 the energy grows like log(1/delta); for 1/2 < s < 1 like
delta^(1-2s) / (2s (1-s) (2s-1) (3-2s)); for s < 1/2 it converges to the energy
of the unit sawtooth.  The s = 0 and s = 1 functionals tend to 1/24 and, after
multiplying by delta, to 1/2.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from .energy import EnergyResult, energy, energy_s0, energy_s1
from .kernel import BRANCH_WINDOW
from .profile import ProblemParams, build_canonical, mantissa_profile

__all__ = [
    "DEFAULT_DELTAS",
    "SweepRow",
    "ExtremalReport",
    "sigma",
    "ratio_sweep",
    "mantissa_constant",
    "mantissa_result",
    "extremal_limits",
    "leading_constants",
    "constant_sum",
    "i8_lower_bound",
    "i8_upper_bound",
]

DEFAULT_DELTAS = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class SweepRow:
    delta: float
    sigma: float
    energy: float
    ratio: float
    tail_bound: float

    def to_dict(self) -> dict:
        return asdict(self)


def sigma(s: float, delta: float) -> float:
    """Growth rate of the minimal energy for s >= 1/2."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if s == 0.5:
        return math.log(1.0 / delta)
    if s < 0.5:
        raise ValueError("no growth rate for s < 1/2: the energy converges")
    if not s < 1.0:
        raise ValueError("s must be below 1")
    if 2.0 * s - 1.0 < BRANCH_WINDOW:
        raise ValueError("sigma has a pole at s = 1/2; use s = 0.5 exactly")
    return delta ** (1.0 - 2.0 * s) / (2.0 * s * (1.0 - s) * (2.0 * s - 1.0) * (3.0 - 2.0 * s))


def ratio_sweep(s: float, deltas=DEFAULT_DELTAS, tol: float = 1e-10, threads: int = 1) -> list[SweepRow]:
    """Energy of the canonical profile with Lambda = 1/delta against sigma, by decreasing delta."""
    ds = sorted((float(d) for d in deltas), reverse=True)

    def row(d):
        res = energy(build_canonical(ProblemParams.normalized(s, d)), s, tol)
        sg = sigma(s, d)
        return SweepRow(d, sg, res.value, res.value / sg, res.tail_bound)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(row, ds))


def mantissa_result(s: float, tol: float = 1e-10) -> EnergyResult:
    if not 0.0 < s < 0.5:
        raise ValueError("the sawtooth energy is finite only for s < 1/2")
    return energy(mantissa_profile(), s, tol, allow_jump=True)


def mantissa_constant(s: float, tol: float = 1e-10) -> float:
    """(1/2) int_0^1 int_R |w(x) - w(y)|^2 |x - y|^(-1-2s) dy dx for w(x) = x - floor(x)."""
    return mantissa_result(s, tol).value


@dataclass(frozen=True)
class ExtremalReport:
    limit_s0: float
    limit_s1: float
    rows: tuple  # (delta, energy_s0 at offset -1/2, delta * energy_s1)

    def to_dict(self) -> dict:
        return {
            "limit_s0": self.limit_s0,
            "limit_s1": self.limit_s1,
            "rows": [dict(delta=d, energy_s0=a, delta_energy_s1=b) for d, a, b in self.rows],
        }


def extremal_limits(deltas=(1e-1, 1e-2, 1e-3)) -> ExtremalReport:
    """The limits 1/24 and 1/2 with finite-delta values of the canonical profile."""
    rows = []
    for d in deltas:
        pr = ProblemParams.normalized(0.0, d)
        prof = build_canonical(pr)
        rows.append((d, energy_s0(prof, -pr.Lambda * d / 2.0), d * energy_s1(prof)))
    return ExtremalReport(1.0 / 24.0, 0.5, tuple(rows))


def leading_constants(s: float) -> tuple[float, float, float]:
    """Limits of I1, I2 and I8 divided by delta^(1-2s), for 1/2 < s < 1."""
    return (
        1.0 / (2.0 * (1.0 - s) * (3.0 - 2.0 * s)),
        1.0 / (4.0 * s * (3.0 - 2.0 * s)),
        1.0 / (4.0 * s * (2.0 * s - 1.0)),
    )


def constant_sum(s: float) -> float:
    """I1 + 4 I2 + 2 I8 limits; equals 1 / (2s (1-s) (2s-1) (3-2s))."""
    c1, c2, c8 = leading_constants(s)
    return c1 + 4.0 * c2 + 2.0 * c8


def i8_lower_bound(s: float, delta: float, rho: float = 0.25) -> float:
    """Lower bound for I8 from the sub-blocks of width rho next to the gap."""
    if not 0.0 < rho < 0.5:
        raise ValueError("rho must lie in (0, 1/2)")
    w = (1.0 - 2.0 * rho) ** 2
    if s == 0.5:
        return 0.5 * w * (math.log(1.0 / delta) + math.log((delta + rho) ** 2 / (delta + 2.0 * rho)))
    e = 1.0 - 2.0 * s
    return w * (delta**e + (delta + 2.0 * rho) ** e - 2.0 * (delta + rho) ** e) / (4.0 * s * (2.0 * s - 1.0))


def i8_upper_bound(s: float, delta: float) -> float:
    """Upper bound for I8 from the unit numerator bound over the full blocks."""
    if s == 0.5:
        return 0.5 * (math.log(1.0 / delta) + math.log((delta + 1.0) ** 2 / (delta + 2.0)))
    e = 1.0 - 2.0 * s
    return (delta**e + (delta + 2.0) ** e - 2.0 * (delta + 1.0) ** e) / (4.0 * s * (2.0 * s - 1.0))
