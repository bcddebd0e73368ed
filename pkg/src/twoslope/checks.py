"""Reproducible end-to-end checks of the library against known results.

Each ``check_*`` function runs one experiment and returns a :class:`Check`
holding a pass flag and the numbers it was decided on.  The numbers depend
only on the arguments (seed included), never on the thread count, so two runs
can be compared byte for byte through :func:`twoslope.serialize.dumps`.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import constant_sum, i8_lower_bound, i8_upper_bound, leading_constants, ratio_sweep
from .energy import energy, energy_breakdown, energy_s0, energy_s1
from .kernel import Segment, segment_pair_energy
from .laplacian import frac_laplacian_avg
from .misfit import MisfitInputs, misfit_solve
from .optimize import (
    DescentOptions,
    brute_force,
    endpoint_antisymmetry,
    first_variation,
    make_rng,
    minimize_gaps,
    verify_s0_minimizer,
)
from .oracle import oracle_pair
from .profile import GapConfiguration, ProblemParams, build_canonical, from_gaps

__all__ = [
    "Check",
    "random_segment_pair",
    "check_oracle_equivalence",
    "check_zero_average",
    "check_first_variation",
    "check_periodicity",
    "check_ratios",
    "check_breakdown",
    "check_constant_sum",
    "check_extremal",
    "check_s0_minimizer",
    "check_misfit",
    "ALL_CHECKS",
    "run_all",
]

ORACLE_S = (0.3, 0.5, 0.5 - 1e-7, 0.5 + 1e-7, 0.7)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}"


def random_segment_pair(rng: np.random.Generator) -> tuple[Segment, Segment]:
    """Two pieces of a two-slope profile: slopes 1 or -Lambda, steep pieces of length delta.

    The second piece touches the first (continuously), sits a tiny, moderate or
    large distance to its right, or coincides with it.
    """
    lam = 10.0 ** rng.uniform(-1.0, 2.0)
    delta = 10.0 ** rng.uniform(-4.0, 0.0)

    def piece(lo, v):
        if rng.random() < 0.5:
            return Segment(lo, lo + delta, v, -lam)
        return Segment(lo, lo + 10.0 ** rng.uniform(-4.0, 0.5), v, 1.0)

    a = piece(0.0, float(rng.normal()))
    regime = int(rng.integers(5))
    if regime == 4:
        return a, a
    gap = (0.0, 10.0 ** rng.uniform(-7, -2), 10.0 ** rng.uniform(-2, 0), 10.0 ** rng.uniform(0, 1.5))[regime]
    v = a.value_at_hi if regime == 0 else float(rng.normal())
    b = piece(a.hi + gap, v)
    if rng.random() < 0.5:
        # mirror so the pair also appears with the later piece first
        return b, a
    return a, b


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def check_oracle_equivalence(n_pairs: int = 1000, seed: int = 0, threads: int = 1,
                             s_values=ORACLE_S, rtol: float = 1e-8) -> Check:
    rng = make_rng(seed)
    pairs = [random_segment_pair(rng) for _ in range(n_pairs)]
    jobs = [(a, b, s) for s in s_values for a, b in pairs]

    def one(job):
        a, b, s = job
        closed = segment_pair_energy(a, b, s)
        ref, _ = oracle_pair(a, b, s, 1e-12)
        return _rel(closed, ref)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        errs = list(pool.map(one, jobs))
    worst = max(errs)
    return Check("oracle equivalence", worst <= rtol,
                 {"pairs": n_pairs, "s_values": list(s_values), "max_rel_error": worst})


def check_zero_average(deltas=(0.5, 0.1, 0.01), s_values=(0.25, 0.5, 0.75), atol: float = 1e-8) -> Check:
    worst = 0.0
    rows = []
    for d in deltas:
        for s in s_values:
            prof = build_canonical(ProblemParams.normalized(s, d))
            v = frac_laplacian_avg(prof, (-d, 0.0), s)
            rows.append({"delta": d, "s": s, "average": v})
            worst = max(worst, abs(v))
    return Check("zero average over steep interval", worst <= atol, {"max_abs": worst, "rows": rows})


def check_first_variation(n_configs: int = 20, seed: int = 1, h: float = 1e-5, rtol: float = 1e-4) -> Check:
    rng = make_rng(seed)
    worst = 0.0
    rows = []
    for _ in range(n_configs):
        s = float(rng.choice([0.3, 0.5, 0.7]))
        delta = float(rng.uniform(0.05, 0.5))
        pr = ProblemParams(s, float(10.0 ** rng.uniform(-0.5, 0.5)) / delta, delta, 2)
        C = pr.gap_total
        g0 = float(rng.uniform(0.1, 0.9)) * C
        gaps = np.array([g0, C - g0])
        i = int(rng.integers(2))
        analytic = first_variation(from_gaps(GapConfiguration(tuple(gaps)), pr), i, s)
        # moving interval i right lengthens the gap before it and shortens the one after
        step = np.zeros(2)
        step[i - 1] += h
        step[i] -= h
        e_plus = energy(from_gaps(GapConfiguration(tuple(gaps + step)), pr), s, 1e-13).value
        e_minus = energy(from_gaps(GapConfiguration(tuple(gaps - step)), pr), s, 1e-13).value
        fd = (e_plus - e_minus) / (2.0 * h)
        err = _rel(analytic, fd)
        worst = max(worst, err)
        rows.append({"s": s, "delta": delta, "gaps": list(gaps), "index": i, "analytic": analytic, "fd": fd})
    return Check("first variation vs finite difference", worst <= rtol, {"max_rel_error": worst, "rows": rows})


def check_periodicity(Ls=(2, 3), s_values=(0.3, 0.5, 0.7), deltas=(0.2, 0.1), seed: int = 0,
                      threads: int = 1) -> Check:
    grid_n = {2: 100, 3: 48}
    opts = DescentOptions(multistart_count=4, rng_seed=seed)
    ok = True
    rows = []
    for L in Ls:
        for s in s_values:
            for d in deltas:
                pr = ProblemParams.normalized(s, d, L)
                bf = brute_force(pr, s, grid_n[L], threads)
                equal = max(abs(g - pr.Lambda * d) for g in bf.best_gaps.gaps) <= 1e-12 * pr.T
                desc = minimize_gaps(pr, s, opts, threads)
                good = equal and bf.periodicity_residual <= 1e-4 * pr.T and desc.periodicity_residual <= 1e-4 * pr.T
                ok = ok and good
                rows.append({
                    "L": L, "s": s, "delta": d,
                    "brute_gaps": list(bf.best_gaps.gaps),
                    "brute_energy": bf.best_energy.value,
                    "descent_gaps": list(desc.best_gaps.gaps),
                    "descent_residual_over_T": desc.periodicity_residual / pr.T,
                    "passed": good,
                })
    return Check("equal gaps minimise", ok, {"rows": rows})


def check_ratios(threads: int = 1) -> Check:
    half = ratio_sweep(0.5, (1e-2, 1e-3, 1e-4), threads=threads)
    dev = [abs(r.ratio - 1.0) for r in half]
    ok_half = 0.75 <= half[-1].ratio <= 1.25 and dev[0] > dev[1] > dev[2]
    three = ratio_sweep(0.75, (1e-4,), threads=threads)
    ok_three = abs(three[0].ratio - 1.0) <= 0.05
    return Check("energy over growth rate", ok_half and ok_three,
                 {"s=0.5": [r.to_dict() for r in half], "s=0.75": [r.to_dict() for r in three]})


def check_breakdown(s: float = 0.75, delta: float = 1e-5) -> Check:
    b = energy_breakdown(ProblemParams.normalized(s, delta))
    scale = delta ** (1.0 - 2.0 * s)
    c1, c2, c8 = leading_constants(s)
    r1, r2, r8 = b[1] / scale, b[2] / scale, b[8] / scale
    lo, hi = i8_lower_bound(s, delta), i8_upper_bound(s, delta)
    ok = (abs(r1 / c1 - 1.0) <= 0.01 and abs(r2 / c2 - 1.0) <= 0.05 and abs(r8 / c8 - 1.0) <= 0.05
          and lo <= b[8] <= hi)
    return Check("breakdown constants", ok, {
        "terms": list(b.terms), "I1_ratio": r1, "I2_ratio": r2, "I8_ratio": r8,
        "I1_limit": c1, "I2_limit": c2, "I8_limit": c8, "I8_lower": lo, "I8_upper": hi,
    })


def check_constant_sum(n: int = 50, atol: float = 1e-12) -> Check:
    ss = np.linspace(0.51, 0.99, n + 2)[1:-1]
    dev = [float(abs(constant_sum(s) * 2 * s * (1 - s) * (2 * s - 1) * (3 - 2 * s) - 1.0)) for s in ss]
    return Check("constant sum identity", max(dev) <= atol, {"max_deviation": max(dev), "count": n})


def check_extremal(deltas=(0.5, 0.1, 1e-3)) -> Check:
    s1 = []
    for d in deltas:
        pr = ProblemParams.normalized(1.0, d)
        s1.append(d * energy_s1(build_canonical(pr)))
    pr = ProblemParams.normalized(0.0, 1e-3)
    s0 = energy_s0(build_canonical(pr), -pr.Lambda * pr.delta / 2.0)
    ok = all(abs(v - 0.5) <= 8 * np.finfo(float).eps for v in s1) and abs(s0 * 24.0 - 1.0) <= 0.01
    return Check("extremal constants", ok, {"delta_energy_s1": s1, "energy_s0": s0})


def check_s0_minimizer(grid_n: int = 100, threads: int = 1) -> Check:
    pr = ProblemParams(0.0, 1.0, 0.5, 2)
    rep = verify_s0_minimizer(pr, grid_n, threads)
    mesh = pr.gap_total / grid_n
    equal = max(abs(g - pr.Lambda * pr.delta) for g in rep.best_gaps.gaps) <= 1e-12
    anti = endpoint_antisymmetry(from_gaps(rep.best_gaps, pr), rep.vertical_offset)
    return Check("s = 0 minimiser", equal and anti <= mesh, {
        "gaps": list(rep.best_gaps.gaps), "energy": rep.best_energy.value,
        "offset": rep.vertical_offset, "antisymmetry": anti,
    })


def check_misfit(m: float = 1e-3) -> Check:
    sym = misfit_solve(MisfitInputs(30.0, 30.0, 0.3, 0.3, 1.0, 1.1))
    rep = misfit_solve(MisfitInputs.symmetric(1.0, 0.3, 1.0, m))
    ratio = rep.finite_delta_density / (rep.prefactor * rep.c * rep.m * math.log(1.0 / rep.m))
    ok = sym.alpha_min == 0.5 and 0.9 <= ratio <= 1.1
    return Check("misfit density", ok, {"alpha_symmetric": sym.alpha_min, "ratio": ratio, "report": rep.to_dict()})


ALL_CHECKS = (
    check_oracle_equivalence,
    check_zero_average,
    check_first_variation,
    check_periodicity,
    check_ratios,
    check_breakdown,
    check_constant_sum,
    check_extremal,
    check_s0_minimizer,
    check_misfit,
)

_THREADED = {check_oracle_equivalence, check_periodicity, check_ratios, check_s0_minimizer}


def run_all(threads: int = 1, seed: int = 0) -> list[Check]:
    out = []
    for fn in ALL_CHECKS:
        kw = {}
        if fn in _THREADED:
            kw["threads"] = threads
        if fn in (check_oracle_equivalence, check_periodicity):
            kw["seed"] = seed
        out.append(fn(**kw))
    return out
