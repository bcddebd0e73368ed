"""Minimisation of the energy over gap configurations.

The state is the gap vector ``g`` on the simplex ``{g >= 0, sum g = L Lambda delta}``;
gap ``i`` follows steep interval ``i``.  Shifting steep interval ``i`` to the
right by ``h`` lengthens gap ``i - 1`` and shortens gap ``i``, and its exact
derivative is ``(Lambda + 1) / T`` times the integral of the fractional
Laplacian over the interval.  The tangent gradient ``G`` in gap coordinates
solves ``G[i-1] - G[i] = F[i]`` with ``sum G = 0``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .energy import EnergyResult, best_offset, energy, energy_s0
from .laplacian import frac_laplacian_avg
from .profile import GapConfiguration, ProblemParams, TwoSlopeProfile, build_canonical, from_gaps, gaps_of

__all__ = [
    "DescentOptions",
    "MinimizeReport",
    "make_rng",
    "first_variation",
    "gap_gradient",
    "project_simplex",
    "minimize_gaps",
    "brute_force",
    "simplex_grid",
    "verify_s0_minimizer",
    "endpoint_antisymmetry",
]

_TIE_REL = 1e-12


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based 64-bit generator (Philox 4x64) seeded with ``seed``."""
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class DescentOptions:
    max_iters: int = 400
    grad_tol: float = 1e-9
    step_init: float = 1.0
    backtrack_ratio: float = 0.5
    multistart_count: int = 8
    rng_seed: int = 0
    armijo: float = 1e-4
    energy_tol: float = 1e-12

    def __post_init__(self):
        if min(self.max_iters, self.multistart_count) < 1:
            raise ValueError("max_iters and multistart_count must be positive")
        if not (self.grad_tol > 0 and self.step_init > 0 and self.energy_tol > 0):
            raise ValueError("tolerances and step must be positive")
        if not 0.0 < self.backtrack_ratio < 1.0:
            raise ValueError("backtrack_ratio must lie in (0, 1)")


@dataclass(frozen=True)
class MinimizeReport:
    best_gaps: GapConfiguration
    best_energy: EnergyResult
    iterations: int
    converged: bool
    periodicity_residual: float
    vertical_offset: float | None = None
    trace: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        d = {
            "best_gaps": list(self.best_gaps.gaps),
            "best_energy": self.best_energy.to_dict(),
            "iterations": self.iterations,
            "converged": self.converged,
            "periodicity_residual": self.periodicity_residual,
        }
        if self.vertical_offset is not None:
            d["vertical_offset"] = self.vertical_offset
        return d


def _residual(gaps, params: ProblemParams) -> float:
    return float(np.max(np.abs(np.asarray(gaps) - params.Lambda * params.delta)))


def first_variation(profile: TwoSlopeProfile, interval_index: int, s: float, tol: float = 1e-9) -> float:
    """d energy / dh when steep interval ``interval_index`` moves right by ``h``."""
    pr = profile.params
    if not 0 <= interval_index < pr.L:
        raise IndexError(f"interval index {interval_index} out of range for L = {pr.L}")
    x = profile.neg_interval_right_endpoints[interval_index]
    avg = frac_laplacian_avg(profile, (x - pr.delta, x), s, tol)
    return (pr.Lambda + 1.0) / pr.T * avg


def gap_gradient(gaps, params: ProblemParams, s: float) -> np.ndarray:
    """Tangent gradient of the energy with respect to the gap vector."""
    prof = from_gaps(GapConfiguration(tuple(gaps)), params)
    F = np.array([first_variation(prof, i, s) for i in range(params.L)])
    # G[i] = G[0] - (F[1] + ... + F[i]), with G[0] fixed by sum G = 0
    c = np.concatenate(([0.0], np.cumsum(F[1:])))
    return c.mean() - c


def project_simplex(v, total: float) -> np.ndarray:
    """Euclidean projection of ``v`` onto ``{x >= 0, sum x = total}``."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - total
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    x = np.maximum(v - theta, 0.0)
    # restore the sum exactly on the free coordinates
    free = x > 0
    x[free] += (total - math.fsum(x)) / free.sum()
    return np.maximum(x, 0.0)


def _energy_of(gaps, params, s, tol):
    return energy(from_gaps(GapConfiguration(tuple(gaps)), params), s, tol)


def _descend(start, params: ProblemParams, s: float, opts: DescentOptions):
    C = params.gap_total
    g = project_simplex(start, C)
    E = _energy_of(g, params, s, opts.energy_tol).value
    step = opts.step_init
    trace = [(0, E, _residual(g, params))]
    prev = None
    converged = False
    it = 0
    for it in range(1, opts.max_iters + 1):
        G = gap_gradient(g, params, s)
        pg = g - project_simplex(g - G, C)
        if np.max(np.abs(pg)) <= opts.grad_tol:
            converged = True
            it -= 1
            break
        if prev is not None:
            # Barzilai-Borwein step from the last accepted move
            dg, dG = g - prev[0], G - prev[1]
            curv = float(dg @ dG)
            step = float(dg @ dg) / curv if curv > 0 else opts.step_init
        t = step
        while True:
            cand = project_simplex(g - t * G, C)
            Ec = _energy_of(cand, params, s, opts.energy_tol).value
            if Ec <= E + opts.armijo * float(G @ (cand - g)):
                break
            t *= opts.backtrack_ratio
            if t < 1e-14 * max(1.0, step):
                cand, Ec = g, E
                break
        if cand is g or np.array_equal(cand, g):
            # no representable decrease left: stationary to working precision
            converged = np.max(np.abs(pg)) <= 1e3 * opts.grad_tol
            break
        prev = (g, G)
        g, E = cand, Ec
        trace.append((it, E, _residual(g, params)))
    return g, E, it, converged, tuple(trace)


def _lex_key(gaps):
    return tuple(float(x) for x in gaps)


def _pick(values, keys):
    """Index of the smallest value; near-ties (relative 1e-12) go to the smallest key."""
    best = None
    for i, v in enumerate(values):
        if best is None:
            best = i
            continue
        vb = values[best]
        if v < vb - _TIE_REL * max(1.0, abs(vb)):
            best = i
        elif abs(v - vb) <= _TIE_REL * max(1.0, abs(vb)) and keys[i] < keys[best]:
            best = i
    return best


def minimize_gaps(params: ProblemParams, s: float, opts: DescentOptions = DescentOptions(),
                  threads: int = 1, starts=None) -> MinimizeReport:
    """Projected-gradient descent from Dirichlet-uniform random starts."""
    C = params.gap_total
    if params.L == 1:
        res = energy(build_canonical(params), s, opts.energy_tol)
        return MinimizeReport(GapConfiguration((C,)), res, 0, True, 0.0)
    if starts is None:
        rng = make_rng(opts.rng_seed)
        starts = [C * rng.dirichlet(np.ones(params.L)) for _ in range(opts.multistart_count)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        runs = list(pool.map(lambda g0: _descend(g0, params, s, opts), starts))
    k = _pick([r[1] for r in runs], [_lex_key(r[0]) for r in runs])
    g, _, it, conv, trace = runs[k]
    gaps = GapConfiguration(tuple(g))
    res = energy(from_gaps(gaps, params), s, opts.energy_tol)
    return MinimizeReport(gaps, res, sum(r[2] for r in runs), conv, _residual(g, params), None, trace)


def simplex_grid(L: int, grid_n: int):
    """Integer compositions of ``grid_n`` into ``L`` nonnegative parts, lexicographic."""
    if L == 1:
        return [(grid_n,)]
    out = []
    for head in product(range(grid_n + 1), repeat=L - 1):
        rest = grid_n - sum(head)
        if rest >= 0:
            out.append(head + (rest,))
    return out


def _check_grid(params: ProblemParams, grid_n: int):
    limits = {2: 200, 3: 60}
    if params.L not in limits:
        raise ValueError("brute force supports L = 2 or 3")
    if not 1 <= grid_n <= limits[params.L]:
        raise ValueError(f"grid_n must lie in [1, {limits[params.L]}] for L = {params.L}")


def brute_force(params: ProblemParams, s: float, grid_n: int, threads: int = 1,
                tol: float = 1e-12) -> MinimizeReport:
    """Exhaustive search over the uniform simplex grid of mesh L Lambda delta / grid_n."""
    _check_grid(params, grid_n)
    grid = simplex_grid(params.L, grid_n)
    mesh = params.gap_total / grid_n

    def run(n):
        return _energy_of([mesh * k for k in n], params, s, tol)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(run, grid))
    k = _pick([r.value for r in results], grid)
    gaps = GapConfiguration(tuple(mesh * v for v in grid[k]))
    return MinimizeReport(gaps, results[k], len(grid), True, _residual(gaps.gaps, params))


def endpoint_antisymmetry(profile: TwoSlopeProfile, offset: float) -> float:
    """max over steep intervals (x1, x2) of |u(x2) + u(x1)| after adding ``offset``."""
    pw = profile.periodic
    d = profile.params.delta
    worst = 0.0
    for x2 in profile.neg_interval_right_endpoints:
        u1 = float(pw.value(x2 - d)) + offset
        u2 = float(pw.value(x2)) + offset
        worst = max(worst, abs(u1 + u2))
    return worst


def verify_s0_minimizer(params: ProblemParams, grid_n: int, threads: int = 1) -> MinimizeReport:
    """Grid search for the s = 0 functional over gaps, with the offset optimal per point."""
    _check_grid(params, grid_n)
    grid = simplex_grid(params.L, grid_n)
    mesh = params.gap_total / grid_n

    def run(n):
        prof = from_gaps(GapConfiguration(tuple(mesh * k for k in n)), params)
        c = best_offset(prof)
        return energy_s0(prof, c), c

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(run, grid))
    k = _pick([r[0] for r in results], grid)
    gaps = GapConfiguration(tuple(mesh * v for v in grid[k]))
    value, offset = results[k]
    res = EnergyResult(value, 0.0, 0, "closed_form")
    return MinimizeReport(gaps, res, len(grid), True, _residual(gaps.gaps, params), offset)
