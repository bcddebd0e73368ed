"""Two-slope periodic profiles and their segment decomposition.

A profile in the admissible class has period ``T = L (Lambda + 1) delta``,
slope ``-Lambda`` on ``L`` intervals of length ``delta`` per period and slope
``+1`` elsewhere.  It is stored by the right endpoints of its steep intervals
plus the value at the origin; everything numerical works on the generic
:class:`PeriodicPiecewise` representation (one period of contiguous affine
segments), which also covers discontinuous sawtooth profiles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .kernel import Segment

__all__ = [
    "AdmissibilityError",
    "ProblemParams",
    "GapConfiguration",
    "PeriodicPiecewise",
    "TwoSlopeProfile",
    "build_canonical",
    "from_gaps",
    "gaps_of",
    "evaluate",
    "segments_in_window",
    "admissibility_errors",
    "mantissa_profile",
]

_REL = 1e-12


class AdmissibilityError(ValueError):
    """A profile or gap vector violates the two-slope constraints."""


@dataclass(frozen=True)
class ProblemParams:
    """Slope ``-Lambda`` on intervals of length ``delta``, ``L`` of them per period.

    ``s`` may also be 0 or 1 for the extremal functionals.  ``T`` is derived
    when omitted and checked against ``L (Lambda + 1) delta`` otherwise.
    """

    s: float
    Lambda: float
    delta: float
    L: int = 1
    T: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"s must lie in [0, 1], got {self.s}")
        if not (self.Lambda > 0 and self.delta > 0):
            raise ValueError("Lambda and delta must be positive")
        if int(self.L) != self.L or self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L}")
        object.__setattr__(self, "L", int(self.L))
        period = self.L * (self.Lambda + 1.0) * self.delta
        if self.T is None:
            object.__setattr__(self, "T", period)
        elif abs(self.T - period) > 8 * np.finfo(float).eps * period:
            raise ValueError(f"T = {self.T} does not equal L (Lambda + 1) delta = {period}")

    @property
    def gap_total(self) -> float:
        """Total length of the slope +1 runs in one period."""
        return self.L * self.Lambda * self.delta

    def with_s(self, s: float) -> "ProblemParams":
        return ProblemParams(s, self.Lambda, self.delta, self.L)

    @classmethod
    def normalized(cls, s: float, delta: float, L: int = 1) -> "ProblemParams":
        """Parameters with ``Lambda * delta = 1``."""
        return cls(s, 1.0 / delta, delta, L)


@dataclass(frozen=True)
class GapConfiguration:
    """Lengths of the slope +1 runs following each steep interval, cyclically."""

    gaps: tuple[float, ...]

    def __post_init__(self):
        g = tuple(float(x) for x in self.gaps)
        if not g:
            raise ValueError("need at least one gap")
        if any(not math.isfinite(x) or x < 0 for x in g):
            raise AdmissibilityError(f"gaps must be finite and nonnegative, got {g}")
        object.__setattr__(self, "gaps", g)

    def __len__(self):
        return len(self.gaps)

    def as_array(self) -> np.ndarray:
        return np.array(self.gaps)

    def rotated(self, k: int) -> "GapConfiguration":
        k %= len(self.gaps)
        return GapConfiguration(self.gaps[k:] + self.gaps[:k])


class PeriodicPiecewise:
    """One period ``[lo[0], lo[0] + period)`` of contiguous affine segments."""

    __slots__ = ("lo", "hi", "value_at_lo", "slope", "period")

    def __init__(self, lo, hi, value_at_lo, slope, period: float):
        arrs = [np.array(a, dtype=float) for a in (lo, hi, value_at_lo, slope)]
        lo, hi, v0, sl = arrs
        if not (lo.ndim == 1 and lo.size > 0 and all(a.shape == lo.shape for a in arrs)):
            raise ValueError("segment arrays must be one-dimensional and of equal length")
        if np.any(hi <= lo):
            raise ValueError("every segment needs positive length")
        tol = 64 * np.finfo(float).eps * max(1.0, abs(lo[0]) + period)
        if np.any(np.abs(hi[:-1] - lo[1:]) > tol) or abs(hi[-1] - lo[0] - period) > tol:
            raise ValueError("segments must tile exactly one period")
        for a in arrs:
            a.setflags(write=False)
        self.lo, self.hi, self.value_at_lo, self.slope = arrs
        self.period = float(period)

    def __len__(self):
        return self.lo.size

    def _tol(self) -> float:
        return 64 * np.finfo(float).eps * max(1.0, abs(self.start) + self.period)

    def __repr__(self):
        return f"PeriodicPiecewise(n={len(self)}, start={self.start}, period={self.period})"

    @property
    def start(self) -> float:
        return float(self.lo[0])

    @property
    def length(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def value_at_hi(self) -> np.ndarray:
        return self.value_at_lo + self.slope * self.length

    def jumps(self) -> np.ndarray:
        """Value jump ``u(hi_i^+) - u(hi_i^-)`` at the right end of each segment."""
        nxt = np.roll(self.value_at_lo, -1)
        return nxt - self.value_at_hi

    def value(self, x):
        """Right-continuous evaluation, vectorised over ``x``."""
        x = np.asarray(x, dtype=float)
        T = self.period
        xr = x - np.floor((x - self.start) / T) * T
        idx = np.clip(np.searchsorted(self.lo, xr, side="right") - 1, 0, len(self) - 1)
        return self.value_at_lo[idx] + self.slope[idx] * (xr - self.lo[idx])

    def segments(self, shift: float = 0.0) -> list[Segment]:
        return [
            Segment(float(a + shift), float(b + shift), float(v), float(m))
            for a, b, v, m in zip(self.lo, self.hi, self.value_at_lo, self.slope)
        ]

    def split_at(self, points) -> "PeriodicPiecewise":
        """Insert breakpoints (positions inside the current period window)."""
        lo, hi, v0, sl = (list(a) for a in (self.lo, self.hi, self.value_at_lo, self.slope))
        tol = self._tol()
        for x in sorted(float(p) for p in points):
            i = int(np.searchsorted(lo, x, side="right")) - 1
            # points within rounding of an existing breakpoint would leave a sliver
            if i < 0 or x >= hi[i] - tol or x <= lo[i] + tol:
                continue
            lo.insert(i + 1, x)
            hi.insert(i, x)
            v0.insert(i + 1, v0[i] + sl[i] * (x - lo[i]))
            sl.insert(i + 1, sl[i])
        return PeriodicPiecewise(lo, hi, v0, sl, self.period)

    def window(self, start: float) -> "PeriodicPiecewise":
        """The same function re-cut so that its period window begins at ``start``."""
        T = self.period
        k = math.floor((start - self.start) / T)
        off = start - k * T
        bps = np.append(self.lo, self.start + T)
        near = np.abs(bps - off) <= self._tol()
        if np.any(near):
            off = float(bps[np.argmax(near)])
            if off >= self.start + T:
                off, k = self.start, k + 1
        cut = self.split_at([off]) if off > self.start else self
        # segments before the new start move one period to the right
        move = cut.lo < off
        order = np.concatenate((np.flatnonzero(~move), np.flatnonzero(move)))
        lo = (np.where(move, cut.lo + T, cut.lo) + k * T)[order]
        hi = (np.where(move, cut.hi + T, cut.hi) + k * T)[order]
        lo[0] = start
        hi[-1] = start + T
        return PeriodicPiecewise(lo, hi, cut.value_at_lo[order], cut.slope[order], T)

    def oscillation(self) -> float:
        vals = np.concatenate((self.value_at_lo, self.value_at_hi))
        return float(vals.max() - vals.min())

    def mean(self) -> float:
        seg = self.length * (self.value_at_lo + self.value_at_hi) / 2.0
        return math.fsum(seg) / self.period

    def kinks(self) -> np.ndarray:
        """Positions in the window where the slope or the value changes."""
        change = (np.roll(self.slope, -1) != self.slope) | (self.jumps() != 0.0)
        return self.hi[change]


@dataclass(frozen=True)
class TwoSlopeProfile:
    """Steep intervals ``(x_k - delta, x_k)`` with sorted ``x_k`` in ``[0, T)``."""

    params: ProblemParams
    neg_interval_right_endpoints: tuple[float, ...]
    anchor_value: float = 0.0

    def __post_init__(self):
        x = tuple(float(v) for v in self.neg_interval_right_endpoints)
        object.__setattr__(self, "neg_interval_right_endpoints", x)
        pr = self.params
        if len(x) != pr.L:
            raise AdmissibilityError(f"expected {pr.L} steep intervals, got {len(x)}")
        if any(not 0.0 <= v < pr.T for v in x):
            raise AdmissibilityError("right endpoints must lie in [0, T)")
        if any(b < a for a, b in zip(x, x[1:])):
            raise AdmissibilityError("right endpoints must be sorted")
        tol = _REL * pr.T
        spacing = np.diff(np.array(x + (x[0] + pr.T,)))
        if np.any(spacing < pr.delta - tol):
            raise AdmissibilityError("steep intervals overlap")

    @property
    def T(self) -> float:
        return self.params.T

    @cached_property
    def periodic(self) -> PeriodicPiecewise:
        """Segments over the window starting at the left end of the first steep interval."""
        pr = self.params
        x = self.neg_interval_right_endpoints
        d, lam = pr.delta, pr.Lambda
        nxt = x[1:] + (x[0] + pr.T,)
        lo, hi, v0, sl = [], [], [], []
        v = 0.0
        for xk, xn in zip(x, nxt):
            lo.append(xk - d); hi.append(xk); v0.append(v); sl.append(-lam)
            v -= lam * d
            g = xn - d - xk
            if g > _REL * pr.T:
                lo.append(xk); hi.append(xn - d); v0.append(v); sl.append(1.0)
                v += g
            else:
                # a rounding-sized gap: make the steep intervals touch exactly
                hi[-1] = xn - d
        hi[-1] = lo[0] + pr.T
        base = PeriodicPiecewise(lo, hi, v0, sl, pr.T)
        shift = self.anchor_value - float(base.value(0.0))
        return PeriodicPiecewise(lo, hi, np.array(v0) + shift, sl, pr.T)

    def shifted(self, t: float) -> "TwoSlopeProfile":
        """The profile ``u(. - t)``, re-anchored so the function itself is translated."""
        pr = self.params
        x = sorted((v + t) % pr.T for v in self.neg_interval_right_endpoints)
        x = [v if v < pr.T else 0.0 for v in x]
        anchor = float(self.periodic.value(-t))
        return TwoSlopeProfile(pr, tuple(sorted(x)), anchor)


def build_canonical(params: ProblemParams) -> TwoSlopeProfile:
    """Equal spacing: steep intervals end at ``k (Lambda + 1) delta``; value 0 at the origin."""
    step = (params.Lambda + 1.0) * params.delta
    return TwoSlopeProfile(params, tuple(k * step for k in range(params.L)), 0.0)


def from_gaps(g: GapConfiguration | tuple | list, params: ProblemParams) -> TwoSlopeProfile:
    """First steep interval ends at 0; the k-th gap follows the k-th steep interval."""
    if not isinstance(g, GapConfiguration):
        g = GapConfiguration(tuple(g))
    if len(g) != params.L:
        raise AdmissibilityError(f"expected {params.L} gaps, got {len(g)}")
    total = math.fsum(g.gaps)
    if abs(total - params.gap_total) > _REL * params.T:
        raise AdmissibilityError(
            f"gaps sum to {total}, expected L Lambda delta = {params.gap_total}"
        )
    x = [0.0]
    for gap in g.gaps[:-1]:
        x.append(x[-1] + gap + params.delta)
    return TwoSlopeProfile(params, tuple(x), 0.0)


def gaps_of(profile: TwoSlopeProfile) -> GapConfiguration:
    pr = profile.params
    x = profile.neg_interval_right_endpoints
    nxt = x[1:] + (x[0] + pr.T,)
    return GapConfiguration(tuple(max(0.0, b - a - pr.delta) for a, b in zip(x, nxt)))


def evaluate(profile, x):
    """Value of the (periodic) profile at ``x``; accepts arrays."""
    pw = profile.periodic if isinstance(profile, TwoSlopeProfile) else profile
    out = pw.value(x)
    return float(out) if np.ndim(out) == 0 else out


def segments_in_window(profile, k_lo: int, k_hi: int) -> list[Segment]:
    """Affine segments of periods ``k_lo..k_hi`` (period 0 is the stored window)."""
    if k_lo > k_hi:
        raise ValueError("k_lo must not exceed k_hi")
    pw = profile.periodic if isinstance(profile, TwoSlopeProfile) else profile
    out = []
    for k in range(k_lo, k_hi + 1):
        out.extend(pw.segments(k * pw.period))
    return out


def admissibility_errors(pw: PeriodicPiecewise, params: ProblemParams) -> list[str]:
    """Reasons why ``pw`` is not in the admissible class (empty when it is)."""
    errs = []
    tol = _REL * max(1.0, params.T, params.Lambda)
    if abs(pw.period - params.T) > _REL * params.T:
        errs.append(f"period {pw.period} differs from T = {params.T}")
    steep = np.abs(pw.slope + params.Lambda) <= tol
    gentle = np.abs(pw.slope - 1.0) <= tol
    if not np.all(steep | gentle):
        errs.append("slopes outside {1, -Lambda}")
    if np.any(np.abs(pw.jumps()) > tol * max(1.0, pw.oscillation())):
        errs.append("profile is discontinuous")
    # maximal steep runs must be unions of whole delta-intervals
    runs, cur = [], 0.0
    for ln, st in zip(pw.length, steep):
        if st:
            cur += ln
        elif cur:
            runs.append(cur)
            cur = 0.0
    if cur:
        if runs and steep[0]:
            runs[0] += cur
        else:
            runs.append(cur)
    counts = [r / params.delta for r in runs]
    if any(abs(c - round(c)) > 1e-9 or round(c) < 1 for c in counts):
        errs.append("steep runs are not whole multiples of delta")
    elif sum(round(c) for c in counts) != params.L:
        errs.append(f"expected {params.L} steep intervals per period")
    return errs


def mantissa_profile() -> PeriodicPiecewise:
    """The sawtooth ``x - floor(x)``: unit slope with unit drops at the integers."""
    return PeriodicPiecewise([0.0], [1.0], [0.0], [1.0], 1.0)
