"""Pointwise values and interval integrals of the fractional Laplacian

    (-Delta)^s u(x) = 2 PV int_R (u(x) - u(y)) |x - y|^(-1-2s) dy

for periodic piecewise-affine ``u``.  At a point, the part of the containing
segment symmetric about ``x`` cancels exactly (odd linear numerator), leaving
one-sided power integrals and whole-segment moments.  Over an interval ``I``
the contribution of ``I x I`` vanishes by antisymmetry, so only
``2 int_I int_{R minus I}`` remains, a sum of linear-numerator pair integrals.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import zeta

from .energy import CertificationError, NEAR_COPIES, _periodic
from .kernel import SegmentError, _power_integral, as_exponent, moments
from .lattice import SegmentArrays, _near, row_sums

__all__ = ["frac_laplacian_point", "frac_laplacian_avg", "KinkError"]

_EPS = np.finfo(float).eps


class KinkError(SegmentError):
    """The fractional Laplacian was requested at a kink point."""


def _one_sided(c0, side, slope, r1, h, p):
    """int_0^h (c0 + side slope t) (r1 + t)^(-p) dt for arrays of segments."""
    M = moments(r1, h, p, 1)
    return c0 * M[:, 0] + side * slope * M[:, 1]


def _one_sided_tail(c0, side, slope, r1, h, T, p, k_first):
    """Same integrand summed over copies r1 + kT, k >= k_first, via the zeta kernel."""
    vals = []
    for n in (20, 28):
        x, w = np.polynomial.legendre.leggauss(n)
        x, w = (x + 1.0) / 2.0, w / 2.0
        t = h[:, None] * x[None, :]
        num = c0[:, None] + side * slope[:, None] * t
        kern = zeta(p, (r1[:, None] + t) / T + k_first)
        vals.append(np.sum(h[:, None] * w[None, :] * num * kern, axis=1) * T ** (-p))
    return vals[1], np.abs(vals[1] - vals[0]) + 8 * _EPS * np.abs(vals[1])


def frac_laplacian_point(profile, x: float, s: float, tol: float = 1e-9,
                         near: int = NEAR_COPIES) -> float:
    """(-Delta)^s u at a point that is not a kink."""
    ke = as_exponent(s)
    p = ke.p
    pw = _periodic(profile)
    T = pw.period
    win = pw.window(x - T / 2.0)
    kinks = win.kinks()
    if kinks.size and np.min(np.abs(kinks - x)) <= 64 * _EPS * max(1.0, abs(x) + T):
        raise KinkError(f"x = {x} is a kink point")
    ux = float(win.value(x))
    i = int(np.searchsorted(win.lo, x, side="right")) - 1
    lo, hi, sl = win.lo[i], win.hi[i], win.slope[i]

    # the part of the containing segment symmetric about x cancels
    r0 = min(x - lo, hi - x)
    e = 1.0 - 2.0 * ke.s
    parts = []
    if x - lo > r0:
        parts.append(sl * float(_power_integral(r0, (x - lo) - r0, e)))
    if hi - x > r0:
        parts.append(-sl * float(_power_integral(r0, (hi - x) - r0, e)))

    seg = SegmentArrays.of(win)
    h = seg.length
    # copies on the right are measured from lo, on the left from hi
    c_right, c_left = ux - seg.value_at_lo, ux - seg.value_at_hi
    r_right, r_left = seg.lo - x, x - seg.hi
    others = np.arange(len(win)) != i
    on_right = others & (seg.lo >= x)
    on_left = others & ~on_right
    parts.extend(_one_sided(c_right[on_right], -1.0, seg.slope[on_right], r_right[on_right], h[on_right], p))
    parts.extend(_one_sided(c_left[on_left], 1.0, seg.slope[on_left], r_left[on_left], h[on_left], p))
    for k in range(1, near + 1):
        parts.extend(_one_sided(c_right, -1.0, seg.slope, r_right + k * T, h, p))
        parts.extend(_one_sided(c_left, 1.0, seg.slope, r_left + k * T, h, p))
    bound = 0.0
    for c0, side, r1 in ((c_right, -1.0, r_right), (c_left, 1.0, r_left)):
        v, err = _one_sided_tail(c0, side, seg.slope, r1, h, T, p, near + 1)
        parts.extend(v)
        bound += 2.0 * float(np.sum(err))
    if bound > tol:
        raise CertificationError(f"tail error {bound:.3e} exceeds tol {tol:.1e}", bound)
    return 2.0 * math.fsum(parts)


def frac_laplacian_avg(profile, interval: tuple[float, float], s: float, tol: float = 1e-9,
                       near: int = NEAR_COPIES) -> float:
    """int over ``interval`` of (-Delta)^s u; the interval must fit in one period."""
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise ValueError("degenerate interval")
    ke = as_exponent(s)
    pw = _periodic(profile)
    T = pw.period
    if b - a > T * (1.0 + 1e-12):
        raise ValueError("interval longer than one period")
    win = pw.window(a)
    if b < a + T:
        win = win.split_at([b])
    inside = win.hi <= b + 64 * _EPS * max(1.0, abs(b))
    X = SegmentArrays.of(win, np.flatnonzero(inside))
    Z = SegmentArrays.of(win)
    parts = []
    if not np.all(inside):
        Y = SegmentArrays.of(win, np.flatnonzero(~inside))
        xi, yi = np.meshgrid(np.arange(len(X)), np.arange(len(Y)), indexing="ij")
        A = SegmentArrays(X.lo[xi.ravel()], X.hi[xi.ravel()], X.value_at_lo[xi.ravel()], X.slope[xi.ravel()])
        B = SegmentArrays(Y.lo[yi.ravel()], Y.hi[yi.ravel()], Y.value_at_lo[yi.ravel()], Y.slope[yi.ravel()])
        parts.extend(_near(A, B, T, ke, 1, [0], False).ravel())
    # copies to the right (+) and to the left (-, reflected so Z is on the left)
    xi, zi = np.meshgrid(np.arange(len(X)), np.arange(len(Z)), indexing="ij")
    XA = SegmentArrays(X.lo[xi.ravel()], X.hi[xi.ravel()], X.value_at_lo[xi.ravel()], X.slope[xi.ravel()])
    ZB = SegmentArrays(Z.lo[zi.ravel()], Z.hi[zi.ravel()], Z.value_at_lo[zi.ravel()], Z.slope[zi.ravel()])
    plus = row_sums(XA, ZB, T, ke, 1, 1, near)
    minus = row_sums(ZB, XA, T, ke, 1, 1, near)
    parts.extend(plus.near)
    parts.extend(plus.tail)
    parts.extend(-minus.near)
    parts.extend(-minus.tail)
    bound = 2.0 * float(np.sum(plus.tail_error) + np.sum(minus.tail_error))
    if bound > tol:
        raise CertificationError(f"tail error {bound:.3e} exceeds tol {tol:.1e}", bound)
    return 2.0 * math.fsum(parts)
