"""Sums of segment interactions over all periodic copies.

For segments ``A`` and ``B`` of a ``T``-periodic profile,

    R_q(A, B; k0) = sum_{k >= k0} I_q(A, B + kT)

is split into near copies ``k0 <= k < k0 + K``, evaluated in closed form, and
the far tail.  Summing the kernel over the tail first gives

    sum_{j >= 0} (r + jT)^(-p) = T^(-p) zeta(p, r / T)

(Hurwitz zeta), a smooth function of the distance ``r`` once ``r >= T``.  The
tail is then a single line integral of the same piecewise polynomial the closed
form uses, done by Gauss-Legendre at two orders; their difference is the
reported error.  A crude alternative bounds the tail by ``osc^2`` per copy and
sums as many copies as needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .kernel import SegmentError, as_exponent, line_pieces, pair_integrals

__all__ = ["SegmentArrays", "RowSums", "row_sums", "crude_copies", "crude_tail_bound"]

_ORDERS = (20, 28)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SegmentArrays:
    """Parallel arrays describing a batch of affine segments."""

    lo: np.ndarray
    hi: np.ndarray
    value_at_lo: np.ndarray
    slope: np.ndarray

    @classmethod
    def of(cls, pw, index=None) -> "SegmentArrays":
        idx = slice(None) if index is None else np.asarray(index)
        return cls(pw.lo[idx], pw.hi[idx], pw.value_at_lo[idx], pw.slope[idx])

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def value_at_hi(self):
        return self.value_at_lo + self.slope * (self.hi - self.lo)

    def __len__(self):
        return self.lo.size


@dataclass(frozen=True)
class RowSums:
    near: np.ndarray
    tail: np.ndarray
    tail_error: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.near + self.tail


def _snap(g, d0, pos_scale, val_scale, allow_jump, s):
    tol_g = 64 * _EPS * np.maximum(1.0, pos_scale)
    if np.any(g < -tol_g):
        raise SegmentError("periodic copies overlap; segments must lie in one period window")
    touch = np.abs(g) <= tol_g
    g = np.where(touch, 0.0, g)
    tol_v = 64 * _EPS * np.maximum(1.0, val_scale)
    d0 = np.where(touch & (np.abs(d0) <= tol_v), 0.0, d0)
    jump = touch & (d0 != 0.0)
    if np.any(jump):
        if not allow_jump:
            raise SegmentError("touching copies with a value jump; pass allow_jump=True")
        if as_exponent(s).s >= 0.5:
            raise SegmentError("a value jump makes the integral diverge for s >= 1/2")
    return g, d0


def _near(A: SegmentArrays, B: SegmentArrays, T, s, q, ks, allow_jump):
    """I_q(A_n, B_n + kT) for every n and every k in ``ks``; shape (len(ks), n)."""
    k = np.asarray(ks, dtype=float)[:, None]
    g = k * T + B.lo[None, :] - A.hi[None, :]
    d0 = np.broadcast_to(A.value_at_hi - B.value_at_lo, g.shape)
    pos = np.abs(k * T) + np.maximum(np.abs(A.hi), np.abs(B.lo))[None, :]
    val = np.maximum(np.abs(A.value_at_hi), np.abs(B.value_at_lo))[None, :]
    g, d0 = _snap(g, d0, pos, val, allow_jump, s)
    la = np.broadcast_to(A.length, g.shape)
    lb = np.broadcast_to(B.length, g.shape)
    sa = np.broadcast_to(A.slope, g.shape)
    sb = np.broadcast_to(B.slope, g.shape)
    out = pair_integrals(g.ravel(), la.ravel(), lb.ravel(), sa.ravel(), sb.ravel(), d0.ravel(), s, q)
    return out.reshape(g.shape)


def _tail(A: SegmentArrays, B: SegmentArrays, T, s, q, k_first):
    """sum_{k >= k_first} I_q(A, B + kT) via the zeta-summed kernel; returns (value, error)."""
    p = as_exponent(s).p
    g = k_first * T + B.lo - A.hi
    if np.any(g < 0.5 * T):
        raise ValueError("tail must start at least half a period away")
    d0 = A.value_at_hi - B.value_at_lo
    pieces = line_pieces(g, A.length, B.length, A.slope, B.slope, d0, q)
    results = []
    for n in _ORDERS:
        x, w = np.polynomial.legendre.leggauss(n)
        x, w = (x + 1.0) / 2.0, w / 2.0
        acc = np.zeros_like(g)
        for r0, h, P in pieces:
            t = h[:, None] * x[None, :]
            kern = zeta(p, (r0[:, None] + t) / T)
            poly = _polyval(P, t)
            acc = acc + h * np.sum(w[None, :] * poly * kern, axis=1)
        results.append(acc * T ** (-p))
    lo, hi = results
    err = np.abs(hi - lo) + 8 * _EPS * np.abs(hi)
    return hi, err


def _polyval(P, t):
    """Evaluate per-row polynomials ``P[n, m] t^m`` at ``t[n, j]``."""
    out = np.zeros_like(t)
    for m in range(P.shape[1] - 1, -1, -1):
        out = out * t + P[:, m : m + 1]
    return out


def row_sums(A: SegmentArrays, B: SegmentArrays, T: float, s, q: int = 2, k_start: int = 1,
             near: int = 2, allow_jump: bool = False) -> RowSums:
    """R_q(A_n, B_n; k_start) for each pair n, with ``near`` copies in closed form.

    ``B + k_start T`` must lie to the right of ``A`` (touching allowed).
    """
    if near < 1 or k_start < 0:
        raise ValueError("need near >= 1 and k_start >= 0")
    ks = np.arange(k_start, k_start + near)
    # the zeta tail needs the first omitted copy at least one period away
    while k_start + near - 1 < 2:
        near += 1
        ks = np.arange(k_start, k_start + near)
    ke = as_exponent(s)
    near_vals = _near(A, B, T, ke, q, ks, allow_jump)
    tail, err = _tail(A, B, T, ke, q, k_start + near)
    near_sum = np.array([math.fsum(col) for col in near_vals.T])
    return RowSums(near_sum, tail, err)


def crude_tail_bound(osc: float, T: float, s, n_pairs: int, k_first: int, q: int = 2) -> float:
    """Bound on sum over pairs and k >= k_first of |I_q(A, B + kT)|.

    Each copy is at distance >= (k - 1) T and each pair spans at most T x T, so
    a copy contributes at most T^2 osc^q ((k - 1) T)^(-p).
    """
    p = as_exponent(s).p
    if k_first < 2:
        return math.inf
    return float(n_pairs * T ** (2.0 - p) * osc**q * zeta(p, k_first - 1))


def crude_copies(osc: float, T: float, s, n_pairs: int, tol: float, q: int = 2,
                 budget: int = 10**7) -> int:
    """Smallest K with crude_tail_bound(..., k_first=K + 1) <= tol, or raise past ``budget``."""
    p = as_exponent(s).p
    if osc == 0.0:
        return 1
    # zeta(p, K) ~ K^(1-p) / (p - 1): start from that guess and walk
    scale = n_pairs * T ** (2.0 - p) * osc**q
    log_guess = math.log(scale / ((p - 1.0) * tol)) / (p - 1.0)
    guess = max(2, int(math.exp(min(log_guess, math.log(budget + 1.0)))))

    def over(k):
        return crude_tail_bound(osc, T, s, n_pairs, k + 1, q) > tol

    hi = min(guess, budget + 1)
    while over(hi):
        if hi > budget:
            raise OverflowError(
                f"crude tail needs more than {budget} periods; best bound "
                f"{crude_tail_bound(osc, T, s, n_pairs, budget + 1, q):.3e}"
            )
        hi = min(int(hi * 1.25) + 1, budget + 1)
    if hi > budget:
        raise OverflowError(f"crude tail needs more than {budget} periods")
    # smallest K in [1, hi] that meets the bound
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if over(mid):
            lo = mid
        else:
            hi = mid
    return hi
