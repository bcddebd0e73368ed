"""Closed-form double integrals of the kernel |x - y|^(-1-2s) over affine segments.

Every interaction reduces to

    I_q(A, B) = int_A int_B (v_A(x) - v_B(y))^q |x - y|^(-1-2s) dy dx,   q in {1, 2}

for two segments with disjoint interiors.  Integrating first along the lines
``y - x = r`` turns the double integral into a one-dimensional integral of a
piecewise cubic (in ``r``) against ``r^(-1-2s)``; the cubic has three pieces,
split at the corner distances of the rectangle.  The one-dimensional moments

    M_m(r1, h) = int_0^h t^m (r1 + t)^(-p) dt

are evaluated in two regimes: a binomial series when ``h <= r1/2`` (well
separated, no cancellation) and an exact antiderivative otherwise.  The
antiderivative is written with ``exprel`` so the logarithmic case ``s = 1/2``
is the continuous limit of the power case rather than a separate branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import exprel

__all__ = [
    "BRANCH_WINDOW",
    "KernelExponent",
    "Segment",
    "SegmentError",
    "as_exponent",
    "moments",
    "pair_integrals",
    "line_pieces",
    "self_segment_energy",
    "segment_pair_energy",
    "segment_pair_linear",
]

BRANCH_WINDOW = 1e-6

# Series regime for the moments: h / r1 <= _SERIES_RATIO.
_SERIES_RATIO = 0.5
_SERIES_TERMS = 64


class SegmentError(ValueError):
    """Raised for inadmissible segment pairs (overlap, forbidden jump)."""


@dataclass(frozen=True)
class KernelExponent:
    s: float
    near_half: bool = field(init=False)

    def __post_init__(self):
        s = float(self.s)
        if not (0.0 < s < 1.0) or not math.isfinite(s):
            raise ValueError(f"kernel exponent s must lie in (0, 1), got {self.s!r}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "near_half", abs(2.0 * s - 1.0) < BRANCH_WINDOW)

    @property
    def p(self) -> float:
        """Kernel power 1 + 2s."""
        return 1.0 + 2.0 * self.s

    @property
    def e0(self) -> float:
        return 1.0 - 2.0 * self.s

    @property
    def e1(self) -> float:
        return 2.0 - 2.0 * self.s

    @property
    def e2(self) -> float:
        return 3.0 - 2.0 * self.s


def as_exponent(s) -> KernelExponent:
    return s if isinstance(s, KernelExponent) else KernelExponent(s)


@dataclass(frozen=True)
class Segment:
    """Closed interval [lo, hi] with the affine map v(x) = value_at_lo + slope (x - lo)."""

    lo: float
    hi: float
    value_at_lo: float
    slope: float

    def __post_init__(self):
        vals = (self.lo, self.hi, self.value_at_lo, self.slope)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite segment data {vals}")
        if not self.lo < self.hi:
            raise ValueError(f"segment needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def value_at_hi(self) -> float:
        return self.value_at_lo + self.slope * (self.hi - self.lo)

    def value(self, x):
        return self.value_at_lo + self.slope * (np.asarray(x) - self.lo)

    def shifted(self, dx: float = 0.0, dv: float = 0.0) -> "Segment":
        return Segment(self.lo + dx, self.hi + dx, self.value_at_lo + dv, self.slope)


# ---------------------------------------------------------------------------
# one-dimensional moments


def _binom_neg(p: float, n: int) -> np.ndarray:
    """binom(-p, k) for k = 0..n-1."""
    k = np.arange(1, n)
    return np.concatenate(([1.0], np.cumprod((-p - (k - 1)) / k)))


def _power_integral(r1, h, e):
    """int_{r1}^{r1+h} r^(e-1) dr for r1 > 0, uniform in e (including e = 0)."""
    L = np.log1p(h / r1)
    return np.power(r1, e) * L * exprel(e * L)


def moments(r1, h, p: float, m_max: int = 3) -> np.ndarray:
    """M_m(r1, h) = int_0^h t^m (r1 + t)^(-p) dt for m = 0..m_max.

    ``r1 >= 0`` and ``h >= 0`` are arrays of equal shape; the result has an extra
    trailing axis of length ``m_max + 1``.  Where ``r1 == 0`` the moment is
    finite only for ``m + 1 > p``; other entries are returned as ``inf`` and
    must carry a zero coefficient.
    """
    r1 = np.asarray(r1, dtype=float)
    h = np.asarray(h, dtype=float)
    out = np.zeros(r1.shape + (m_max + 1,))
    ms = np.arange(m_max + 1)

    zero = r1 == 0.0
    pos = ~zero & (h > 0.0)
    far = pos & (h <= _SERIES_RATIO * r1)
    near = pos & ~far

    if np.any(zero):
        hz = h[zero][:, None]
        e = ms + 1.0 - p
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.where(e > 0, np.power(hz, e) / np.where(e > 0, e, 1.0), np.inf)
        val = np.where(hz == 0.0, 0.0, val)
        out[zero] = val

    if np.any(far):
        rf, hf = r1[far], h[far]
        q = hf / rf
        c = _binom_neg(p, _SERIES_TERMS)
        k = np.arange(_SERIES_TERMS)
        qk = np.power(q[:, None], k[None, :])
        # sum_k c_k q^k / (m + k + 1)
        ser = (qk * c[None, :])[:, None, :] / (ms[None, :, None] + k[None, None, :] + 1.0)
        ser = ser.sum(axis=-1)
        scale = np.power(rf, -p)[:, None] * np.power(hf[:, None], ms[None, :] + 1.0)
        out[far] = scale * ser

    if np.any(near):
        rn, hn = r1[near], h[near]
        E = np.stack([_power_integral(rn, hn, j + 1.0 - p) for j in range(m_max + 1)], axis=-1)
        for m in range(m_max + 1):
            acc = np.zeros_like(rn)
            for j in range(m + 1):
                acc = acc + math.comb(m, j) * np.power(-rn, m - j) * E[:, j]
            out[near, m] = acc
    return out


# ---------------------------------------------------------------------------
# pair integrals


def _pieces(la, lb, sa, sb, d0):
    """Per-piece data (tau_start, h, A0, A1, w0, w1) of the line-integral reduction.

    Along the line xi + eta = tau (xi from the right end of A leftwards, eta from
    the left end of B rightwards) the numerator is A(t) + beta z with z centred
    on the line's chord, where t = tau - tau_start and the chord width is
    w(t) = w0 + w1 t.
    """
    m_ = np.minimum(la, lb)
    M_ = np.maximum(la, lb)
    a_short = la <= lb
    half = -(sa + sb) / 2.0

    # piece 1: tau in [0, m_], xi in [0, tau]
    p1 = (np.zeros_like(la), m_, d0, half, np.zeros_like(la), np.ones_like(la))

    # piece 2: tau in [m_, M_]
    # chord means: xi and eta both start at m_/2 when t = 0
    A0_2 = d0 - (sa + sb) * m_ / 2.0
    A1_2 = np.where(a_short, -sb, -sa)
    p2 = (m_, M_ - m_, A0_2, A1_2, m_, np.zeros_like(la))

    # piece 3: tau in [M_, la + lb], chord width m_ - t
    A0_3 = np.where(
        a_short,
        d0 - sa * (la / 2.0) - sb * (lb - la / 2.0),
        d0 - sa * (la - lb / 2.0) - sb * (lb / 2.0),
    )
    p3 = (M_, m_, A0_3, half, m_, -np.ones_like(la))
    return p1, p2, p3


def _poly_mul(a, b):
    n = a.shape[-1] + b.shape[-1] - 1
    out = np.zeros(a.shape[:-1] + (n,))
    for i in range(a.shape[-1]):
        out[..., i : i + b.shape[-1]] += a[..., i : i + 1] * b
    return out


def line_pieces(g, la, lb, sa, sb, d0, q: int = 2):
    """Reduce I_q to three one-dimensional integrals over the distance r = y - x.

    Returns a list of ``(r_start, h, P)`` with ``P[..., m]`` the coefficient of
    ``t^m`` such that I_q = sum over pieces of int_0^h P(t) K(r_start + t) dt
    for the kernel K(r) = r^(-p).  Arguments are flat arrays of equal length.
    """
    beta = sb - sa
    out = []
    for tau0, h, A0, A1, w0, w1 in _pieces(la, lb, sa, sb, d0):
        A = np.stack([A0, A1], axis=-1)
        w = np.stack([w0, w1], axis=-1)
        if q == 1:
            P = _poly_mul(A, w)
        elif q == 2:
            P = _poly_mul(_poly_mul(A, A), w)
            w3 = _poly_mul(_poly_mul(w, w), w)
            P = P + (beta**2 / 12.0)[:, None] * w3
        else:
            raise ValueError("numerator power q must be 1 or 2")
        out.append((g + tau0, h, P))
    return out


def _flat(*vals):
    vals = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in vals))
    return [np.ravel(v) for v in vals]


def pair_integrals(g, la, lb, sa, sb, d0, s, q: int = 2) -> np.ndarray:
    """Vectorised I_q for segments A = [a_hi - la, a_hi], B = [a_hi + g, a_hi + g + lb].

    ``sa``/``sb`` are the slopes and ``d0 = v_A(a_hi) - v_B(b_lo)`` is the value
    jump across the gap.  All arguments broadcast; ``g >= 0``.  With ``g == 0``
    and ``d0 != 0`` the integral is finite only for ``s < 1/2`` (caller checks).
    """
    p = as_exponent(s).p
    g, la, lb, sa, sb, d0 = _flat(g, la, lb, sa, sb, d0)
    total = np.zeros((3, g.size))
    for k, (r0, h, P) in enumerate(line_pieces(g, la, lb, sa, sb, d0, q)):
        M = moments(r0, h, p, m_max=P.shape[-1] - 1)
        with np.errstate(invalid="ignore"):
            terms = np.where(P == 0.0, 0.0, P * M)
        total[k] = terms.sum(axis=-1)
    return total.sum(axis=0)


def self_segment_energy(length: float, slope: float, s) -> float:
    """int_I int_I slope^2 |x - y|^(1-2s) dx dy over an interval of the given length."""
    ke = as_exponent(s)
    if not length > 0:
        raise ValueError(f"segment length must be positive, got {length}")
    return slope * slope * length**ke.e2 / ((1.0 - ke.s) * ke.e2)


def _snap_tolerance(*vals: float) -> float:
    return 64.0 * np.finfo(float).eps * max(1.0, *(abs(v) for v in vals))


def _ordered(a: Segment, b: Segment):
    """Return (left, right, sign) with left.hi <= right.lo up to rounding."""
    if a.hi <= b.lo + _snap_tolerance(a.hi, b.lo):
        return a, b, 1.0
    if b.hi <= a.lo + _snap_tolerance(b.hi, a.lo):
        return b, a, -1.0
    raise SegmentError(f"segments [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}] overlap")


def _pair(a: Segment, b: Segment, s, q: int, allow_jump: bool) -> float:
    ke = as_exponent(s)
    if a == b:
        return self_segment_energy(a.length, a.slope, ke) if q == 2 else 0.0
    left, right, sign = _ordered(a, b)
    g = right.lo - left.hi
    if abs(g) <= _snap_tolerance(right.lo, left.hi):
        g = 0.0
    d0 = left.value_at_hi - right.value_at_lo
    if g == 0.0:
        scale = max(abs(left.value_at_hi), abs(right.value_at_lo))
        if abs(d0) <= _snap_tolerance(scale):
            d0 = 0.0
        elif not allow_jump:
            raise SegmentError(
                f"touching segments at x={left.hi} with value jump {d0}; pass allow_jump=True"
            )
        elif ke.s >= 0.5:
            raise SegmentError("a value jump makes the integral diverge for s >= 1/2")
    val = pair_integrals(g, left.length, right.length, left.slope, right.slope, d0, ke, q)[0]
    # the linear numerator is antisymmetric under exchanging the two segments
    return float(val if q == 2 else sign * val)


def segment_pair_energy(a: Segment, b: Segment, s, allow_jump: bool = False) -> float:
    """int_a int_b (v_a(x) - v_b(y))^2 / |x - y|^(1+2s) dy dx.

    Identical segments give the self-interaction; otherwise the interiors must be
    disjoint.  A value jump at a shared endpoint is accepted only with
    ``allow_jump`` and only for ``s < 1/2``.
    """
    return _pair(a, b, s, 2, allow_jump)


def segment_pair_linear(a: Segment, b: Segment, s, allow_jump: bool = False) -> float:
    """int_a int_b (v_a(x) - v_b(y)) / |x - y|^(1+2s) dy dx (antisymmetric in a, b)."""
    return _pair(a, b, s, 1, allow_jump)
