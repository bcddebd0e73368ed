"""Quadrature oracle for the segment-pair integrals.

Independent of the closed forms in :mod:`twoslope.kernel`: the integrand is
sampled directly on a tensor Gauss-Legendre rule over a mesh that is graded
geometrically toward the nearest corner of the two segments (the only point
where the kernel can be singular for disjoint segments).  Self-interactions are
split along the diagonal and mapped so the singular set becomes an edge.  The
error estimate compares two rules of different order on the same mesh.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .kernel import Segment, SegmentError, as_exponent, _ordered, _snap_tolerance

__all__ = [
    "OracleFailure",
    "quadrature_oracle",
    "oracle_pair",
    "oracle_energy",
    "oracle_point_laplacian",
]

_GRADE = 0.3
_LOW, _HIGH = 12, 18


class OracleFailure(RuntimeError):
    """The oracle could not reach the requested tolerance within its budget."""


@lru_cache(maxsize=None)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def _layers(R: float, g: float, depth: int) -> np.ndarray:
    """Breakpoints R q^k down to the gap scale (or ``depth`` levels when touching)."""
    pts = [R]
    k = 0
    while k < depth and not (g > 0 and pts[-1] <= g):
        pts.append(pts[-1] * _GRADE)
        k += 1
    return np.array(pts[::-1])


def _cells(la: float, lb: float, g: float, depth: int):
    """L-shaped layers around the corner (0, 0) in (xi, eta), clipped to the rectangle.

    The first cell returned is the innermost square.
    """
    rho = _layers(max(la, lb), g, depth)
    inner = rho[0]
    cells = [(0.0, min(inner, la), 0.0, min(inner, lb))]
    for lo, hi in zip(rho[:-1], rho[1:]):
        xa, xb = min(lo, la), min(hi, la)
        ya, yb = min(lo, lb), min(hi, lb)
        # shell [0,hi]^2 \ [0,lo]^2 as three rectangles
        if xb > xa:
            cells.append((xa, xb, 0.0, ya))
        if yb > ya:
            cells.append((0.0, xa, ya, yb))
        if xb > xa and yb > ya:
            cells.append((xa, xb, ya, yb))
    return [c for c in cells if c[1] > c[0] and c[3] > c[2]]


@lru_cache(maxsize=None)
def _jacobi(n: int, gamma: float):
    """Nodes/weights on [0, 1] for the weight a^gamma."""
    x, w = roots_jacobi(n, 0.0, gamma)
    return (x + 1.0) / 2.0, w / 2.0 ** (gamma + 1.0)


def _corner(rx, ry, sa, sb, d0, p, q, n):
    """Touching corner cell [0, rx] x [0, ry] via a Duffy split.

    On each triangle the radial variable a carries the exact factor a^(1-p),
    times a^q when the values match at the contact point; what remains is
    polynomial in a, so Gauss-Jacobi in a is exact and Gauss-Legendre handles
    the angular variable.
    """
    k = q if d0 == 0.0 else 0
    a, wa = _jacobi(n, 1.0 - p + k)
    b, wb = _gauss(n)
    A, B = a[:, None], b[None, :]
    W = wa[:, None] * wb[None, :]
    total = 0.0
    one = np.ones_like(B)
    # xi = rx a, eta = ry a b  and  eta = ry a, xi = rx a b; Jacobian rx ry a
    for xi_fac, eta_fac in ((rx * one, ry * B), (rx * B, ry * one)):
        lin = xi_fac + eta_fac
        slope_part = sa * xi_fac + sb * eta_fac
        num = -slope_part * one if k else d0 - A * slope_part
        f = num**q * lin ** (-p) * rx * ry
        total += float(np.sum(f * W))
    return total


def _rule(cells, n: int):
    t, w = _gauss(n)
    c = np.array(cells)
    x0, x1, y0, y1 = c.T
    X = x0[:, None] + (x1 - x0)[:, None] * t[None, :]
    Y = y0[:, None] + (y1 - y0)[:, None] * t[None, :]
    WX = (x1 - x0)[:, None] * w[None, :]
    WY = (y1 - y0)[:, None] * w[None, :]
    X = np.repeat(X[:, :, None], n, axis=2)
    Y = np.repeat(Y[:, None, :], n, axis=1)
    W = WX[:, :, None] * WY[:, None, :]
    return X.ravel(), Y.ravel(), W.ravel()


def _disjoint(g, la, lb, sa, sb, d0, p, q, n, depth):
    cells = _cells(la, lb, g, depth)
    total = 0.0
    if g == 0.0:
        x0, x1, y0, y1 = cells.pop(0)
        total += _corner(x1, y1, sa, sb, d0, p, q, n)
    xi, eta, w = _rule(cells, n)
    num = d0 - sa * xi - sb * eta
    return total + float(np.sum(num**q * (g + xi + eta) ** (-p) * w))


def _self(length, slope, p, q, n, depth):
    """Both variables on one segment: x < y half mapped to (r, u) with x = (len - r) u."""
    if q == 1:
        return 0.0
    rho = _layers(length, 0.0, depth)
    t, w = _gauss(n)
    r = (rho[:-1, None] + np.diff(rho)[:, None] * t[None, :]).ravel()
    wr = (np.diff(rho)[:, None] * w[None, :]).ravel()
    # integrand is independent of u: sample it anyway on a rule in u
    u, wu = t, w
    R = r[:, None] * np.ones_like(u)[None, :]
    # v(x) - v(x + r) = -slope r; forming x - y numerically would cancel
    f = (slope * R) ** 2 * R ** (-p) * (length - R)
    graded = float(np.sum(f * wr[:, None] * wu[None, :]))
    # innermost cell [0, rho0]: the factor r^(2-p) is carried by the Jacobi weight
    r0 = rho[0]
    a, wa = _jacobi(n, 2.0 - p)
    inner = slope**2 * r0 ** (3.0 - p) * float(np.sum(wa * (length - r0 * a)))
    return 2.0 * (graded + inner)


def _evaluate(a: Segment, b: Segment, p: float, q: int, n: int, depth: int, allow_jump: bool):
    if a == b:
        return _self(a.length, a.slope, p, q, n, depth)
    left, right, sign = _ordered(a, b)
    g = right.lo - left.hi
    if abs(g) <= _snap_tolerance(right.lo, left.hi):
        g = 0.0
    d0 = left.value_at_hi - right.value_at_lo
    if g == 0.0:
        if abs(d0) <= _snap_tolerance(left.value_at_hi, right.value_at_lo):
            d0 = 0.0
        elif not allow_jump:
            raise SegmentError("touching segments with a value jump; pass allow_jump=True")
    val = _disjoint(g, left.length, right.length, left.slope, right.slope, d0, p, q, n, depth)
    return val if q == 2 else sign * val


def oracle_pair(a: Segment, b: Segment, s, tol: float = 1e-10, q: int = 2,
                allow_jump: bool = False, max_depth: int = 120) -> tuple[float, float]:
    """Return (value, error estimate) of the q-th power pair integral.

    The estimate is the difference between rules of order 12 and 18 on the same
    graded mesh; the mesh is deepened until the estimate is below
    ``tol * max(1, |value|)`` or the depth budget is exhausted.
    """
    p = as_exponent(s).p
    if tol <= 0:
        raise ValueError("tol must be positive")
    depth = 40
    while True:
        lo = _evaluate(a, b, p, q, _LOW, depth, allow_jump)
        hi = _evaluate(a, b, p, q, _HIGH, depth, allow_jump)
        err = abs(hi - lo)
        if np.isfinite(hi) and err <= tol * max(1.0, abs(hi)):
            return hi, err
        depth *= 2
        if depth > max_depth:
            raise OracleFailure(
                f"quadrature oracle stalled at error {err:.3e} (tol {tol:.1e}) "
                f"for segments {a} and {b}"
            )


def quadrature_oracle(a: Segment, b: Segment, s, tol: float = 1e-10,
                      allow_jump: bool = False) -> float:
    """Oracle value of int_a int_b (v_a(x) - v_b(y))^2 |x - y|^(-1-2s) dy dx."""
    return oracle_pair(a, b, s, tol, q=2, allow_jump=allow_jump)[0]


def _tail_tensor(a: Segment, b: Segment, T: float, p: float, k_first: int, q: int, n: int):
    """int_a int_b (v_a - v_b)^q sum_{k >= k_first} (y + kT - x)^(-p) by tensor Gauss."""
    from scipy.special import zeta

    t, w = _gauss(n)
    x = a.lo + a.length * t
    y = b.lo + b.length * t
    X, Y = x[:, None], y[None, :]
    num = (a.value(X) - b.value(Y)) ** q
    kern = T ** (-p) * zeta(p, (Y - X) / T + k_first)
    W = (a.length * w)[:, None] * (b.length * w)[None, :]
    return float(np.sum(num * kern * W))


def oracle_energy(pw, s, tol: float, near: int = 2, allow_jump: bool = False):
    """Energy of a periodic profile assembled entirely from oracle quadratures."""
    from .energy import EnergyResult

    p = as_exponent(s).p
    T = pw.period
    segs = pw.segments()
    inner, errs = [], []
    for i, a in enumerate(segs):
        for j in range(i, len(segs)):
            v, e = oracle_pair(a, segs[j], s, tol, allow_jump=allow_jump)
            inner.append(v if i == j else 2.0 * v)
            errs.append(e if i == j else 2.0 * e)
    outer = []
    for k in range(1, near + 1):
        for a in segs:
            for b in segs:
                v, e = oracle_pair(a, b.shifted(k * T), s, tol, allow_jump=allow_jump)
                outer.append(v)
                errs.append(2.0 * e)
    for a in segs:
        for b in segs:
            hi = _tail_tensor(a, b, T, p, near + 1, 2, 32)
            lo = _tail_tensor(a, b, T, p, near + 1, 2, 24)
            outer.append(hi)
            errs.append(2.0 * abs(hi - lo))
    value = (math.fsum(inner) + 2.0 * math.fsum(outer)) / (2.0 * T)
    return EnergyResult(value, math.fsum(errs) / (2.0 * T), near, "oracle")


def oracle_point_laplacian(pw, x: float, s, periods: int = 20000, n: int = 24) -> float:
    """(-Delta)^s u(x) from the symmetrised integrand 2u(x) - u(x+t) - u(x-t).

    Gauss-Legendre on every piece between breakpoints of the integrand out to
    ``periods`` periods; beyond that the integrand is replaced by its period
    mean, which leaves an error of order (periods T)^(-1-2s).
    """
    p = as_exponent(s).p
    T = pw.period
    ux = float(pw.value(x))
    # breakpoints of t -> u(x + t) and u(x - t) within one period of t
    kinks = np.concatenate((pw.lo, pw.hi))
    bp = np.concatenate(((kinks - x) % T, (x - kinks) % T, [0.0, T]))
    bp = np.unique(np.clip(bp, 0.0, T))
    t_nodes, w_nodes = _gauss(n)
    acc = []
    for k in range(periods):
        a = bp[:-1] + k * T
        b = bp[1:] + k * T
        keep = b > a
        a, b = a[keep], b[keep]
        t = a[:, None] + (b - a)[:, None] * t_nodes[None, :]
        wt = (b - a)[:, None] * w_nodes[None, :]
        g = 2.0 * ux - pw.value(x + t) - pw.value(x - t)
        acc.append(float(np.sum(g * t ** (-p) * wt)))
    mean = 2.0 * (ux - pw.mean())
    R = periods * T
    acc.append(mean * R ** (1.0 - p) / (p - 1.0))
    return 2.0 * math.fsum(acc)
