"""Interface energy of a semi-coherent bilayer with periodic misfit dislocations.

Two elastic half-planes with lattice spacings ``c_plus <= c_minus`` share the
misfit ``m = (c_minus - c_plus) / c`` (``c`` the mean spacing).  The top takes
the fraction ``alpha`` of the displacement jump and the bottom ``1 - alpha``;
each dislocation core has width ``eps = c (alpha + 1)`` and cores sit
``Delta = c / m + eps`` apart.  The energy per unit length is the s = 1/2
seminorm density of the canonical two-slope profile with
``delta = (alpha + 1) m``, ``Lambda = 1 / delta``, weighted by the half-plane
trace constants ``G / (2 pi (1 - nu))``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

from .energy import energy
from .profile import ProblemParams, build_canonical

__all__ = [
    "MisfitInputs",
    "MisfitReport",
    "alpha_min",
    "trace_energy_constant",
    "prefactor",
    "plastic_slopes",
    "misfit_solve",
    "SEMI_COHERENT_LIMIT",
]

SEMI_COHERENT_LIMIT = 0.2


def _check_material(G: float, nu: float):
    if not G > 0:
        raise ValueError(f"shear modulus must be positive, got {G}")
    if not -0.5 < nu < 1.0:
        raise ValueError(f"Poisson ratio must lie in (-1/2, 1), got {nu}")


@dataclass(frozen=True)
class MisfitInputs:
    G_plus: float
    G_minus: float
    nu_plus: float
    nu_minus: float
    c_plus: float
    c_minus: float

    def __post_init__(self):
        _check_material(self.G_plus, self.nu_plus)
        _check_material(self.G_minus, self.nu_minus)
        if not self.c_plus > 0:
            raise ValueError("c_plus must be positive")
        if self.c_minus < self.c_plus:
            raise ValueError("c_minus must be at least c_plus")

    @property
    def c(self) -> float:
        return 0.5 * (self.c_plus + self.c_minus)

    @property
    def m(self) -> float:
        return (self.c_minus - self.c_plus) / self.c

    @classmethod
    def symmetric(cls, G: float, nu: float, c: float, m: float) -> "MisfitInputs":
        """Equal materials with mean spacing ``c`` and misfit ``m``."""
        half = c * m / 2.0
        return cls(G, G, nu, nu, c - half, c + half)


@dataclass(frozen=True)
class MisfitReport:
    c: float
    m: float
    alpha_min: float
    epsilon_core: float
    Delta: float
    prefactor: float
    leading_density: float
    finite_delta_density: float
    finite_delta_tail_bound: float
    coherent: bool
    plastic_slopes_linear: tuple[float, float]
    plastic_slopes_nonlinear: tuple[float, float]
    delta: float
    core_multiple: int = 2

    def to_dict(self) -> dict:
        d = asdict(self)
        d["plastic_slopes_linear"] = list(self.plastic_slopes_linear)
        d["plastic_slopes_nonlinear"] = list(self.plastic_slopes_nonlinear)
        return d


def trace_energy_constant(G: float, nu: float) -> float:
    """Energy of a half-plane per unit seminorm of its boundary displacement, G / (2 pi (1 - nu))."""
    _check_material(G, nu)
    return G / (2.0 * math.pi * (1.0 - nu))


def alpha_min(inputs: MisfitInputs) -> float:
    """Split minimising alpha^2 A_plus + (1 - alpha)^2 A_minus."""
    a = inputs.G_minus * (1.0 - inputs.nu_plus)
    b = inputs.G_plus * (1.0 - inputs.nu_minus)
    return a / (a + b)


def prefactor(inputs: MisfitInputs) -> float:
    """G+ G- / (2 pi (G- (1 - nu+) + G+ (1 - nu-)))."""
    den = inputs.G_minus * (1.0 - inputs.nu_plus) + inputs.G_plus * (1.0 - inputs.nu_minus)
    return inputs.G_plus * inputs.G_minus / (2.0 * math.pi * den)


def plastic_slopes(inputs: MisfitInputs, alpha: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """Core strains (top, bottom): linearised and from the exact matching relation.

    Both satisfy (1 - alpha) m_plus = -alpha m_minus; the exact relation is
    (1 + m_plus) / (1 + m_minus) = c_minus / (2 c_plus), its linearisation
    m_plus - m_minus = -1 / (alpha + 1).
    """
    lin = (-alpha / (1.0 + alpha), (1.0 - alpha) / (1.0 + alpha))
    cp, cm = inputs.c_plus, inputs.c_minus
    den = cm * (1.0 - alpha) + 2.0 * cp * alpha
    nonlin = (-alpha * (2.0 * cp - cm) / den, (1.0 - alpha) * (2.0 * cp - cm) / den)
    return lin, nonlin


def misfit_solve(inputs: MisfitInputs, tol: float = 1e-10) -> MisfitReport:
    c, m = inputs.c, inputs.m
    alpha = alpha_min(inputs)
    eps = c * (alpha + 1.0)
    K = prefactor(inputs)
    lin, nonlin = plastic_slopes(inputs, alpha)
    if m == 0.0:
        return MisfitReport(c, 0.0, alpha, eps, math.inf, K, 0.0, 0.0, 0.0, True, lin, nonlin, 0.0)
    if m >= SEMI_COHERENT_LIMIT:
        warnings.warn(f"misfit m = {m:.3g} is outside the semi-coherent regime (m < 0.2)", stacklevel=2)
    Delta = c / m + eps
    leading = K * c * c / Delta * math.log(Delta / c)
    delta = (alpha + 1.0) * m
    if not delta < 1.0:
        raise ValueError(f"(alpha + 1) m = {delta} must be below 1")
    res = energy(build_canonical(ProblemParams.normalized(0.5, delta)), 0.5, tol)
    weight = alpha**2 * trace_energy_constant(inputs.G_plus, inputs.nu_plus) + (
        1.0 - alpha
    ) ** 2 * trace_energy_constant(inputs.G_minus, inputs.nu_minus)
    scale = weight * c * m
    return MisfitReport(
        c, m, alpha, eps, Delta, K, leading, scale * res.value, scale * res.tail_bound,
        False, lin, nonlin, delta,
    )
