"""Fractional seminorm energies of periodic two-slope profiles."""

__version__ = "0.1.0"

from .energy import CertificationError, EnergyResult, energy, energy_breakdown, energy_s0, energy_s1
from .kernel import BRANCH_WINDOW, Segment, SegmentError, segment_pair_energy
from .laplacian import frac_laplacian_avg, frac_laplacian_point
from .misfit import MisfitInputs, misfit_solve
from .optimize import DescentOptions, brute_force, minimize_gaps
from .oracle import OracleFailure, quadrature_oracle
from .profile import (
    AdmissibilityError,
    GapConfiguration,
    ProblemParams,
    TwoSlopeProfile,
    build_canonical,
    from_gaps,
)

__all__ = [
    "__version__",
    "BRANCH_WINDOW",
    "AdmissibilityError",
    "CertificationError",
    "DescentOptions",
    "EnergyResult",
    "GapConfiguration",
    "MisfitInputs",
    "OracleFailure",
    "ProblemParams",
    "Segment",
    "SegmentError",
    "TwoSlopeProfile",
    "brute_force",
    "build_canonical",
    "energy",
    "energy_breakdown",
    "energy_s0",
    "energy_s1",
    "frac_laplacian_avg",
    "frac_laplacian_point",
    "from_gaps",
    "minimize_gaps",
    "misfit_solve",
    "quadrature_oracle",
    "segment_pair_energy",
]
