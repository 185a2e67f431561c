"""Iterated planar Steiner symmetrization along the van der Corput sequence."""

__version__ = "0.1.0"

from .angles import DiscrepancyResult, DyadicAngle, discrepancy, gap, vdc_angle  # noqa: E402
from .experiment import ConvergenceReport, DirectionSequence, iterate  # noqa: E402
from .grid import (  # noqa: E402
    GridFunction,
    gauss_functional,
    nonradial_energy,
    rearrange_radial,
    rotate,
    sample,
    steiner_direction,
    steiner_vertical,
    sup_distance,
)
from .rearrange import rearrange_1d  # noqa: E402

__all__ = [
    "ConvergenceReport",
    "DirectionSequence",
    "DiscrepancyResult",
    "DyadicAngle",
    "GridFunction",
    "discrepancy",
    "gap",
    "gauss_functional",
    "iterate",
    "nonradial_energy",
    "rearrange_1d",
    "rearrange_radial",
    "rotate",
    "sample",
    "steiner_direction",
    "steiner_vertical",
    "sup_distance",
    "vdc_angle",
]
