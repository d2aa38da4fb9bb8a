"""Half-plane capacity and tangent-disk area of planar hulls.

Quick start::

    >>> from hcaplab import Hull, VSlit, hcap_wos, hsiz_quadtree
    >>> h = Hull.of(VSlit(0.0, 1.0))
    >>> round(hsiz_quadtree(h, 1e-2).value, 1)
    3.1
"""
from ._walk import BACKEND, available_backends
from .capacity import (
    BoundConstants,
    CapEstimate,
    ConvergenceError,
    NoExactFormula,
    ProbEstimate,
    bound_constants,
    bound_constants_mp,
    hcap_exact,
    hcap_integral,
    hcap_wos,
    strip_exit_prob,
    strip_exit_prob_mc,
)
from .cover import Cover, CoverElement, coverage_check, cover_sums, greedy_cover
from .hsiz import AreaResult, BudgetExceeded, hsiz_mc, hsiz_quadtree, hsiz_rect
from .hull import Box, HalfDisk, Hull, HullError, Point, Rect, Slit, VSlit
from .loewner import DrivingFunction, hcap_zipper, loewner_evolve, slit_map_apply, zip_slit
from .verify import TheoremReport, constants_report, extremal_scan, property_suite, theorem1_check

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "available_backends",
    "AreaResult",
    "BoundConstants",
    "Box",
    "BudgetExceeded",
    "CapEstimate",
    "ConvergenceError",
    "Cover",
    "CoverElement",
    "DrivingFunction",
    "HalfDisk",
    "Hull",
    "HullError",
    "NoExactFormula",
    "Point",
    "ProbEstimate",
    "Rect",
    "Slit",
    "TheoremReport",
    "VSlit",
    "bound_constants",
    "bound_constants_mp",
    "constants_report",
    "coverage_check",
    "cover_sums",
    "extremal_scan",
    "greedy_cover",
    "hcap_exact",
    "hcap_integral",
    "hcap_wos",
    "hcap_zipper",
    "hsiz_mc",
    "hsiz_quadtree",
    "hsiz_rect",
    "loewner_evolve",
    "property_suite",
    "slit_map_apply",
    "strip_exit_prob",
    "strip_exit_prob_mc",
    "theorem1_check",
    "zip_slit",
]
