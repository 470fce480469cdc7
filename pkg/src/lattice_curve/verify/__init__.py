"""Randomized campaign, sharpness constructions and the curvature-intersection check."""

from .campaign import CampaignConfig, CampaignReport, run_campaign, run_trial
from .intersection import IntersectionVerdict, check_curvature_intersection, circle_intersections
from .sharpness import (
    SharpnessReport,
    build_parabolic_instance,
    build_schinzel_instance,
    parabolic_sweep,
    schinzel_area,
    schinzel_sweep,
    sharpness_sweep,
)

__all__ = [
    "CampaignConfig", "CampaignReport", "IntersectionVerdict", "SharpnessReport",
    "build_parabolic_instance", "build_schinzel_instance", "check_curvature_intersection",
    "circle_intersections", "parabolic_sweep", "run_campaign", "run_trial", "schinzel_area",
    "schinzel_sweep", "sharpness_sweep",
]
