"""Elliptical UAV footprints over convex quadrilaterals and the altitude that serves them best."""

from .geometry import (Conic, EllipseGeo, max_inscribed_ellipse, min_circumscribed_ellipse,
                       validate_quadrilateral)
from .channel import Environment, LinkBudget, environment
from .energy import MissionSpec, PropulsionParams
from .optimizer import (OptimizerSettings, optimal_altitude_energy, optimal_altitude_pathloss,
                        optimal_altitude_snr)
from .scenario import Scenario, load_scenario
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Conic", "EllipseGeo", "Environment", "LinkBudget", "MissionSpec",
    "OptimizerSettings", "PropulsionParams", "Scenario", "environment", "load_scenario",
    "max_inscribed_ellipse", "min_circumscribed_ellipse", "optimal_altitude_energy",
    "optimal_altitude_pathloss", "optimal_altitude_snr", "validate_quadrilateral",
]
