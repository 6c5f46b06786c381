"""Beam geometry of a tilted directional antenna over an elliptical footprint.

For a footprint with semi-axes ``a >= b`` seen from altitude ``H``, the
UAV's ground projection lies on the major axis at horizontal offset
``x0`` from the ellipse centre. Angles are radians except the boundary
elevation, which is returned in degrees because the LoS sigmoid consumes
degrees.
"""

import math
from dataclasses import dataclass

from .errors import InvalidAxes


def _check(a, b, h):
    if not (b > 0 and a >= b and math.isfinite(a)):
        raise InvalidAxes(f"need a >= b > 0, got a={a}, b={b}")
    if not (h > 0 and math.isfinite(h)):
        raise InvalidAxes(f"altitude must be positive and finite, got {h}")


@dataclass(frozen=True)
class BeamGeometry:
    H: float
    psi: float
    theta: float
    x0: float
    phi_deg: float
    d: float

    @property
    def projection_inside(self) -> bool:
        return self.psi <= self.theta


def beam_angles(a, b, h):
    """Tilt ``psi`` and semi-apex ``theta`` (radians).

    ``cos psi = sqrt(b^2 H^2 + b^4) / sqrt(a^2 H^2 + b^4)`` and
    ``sin theta = b^2 / sqrt(a^2 H^2 + b^4)``, evaluated through ``atan2``
    of the matching sine and cosine so small angles keep full precision.
    """
    _check(a, b, h)
    psi = math.atan2(h * math.sqrt(a * a - b * b), b * math.sqrt(h * h + b * b))
    theta = math.atan2(b * b, a * h)
    return psi, theta


def center_offset(a, b, h):
    """``x0 = sqrt((b^2 + H^2)(a^2 - b^2)) / b``."""
    _check(a, b, h)
    return math.sqrt((b * b + h * h) * (a * a - b * b)) / b


def center_offset_piecewise(a, b, h):
    """``x0`` from the two tan expressions, picked by the ``psi``/``theta`` branch."""
    psi, theta = beam_angles(a, b, h)
    if psi <= theta:
        return a - h * math.tan(theta - psi)
    return a + h * math.tan(psi - theta)


def boundary_elevation(a, b, h):
    """Elevation angle (degrees) from the far footprint boundary to the UAV."""
    _check(a, b, h)
    root = math.sqrt((b * b + h * h) * (a * a - b * b))
    return math.degrees(math.atan(h * b / (a * b + root)))


def boundary_distance(a, b, h):
    """Slant range from the UAV to the far boundary point."""
    x0 = center_offset(a, b, h)
    return math.hypot(h, x0 + a)


def beam_geometry(a, b, h) -> BeamGeometry:
    psi, theta = beam_angles(a, b, h)
    return BeamGeometry(H=h, psi=psi, theta=theta, x0=center_offset(a, b, h),
                        phi_deg=boundary_elevation(a, b, h),
                        d=boundary_distance(a, b, h))
