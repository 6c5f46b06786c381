"""Rotary-wing propulsion power and total mission energy.

Mission profile: vertical takeoff from the footprint centre to altitude
``H``, level transit to the hover point, then hover while delivering the
payload at the Shannon rate of the boundary SNR.
"""

import math
from dataclasses import dataclass, fields

from . import channel, placement
from .errors import NonPositiveRate, ValidationError

TRANSIT_MODELS = ("horizontal", "slant", "published")


@dataclass(frozen=True)
class PropulsionParams:
    delta: float = 0.012
    rho: float = 1.225
    varsigma: float = 0.05
    area_rotor: float = 0.503
    u_tip: float = 120.0
    k_ind: float = 0.1
    weight_n: float = 20.0
    u0: float = 4.03
    drag_ratio: float = 0.6
    u_fwd: float = 20.0
    u_to: float = 3.0

    def __post_init__(self):
        for f in fields(self):
            val = getattr(self, f.name)
            ok = val >= 0 if f.name == "k_ind" else val > 0
            if not (ok and math.isfinite(val)):
                raise ValidationError(f"propulsion.{f.name}", f"invalid value {val}")

    @property
    def blade_profile_power(self) -> float:
        return self.delta / 8.0 * self.rho * self.varsigma * self.area_rotor * self.u_tip ** 3

    @property
    def induced_power(self) -> float:
        return (1.0 + self.k_ind) * self.weight_n ** 1.5 / math.sqrt(2.0 * self.rho * self.area_rotor)


@dataclass(frozen=True)
class MissionSpec:
    bandwidth_hz: float = 1e6
    payload_bits: float = 1e8
    pt_watts: float = None  # None: derived from the link budget's pt_dbm

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise ValidationError("mission.bandwidth_hz", "must be > 0")
        if not self.payload_bits > 0:
            raise ValidationError("mission.payload_bits", "must be > 0")
        if self.pt_watts is not None and not self.pt_watts > 0:
            raise ValidationError("mission.pt_watts", "must be > 0")


def hover_power(p: PropulsionParams) -> float:
    return p.blade_profile_power + p.induced_power


def forward_power(p: PropulsionParams, speed=None) -> float:
    """Level-flight power at ``speed`` (defaults to ``p.u_fwd``)."""
    u = p.u_fwd if speed is None else speed
    z1, z2 = p.blade_profile_power, p.induced_power
    r = u * u / (2.0 * p.u0 ** 2)
    induced = math.sqrt(math.sqrt(1.0 + r * r) - r)
    parasite = 0.5 * p.drag_ratio * p.rho * p.varsigma * p.area_rotor * u ** 3
    return z1 * (1.0 + 3.0 * u * u / p.u_tip ** 2) + z2 * induced + parasite


def vto_power(p: PropulsionParams, speed=None) -> float:
    u = p.u_to if speed is None else speed
    n = p.weight_n
    return (p.blade_profile_power + n * u / 2.0
            + n / 2.0 * math.sqrt(u * u + 2.0 * n / (p.rho * p.area_rotor)))


def transit_distance(a, b, h, model="horizontal"):
    """Distance flown in transit.

    ``published`` keeps the published expression (it divides by
    ``b^2`` where the geometry needs ``b``), ``slant`` is the straight
    line from the footprint centre on the ground to the hover point,
    ``horizontal`` is the level leg ``x0`` flown after the climb.
    """
    x0 = placement.center_offset(a, b, h)
    if model == "horizontal":
        return x0
    if model == "slant":
        return math.hypot(h, x0)
    if model == "published":
        return math.sqrt(h * h * b * b + (b * b + h * h) * (a * a - b * b)) / (b * b)
    raise ValidationError("transit_model", f"unknown model {model!r}; "
                          f"choose from {TRANSIT_MODELS}")


@dataclass(frozen=True)
class EnergyBreakdown:
    takeoff_j: float
    transit_j: float
    hover_j: float
    p_vto: float
    p_for: float
    p_hov: float
    rate_bps: float

    @property
    def total(self) -> float:
        return self.takeoff_j + self.transit_j + self.hover_j


def shannon_rate(a, b, h, link, env, mission: MissionSpec):
    gamma = channel.min_snr_linear(a, b, h, link, env)
    return mission.bandwidth_hz * math.log2(1.0 + gamma)


def energy_breakdown(a, b, h, link, env, p: PropulsionParams,
                     mission: MissionSpec, transit_model="horizontal"):
    rate = shannon_rate(a, b, h, link, env, mission)
    if not (rate > 0 and math.isfinite(rate)):
        raise NonPositiveRate(f"rate {rate} bit/s at H = {h} m")
    pt_w = link.pt_watts if mission.pt_watts is None else mission.pt_watts
    p_vto, p_for, p_hov = vto_power(p), forward_power(p), hover_power(p)
    return EnergyBreakdown(
        takeoff_j=p_vto * h / p.u_to,
        transit_j=p_for * transit_distance(a, b, h, transit_model) / p.u_fwd,
        hover_j=(p_hov + pt_w) * mission.payload_bits / rate,
        p_vto=p_vto, p_for=p_for, p_hov=p_hov, rate_bps=rate)


def total_energy(a, b, h, link, env, p, mission, transit_model="horizontal"):
    """Takeoff + transit + hover-and-transmit energy in joules."""
    return energy_breakdown(a, b, h, link, env, p, mission, transit_model).total
