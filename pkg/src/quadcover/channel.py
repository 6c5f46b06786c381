"""Air-to-ground channel at the footprint boundary.

The LoS probability is the usual two-parameter sigmoid in the elevation
angle (degrees). Path loss mixes LoS and NLoS free-space-plus-excess
losses with that probability; the worst case sits at the far boundary
point of the footprint. :func:`max_path_loss` evaluates the unified
closed form through the kernels, :func:`composed_max_path_loss` rebuilds
it step by step from :mod:`quadcover.placement` and serves as its check.
"""

import math
from dataclasses import dataclass

from . import kernels, placement
from .errors import OutOfRange, UnknownPreset, ValidationError

SPEED_OF_LIGHT = 299792458.0


@dataclass(frozen=True)
class Environment:
    name: str
    xi_los: float
    xi_nlos: float
    eta: float
    kappa: float

    def __post_init__(self):
        vals = (self.xi_los, self.xi_nlos, self.eta, self.kappa)
        if not all(math.isfinite(v) for v in vals):
            raise ValidationError("environment", "parameters must be finite")
        if not self.xi_nlos >= self.xi_los >= 0:
            raise ValidationError("environment.xi", "need xi_nlos >= xi_los >= 0")
        if not self.eta > 0:
            raise ValidationError("environment.eta", "eta must be > 0")
        if not self.kappa > 0:
            raise ValidationError("environment.kappa", "kappa must be > 0")


PRESETS = {
    "suburban": Environment("suburban", 0.1, 21.0, 4.88, 0.43),
    "urban": Environment("urban", 1.0, 20.0, 9.61, 0.16),
    "dense-urban": Environment("dense-urban", 1.6, 23.0, 12.08, 0.11),
    "highrise-urban": Environment("highrise-urban", 2.3, 34.0, 27.23, 0.08),
}


def environment(name) -> Environment:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset("environment",
                            f"unknown preset {name!r}; choose from {sorted(PRESETS)}")


@dataclass(frozen=True)
class LinkBudget:
    freq: float = 2e9
    pt_dbm: float = 20.0
    pn_dbm: float = -120.0
    g0_db: float = 5.0
    m: float = 2.0
    gr_db: float = 0.0

    def __post_init__(self):
        if not (self.freq > 0 and math.isfinite(self.freq)):
            raise ValidationError("link.freq", "frequency must be positive")
        if not (self.m >= 0 and math.isfinite(self.m)):
            raise ValidationError("link.m", "directivity factor must be >= 0")
        for name in ("pt_dbm", "pn_dbm", "g0_db", "gr_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"link.{name}", "must be finite")

    @property
    def pt_watts(self) -> float:
        return 10.0 ** ((self.pt_dbm - 30.0) / 10.0)


def fspl_db(freq):
    """``20 log10(4 pi f / c)``: free-space loss at 1 m."""
    return 20.0 * math.log10(4.0 * math.pi * freq / SPEED_OF_LIGHT)


def kernel_params(link: LinkBudget, env: Environment):
    return (fspl_db(link.freq), env.xi_los, env.xi_nlos, env.eta, env.kappa,
            link.pt_dbm, link.g0_db, link.m, link.gr_db, link.pn_dbm)


def los_probability(phi_deg, env: Environment):
    """``1 / (1 + eta exp(-kappa (phi - eta)))`` with ``phi`` in degrees."""
    if not 0.0 < phi_deg <= 90.0:
        raise OutOfRange(f"elevation {phi_deg} deg outside (0, 90]")
    return 1.0 / (1.0 + env.eta * math.exp(-env.kappa * (phi_deg - env.eta)))


def path_loss_components(d, link: LinkBudget, env: Environment):
    """LoS and NLoS path loss (dB) at slant distance ``d``."""
    if not (d > 0 and math.isfinite(d)):
        raise OutOfRange(f"distance must be positive, got {d}")
    base = 20.0 * math.log10(d) + fspl_db(link.freq)
    return base + env.xi_los, base + env.xi_nlos


def max_path_loss(a, b, h, link: LinkBudget, env: Environment):
    """Boundary path loss (dB) from the unified closed form."""
    placement._check(a, b, h)
    return kernels.pl_max(a, b, h, kernel_params(link, env))


def composed_max_path_loss(a, b, h, link: LinkBudget, env: Environment):
    """Same quantity assembled from elevation, LoS probability and slant range."""
    p = los_probability(placement.boundary_elevation(a, b, h), env)
    los, nlos = path_loss_components(placement.boundary_distance(a, b, h), link, env)
    return p * los + (1.0 - p) * nlos


def antenna_gain_db(theta, g0_db, m):
    """``G0 cos^m(theta)`` in dB."""
    if m == 0:
        return g0_db
    if not abs(theta) < math.pi / 2:
        raise OutOfRange(f"|theta| = {abs(theta)} must be below pi/2 when m > 0")
    return g0_db + 10.0 * m * math.log10(math.cos(theta))


def min_snr_db(a, b, h, link: LinkBudget, env: Environment):
    """Boundary SNR (dB) with the transmit gain taken at the beam edge."""
    placement._check(a, b, h)
    return kernels.snr_db(a, b, h, kernel_params(link, env))


def min_snr_linear(a, b, h, link: LinkBudget, env: Environment):
    return 10.0 ** (min_snr_db(a, b, h, link, env) / 10.0)
