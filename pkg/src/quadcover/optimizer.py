"""Optimal altitude by bracketed one-dimensional search.

Each objective is scanned on a log-spaced altitude grid to find a
bracketing triple, contracted by golden-section search, and the result is
certified by a central-difference slope at the reported optimum. Optima
on the edge of the search domain are flagged rather than reported as
stationary points.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import channel, energy, kernels, placement
from .errors import (EmptyFeasibleSet, NonFinite, NonPositiveRate, OutOfRange,
                     ValidationError)
from .scalar import golden_section

MAX_ITER = 500


@dataclass(frozen=True)
class OptimizerSettings:
    h_min: float = 1.0
    h_max: float = 10000.0
    tol: float = 0.01
    grid_points: int = 64

    def __post_init__(self):
        if not 0 < self.h_min < self.h_max:
            raise ValidationError("optimizer.h_min", "need 0 < h_min < h_max")
        if not self.tol > 0:
            raise ValidationError("optimizer.tol", "must be > 0")
        if int(self.grid_points) < 16:
            raise ValidationError("optimizer.grid_points", "must be >= 16")


@dataclass(frozen=True)
class Bracket:
    lo: float
    mid: float
    hi: float
    endpoint: Optional[str] = None      # "lo" / "hi" when the scan minimum is on the edge
    local_minima: tuple = ()            # grid altitudes of every interior local minimum
    domain: tuple = (None, None)


@dataclass(frozen=True)
class OptimizationResult:
    h_opt: float
    objective_value: float
    bracket: tuple
    iterations: int
    stationarity_residual: float
    boundary: Optional[str] = None
    local_minima: tuple = ()
    domain: tuple = (None, None)
    extra: dict = field(default_factory=dict)

    @property
    def interior(self) -> bool:
        return self.boundary is None


def _grid(lo, hi, n):
    return np.geomspace(lo, hi, int(n))


def _bracket_from_values(hs, vals, lo, hi):
    if not np.all(np.isfinite(vals)):
        bad = hs[~np.isfinite(vals)][0]
        raise NonFinite(f"objective is not finite at H = {bad:.6g} m")
    n = len(hs)
    minima = tuple(float(hs[i]) for i in range(1, n - 1)
                   if vals[i - 1] > vals[i] <= vals[i + 1])
    i = int(np.argmin(vals))
    if i == 0:
        return Bracket(float(hs[0]), float(hs[0]), float(hs[1]), "lo", minima, (lo, hi))
    if i == n - 1:
        return Bracket(float(hs[-2]), float(hs[-1]), float(hs[-1]), "hi", minima, (lo, hi))
    return Bracket(float(hs[i - 1]), float(hs[i]), float(hs[i + 1]), None, minima, (lo, hi))


def bracket_minimum(f, lo, hi, grid_points=64) -> Bracket:
    """Log-spaced scan of ``f`` on ``[lo, hi]`` around its smallest sample."""
    if not (lo > 0 and hi > lo):
        raise OutOfRange(f"need 0 < lo < hi, got ({lo}, {hi})")
    if grid_points < 16:
        raise OutOfRange("grid_points must be >= 16")
    hs = _grid(lo, hi, grid_points)
    vals = np.array([f(h) for h in hs], dtype=float)
    return _bracket_from_values(hs, vals, lo, hi)


def _slope(f, h, step, lo, hi):
    up, down = min(h + step, hi), max(h - step, lo)
    return (f(up) - f(down)) / (up - down)


def _finish(f, x, fx, it, br: Bracket, tol, extra=None):
    lo, hi = br.domain
    boundary = None
    # an edge optimum is reported at the edge itself, not inside the last bracket
    if br.endpoint == "lo" and x - lo <= tol:
        boundary, x = "lo", lo
        fx = f(lo)
    elif br.endpoint == "hi" and hi - x <= tol:
        boundary, x = "hi", hi
        fx = f(hi)
    if not math.isfinite(fx):
        raise NonFinite(f"objective is not finite at H = {x:.6g} m")
    step = max(tol, 1e-3 * x)
    return OptimizationResult(
        h_opt=x, objective_value=fx, bracket=(br.lo, br.hi), iterations=it,
        stationarity_residual=abs(_slope(f, x, step, lo, hi)), boundary=boundary,
        local_minima=br.local_minima, domain=br.domain, extra=extra or {})


def minimize_scalar(f, bracket: Bracket, tol_m=0.01) -> OptimizationResult:
    """Golden-section contraction of ``bracket`` to width ``tol_m``."""
    if not tol_m > 0:
        raise OutOfRange("tol_m must be > 0")
    x, fx, it, _ = golden_section(f, bracket.lo, bracket.hi, tol_m, MAX_ITER)
    return _finish(f, x, fx, it, bracket, tol_m)


def _optimize_channel(kind, a, b, link, env, settings: OptimizerSettings):
    params = channel.kernel_params(link, env)
    hs = _grid(settings.h_min, settings.h_max, settings.grid_points)
    vals = np.empty_like(hs)
    kernels.objective_grid(kind, a, b, hs, vals, params)
    br = _bracket_from_values(hs, vals, settings.h_min, settings.h_max)
    x, fx, it, _, _ = kernels.golden_channel(kind, a, b, br.lo, br.hi,
                                             settings.tol, MAX_ITER, params)

    def f(h):
        return kernels.objective(kind, a, b, h, params)

    return _finish(f, x, fx, it, br, settings.tol)


def _check_axes(a, b):
    placement._check(a, b, 1.0)


def optimal_altitude_pathloss(a, b, link, env, settings=None) -> OptimizationResult:
    """Altitude minimizing the boundary path loss."""
    _check_axes(a, b)
    return _optimize_channel(kernels.PATHLOSS, a, b, link, env,
                             settings or OptimizerSettings())


def optimal_altitude_snr(a, b, link, env, settings=None) -> OptimizationResult:
    """Altitude maximizing the boundary SNR; ``objective_value`` is the SNR in dB."""
    _check_axes(a, b)
    res = _optimize_channel(kernels.NEG_SNR, a, b, link, env,
                            settings or OptimizerSettings())
    return OptimizationResult(**{**res.__dict__, "objective_value": -res.objective_value})


def optimal_altitude_energy(a, b, link, env, p, mission,
                            transit_model="horizontal", settings=None):
    """Altitude minimizing total mission energy over the positive-rate altitudes."""
    _check_axes(a, b)
    settings = settings or OptimizerSettings()

    def f(h):
        try:
            return energy.total_energy(a, b, h, link, env, p, mission, transit_model)
        except NonPositiveRate:
            return math.inf

    hs = _grid(settings.h_min, settings.h_max, settings.grid_points)
    vals = np.array([f(h) for h in hs])
    feasible = np.flatnonzero(np.isfinite(vals))
    if feasible.size == 0:
        raise EmptyFeasibleSet(
            f"no altitude in [{settings.h_min}, {settings.h_max}] m gives a positive rate")
    lo_i, hi_i = int(feasible[0]), int(feasible[-1])
    lo, hi = float(hs[lo_i]), float(hs[hi_i])
    sub_h, sub_v = hs[lo_i:hi_i + 1], vals[lo_i:hi_i + 1]
    if sub_h.size < 3:
        sub_h = _grid(lo, hi, settings.grid_points) if hi > lo else sub_h
        sub_v = np.array([f(h) for h in sub_h])
    if sub_h.size < 2:
        x = float(sub_h[0])
        return OptimizationResult(x, float(sub_v[0]), (x, x), 0, math.nan,
                                  boundary="lo", domain=(lo, hi))
    br = _bracket_from_values(sub_h, sub_v, lo, hi)
    x, fx, it, _ = golden_section(f, br.lo, br.hi, settings.tol, MAX_ITER)
    return _finish(f, x, fx, it, br, settings.tol,
                   extra={"feasible_domain": (lo, hi), "transit_model": transit_model})
