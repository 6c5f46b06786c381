"""Pure-Python channel kernels; fallback for :mod:`quadcover._kernels`.

Parameter vector layout (``params``), shared with the compiled module::

    0 fspl_db  1 xi_los  2 xi_nlos  3 eta  4 kappa
    5 pt_dbm   6 g0_db   7 m        8 gr_db 9 pn_dbm
"""

from math import asin, atan, cos, degrees, exp, log10, sqrt

from .scalar import INV_PHI

PATHLOSS = 0
NEG_SNR = 1


def pl_max(a, b, h, params):
    fspl, xi_los, xi_nlos, eta, kappa = params[:5]
    root = sqrt((b * b + h * h) * (a * a - b * b))
    phi = degrees(atan(h * b / (a * b + root)))
    far = (a * b + root) / b
    return ((xi_los - xi_nlos) / (1.0 + eta * exp(-kappa * (phi - eta)))
            + 10.0 * log10(h * h + far * far) + fspl + xi_nlos)


def snr_db(a, b, h, params):
    theta = asin(b * b / sqrt(a * a * h * h + b * b * b * b))
    m = params[7]
    gain = params[6] + (10.0 * m * log10(cos(theta)) if m != 0.0 else 0.0)
    return params[5] + gain + params[8] - pl_max(a, b, h, params) - params[9]


def objective(kind, a, b, h, params):
    if kind == PATHLOSS:
        return pl_max(a, b, h, params)
    return -snr_db(a, b, h, params)


def objective_grid(kind, a, b, hs, out, params):
    for i in range(len(hs)):
        out[i] = objective(kind, a, b, hs[i], params)


def golden_channel(kind, a, b, lo, hi, tol, max_iter, params):
    """Golden-section on a channel objective; mirrors ``scalar.golden_section``."""
    lo, hi = float(lo), float(hi)
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc = objective(kind, a, b, c, params)
    fd = objective(kind, a, b, d, params)
    it = 0
    while (hi - lo) > tol and it < max_iter:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = objective(kind, a, b, c, params)
        elif fc > fd:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = objective(kind, a, b, d, params)
        else:
            lo, hi = c, d
            c = hi - INV_PHI * (hi - lo)
            d = lo + INV_PHI * (hi - lo)
            fc = objective(kind, a, b, c, params)
            fd = objective(kind, a, b, d, params)
        it += 1
    x = 0.5 * (lo + hi)
    return x, objective(kind, a, b, x, params), it, lo, hi
