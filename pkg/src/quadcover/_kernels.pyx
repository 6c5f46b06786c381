# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled channel kernels. Same API and arithmetic as ``_kernels_py``."""

from libc.math cimport asin, atan, cos, exp, log10, sqrt, M_PI

cdef double INV_PHI = (sqrt(5.0) - 1.0) / 2.0
cdef double RAD2DEG = 180.0 / M_PI

PATHLOSS = 0
NEG_SNR = 1


cdef struct Params:
    double fspl
    double xi_los
    double xi_nlos
    double eta
    double kappa
    double pt_dbm
    double g0_db
    double m
    double gr_db
    double pn_dbm


cdef Params _unpack(params) except *:
    cdef Params p
    p.fspl = params[0]
    p.xi_los = params[1]
    p.xi_nlos = params[2]
    p.eta = params[3]
    p.kappa = params[4]
    p.pt_dbm = params[5]
    p.g0_db = params[6]
    p.m = params[7]
    p.gr_db = params[8]
    p.pn_dbm = params[9]
    return p


cdef inline double _pl_max(double a, double b, double h, Params *p) nogil:
    cdef double root = sqrt((b * b + h * h) * (a * a - b * b))
    cdef double phi = atan(h * b / (a * b + root)) * RAD2DEG
    cdef double far = (a * b + root) / b
    return ((p.xi_los - p.xi_nlos) / (1.0 + p.eta * exp(-p.kappa * (phi - p.eta)))
            + 10.0 * log10(h * h + far * far) + p.fspl + p.xi_nlos)


cdef inline double _snr_db(double a, double b, double h, Params *p) nogil:
    cdef double theta = asin(b * b / sqrt(a * a * h * h + b * b * b * b))
    cdef double gain = p.g0_db
    if p.m != 0.0:
        gain += 10.0 * p.m * log10(cos(theta))
    return p.pt_dbm + gain + p.gr_db - _pl_max(a, b, h, p) - p.pn_dbm


cdef inline double _objective(int kind, double a, double b, double h, Params *p) nogil:
    if kind == 0:
        return _pl_max(a, b, h, p)
    return -_snr_db(a, b, h, p)


def pl_max(double a, double b, double h, params):
    cdef Params p = _unpack(params)
    return _pl_max(a, b, h, &p)


def snr_db(double a, double b, double h, params):
    cdef Params p = _unpack(params)
    return _snr_db(a, b, h, &p)


def objective(int kind, double a, double b, double h, params):
    cdef Params p = _unpack(params)
    return _objective(kind, a, b, h, &p)


def objective_grid(int kind, double a, double b, double[:] hs, double[:] out, params):
    cdef Params p = _unpack(params)
    cdef Py_ssize_t i, n = hs.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _objective(kind, a, b, hs[i], &p)


def golden_channel(int kind, double a, double b, double lo, double hi,
                   double tol, int max_iter, params):
    cdef Params p = _unpack(params)
    cdef double c, d, fc, fd, x
    cdef int it = 0
    with nogil:
        c = hi - INV_PHI * (hi - lo)
        d = lo + INV_PHI * (hi - lo)
        fc = _objective(kind, a, b, c, &p)
        fd = _objective(kind, a, b, d, &p)
        while (hi - lo) > tol and it < max_iter:
            if fc < fd:
                hi = d
                d = c
                fd = fc
                c = hi - INV_PHI * (hi - lo)
                fc = _objective(kind, a, b, c, &p)
            elif fc > fd:
                lo = c
                c = d
                fc = fd
                d = lo + INV_PHI * (hi - lo)
                fd = _objective(kind, a, b, d, &p)
            else:
                lo = c
                hi = d
                c = hi - INV_PHI * (hi - lo)
                d = lo + INV_PHI * (hi - lo)
                fc = _objective(kind, a, b, c, &p)
                fd = _objective(kind, a, b, d, &p)
            it += 1
        x = 0.5 * (lo + hi)
    return x, _objective(kind, a, b, x, &p), it, lo, hi
