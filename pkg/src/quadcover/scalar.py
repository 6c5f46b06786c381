"""Golden-section search on a closed interval.

The compiled kernel in :mod:`quadcover._kernels` runs the same iteration
on the channel objectives, so any change here must be mirrored there.
"""

import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, lo, hi, tol, max_iter=500):
    """Minimize ``f`` on ``[lo, hi]`` until the bracket is at most ``tol`` wide.

    On an exact tie between the two probes both outer segments are
    dropped, so a flat objective contracts around the bracket midpoint.

    Returns
    -------
    x : float
        Midpoint of the final bracket.
    fx : float
        ``f(x)``.
    iterations : int
    bracket : tuple of float
        The final ``(a, b)``.
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while (b - a) > tol and it < max_iter:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        elif fc > fd:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        else:
            a, b = c, d
            c = b - INV_PHI * (b - a)
            d = a + INV_PHI * (b - a)
            fc, fd = f(c), f(d)
        it += 1
    x = 0.5 * (a + b)
    return x, f(x), it, (a, b)
