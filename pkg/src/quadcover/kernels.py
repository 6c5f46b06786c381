"""Backend selection for the channel kernels.

The compiled extension is used when it imports; setting
``QUADCOVER_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _kernels_py

if os.environ.get("QUADCOVER_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

PATHLOSS = 0
NEG_SNR = 1

pl_max = _impl.pl_max
snr_db = _impl.snr_db
objective = _impl.objective
objective_grid = _impl.objective_grid
golden_channel = _impl.golden_channel


def backends():
    """Every importable backend module, keyed by name."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
