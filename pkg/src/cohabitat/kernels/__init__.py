"""Kernel backend selection.

The compiled extension (``cohabitat.kernels._core``) is preferred; the
pure-Python module is the fallback. Set ``COHABITAT_PURE_PYTHON=1`` to
force the fallback (useful for benchmarking and debugging).
"""

import os

from . import _pure

if os.environ.get("COHABITAT_PURE_PYTHON"):
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = "compiled" if _impl is not _pure else "pure-python"

newton_step = _impl.newton_step
rh_from_temp = _impl.rh_from_temp
temp_from_rh = _impl.temp_from_rh
pmv = _impl.pmv


def backends():
    """Return the available backends, keyed by name."""
    out = {"pure-python": _pure}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:
        pass
    return out
