"""Select the compiled inner loops when available, else the pure-Python ones.

Set ``SQUEEZEBATH_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
collide_sweep = _kernels_py.collide_sweep
quasi_static_sweep = _kernels_py.quasi_static_sweep

if os.environ.get("SQUEEZEBATH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        BACKEND = "compiled"
        collide_sweep = _kernels.collide_sweep
        quasi_static_sweep = _kernels.quasi_static_sweep
