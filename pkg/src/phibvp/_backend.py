"""Pick the compiled core if it is importable, else the pure-Python twin."""

from __future__ import annotations

import os

if os.environ.get("PHIBVP_PURE_PYTHON", "").strip() not in ("", "0"):
    from . import _fallback as kernels

    BACKEND = "python"
else:
    try:
        from . import _core as kernels

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _fallback as kernels

        BACKEND = "python"

power_integral = kernels.power_integral
rk4_path = kernels.rk4_path

__all__ = ["BACKEND", "power_integral", "rk4_path"]
