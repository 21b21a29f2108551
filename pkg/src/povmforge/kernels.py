"""Backend selection for the hot kernels.

The compiled extension is used when it imports cleanly; otherwise, or when
the environment variable ``POVMFORGE_PURE`` is set to a non-empty value other
than ``0``, the pure-Python implementation is used. ``BACKEND`` names the
active choice.
"""

import os

from . import _kernels_py

_force_pure = os.environ.get("POVMFORGE_PURE", "") not in ("", "0")

if _force_pure:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

gf_mul = _impl.gf_mul
gf_power_table = _impl.gf_power_table
jacobi_eigh = _impl.jacobi_eigh

__all__ = ["BACKEND", "gf_mul", "gf_power_table", "jacobi_eigh"]
