"""Backend selection for the propagation kernel.

Prefers the compiled extension `gammares._core`; falls back to the
pure-Python twin.  Set GAMMARES_PURE_PYTHON=1 to force the fallback
(used by the benchmark and for debugging).
"""
from __future__ import annotations

import os

if os.environ.get("GAMMARES_PURE_PYTHON"):
    from . import _core_py as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as _impl

BACKEND = _impl.BACKEND_NAME
ENV_SQUARE = 0
ENV_SINSQ = 1

rk4_propagate = _impl.rk4_propagate


def load_backend(name: str):
    """Explicitly load one backend module ("cython" or "python").

    Used by the kernel benchmark; raises ImportError when the compiled
    core was not built.
    """
    if name == "python":
        from . import _core_py
        return _core_py
    if name == "cython":
        from . import _core  # type: ignore[attr-defined]
        return _core
    raise ValueError(f"unknown backend {name!r}")
