"""Selects the DP sweep implementation.

The compiled kernel is used when it was built; ``PICKROUTE_BACKEND=python``
forces the pure-Python one and ``PICKROUTE_BACKEND=cython`` makes a missing
build an error.
"""
import os

from . import _kernel_py

try:
    from . import _kernel as _kernel_c
except ImportError:  # extension not built
    _kernel_c = None

BACKENDS = {"python": _kernel_py.sweep}
if _kernel_c is not None:
    BACKENDS["cython"] = _kernel_c.sweep

INF = _kernel_py.INF


def _select() -> str:
    wanted = os.environ.get("PICKROUTE_BACKEND", "").strip().lower()
    if wanted:
        if wanted not in ("python", "cython"):
            raise ImportError(f"PICKROUTE_BACKEND must be 'python' or 'cython', got {wanted!r}")
        if wanted not in BACKENDS:
            raise ImportError("PICKROUTE_BACKEND=cython but the compiled kernel is not built")
        return wanted
    return "cython" if "cython" in BACKENDS else "python"


BACKEND = _select()
sweep = BACKENDS[BACKEND]


def get_sweep(backend: str = None):
    return BACKENDS[backend or BACKEND]
