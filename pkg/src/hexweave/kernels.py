"""Kernel selection: the compiled extension when importable, else pure Python.

Set HEXWEAVE_PURE=1 to force the fallback.
"""
import os

from . import _pykernels as python_kernels

compiled_kernels = None
if os.environ.get("HEXWEAVE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_kernels
    except ImportError:  # extension not built
        compiled_kernels = None

active = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = active.BACKEND


def get(name: str | None = None):
    if name is None:
        return active
    if name == "python":
        return python_kernels
    if name == "cython":
        if compiled_kernels is None:
            raise ImportError("compiled kernels are not built")
        return compiled_kernels
    raise ValueError(f"unknown kernel backend {name!r}")
