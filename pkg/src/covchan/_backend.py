"""Select the compiled kernels when importable, else the pure-Python ones.

Set ``COVCHAN_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as python_kernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("COVCHAN_PURE_PYTHON", "") in ("", "0"):
    kernels = compiled_kernels
    BACKEND = "cython"
else:
    kernels = python_kernels
    BACKEND = "python"
