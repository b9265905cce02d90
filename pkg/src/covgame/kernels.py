"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Setting ``COVGAME_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

python_utility_rows = _kernels_py.utility_rows

try:
    from ._kernels import utility_rows as compiled_utility_rows
except ImportError:  # extension not built
    compiled_utility_rows = None

if compiled_utility_rows is not None and os.environ.get("COVGAME_PURE_PYTHON", "") in ("", "0"):
    utility_rows = compiled_utility_rows
    BACKEND = "cython"
else:
    utility_rows = python_utility_rows
    BACKEND = "numpy"
