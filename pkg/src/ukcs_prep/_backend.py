"""Select the compiled kernels when available, else the pure-Python ones.

Set ``UKCS_PREP_PURE=1`` to force the pure-Python implementation.
"""

import os

from . import _kernels_py

if os.environ.get("UKCS_PREP_PURE", "") not in ("", "0"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

name = "cython" if kernels is not _kernels_py else "python"
