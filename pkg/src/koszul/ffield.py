"""Finite-field kernels with a compiled core and a pure-Python fallback.

The compiled module is used when it was built and ``KOSZUL_PURE_PYTHON`` is
not set.  ``BACKEND`` names the implementation in use.
"""

import os

from . import _ffkernel_py as pure

if os.environ.get("KOSZUL_PURE_PYTHON"):
    _impl = pure
    BACKEND = "python"
else:
    try:
        from . import _ffkernel as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = pure
        BACKEND = "python"

rank_mod_p = _impl.rank_mod_p
nullspace_mod_p = pure.nullspace_mod_p
num_points = pure.num_points
point_at = pure.point_at
first_candidate = _impl.first_candidate
