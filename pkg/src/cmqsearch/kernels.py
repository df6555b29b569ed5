"""Kernel backend selection: compiled extension if available, pure Python otherwise.

Set CMQSEARCH_PURE=1 to force the pure-Python kernels (used by the benchmark
and backend-agreement tests).
"""

import os

if os.environ.get("CMQSEARCH_PURE"):
    from cmqsearch import _kernels_py as _impl
else:
    try:
        from cmqsearch import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from cmqsearch import _kernels_py as _impl

BACKEND = _impl.BACKEND
delta_angle = _impl.delta_angle
p_success = _impl.p_success
p_coefficients = _impl.p_coefficients
p_derivative = _impl.p_derivative
p_success_many = _impl.p_success_many
