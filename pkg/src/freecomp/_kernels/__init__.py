"""Backend selection for the Jacobi eigensolver kernel.

The compiled Cython kernel is preferred; the pure-Python twin is used
when the extension is not built or when FREECOMP_PURE_PYTHON is set.
Both backends implement the identical rotation schedule.
"""

import os

BACKEND = "python"

if os.environ.get("FREECOMP_PURE_PYTHON"):
    from freecomp._kernels.pyjacobi import jacobi_cycle
else:
    try:
        from freecomp._kernels._jacobi import jacobi_cycle

        BACKEND = "compiled"
    except ImportError:  # extension not built
        from freecomp._kernels.pyjacobi import jacobi_cycle

__all__ = ["jacobi_cycle", "BACKEND"]
