"""Selection of the kernel backend.

The numeric kernels in :mod:`hypercurrent.kernels` exist twice: once as
numba ``@njit`` loops and once as plain numpy. Which one the rest of the
package calls is decided once, at import time:

* ``HYPERCURRENT_BACKEND=numpy`` forces the numpy path,
* ``HYPERCURRENT_BACKEND=numba`` requires numba (ImportError otherwise),
* unset or ``auto`` uses numba when it imports, numpy otherwise.
"""

import os
import warnings

ENV_VAR = "HYPERCURRENT_BACKEND"

_requested = os.environ.get(ENV_VAR, "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    warnings.warn(f"{ENV_VAR}={_requested!r} not understood, using 'auto'")
    _requested = "auto"

try:
    if _requested == "numpy":
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    if _requested == "numba":
        raise
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # bare @njit and @njit(...) both return the function untouched
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda func: func


BACKEND = "numba" if HAVE_NUMBA else "numpy"

__all__ = ["BACKEND", "ENV_VAR", "HAVE_NUMBA", "njit"]
