"""Backend selection for the hot kernels.

Set ``JCWAVE_DISABLE_NUMBA=1`` before import to make the pure-numpy kernels
the default.  Numba kernels that call ``np.fft`` rely on the rocket-fft
extension, which registers itself with numba through an entry point.
"""
import os

_FLAG = "JCWAVE_DISABLE_NUMBA"

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and os.environ.get(_FLAG, "").strip().lower() not in (
    "1",
    "true",
    "yes",
    "on",
)


def maybe_njit(*args, **kwargs):
    """Compile with ``numba.njit`` if numba is importable, else return ``None``.

    The numpy twin of every kernel is always defined, so callers fall back to
    it when this returns ``None``.
    """

    def decorator(func):
        if NUMBA_AVAILABLE:
            return njit(*args, **kwargs)(func)
        return None

    return decorator


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
