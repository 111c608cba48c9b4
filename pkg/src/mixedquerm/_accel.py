"""Numba switch.

Set ``MIXEDQUERM_DISABLE_NUMBA=1`` to run every kernel as plain Python
(the same source, interpreted). Useful for debugging and for benchmarking
the compiled path against the interpreted one.
"""
import os

_FLAG = os.environ.get("MIXEDQUERM_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG in ("1", "true", "yes", "on")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and not DISABLED


if USE_NUMBA:
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the TBB layer warns on older TBB builds; workqueue is always present
        numba.config.THREADING_LAYER = "workqueue"
    prange = numba.prange

    def njit(func=None, **options):
        options.setdefault("cache", True)
        if func is None:
            return lambda f: numba.njit(**options)(f)
        return numba.njit(**options)(func)

else:
    prange = range

    def njit(func=None, **options):
        if func is None:
            return lambda f: f
        return func


def set_num_threads(threads):
    """Bound the kernel thread pool. Has no effect on results."""
    if not USE_NUMBA or threads is None:
        return
    numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))


def python_impl(func):
    """The interpreted version of a kernel, whichever mode is active."""
    return getattr(func, "py_func", func)
