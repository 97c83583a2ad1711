"""Numba dispatch layer.

Hot numerical kernels in :mod:`cavent._kernels` are decorated with ``njit``.
By default the decorator comes from numba; setting the environment variable
``CAVENT_DISABLE_NUMBA=1`` (or numba being unavailable) replaces it with a
no-op so the same code runs as a pure NumPy/Python fallback.  The fallback is
bit-compatible but slow for the long fixed-step integrations; see
``benchmarks/bench_kernels.py`` for a comparison of the two paths.
"""

import os

_DISABLE = os.environ.get("CAVENT_DISABLE_NUMBA", "0").lower() in ("1", "true", "yes")

NUMBA_ENABLED = False

if not _DISABLE:
    try:
        from numba import njit as _numba_njit

        NUMBA_ENABLED = True
    except ImportError:
        pass

if NUMBA_ENABLED:

    def njit(func=None, **kwargs):
        kwargs.setdefault("cache", True)
        if func is None:
            return _numba_njit(**kwargs)
        return _numba_njit(**kwargs)(func)

else:

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper
