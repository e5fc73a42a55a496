"""Backend switch for the hot kernels.

Set ``WRONSKI_DISABLE_NUMBA=1`` to force the pure-numpy paths.  If numba is
not importable the numpy paths are used regardless.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
NUMBA_DISABLED = os.environ.get("WRONSKI_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


def default_backend() -> str:
    return "numba" if NUMBA_AVAILABLE and not NUMBA_DISABLED else "numpy"


def resolve_backend(backend):
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend


def njit(*args, **kwargs):
    """numba.njit(cache=True) when numba is importable, identity otherwise."""
    if not NUMBA_AVAILABLE:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)
