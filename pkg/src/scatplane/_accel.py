"""Backend switch for the hot kernels.

Set ``SCATPLANE_PURE_NUMPY=1`` to force the vectorised numpy kernels even when
numba is importable. Individual calls may also pass ``backend="numba"`` or
``backend="numpy"``.
"""

import os

ENV_FLAG = "SCATPLANE_PURE_NUMPY"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _env_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = HAVE_NUMBA and not _env_disabled()
BACKENDS = ("numba", "numpy") if HAVE_NUMBA else ("numpy",)


def resolve(backend=None) -> str:
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend


if HAVE_NUMBA:
    def njit(fn=None, **opts):
        def wrap(f):
            return numba.njit(cache=True, nogil=True, **opts)(f)
        return wrap(fn) if fn is not None else wrap
else:  # pragma: no cover
    def njit(fn=None, **opts):
        return fn if fn is not None else (lambda f: f)
