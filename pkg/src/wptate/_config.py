"""Backend selection for the F_p linear-algebra kernels.

Set ``WPTATE_DISABLE_NUMBA=1`` to force the pure-numpy path.
"""
import os

_disabled = os.environ.get("WPTATE_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _disabled

DEFAULT_CHAR = 32003
