"""Backend selection for the coincidence-density kernels.

At import time the compiled Cython extension is preferred; if it is not
available (no compiler at install time, or a source checkout without
``build_ext``) the numpy implementation is used instead.  ``BACKEND``
records which one is active.  Both backends are kept in lockstep and are
compared against each other in the test suite.
"""

try:
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _kernels_py as _impl

    BACKEND = "python"

coincidence_pair_flat = _impl.coincidence_pair_flat
coincidence_pair_grid = _impl.coincidence_pair_grid

__all__ = ["BACKEND", "coincidence_pair_flat", "coincidence_pair_grid"]
