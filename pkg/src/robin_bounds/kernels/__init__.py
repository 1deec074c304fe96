"""Hot kernels with a compiled backend and a numpy fallback.

The Cython extension is used when it was built; setting the environment
variable ``ROBIN_BOUNDS_PURE_PYTHON=1`` forces the numpy versions.
``benchmarks/bench_kernels.py`` times both backends.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("ROBIN_BOUNDS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

min_norm_distance = _impl.min_norm_distance


def fp_eval(g, family, params, p, delta):
    """F^p kernel; the l_q family stays on numpy, whose vectorized power beats scalar exp/log."""
    impl = _pykernels if family == _pykernels.LQ else _impl
    return impl.fp_eval(g, family, params, p, delta)

__all__ = ["BACKEND", "min_norm_distance", "fp_eval"]
