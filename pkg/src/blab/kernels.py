"""Backend selection for the hot kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy implementations in ``_pykernels`` take over. Set ``BLAB_PURE_PYTHON=1``
to force the fallback. ``BLAB_THREADS`` caps the OpenMP thread count of the
compiled kernels (0 or unset means the OpenMP default).
"""
import os

from . import _pykernels

try:
    if os.environ.get("BLAB_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure python backend requested")
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"


def _threads():
    try:
        return max(0, int(os.environ.get("BLAB_THREADS", "0")))
    except ValueError:
        return 0


def available_backends():
    """Mapping of backend name to module, for tests and benchmarks."""
    found = {"python": _pykernels}
    try:
        from . import _kernels

        found["cython"] = _kernels
    except ImportError:
        pass
    return found


one_minus_abs2 = _impl.one_minus_abs2
rho = _impl.rho


def rho_matrix(zeros):
    return _impl.rho_matrix(zeros, _threads())


def blaschke_eval(zeros, points):
    return _impl.blaschke_eval(zeros, points, _threads())


def blaschke_eval_circle(zeros, thetas):
    return _impl.blaschke_eval_circle(zeros, thetas, _threads())


def arg_sums(wa, wb, ys):
    return _impl.arg_sums(wa, wb, ys, _threads())


def label_components4(mask):
    return _impl.label_components4(mask)
