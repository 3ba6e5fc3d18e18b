"""Kernel backend selection: compiled extension if available, numpy fallback
otherwise.  ``BACKEND`` reports which one is live."""

try:
    from . import _core as _impl  # type: ignore[attr-defined]
except ImportError:  # extension not built
    from . import _core_py as _impl

BACKEND = _impl.BACKEND

eval_map = _impl.eval_map
eval_deriv = _impl.eval_deriv
eval_deriv2 = _impl.eval_deriv2
log_deriv = _impl.log_deriv
invert = _impl.invert
covered_min_distance = _impl.covered_min_distance
