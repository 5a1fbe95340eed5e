"""Kernel backend dispatch.

The compiled extension is preferred; set BETAPLURALITY_PURE=1 to force the
numpy reference implementation (the two are behaviourally identical).
"""
import os

if os.environ.get("BETAPLURALITY_PURE"):
    from . import _ref as _impl
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - build-environment dependent
        from . import _ref as _impl

BACKEND = _impl.BACKEND
depth_sweep = _impl.depth_sweep
decide_many = _impl.decide_many
max_advantage_points = _impl.max_advantage_points

__all__ = ["BACKEND", "depth_sweep", "decide_many", "max_advantage_points"]
