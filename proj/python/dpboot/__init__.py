"""Differentially private bootstrap confidence intervals."""

try:
    from ._dpboot import *  # noqa: F401,F403  (wheel layout)
    from . import _dpboot as _impl
except ImportError:  # flat build-tree layout used by the ctest harness
    from _dpboot import *  # noqa: F401,F403
    import _dpboot as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
