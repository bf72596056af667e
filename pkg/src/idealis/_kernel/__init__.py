"""Kernel backend selection: compiled extension when available, pure
Python otherwise.  IDEALIS_PURE_PYTHON=1 forces the fallback (used by the
parity tests and the benchmark)."""

import os

from . import fallback

if os.environ.get("IDEALIS_PURE_PYTHON") == "1":
    impl = fallback
else:
    try:
        from . import speedups as impl  # type: ignore[attr-defined]
    except ImportError:
        impl = fallback

BACKEND = impl.BACKEND
Reducer = impl.Reducer
StepLimit = impl.StepLimit


def get_backend(name=None):
    """Explicit backend lookup, for benchmarks and tests."""
    if name in (None, BACKEND):
        return impl
    if name == "fallback":
        return fallback
    if name == "speedups":
        from . import speedups  # noqa: F811

        return speedups
    raise ValueError(f"unknown kernel backend {name!r}")
