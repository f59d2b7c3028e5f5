"""Kernel backend selection: compiled extension if present, numpy fallback.

The sweep kernels exist twice — :mod:`polaris._speedups` (Cython) and
:mod:`polaris._kernels_py` (pure numpy) — with identical signatures and
results.  This module picks the compiled one when the build produced it
and exposes the choice, so every external interface works in either
installation; ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

from . import _kernels_py

try:  # pragma: no cover - depends on how the package was built
    from . import _speedups

    _DEFAULT = _speedups
    BACKEND_NAME = "compiled"
except ImportError:  # pragma: no cover
    _speedups = None
    _DEFAULT = _kernels_py
    BACKEND_NAME = "python"


def available_backends() -> dict:
    out = {"python": _kernels_py}
    if _speedups is not None:
        out["compiled"] = _speedups
    return out


def get_backend(name: str | None = None):
    """The kernel module for `name` (None = best available)."""
    if name is None:
        return _DEFAULT
    try:
        return available_backends()[name]
    except KeyError:
        raise ValueError(
            f"backend {name!r} not available; have {sorted(available_backends())}"
        ) from None


census_chunk = _DEFAULT.census_chunk
point_perm_chunk = _DEFAULT.point_perm_chunk
