"""Kernel backend selection.

The table kernels exist twice: a Cython extension (``_core``) and a
pure-numpy reference (``_ref``).  The compiled backend is preferred when
importable; setting the environment variable ``PLASMONCHAIN_PURE=1``
forces the reference backend (useful for debugging and benchmarking).
Both backends are exercised against each other in the test suite.
"""

from __future__ import annotations

import os

if os.environ.get("PLASMONCHAIN_PURE"):
    from . import _ref as _backend

    BACKEND = "python"
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _ref as _backend

        BACKEND = "python"

sph_jn_table = _backend.sph_jn_table
sph_yn_table = _backend.sph_yn_table
legendre_pmt_table = _backend.legendre_pmt_table

__all__ = ["BACKEND", "sph_jn_table", "sph_yn_table", "legendre_pmt_table"]
