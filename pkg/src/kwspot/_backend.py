"""Kernel backend selection.

Prefers the compiled extension when it imported cleanly; falls back to the
pure-Python implementation otherwise.  KWSPOT_PURE=1 forces the fallback
(useful for benchmarking and debugging).
"""

from __future__ import annotations

import os

if os.environ.get("KWSPOT_PURE") == "1":
    from kwspot import _kernels_py as _impl

    NATIVE = False
else:
    try:
        from kwspot import _kernels as _impl  # type: ignore[no-redef]

        NATIVE = True
    except ImportError:
        from kwspot import _kernels_py as _impl  # type: ignore[no-redef]

        NATIVE = False

forward_backward = _impl.forward_backward
forward_only = _impl.forward_only
segment_row = _impl.segment_row
max_run = _impl.max_run

__all__ = ["NATIVE", "forward_backward", "forward_only", "segment_row", "max_run"]
