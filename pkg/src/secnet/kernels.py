"""Backend selection for the Monte Carlo trial loops.

The compiled extension ``secnet._ckernels`` is used when it imports; the
numpy implementation in ``secnet._pykernels`` is the fallback. Set
``SECNET_BACKEND=python`` to force the fallback, or ``SECNET_BACKEND=c`` to
fail loudly when the extension is missing.
"""

from __future__ import annotations

import os

from . import _pykernels

_requested = os.environ.get("SECNET_BACKEND", "auto").lower()

if _requested == "python":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "c":
            raise
        _impl = _pykernels

BACKEND = "c" if _impl is not _pykernels else "python"

count_hop_successes = _impl.count_hop_successes
count_eav_outages = _impl.count_eav_outages


def get_backend(name: str):
    """Return the kernel module for ``"c"`` or ``"python"``."""
    if name == "python":
        return _pykernels
    if name == "c":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
