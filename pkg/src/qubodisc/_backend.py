"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
fallback is. Setting ``QUBODISC_BACKEND=python`` forces the fallback.
"""

import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

if os.environ.get("QUBODISC_BACKEND", "").lower() == "python" or _compiled is None:
    DEFAULT = "python"
else:
    DEFAULT = "compiled"


def get(name=None):
    """Return the kernel module for ``name`` (default: best available)."""
    name = name or DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {sorted(BACKENDS)}") from None
