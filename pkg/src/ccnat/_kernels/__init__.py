"""Hot kernels: the compiled extension when it is built, the pure-Python versions otherwise.

Set ``CCNAT_PURE=1`` to force the fallback.
"""

import os

from . import _pure

BACKEND = "pure"

if os.environ.get("CCNAT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ext as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
else:
    _impl = _pure

UnionFind = _impl.UnionFind
search_box = _impl.search_box

__all__ = ["BACKEND", "UnionFind", "search_box"]
