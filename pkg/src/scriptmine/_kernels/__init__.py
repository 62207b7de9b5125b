"""Hot-kernel dispatch: compiled extension when available, numpy otherwise.

Set SCRIPTMINE_PURE_PYTHON=1 to force the numpy fallback. The active
implementation is re-exported here; ``backend()`` names it.
"""

import os

from . import fallback

if os.environ.get("SCRIPTMINE_PURE_PYTHON") == "1":
    _impl = fallback
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = fallback

EUCLIDEAN = fallback.EUCLIDEAN
MANHATTAN = fallback.MANHATTAN
JACCARD = fallback.JACCARD
COSINE = fallback.COSINE

pairwise = _impl.pairwise
pairwise_cross = _impl.pairwise_cross
hinge_epoch = _impl.hinge_epoch
best_split = _impl.best_split


def backend() -> str:
    """"compiled" (Cython extension) or "fallback" (pure numpy)."""
    return _impl.BACKEND
