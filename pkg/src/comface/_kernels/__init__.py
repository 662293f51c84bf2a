"""Render kernel backend selection.

The compiled Cython kernel is preferred when present; otherwise the numpy
fallback is used. ``COMFACE_RENDER_BACKEND=numpy|cython`` forces a choice
(used by the equivalence tests and the benchmark).
"""

import os

from .render_np import seed_term  # backend-independent

_requested = os.environ.get("COMFACE_RENDER_BACKEND", "").strip().lower()

if _requested == "numpy":
    from .render_np import BACKEND_NAME, render_geometry
elif _requested == "cython":
    from .render_cy import BACKEND_NAME, render_geometry  # raises if not built
else:
    try:
        from .render_cy import BACKEND_NAME, render_geometry
    except ImportError:
        from .render_np import BACKEND_NAME, render_geometry

__all__ = ["BACKEND_NAME", "render_geometry", "seed_term"]
