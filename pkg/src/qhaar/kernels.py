"""Integer polynomial kernel selection.

Import the compiled extension when it is available, otherwise fall back
to the pure-Python implementation with identical semantics.  Set
QHAAR_PURE_PYTHON=1 to force the fallback (used by the benchmark and by
tests that compare the two).
"""

import os

if os.environ.get("QHAAR_PURE_PYTHON"):
    BACKEND = "python"
    from ._kernels_py import *  # noqa: F401,F403
else:
    try:
        from ._kernels import *  # noqa: F401,F403
        BACKEND = "c"
    except ImportError:
        BACKEND = "python"
        from ._kernels_py import *  # noqa: F401,F403

from ._kernels_py import __all__  # noqa: E402

__all__ = list(__all__) + ["BACKEND"]
