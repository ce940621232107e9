"""Selects the compiled stencil kernels when available.

Set ``CONFCAP_BACKEND=python`` to force the numpy fallback.
"""

import os

from . import _fallback

NAME = "python"
kernels = _fallback

if os.environ.get("CONFCAP_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as kernels  # noqa: F811
    except ImportError:
        pass
    else:
        NAME = "compiled"
