"""Backend selection for the series multiply kernel.

Imports the compiled extension when available, otherwise the pure-Python
implementation.  Set RESZETA_PURE=1 to force the fallback (used by the
benchmark and the test matrix).
"""

import os

if os.environ.get("RESZETA_PURE"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _kernel_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl

BACKEND = _impl.BACKEND
mul_packed = _impl.mul_packed
