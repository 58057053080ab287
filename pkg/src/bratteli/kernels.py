"""Sweep backend selection.

The compiled extension fuses corpus enumeration and record packing; the
pure module composes the ordinary library calls. Both produce identical
record lists. Set BRATTELI_PURE=1 to force the pure path, otherwise the
compiled kernel is used when the build produced one.
"""

import os


def _load():
    if not os.environ.get("BRATTELI_PURE"):
        try:
            from . import _kernel
            return _kernel, "compiled"
        except ImportError:
            pass
    from . import _kernel_py
    return _kernel_py, "pure"


_impl, backend_name = _load()


def sweep(max_depth=4):
    """Packed records for every corpus diagram up to max_depth, in
    emission order."""
    return _impl.sweep(max_depth)
