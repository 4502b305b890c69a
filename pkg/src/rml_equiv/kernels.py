"""Selects the compiled forest kernels when available, else the Python ones.

Set RML_EQUIV_PURE=1 to force the pure-Python implementation.
"""
import os

IMPLEMENTATION = "python"
if not os.environ.get("RML_EQUIV_PURE"):
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        IMPLEMENTATION = "cython"
    except ImportError:  # extension not built
        _impl = None
else:
    _impl = None
if _impl is None:
    from . import _kernels_py as _impl

WILD = _impl.WILD
label_leq = _impl.label_leq
forest_from_memory = _impl.forest_from_memory
forest_size = _impl.forest_size
tree_embeds = _impl.tree_embeds
embed_forest = _impl.embed_forest
