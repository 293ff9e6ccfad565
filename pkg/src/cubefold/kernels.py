"""Kernel dispatch: the compiled extension when it is importable, else Python.

Set ``CUBEFOLD_PURE_PYTHON=1`` to force the fallback.  The compiled kernels
work on 64-bit orientation words, so larger pocsets always take the Python
path.
"""

import os

from . import _kernels_py

_compiled = None
if os.environ.get("CUBEFOLD_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = _compiled.BACKEND if _compiled is not None else _kernels_py.BACKEND
MAX_COMPILED_HYPERPLANES = 64


def _pick(n):
    if _compiled is not None and n <= MAX_COMPILED_HYPERPLANES:
        return _compiled
    return _kernels_py


def enumerate_ultrafilters(n, force_mask, force_bits, cap):
    return _pick(n).enumerate_ultrafilters(n, force_mask, force_bits, cap)


def build_edges(vertices, n):
    return _pick(n).build_edges(vertices, n)


def median_failures(vertices, triples, n):
    return _pick(n).median_failures(vertices, triples)


def distance_changes(source, target, n_source, n_target):
    """Pairs whose Hamming distance grows / shrinks from ``source`` to ``target``."""
    return _pick(max(n_source, n_target)).distance_changes(source, target)
