"""Kernel selection: compiled scan core with a pure-Python fallback.

The compiled module is built from speedups.pyx at install time.  Set
LFANO_PURE=1 to force the fallback (identical semantics, much slower);
`active_kernel()` reports which one is in use.
"""

import os

from . import fallback as _fallback

if os.environ.get("LFANO_PURE") == "1":
    _impl = _fallback
    _IMPL_NAME = "python"
else:
    try:
        from . import speedups as _impl  # type: ignore
        _IMPL_NAME = "compiled"
    except ImportError:
        _impl = _fallback
        _IMPL_NAME = "python"

# stratum counter layout shared by both implementations
COUNTERS = ("W", "V", "A", "B1", "B2", "R", "T1", "T2", "J", "P", "Q",
            "GEN_W", "GEN_V")
KIND_TRANSVERSAL = 0
KIND_TANGENT = 1
KIND_CONTAINED = 2
KIND_POSDIM = 3
KIND_NAMES = ("Transversal", "Tangent", "Contained", "PositiveDim")


def active_kernel():
    return _IMPL_NAME


def _normalize(res, start_id):
    if "contained" not in res:
        import numpy as np
        kinds = res["kinds"]
        res["contained"] = [int(i) + start_id for i in np.nonzero(kinds == KIND_CONTAINED)[0]]
        res["posdim"] = [int(i) + start_id for i in np.nonzero(kinds == KIND_POSDIM)[0]]
    return res


def scan_pivot_block(task, pivots, start_id):
    impl = _impl
    if _IMPL_NAME == "compiled" and not _impl.supports(task):
        impl = _fallback
    return _normalize(impl.scan_pivot_block(task, pivots, start_id), start_id)


def count_projective_solutions(task_level, nvars):
    if _IMPL_NAME == "compiled" and _impl.supports_count(task_level, nvars):
        return _impl.count_projective_solutions(task_level, nvars)
    return _fallback.count_projective_solutions(task_level, nvars)


def fallback_module():
    return _fallback


def implementations():
    """(name, module) pairs for every available implementation."""
    out = [("python", _fallback)]
    if _IMPL_NAME == "compiled":
        out.append(("compiled", _impl))
    else:
        try:
            from . import speedups  # type: ignore
            out.append(("compiled", speedups))
        except ImportError:
            pass
    return out
