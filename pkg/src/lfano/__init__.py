"""Exact Lefschetz-class arithmetic and finite-field plane statistics.

Two halves: symbolic Laurent/series arithmetic in the class of the
affine line with a catalog of motivic classes, and a brute-force
census machinery over small finite fields that verifies the classic
and extended plane-counting identities against that catalog.
"""

from ._core import active_kernel

__version__ = "0.1.0"

__all__ = ["active_kernel", "__version__"]
