"""Scan task descriptor shared by the compiled and pure kernels."""

from __future__ import annotations

from dataclasses import dataclass

from .tables import FieldTower, levels_for


@dataclass
class ScanTask:
    tower: FieldTower
    n: int            # ambient projective dimension
    nm: int           # plane projective dimension (n - m)
    d: int            # finite-section size bound (product of form degrees)
    r1: int           # long tuple size  (d - k - 1)
    r2: int           # short tuple size (k + 1)
    g1_rank: int      # generic rank of an r1-tuple on a plane
    forms: tuple = () # per form: (degree, ((exponent vector, level-1 log coeff), ...))
    include_pq: bool = True
    full_sweep: bool = False  # keep raw level counts; disables early exit

    @property
    def jmax(self):
        return self.d


def make_tower(base_field, d, r1, r2):
    sizes = [s for s in (r1, r2) if s > 0]
    return FieldTower(base_field, levels_for(d, sizes))
