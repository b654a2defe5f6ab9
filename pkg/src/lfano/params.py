"""Shared parameter bundle for the plane-counting identities.

The size restrictions below come as a block; identities at desk scale
often remain meaningful outside them, so violations are reported rather
than fatal.  Structural impossibilities (negative tuple sizes, empty
Grassmannian factors) are hard errors.
"""

from __future__ import annotations

from dataclasses import dataclass


class ParameterViolation(ValueError):
    pass


class RegimeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ParamSet:
    n: int
    m: int
    d: int
    k: int

    @property
    def r(self):
        """Codimension of the variety."""
        return self.n - self.m

    @property
    def r1(self):
        """Size of the long tuples."""
        return self.d - self.k - 1

    @property
    def r2(self):
        """Size of the short tuples."""
        return self.k + 1

    @property
    def low_regime(self):
        return self.r1 <= self.r - 1

    @property
    def regime(self):
        return "low" if self.low_regime else "high"

    def restriction_violations(self):
        """The advisory size restrictions; empty list when all hold."""
        v = []
        if not self.d >= self.k + 3:
            v.append(f"d >= k+3 fails ({self.d} < {self.k + 3})")
        if not self.k + 1 <= self.r - 1:
            v.append(f"k+1 <= n-m-1 fails ({self.k + 1} > {self.r - 1})")
        if not self.r <= self.m - 1:
            v.append(f"n-m <= m-1 fails ({self.r} > {self.m - 1})")
        if not self.d >= self.r + 2:
            v.append(f"d >= (n-m)+2 fails ({self.d} < {self.r + 2})")
        return v

    def check_structural(self):
        if self.n < 1 or self.m < 0 or self.m > self.n:
            raise ParameterViolation(f"invalid ambient/dimension pair ({self.n}, {self.m})")
        if self.k < 0:
            raise ParameterViolation("k must be >= 0")
        if self.r1 < 0:
            raise ParameterViolation(f"d-k-1 = {self.r1} is negative")
        if self.r2 < 1:
            raise ParameterViolation("k+1 must be >= 1")
        if self.r2 > self.r + 1:
            raise ParameterViolation(
                f"k+1 = {self.r2} points cannot be independent on an (n-m)-plane")

    def require_low_regime(self):
        if not self.low_regime:
            raise RegimeMismatch(
                f"d-k-1 = {self.r1} > n-m-1 = {self.r - 1}: high-regime parameters")

    def generic_rank(self, size):
        """Rank of a generic size-tuple on an (n-m)-plane.

        Tuples of at most n-m points are generically independent;
        larger tuples generically span the whole plane.
        """
        return min(size, self.r + 1)

    def as_dict(self):
        return {"n": self.n, "m": self.m, "d": self.d, "k": self.k,
                "r": self.r, "regime": self.regime}

    def validate_for(self, variety):
        if variety.n != self.n:
            raise ParameterViolation(f"ambient mismatch: variety n={variety.n}, params n={self.n}")
        if variety.m != self.m:
            raise ParameterViolation(f"dimension mismatch: variety m={variety.m}, params m={self.m}")
        if variety.d != self.d:
            raise ParameterViolation(f"degree mismatch: variety d={variety.d}, params d={self.d}")
