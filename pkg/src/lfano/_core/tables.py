"""Discrete-log tables for the scan kernels.

Each tower level j carries the field F_{Q^j} (Q the base order) in log
form: elements are exponents of the multiplicative generator, -1 for
zero.  Addition goes through Zech logarithms, so a single int array per
level covers the whole arithmetic.  Levels embed into each other by a
single multiplier on logs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import gf


@dataclass
class LevelTables:
    j: int
    p: int
    N: int                  # Q^j
    exp: np.ndarray         # log -> element code, length N-1
    logt: np.ndarray        # element code -> log, -1 for zero
    zech: np.ndarray        # zech[d] = log(1 + g^d), -1 when zero
    sol2: np.ndarray        # char 2: code u -> code r with r^2+r=u, else -1
    int_log: np.ndarray     # log of the constants 0..p-1 (0 -> -1)
    neg_shift: int          # log of -1 (0 in char 2)
    frob_mul: int           # multiply logs by this for x -> x^Q
    emb_mul: dict = field(default_factory=dict)  # src level -> log multiplier

    def add(self, a, b):
        if a < 0:
            return b
        if b < 0:
            return a
        d = (b - a) % (self.N - 1)
        z = self.zech[d]
        if z < 0:
            return -1
        return (a + z) % (self.N - 1)

    def mul(self, a, b):
        if a < 0 or b < 0:
            return -1
        return (a + b) % (self.N - 1)

    def neg(self, a):
        if a < 0 or self.p == 2:
            return a
        return (a + self.neg_shift) % (self.N - 1)

    def inv(self, a):
        if a < 0:
            raise ZeroDivisionError
        return (-a) % (self.N - 1)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow_(self, a, k):
        if a < 0:
            return 0 if k == 0 else -1
        return (a * k) % (self.N - 1)

    def frob(self, a):
        if a < 0:
            return -1
        return (a * self.frob_mul) % (self.N - 1)

    def embed_from(self, a, src_level):
        if a < 0:
            return -1
        return (a * self.emb_mul[src_level]) % (self.N - 1)


def _build_level(base: gf.FieldSpec, j):
    fld = gf.field_make(base.p, base.e * j)
    N = fld.order
    g = fld.multiplicative_generator()
    exp = np.full(N - 1, -1, dtype=np.int64)
    logt = np.full(N, -1, dtype=np.int64)
    x = fld.one()
    for i in range(N - 1):
        c = x.code()
        exp[i] = c
        logt[c] = i
        x = x * g
    # zech: log(1 + g^d)
    p = base.p
    zech = np.full(N - 1, -1, dtype=np.int64)
    for d in range(N - 1):
        c = exp[d]
        # add 1: bump the constant digit
        d0 = c % p
        c1 = c - d0 + ((d0 + 1) % p)
        zech[d] = logt[c1]
    sol2 = np.full(N, -1, dtype=np.int64)
    if p == 2:
        for rc in range(N):
            r = fld.from_code(rc)
            u = (r * r + r).code()
            if sol2[u] < 0:
                sol2[u] = rc
    int_log = np.full(p, -1, dtype=np.int64)
    for c in range(1, p):
        int_log[c] = logt[fld.from_int(c).code()]
    neg_shift = 0 if p == 2 else (N - 1) // 2
    frob_mul = base.order % (N - 1) if N > 2 else 0
    return fld, LevelTables(j=j, p=p, N=N, exp=exp, logt=logt, zech=zech,
                            sol2=sol2, int_log=int_log, neg_shift=neg_shift,
                            frob_mul=frob_mul)


class FieldTower:
    """Levels F_{Q^j} above a base field, with log-form embeddings."""

    def __init__(self, base: gf.FieldSpec, levels):
        self.base = base
        self.fields = {}
        self.tables = {}
        for j in sorted(set(levels)):
            if base.order ** j > gf._SIZE_CAP:
                raise ValueError(f"tower level {j} over {base!r} exceeds the size cap")
            fld, tab = _build_level(base, j)
            self.fields[j] = fld
            self.tables[j] = tab
        # embedding multipliers for every divisor pair
        for jb, tb in self.tables.items():
            for js, ts in self.tables.items():
                if js == jb or jb % js != 0:
                    continue
                gene = self.fields[js].multiplicative_generator()
                img = gf.embed(gene, self.fields[jb])
                tb.emb_mul[js] = int(tb.logt[img.code()])
            tb.emb_mul[jb] = 1

    def level(self, j):
        return self.tables[j]

    def elem_to_log(self, x: gf.GFElem, j):
        if x.field != self.fields[j]:
            x = gf.embed(x, self.fields[j])
        return int(self.tables[j].logt[x.code()])

    def log_to_elem(self, a, j):
        if a < 0:
            return self.fields[j].zero()
        return self.fields[j].from_code(int(self.tables[j].exp[a]))


def levels_for(d, r_sizes):
    """Tower levels needed by a scan: sweep levels 1..d plus the lcm of
    every orbit-size multiset a stable tuple of the given sizes can use."""
    import itertools
    from math import lcm

    need = set(range(1, max(d, 1) + 1))

    def partitions(n, cap=None):
        if n == 0:
            yield ()
            return
        cap = cap or n
        for first in range(min(n, cap), 0, -1):
            for rest in partitions(n - first, first):
                yield (first,) + rest

    for r in r_sizes:
        for part in partitions(r):
            need.add(lcm(*part) if part else 1)
    # divisor closure keeps embeddings well-defined
    closed = set()
    for j in need:
        for t in range(1, j + 1):
            if j % t == 0:
                closed.add(t)
    return sorted(closed)
