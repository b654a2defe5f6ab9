"""Pure-Python scan kernel; the semantic reference for the compiled one.

Planes stream in RREF order grouped by pivot set.  Per plane the forms
are restricted to plane coordinates, geometric points of the section
are collected level by level (F_{Q^j}, j = 1..d), grouped into
Frobenius orbits, and Galois-stable tuples are classified by the rank
of their span.  Everything works on the log-form tables from
tables.py, so results are exactly reproducible across kernels.
"""

from __future__ import annotations

import itertools
from math import lcm

import numpy as np

MAXPACK = 15  # orbit sizes are packed 4 bits each into the profile word


# -- plane enumeration ---------------------------------------------------

def free_positions(pivots, n):
    """Free entries of the RREF cell, row-major."""
    out = []
    pivset = set(pivots)
    for r, pc in enumerate(pivots):
        for c in range(pc + 1, n + 1):
            if c not in pivset:
                out.append((r, c))
    return out


def plane_rows_logform(task, pivots, codes):
    """RREF rows over the base field, entries as logs."""
    lt = task.tower.level(1)
    nm = task.nm
    rows = [[-1] * (task.n + 1) for _ in range(nm + 1)]
    one = 0  # log of 1
    for r, pc in enumerate(pivots):
        rows[r][pc] = one
    for (r, c), code in zip(free_positions(pivots, task.n), codes):
        rows[r][c] = int(lt.logt[code])
    return rows


def iter_cell(task, pivots):
    """All free-entry code vectors of one pivot cell, odometer order."""
    N = task.tower.level(1).N
    npos = len(free_positions(pivots, task.n))
    return itertools.product(range(N), repeat=npos)


# -- form restriction ----------------------------------------------------

def restrict_form(task, form, rows):
    """Compose a form with the plane parametrization.

    Returns {exponent vector over nm+1 vars: log coeff} at level 1.
    """
    deg, monomials = form
    lt = task.tower.level(1)
    nm1 = task.nm + 1
    acc = {}
    for ev, logc in monomials:
        # product of the linear forms of each variable occurrence
        poly = {(0,) * nm1: logc}
        for i, a in enumerate(ev):
            for _ in range(a):
                nxt = {}
                for mono, c in poly.items():
                    for t in range(nm1):
                        lc = rows[t][i]
                        if lc < 0 or c < 0:
                            continue
                        key = tuple(x + (1 if s == t else 0) for s, x in enumerate(mono))
                        v = lt.mul(c, lc)
                        cur = nxt.get(key, -1)
                        nxt[key] = lt.add(cur, v)
                poly = nxt
        for mono, c in poly.items():
            if c < 0:
                continue
            cur = acc.get(mono, -1)
            acc[mono] = lt.add(cur, c)
    return {k: v for k, v in acc.items() if v >= 0}


def lift_poly(task, poly, j):
    """Level-1 restricted polynomial lifted to level j (log multipliers)."""
    lt = task.tower.level(j)
    return {ev: lt.embed_from(c, 1) for ev, c in poly.items()}


# -- point collection ----------------------------------------------------

def proj_points(nvars, N):
    for lead in range(nvars):
        for rest in itertools.product(range(N), repeat=nvars - 1 - lead):
            yield (0,) * lead + (1,) + rest


def eval_poly_log(lt, poly, point_logs):
    acc = -1
    for ev, c in poly.items():
        t = c
        for x, a in zip(point_logs, ev):
            if a:
                if x < 0:
                    t = -1
                    break
                t = (t + x * a) % (lt.N - 1)
        if t >= 0:
            acc = lt.add(acc, t)
    return acc


def solutions_at_level(task, restricted, j):
    """Canonical points of P^nm(F_{Q^j}) killing every restricted form."""
    lt = task.tower.level(j)
    lifted = [lift_poly(task, poly, j) for poly in restricted]
    sols = []
    for pt in proj_points(task.nm + 1, lt.N):
        logs = tuple(int(lt.logt[c]) for c in pt)
        if all(eval_poly_log(lt, poly, logs) < 0 for poly in lifted):
            sols.append(logs)
    return sols


def orbits_of_level(task, sols, j):
    """Frobenius orbits of size exactly j among level-j solutions."""
    lt = task.tower.level(j)

    def frob(pt):
        return tuple(-1 if a < 0 else (a * lt.frob_mul) % (lt.N - 1) for a in pt)

    seen = set()
    orbits = []
    for pt in sols:
        if pt in seen:
            continue
        orb = [pt]
        cur = frob(pt)
        while cur != pt:
            orb.append(cur)
            cur = frob(cur)
        for x in orb:
            seen.add(x)
        if len(orb) == j:
            orbits.append(tuple(orb))
    return orbits


# -- rank machinery ------------------------------------------------------

def subset_rank(task, chosen):
    """Rank of the span of the points of the chosen orbits.

    chosen: list of (level, orbit point tuple).  Coordinates embed into
    the lcm level and the rank comes from Gaussian elimination there.
    """
    if not chosen:
        return 0
    L = lcm(*(lev for lev, _ in chosen))
    lt = task.tower.level(L)
    rows = []
    for lev, orb in chosen:
        for pt in orb:
            rows.append([lt.embed_from(a, lev) for a in pt])
    ncols = task.nm + 1
    rank = 0
    rowi = 0
    for col in range(ncols):
        piv = None
        for r in range(rowi, len(rows)):
            if rows[r][col] >= 0:
                piv = r
                break
        if piv is None:
            continue
        rows[rowi], rows[piv] = rows[piv], rows[rowi]
        prow = rows[rowi]
        pinv = lt.inv(prow[col])
        for r in range(rowi + 1, len(rows)):
            c = rows[r][col]
            if c < 0:
                continue
            f = lt.mul(c, pinv)
            rows[r] = [lt.sub(rows[r][s], lt.mul(f, prow[s])) for s in range(ncols)]
        rank += 1
        rowi += 1
        if rank == ncols or rowi == len(rows):
            break
    return rank


# -- stable-subset census on lines (rank<=2 strata of bigger point sets) --

def line_reps(nm, N):
    """RREF 2-row matrices: the lines inside P^nm."""
    out = []
    for pivots in itertools.combinations(range(nm + 1), 2):
        free = []
        pivset = set(pivots)
        for r, pc in enumerate(pivots):
            for c in range(pc + 1, nm + 1):
                if c not in pivset:
                    free.append((r, c))
        for codes in itertools.product(range(N), repeat=len(free)):
            M = [[0] * (nm + 1) for _ in range(2)]  # entries are element codes
            for r, pc in enumerate(pivots):
                M[r][pc] = 1
            for (r, c), code in zip(free, codes):
                M[r][c] = code
            out.append((pivots, M))
    return out


def uc3_from_counts(m1, m2, m3):
    """Stable 3-subsets of a point set from its field point counts."""
    o1 = m1
    o2 = (m2 - m1) // 2
    o3 = (m3 - m1) // 3
    return o1 * (o1 - 1) * (o1 - 2) // 6 + o1 * o2 + o3


def independent_subset_count(task, restricted, r, extra_levels=()):
    """Stable independent r-subsets of the section cut by `restricted`.

    Used on planes whose section is large (tangent handled elsewhere);
    supports r <= 3: rank-deficient subsets of 3 distinct points sit on
    a unique rational line inside the plane.
    """
    if r == 0:
        return 1
    if r > task.nm + 1:
        return 0
    counts = {}
    for j in range(1, r + 1):
        counts[j] = len(solutions_at_level(task, restricted, j))

    def stable_subsets(ms, size):
        o = {1: ms[1]}
        for j in range(2, size + 1):
            o[j] = (ms[j] - sum(s * o[s] for s in range(1, j) if j % s == 0)) // j
        # coefficient of x^size in prod (1+x^s)^(o_s)
        dp = [0] * (size + 1)
        dp[0] = 1
        for s, cnt in o.items():
            for _ in range(cnt):
                for t in range(size, s - 1, -1):
                    dp[t] += dp[t - s]
        return dp[size]

    total = stable_subsets(counts, r)
    if r <= 2:
        return total
    # subtract collinear 3-subsets, one rational line each
    lt1 = task.tower.level(1)
    dependent = 0
    for _, M in line_reps(task.nm, lt1.N):
        rows = [[int(lt1.logt[c]) for c in row] for row in M]
        sub = [restrict_line(task, poly, rows) for poly in restricted]
        ms = {}
        for j in (1, 2, 3):
            ms[j] = count_line_points(task, sub, j)
        dependent += uc3_from_counts(ms[1], ms[2], ms[3])
    return total - dependent


def restrict_line(task, poly, rows2):
    """Restrict an nm+1-variable polynomial to a 2-row parametrization."""
    lt = task.tower.level(1)
    acc = {}
    for ev, c in poly.items():
        sub = {(0, 0): c}
        for i, a in enumerate(ev):
            for _ in range(a):
                nxt = {}
                for mono, cc in sub.items():
                    for t in range(2):
                        lc = rows2[t][i]
                        if lc < 0 or cc < 0:
                            continue
                        key = (mono[0] + (1 - t), mono[1] + t)
                        v = lt.mul(cc, lc)
                        nxt[key] = lt.add(nxt.get(key, -1), v)
                sub = nxt
        for mono, cc in sub.items():
            if cc >= 0:
                acc[mono] = lt.add(acc.get(mono, -1), cc)
    return {k: v for k, v in acc.items() if v >= 0}


def count_line_points(task, binary_forms, j):
    """Common zeros on P^1(F_{Q^j}) of binary forms given at level 1."""
    lt = task.tower.level(j)
    lifted = [{ev: lt.embed_from(c, 1) for ev, c in f.items()} for f in binary_forms]
    cnt = 0
    for pt in proj_points(2, lt.N):
        logs = tuple(int(lt.logt[c]) for c in pt)
        if all(eval_poly_log(lt, f, logs) < 0 for f in lifted):
            cnt += 1
    return cnt


# -- the scan ------------------------------------------------------------

IDX = {name: i for i, name in enumerate(
    ("W", "V", "A", "B1", "B2", "R", "T1", "T2", "J", "P", "Q", "GEN_W", "GEN_V"))}
KIND_TRANSVERSAL, KIND_TANGENT, KIND_CONTAINED, KIND_POSDIM = 0, 1, 2, 3


def pack_profile(sizes):
    word = 0
    for s in sorted(sizes, reverse=True):
        word = (word << 4) | min(s, MAXPACK)
    return word


def classify_plane(task, restricted):
    """(kind, orbits, packed level counts) for one plane.

    orbits is a list of (level, points); the level-count word packs the
    raw solution counts over F_{Q^j}, 8 bits per level j <= 8.
    """
    if all(not poly for poly in restricted):
        return KIND_CONTAINED, [], 0
    orbits = []
    total = 0
    lcword = 0
    for j in range(1, task.jmax + 1):
        sols = solutions_at_level(task, restricted, j)
        if len(sols) > task.d:
            return KIND_POSDIM, None, 0
        if task.full_sweep and j <= 8:
            lcword |= min(len(sols), 255) << (8 * (j - 1))
        for orb in orbits_of_level(task, sols, j):
            orbits.append((j, orb))
            total += j
        if total > task.d:
            return KIND_POSDIM, None, 0
    kind = KIND_TRANSVERSAL if total == task.d else KIND_TANGENT
    return kind, orbits, lcword


def census_orbits(task, kind, orbits, counts):
    """Stable tuple classification for a finite section."""
    sizes = [len(orb) for _, orb in orbits]
    nn = len(orbits)
    by_size = {}
    for mask in range(1 << nn):
        tot = 0
        for i in range(nn):
            if mask >> i & 1:
                tot += sizes[i]
        by_size.setdefault(tot, []).append(mask)

    rank_cache = {}

    def rank(mask):
        if mask not in rank_cache:
            chosen = [orbits[i] for i in range(nn) if mask >> i & 1]
            rank_cache[mask] = subset_rank(task, chosen)
        return rank_cache[mask]

    r1, r2 = task.r1, task.r2
    if kind == KIND_TANGENT:
        if task.include_pq:
            for mask in by_size.get(r1, []):
                if r1 <= task.nm + 1 and rank(mask) == r1:
                    counts[IDX["P"]] += 1
            for mask in by_size.get(r2, []):
                if rank(mask) == r2:
                    counts[IDX["Q"]] += 1
        return 0, 0, True
    full = (1 << nn) - 1
    gen_w = gen_v = 0
    for mask in by_size.get(r1, []):
        counts[IDX["W"]] += 1
        if rank(mask) != task.g1_rank:
            counts[IDX["B1"]] += 1
            continue
        counts[IDX["J"]] += 1
        comp = full ^ mask
        if rank(comp) == r2:
            gen_w += 1
        else:
            counts[IDX["B2"]] += 1
    for mask in by_size.get(r2, []):
        counts[IDX["V"]] += 1
        if rank(mask) != r2:
            counts[IDX["T1"]] += 1
            continue
        comp = full ^ mask
        if rank(comp) == task.g1_rank:
            gen_v += 1
        else:
            counts[IDX["T2"]] += 1
    counts[IDX["GEN_W"]] += gen_w
    counts[IDX["GEN_V"]] += gen_v
    return gen_w, gen_v, gen_w == gen_v


def scan_pivot_block(task, pivots, start_id):
    """Census one RREF cell.  Positive-dimensional planes are only
    flagged here; their P/Q tuples are the driver's responsibility."""
    counts = np.zeros(len(IDX), dtype=np.int64)
    kinds = []
    profiles = []
    levelcounts = []
    contained = []
    posdim = []
    bij_fail = 0
    pid = start_id
    for codes in iter_cell(task, pivots):
        rows = plane_rows_logform(task, pivots, codes)
        restricted = [restrict_form(task, f, rows) for f in task.forms]
        kind, orbits, lcword = classify_plane(task, restricted)
        kinds.append(kind)
        levelcounts.append(lcword)
        if kind == KIND_CONTAINED:
            contained.append(pid)
            profiles.append(0)
        elif kind == KIND_POSDIM:
            posdim.append(pid)
            profiles.append(0)
        else:
            _, _, ok = census_orbits(task, kind, orbits, counts)
            if not ok:
                bij_fail += 1
            profiles.append(pack_profile(len(o) for _, o in orbits))
        pid += 1
    return {
        "counts": counts,
        "kinds": np.array(kinds, dtype=np.int8),
        "profiles": np.array(profiles, dtype=np.int64),
        "level_counts": np.array(levelcounts, dtype=np.int64),
        "contained": contained,
        "posdim": posdim,
        "bij_fail": bij_fail,
        "nplanes": pid - start_id,
    }


def count_projective_solutions(task_level, nvars):
    """Brute-force count of projective solutions of a form system.

    task_level: (LevelTables, [poly dicts in log form at that level]).
    """
    lt, polys = task_level
    cnt = 0
    for pt in proj_points(nvars, lt.N):
        logs = tuple(int(lt.logt[c]) for c in pt)
        if all(eval_poly_log(lt, poly, logs) < 0 for poly in polys):
            cnt += 1
    return cnt
