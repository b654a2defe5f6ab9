# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled scan kernel.

Mirrors fallback.py: same plane order, same classification, same
counters.  Field arithmetic runs on discrete-log tables (Zech
addition); points and orbits live in fixed-size C arrays so the
per-cell loop releases the GIL.  supports() gates the cases this fast
path covers; the driver falls back to the reference kernel elsewhere.
"""

import numpy as np

from . import fallback as _fb

DEF MAXLEV = 17        # tower levels 1..16
DEF MAXFORMS = 6
DEF MAXMONO = 96
DEF MAXDEG = 4
DEF MAXVARS = 12       # ambient n+1
DEF NC = 15            # dense simplex size for degree <= 4 in 3 vars
DEF MAXPTS = 20
DEF MAXORB = 12
DEF MAXROWS = 12

cdef struct Level:
    long N
    long p
    long* exp
    long* logt
    long* zech
    long* sol2
    long neg_shift
    long frob_mul

cdef inline long gmul(Level* L, long a, long b) noexcept nogil:
    cdef long t
    if a < 0 or b < 0:
        return -1
    t = a + b
    if t >= L.N - 1:
        t -= L.N - 1
    return t

cdef inline long gadd(Level* L, long a, long b) noexcept nogil:
    cdef long d, z
    if a < 0:
        return b
    if b < 0:
        return a
    d = b - a
    if d < 0:
        d += L.N - 1
    z = L.zech[d]
    if z < 0:
        return -1
    z += a
    if z >= L.N - 1:
        z -= L.N - 1
    return z

cdef inline long gneg(Level* L, long a) noexcept nogil:
    cdef long t
    if a < 0 or L.p == 2:
        return a
    t = a + L.neg_shift
    if t >= L.N - 1:
        t -= L.N - 1
    return t

cdef inline long gsub(Level* L, long a, long b) noexcept nogil:
    return gadd(L, a, gneg(L, b))

cdef inline long ginv(Level* L, long a) noexcept nogil:
    if a == 0:
        return 0
    return L.N - 1 - a


cdef long poly_roots(Level* L, long* C, long dc, long* roots) noexcept nogil:
    """Distinct roots in the field; dc is the true degree (C[dc] >= 0).
    Scans the field above degree 2."""
    cdef long a, b, c, u, rc, w, boa, half, sq, cnt, z, acc, t, two, four
    if dc <= 0:
        return 0
    if dc == 1:
        roots[0] = gneg(L, gmul(L, C[0], ginv(L, C[1])))
        return 1
    if dc == 2:
        a = C[2]; b = C[1]; c = C[0]
        if L.p == 2:
            if b < 0:
                u = gmul(L, c, ginv(L, a))
                if u < 0:
                    roots[0] = -1
                else:
                    roots[0] = gneg(L, (u * (L.N // 2)) % (L.N - 1))
                return 1
            boa = gmul(L, b, ginv(L, a))
            u = gmul(L, gmul(L, a, c), ginv(L, gmul(L, b, b)))
            if u < 0:
                roots[0] = -1
                roots[1] = boa
                return 2
            rc = L.sol2[L.exp[u]]
            if rc < 0:
                return 0
            w = L.logt[rc]
            roots[0] = gmul(L, boa, w)
            roots[1] = gadd(L, roots[0], boa)
            return 2
        two = L.logt[2 % L.p] if (2 % L.p) != 0 else -1
        four = L.logt[4 % L.p] if (4 % L.p) != 0 else -1
        u = gsub(L, gmul(L, b, b), gmul(L, four, gmul(L, a, c)))
        half = gmul(L, two, a)
        if u < 0:
            roots[0] = gmul(L, gneg(L, b), ginv(L, half))
            return 1
        if u % 2 == 1:
            return 0
        sq = u // 2
        roots[0] = gmul(L, gadd(L, gneg(L, b), sq), ginv(L, half))
        roots[1] = gmul(L, gsub(L, gneg(L, b), sq), ginv(L, half))
        return 2
    cnt = 0
    if C[0] < 0:
        roots[cnt] = -1
        cnt += 1
    for z in range(L.N - 1):
        acc = -1
        for t in range(dc, -1, -1):
            acc = gmul(L, acc, z) if t < dc else C[dc]
            if t < dc:
                acc = gadd(L, acc, C[t])
        if acc < 0:
            roots[cnt] = z
            cnt += 1
            if cnt >= MAXPTS:
                return cnt
    return cnt


cdef long poly_gcd(Level* L, long* A, long da, long* B, long db, long* G) noexcept nogil:
    cdef long wa[MAXDEG + 1]
    cdef long wb[MAXDEG + 1]
    cdef long i, f, tmp
    for i in range(MAXDEG + 1):
        wa[i] = A[i] if i <= da else -1
        wb[i] = B[i] if i <= db else -1
    while True:
        while da >= 0 and wa[da] < 0:
            da -= 1
        while db >= 0 and wb[db] < 0:
            db -= 1
        if da < 0:
            for i in range(MAXDEG + 1):
                G[i] = wb[i] if i <= db else -1
            return db
        if db < 0:
            for i in range(MAXDEG + 1):
                G[i] = wa[i] if i <= da else -1
            return da
        if da < db:
            for i in range(MAXDEG + 1):
                tmp = wa[i]; wa[i] = wb[i]; wb[i] = tmp
            tmp = da; da = db; db = tmp
        f = gmul(L, wa[da], ginv(L, wb[db]))
        for i in range(db + 1):
            wa[da - db + i] = gsub(L, wa[da - db + i], gmul(L, f, wb[i]))
        da -= 1


cdef struct Scan:
    Level lv[MAXLEV]
    int have[MAXLEV]
    long emb1[MAXLEV]            # level-1 -> level-j multiplier
    long emb[MAXLEV][MAXLEV]     # src level -> dst level multiplier
    int nforms
    int deg[MAXFORMS]
    int nmono[MAXFORMS]
    int ev[MAXFORMS][MAXMONO][MAXVARS]
    long coef[MAXFORMS][MAXMONO]
    int n
    int nm
    int d
    int r1
    int r2
    int g1_rank
    int jmax
    int include_pq
    int npiv
    int piv[4]
    int nfree
    int freer[MAXVARS * 4]
    int freec[MAXVARS * 4]
    int full_sweep


cdef inline int tri(int a, int b) noexcept nogil:
    return ((a + b) * (a + b + 1)) // 2 + b


cdef int restrict_forms(Scan* S, long* rows, long* F) noexcept nogil:
    """Restricted dense coefficients per form; returns 1 when every
    restricted form vanishes (contained plane).

    nm == 2: F[fi*NC + tri(a, b)] is the coefficient of s0^a s1^b z^(D-a-b).
    nm == 1: F[fi*NC + a] is the coefficient of s0^a z^(D-a).
    """
    cdef Level* L = &S.lv[1]
    cdef long work[2][NC]
    cdef int fi, mi, i, rep, t, a, b, idx, deg, cur, nxt, allzero, stride
    cdef long cc, lc, v
    allzero = 1
    for fi in range(S.nforms):
        deg = S.deg[fi]
        for i in range(NC):
            F[fi * NC + i] = -1
        for mi in range(S.nmono[fi]):
            for i in range(NC):
                work[0][i] = -1
            work[0][0] = S.coef[fi][mi]
            cur = 0
            t = 0
            for i in range(S.n + 1):
                for rep in range(S.ev[fi][mi][i]):
                    nxt = 1 - cur
                    for a in range(NC):
                        work[nxt][a] = -1
                    if S.nm == 1:
                        for a in range(t + 1):
                            cc = work[cur][a]
                            if cc < 0:
                                continue
                            lc = rows[0 * (S.n + 1) + i]
                            if lc >= 0:
                                v = gmul(L, cc, lc)
                                work[nxt][a + 1] = gadd(L, work[nxt][a + 1], v)
                            lc = rows[1 * (S.n + 1) + i]
                            if lc >= 0:
                                v = gmul(L, cc, lc)
                                work[nxt][a] = gadd(L, work[nxt][a], v)
                    else:
                        for a in range(t + 1):
                            for b in range(t + 1 - a):
                                idx = tri(a, b)
                                cc = work[cur][idx]
                                if cc < 0:
                                    continue
                                lc = rows[0 * (S.n + 1) + i]
                                if lc >= 0:
                                    v = gmul(L, cc, lc)
                                    idx = tri(a + 1, b)
                                    work[nxt][idx] = gadd(L, work[nxt][idx], v)
                                lc = rows[1 * (S.n + 1) + i]
                                if lc >= 0:
                                    v = gmul(L, cc, lc)
                                    idx = tri(a, b + 1)
                                    work[nxt][idx] = gadd(L, work[nxt][idx], v)
                                lc = rows[2 * (S.n + 1) + i]
                                if lc >= 0:
                                    v = gmul(L, cc, lc)
                                    idx = tri(a, b)
                                    work[nxt][idx] = gadd(L, work[nxt][idx], v)
                    cur = nxt
                    t += 1
            if S.nm == 1:
                for a in range(deg + 1):
                    if work[cur][a] >= 0:
                        F[fi * NC + a] = gadd(L, F[fi * NC + a], work[cur][a])
            else:
                for a in range(deg + 1):
                    for b in range(deg + 1 - a):
                        idx = tri(a, b)
                        if work[cur][idx] >= 0:
                            F[fi * NC + idx] = gadd(L, F[fi * NC + idx], work[cur][idx])
        for i in range(NC):
            if F[fi * NC + i] >= 0:
                allzero = 0
    return allzero


cdef int level_solutions(Scan* S, long* F, int j, long* pts) noexcept nogil:
    """Canonical solutions over F_{Q^j}; returns the count, or -1 when
    it exceeds d (positive-dimensional), or -2 when a swept line lies
    inside the section."""
    cdef Level* L = &S.lv[j]
    cdef long lifted[MAXFORMS][NC]
    cdef long uni[MAXFORMS][MAXDEG + 1]
    cdef long g[MAXDEG + 1]
    cdef long gnew[MAXDEG + 1]
    cdef long roots[MAXPTS]
    cdef long pows[MAXDEG + 1]
    cdef int fi, i, c, a, b, deg, npts, y, dg, dnew, nr, ri, allz, anyform
    cdef long mul1 = S.emb1[j]
    cdef long acc, val, ycode, ylog
    for fi in range(S.nforms):
        for i in range(NC):
            val = F[fi * NC + i]
            lifted[fi][i] = -1 if val < 0 else (val * mul1) % (L.N - 1)
    npts = 0
    if S.nm == 1:
        # points (1, z) and (0, 1)
        for fi in range(S.nforms):
            deg = S.deg[fi]
            for c in range(deg + 1):
                # coeff of z^c is the a = deg - c entry
                uni[fi][c] = lifted[fi][deg - c]
            for c in range(deg + 1, MAXDEG + 1):
                uni[fi][c] = -1
        dg = degree_of(uni[0], S.deg[0])
        for i in range(MAXDEG + 1):
            g[i] = uni[0][i] if i <= S.deg[0] else -1
        allz = 1 if dg < 0 else 0
        for fi in range(1, S.nforms):
            dnew = degree_of(uni[fi], S.deg[fi])
            if dnew >= 0:
                allz = 0
            dg = poly_gcd(L, g, dg, uni[fi], dnew, gnew)
            for i in range(MAXDEG + 1):
                g[i] = gnew[i]
        if S.nforms == 1:
            allz = 1 if dg < 0 else 0
        if allz:
            return -2
        nr = poly_roots(L, g, dg, roots)
        for ri in range(nr):
            if npts >= S.d:
                return -1
            pts[3 * npts + 0] = 0
            pts[3 * npts + 1] = roots[ri]
            pts[3 * npts + 2] = -2  # unused third coordinate
            npts += 1
        # point at infinity (0, 1): z^deg coefficient = a = 0 entry
        anyform = 0
        for fi in range(S.nforms):
            if lifted[fi][0] >= 0:
                anyform = 1
        if not anyform:
            if npts >= S.d:
                return -1
            pts[3 * npts + 0] = -1
            pts[3 * npts + 1] = 0
            pts[3 * npts + 2] = -2
            npts += 1
        return npts
    # nm == 2: lines (1, y, z) for y in F, then (0, 1, z), then (0, 0, 1)
    for y in range(-1, L.N - 1):
        ylog = y  # -1 encodes y = 0
        for fi in range(S.nforms):
            deg = S.deg[fi]
            pows[0] = 0
            for i in range(1, deg + 1):
                pows[i] = -1 if ylog < 0 else (ylog * i) % (L.N - 1)
            for c in range(deg + 1):
                acc = -1
                for b in range(deg - c + 1):
                    a = deg - c - b
                    val = lifted[fi][tri(a, b)]
                    if val < 0:
                        continue
                    acc = gadd(L, acc, gmul(L, val, pows[b]))
                uni[fi][c] = acc
            for c in range(deg + 1, MAXDEG + 1):
                uni[fi][c] = -1
        dg = degree_of(uni[0], S.deg[0])
        for i in range(MAXDEG + 1):
            g[i] = uni[0][i] if i <= MAXDEG else -1
        allz = 1 if dg < 0 else 0
        for fi in range(1, S.nforms):
            dnew = degree_of(uni[fi], S.deg[fi])
            if dnew >= 0:
                allz = 0
            dg = poly_gcd(L, g, dg, uni[fi], dnew, gnew)
            for i in range(MAXDEG + 1):
                g[i] = gnew[i]
        if S.nforms == 1:
            allz = 1 if dg < 0 else 0
        if allz:
            return -2
        nr = poly_roots(L, g, dg, roots)
        for ri in range(nr):
            if npts >= S.d:
                return -1
            pts[3 * npts + 0] = 0
            pts[3 * npts + 1] = ylog
            pts[3 * npts + 2] = roots[ri]
            npts += 1
    # line (0, 1, z): s0 = 0 => only a = 0 terms survive
    for fi in range(S.nforms):
        deg = S.deg[fi]
        for c in range(deg + 1):
            uni[fi][c] = lifted[fi][tri(0, deg - c)]
        for c in range(deg + 1, MAXDEG + 1):
            uni[fi][c] = -1
    dg = degree_of(uni[0], S.deg[0])
    for i in range(MAXDEG + 1):
        g[i] = uni[0][i]
    allz = 1 if dg < 0 else 0
    for fi in range(1, S.nforms):
        dnew = degree_of(uni[fi], S.deg[fi])
        if dnew >= 0:
            allz = 0
        dg = poly_gcd(L, g, dg, uni[fi], dnew, gnew)
        for i in range(MAXDEG + 1):
            g[i] = gnew[i]
    if S.nforms == 1:
        allz = 1 if dg < 0 else 0
    if allz:
        return -2
    nr = poly_roots(L, g, dg, roots)
    for ri in range(nr):
        if npts >= S.d:
            return -1
        pts[3 * npts + 0] = -1
        pts[3 * npts + 1] = 0
        pts[3 * npts + 2] = roots[ri]
        npts += 1
    # the point (0, 0, 1): value is the z^deg coefficient tri(0, 0)
    anyform = 0
    for fi in range(S.nforms):
        if lifted[fi][0] >= 0:
            anyform = 1
    if not anyform:
        if npts >= S.d:
            return -1
        pts[3 * npts + 0] = -1
        pts[3 * npts + 1] = -1
        pts[3 * npts + 2] = 0
        npts += 1
    return npts


cdef inline int degree_of(long* C, int dmax) noexcept nogil:
    cdef int t = dmax
    while t >= 0 and C[t] < 0:
        t -= 1
    return t


cdef int zero_dim_certificate(Scan* S, long* F) noexcept nogil:
    """1 when the first two restricted quadrics provably cut out a
    0-dimensional section: the leading z-coefficient of one form is
    nonzero (so it has no z-free factor) and the z-resultant is a
    nonzero binary form.  The certificate is sound, not complete."""
    cdef Level* L = &S.lv[1]
    cdef long a1, a2, b1[2], b2[2], c1[3], c2[3]
    cdef long A[3]
    cdef long B[2]
    cdef long Cc[4]
    cdef long R[5]
    cdef long* Fa
    cdef long* Fb
    cdef int i, j
    if S.nm != 2 or S.nforms < 2 or S.deg[0] != 2 or S.deg[1] != 2:
        return 0
    Fa = F
    Fb = F + NC
    if Fa[0] < 0 and Fb[0] >= 0:
        Fa = F + NC
        Fb = F
    if Fa[0] < 0:
        return 0
    a1 = Fa[0]; a2 = Fb[0]
    b1[0] = Fa[tri(1, 0)]; b1[1] = Fa[tri(0, 1)]
    b2[0] = Fb[tri(1, 0)]; b2[1] = Fb[tri(0, 1)]
    c1[0] = Fa[tri(2, 0)]; c1[1] = Fa[tri(1, 1)]; c1[2] = Fa[tri(0, 2)]
    c2[0] = Fb[tri(2, 0)]; c2[1] = Fb[tri(1, 1)]; c2[2] = Fb[tri(0, 2)]
    # A = a1 c2 - a2 c1 (deg 2), B = a1 b2 - a2 b1 (deg 1),
    # Cc = b1 c2 - b2 c1 (deg 3), Res = A^2 - B*Cc (deg 4)
    for i in range(3):
        A[i] = gsub(L, gmul(L, a1, c2[i]), gmul(L, a2, c1[i]))
    for i in range(2):
        B[i] = gsub(L, gmul(L, a1, b2[i]), gmul(L, a2, b1[i]))
    for i in range(4):
        Cc[i] = -1
    for i in range(2):
        for j in range(3):
            Cc[i + j] = gadd(L, Cc[i + j],
                             gsub(L, gmul(L, b1[i], c2[j]), gmul(L, b2[i], c1[j])))
    for i in range(5):
        R[i] = -1
    for i in range(3):
        for j in range(3):
            R[i + j] = gadd(L, R[i + j], gmul(L, A[i], A[j]))
    for i in range(2):
        for j in range(4):
            R[i + j] = gsub(L, R[i + j], gmul(L, B[i], Cc[j]))
    for i in range(5):
        if R[i] >= 0:
            return 1
    return 0


cdef long rank_of_mask(Scan* S, int mask, int norb, int* olev, int* osz,
                       long* opts) noexcept nogil:
    """Rank of the span of the points of the chosen orbits."""
    cdef long M[MAXROWS][3]
    cdef int nrows = 0
    cdef int oi, t, c, col, r, piv_r, rank, ri
    cdef long Lcm = 1, g, a, f, pinv
    cdef Level* L
    for oi in range(norb):
        if mask >> oi & 1:
            g = _gcd(Lcm, olev[oi])
            Lcm = Lcm // g * olev[oi]
    L = &S.lv[Lcm]
    for oi in range(norb):
        if not (mask >> oi & 1):
            continue
        for t in range(osz[oi]):
            if nrows >= MAXROWS:
                return -1
            for c in range(S.nm + 1):
                a = opts[(oi * MAXPTS + t) * 3 + c]
                if a == -2:
                    M[nrows][c] = -1
                elif a < 0:
                    M[nrows][c] = -1
                else:
                    M[nrows][c] = (a * S.emb[olev[oi]][Lcm]) % (L.N - 1)
            nrows += 1
    rank = 0
    r = 0
    for col in range(S.nm + 1):
        piv_r = -1
        for ri in range(r, nrows):
            if M[ri][col] >= 0:
                piv_r = ri
                break
        if piv_r < 0:
            continue
        for c in range(S.nm + 1):
            f = M[r][c]; M[r][c] = M[piv_r][c]; M[piv_r][c] = f
        pinv = ginv(L, M[r][col])
        for ri in range(r + 1, nrows):
            if M[ri][col] < 0:
                continue
            f = gmul(L, M[ri][col], pinv)
            for c in range(S.nm + 1):
                M[ri][c] = gsub(L, M[ri][c], gmul(L, f, M[r][c]))
        rank += 1
        r += 1
        if rank == S.nm + 1 or r == nrows:
            break
    return rank


cdef inline long _gcd(long a, long b) noexcept nogil:
    cdef long t
    while b:
        t = a % b
        a = b
        b = t
    return a


def supports(task):
    if task.nm not in (1, 2):
        return False
    if task.n + 1 > MAXVARS or task.d > 8 or len(task.forms) > MAXFORMS:
        return False
    for deg, monos in task.forms:
        if deg > MAXDEG or len(monos) > MAXMONO:
            return False
    if max(task.tower.tables) >= MAXLEV:
        return False
    if task.r1 > 8 or task.r2 > 8:
        return False
    return True


def supports_count(task_level, nvars):
    lt, polys = task_level
    if nvars > MAXVARS or len(polys) > MAXFORMS:
        return False
    for poly in polys:
        if len(poly) > MAXMONO:
            return False
        for ev in poly:
            if sum(ev) > MAXDEG:
                return False
    return True


cdef int fill_scan(Scan* S, task, pivots, keepalive) except -1:
    cdef int j, fi, mi, i, src
    cdef long[::1] view
    for j in range(MAXLEV):
        S.have[j] = 0
        S.emb1[j] = 1
        for i in range(MAXLEV):
            S.emb[j][i] = 1
    for j, tab in task.tower.tables.items():
        S.have[j] = 1
        S.lv[j].N = tab.N
        S.lv[j].p = tab.p
        S.lv[j].neg_shift = tab.neg_shift
        S.lv[j].frob_mul = tab.frob_mul
        for name in ("exp", "logt", "zech", "sol2"):
            arr = np.ascontiguousarray(getattr(tab, name), dtype=np.int64)
            keepalive.append(arr)
            view = arr
            if name == "exp":
                S.lv[j].exp = &view[0]
            elif name == "logt":
                S.lv[j].logt = &view[0]
            elif name == "zech":
                S.lv[j].zech = &view[0]
            else:
                S.lv[j].sol2 = &view[0]
        for src, mul in tab.emb_mul.items():
            S.emb[src][j] = mul
            if src == 1:
                S.emb1[j] = mul
    S.n = task.n
    S.nm = task.nm
    S.d = task.d
    S.r1 = task.r1
    S.r2 = task.r2
    S.g1_rank = task.g1_rank
    S.jmax = task.jmax
    S.include_pq = 1 if task.include_pq else 0
    S.full_sweep = 1 if task.full_sweep else 0
    S.nforms = len(task.forms)
    for fi, (deg, monos) in enumerate(task.forms):
        S.deg[fi] = deg
        S.nmono[fi] = len(monos)
        for mi, (evec, logc) in enumerate(monos):
            S.coef[fi][mi] = logc
            for i in range(S.n + 1):
                S.ev[fi][mi][i] = evec[i]
    S.npiv = len(pivots)
    for i, pc in enumerate(pivots):
        S.piv[i] = pc
    fp = _fb.free_positions(pivots, task.n)
    S.nfree = len(fp)
    for i, (r, c) in enumerate(fp):
        S.freer[i] = r
        S.freec[i] = c
    return 0


cdef void census_c(Scan* S, int kind, int norb, int* olev, int* osz,
                   long* opts, long* counts, long* gen_w, long* gen_v) noexcept nogil:
    cdef int mask, full, oi, tot
    cdef long rk, crk
    cdef int r1 = S.r1, r2 = S.r2
    full = (1 << norb) - 1
    gen_w[0] = 0
    gen_v[0] = 0
    for mask in range(1 << norb):
        tot = 0
        for oi in range(norb):
            if mask >> oi & 1:
                tot += osz[oi]
        if kind == 1:  # tangent: P/Q only
            if not S.include_pq:
                continue
            if tot == r1 and r1 <= S.nm + 1:
                rk = rank_of_mask(S, mask, norb, olev, osz, opts)
                if rk == r1:
                    counts[9] += 1   # P
            if tot == r2 and r2 <= S.nm + 1:
                rk = rank_of_mask(S, mask, norb, olev, osz, opts)
                if rk == r2:
                    counts[10] += 1  # Q
            continue
        if tot == r1:
            counts[0] += 1           # W
            rk = rank_of_mask(S, mask, norb, olev, osz, opts)
            if rk != S.g1_rank:
                counts[3] += 1       # B1
            else:
                counts[8] += 1       # J
                crk = rank_of_mask(S, full ^ mask, norb, olev, osz, opts)
                if crk == r2:
                    gen_w[0] += 1
                else:
                    counts[4] += 1   # B2
        if tot == r2:
            counts[1] += 1           # V
            rk = rank_of_mask(S, mask, norb, olev, osz, opts)
            if rk != r2:
                counts[6] += 1       # T1
            else:
                crk = rank_of_mask(S, full ^ mask, norb, olev, osz, opts)
                if crk == S.g1_rank:
                    gen_v[0] += 1
                else:
                    counts[7] += 1   # T2


cdef int scan_cell(Scan* S, long* counts, signed char* kinds, long* profiles,
                   long* levelcounts, long nplanes) noexcept nogil:
    """Returns the number of per-plane bijection failures."""
    cdef long rows[4 * MAXVARS]
    cdef long F[MAXFORMS * NC]
    cdef long pts[MAXPTS * 3]
    cdef long opts[MAXORB * MAXPTS * 3]
    cdef int olev[MAXORB]
    cdef int osz[MAXORB]
    cdef long cur[3]
    cdef long img[3]
    cdef int odo[MAXVARS * 4]
    cdef long pid, N1
    cdef int i, j, k, c, npts, norb, total, kind, posdim, hit, oi, t, found, bijf
    cdef int certified
    cdef long lcword, genw, genv, sizes_word
    cdef Level* L1 = &S.lv[1]
    N1 = L1.N
    bijf = 0
    for i in range(S.nfree):
        odo[i] = 0
    for pid in range(nplanes):
        # rows from odometer (codes -> logs); odometer: last position fastest
        for i in range((S.nm + 1) * (S.n + 1)):
            rows[i] = -1
        for i in range(S.npiv):
            rows[i * (S.n + 1) + S.piv[i]] = 0
        for i in range(S.nfree):
            rows[S.freer[i] * (S.n + 1) + S.freec[i]] = L1.logt[odo[i]]
        # advance odometer for next iteration
        i = S.nfree - 1
        while i >= 0:
            odo[i] += 1
            if odo[i] < N1:
                break
            odo[i] = 0
            i -= 1
        if restrict_forms(S, rows, F):
            kinds[pid] = 2  # contained
            profiles[pid] = 0
            levelcounts[pid] = 0
            continue
        certified = 0 if S.full_sweep else zero_dim_certificate(S, F)
        posdim = 0
        norb = 0
        total = 0
        lcword = 0
        for j in range(1, S.jmax + 1):
            if certified and total + j > S.d:
                break  # no orbit of size >= j still fits under the bound
            if not S.have[j]:
                posdim = 1
                break
            npts = level_solutions(S, F, j, pts)
            if npts < 0:
                posdim = 1
                break
            if S.full_sweep and j <= 8:
                lcword |= (<long> (npts if npts < 255 else 255)) << (8 * (j - 1))
            # orbits of size exactly j among these solutions
            for k in range(npts):
                if pts[3 * k] == -3:
                    continue  # already consumed
                for c in range(3):
                    cur[c] = pts[3 * k + c]
                # walk the orbit
                hit = 1
                for t in range(1, j + 1):
                    for c in range(3):
                        if cur[c] == -2 or cur[c] < 0:
                            img[c] = cur[c]
                        else:
                            img[c] = (cur[c] * S.lv[j].frob_mul) % (S.lv[j].N - 1)
                    # find img among pts, mark consumed
                    found = -1
                    for i in range(npts):
                        if pts[3 * i] == -3:
                            continue
                        if (pts[3 * i] == img[0] and pts[3 * i + 1] == img[1]
                                and pts[3 * i + 2] == img[2]):
                            found = i
                            break
                    if found < 0:
                        hit = 0
                        break
                    if t < j:
                        if found == k:
                            hit = 0  # orbit smaller than j: not new here
                            break
                        if norb < MAXORB and t <= MAXPTS:
                            opts[(norb * MAXPTS + t) * 3 + 0] = img[0]
                            opts[(norb * MAXPTS + t) * 3 + 1] = img[1]
                            opts[(norb * MAXPTS + t) * 3 + 2] = img[2]
                        pts[3 * found] = -3
                        pts[3 * found + 1] = -3
                        pts[3 * found + 2] = -3
                        for c in range(3):
                            cur[c] = img[c]
                    else:
                        if found != k:
                            hit = 0
                if hit:
                    if norb >= MAXORB:
                        posdim = 1
                        break
                    opts[(norb * MAXPTS + 0) * 3 + 0] = pts[3 * k]
                    opts[(norb * MAXPTS + 0) * 3 + 1] = pts[3 * k + 1]
                    opts[(norb * MAXPTS + 0) * 3 + 2] = pts[3 * k + 2]
                    olev[norb] = j
                    osz[norb] = j
                    norb += 1
                    total += j
                pts[3 * k] = -3
                pts[3 * k + 1] = -3
                pts[3 * k + 2] = -3
            if posdim or total > S.d:
                posdim = 1
                break
        if posdim:
            kinds[pid] = 3
            profiles[pid] = 0
            levelcounts[pid] = 0
            continue
        kind = 0 if total == S.d else 1
        kinds[pid] = kind
        levelcounts[pid] = lcword
        # profile word: sizes descending, 4 bits each
        sizes_word = 0
        for i in range(S.jmax, 0, -1):
            for oi in range(norb):
                if osz[oi] == i:
                    sizes_word = (sizes_word << 4) | (i if i < 15 else 15)
        profiles[pid] = sizes_word
        census_c(S, kind, norb, olev, osz, opts, counts, &genw, &genv)
        if kind == 0:
            counts[11] += genw
            counts[12] += genv
            if genw != genv:
                bijf += 1
    return bijf


def debug_plane(task, pivots, codes):
    """Points found per level for one plane (debugging aid)."""
    cdef Scan S
    cdef long rows[4 * MAXVARS]
    cdef long F[MAXFORMS * NC]
    cdef long pts[MAXPTS * 3]
    keepalive = []
    fill_scan(&S, task, pivots, keepalive)
    cdef Level* L1 = &S.lv[1]
    cdef int i, j, npts
    for i in range((S.nm + 1) * (S.n + 1)):
        rows[i] = -1
    for i in range(S.npiv):
        rows[i * (S.n + 1) + S.piv[i]] = 0
    for i in range(S.nfree):
        rows[S.freer[i] * (S.n + 1) + S.freec[i]] = L1.logt[codes[i]]
    contained = restrict_forms(&S, rows, F)
    out = {"contained": bool(contained),
           "F": [[F[fi * NC + i] for i in range(NC)] for fi in range(S.nforms)]}
    levels = {}
    for j in range(1, S.jmax + 1):
        npts = level_solutions(&S, F, j, pts)
        levels[j] = {"npts": npts,
                     "pts": [[pts[3 * k + c] for c in range(3)]
                             for k in range(max(npts, 0))]}
    out["levels"] = levels
    return out


def scan_pivot_block(task, pivots, start_id):
    cdef Scan S
    keepalive = []
    fill_scan(&S, task, pivots, keepalive)
    cdef long nplanes = 1
    for _ in range(S.nfree):
        nplanes *= S.lv[1].N
    counts_arr = np.zeros(13, dtype=np.int64)
    kinds_arr = np.zeros(nplanes, dtype=np.int8)
    profiles_arr = np.zeros(nplanes, dtype=np.int64)
    lc_arr = np.zeros(nplanes, dtype=np.int64)
    cdef long[::1] counts = counts_arr
    cdef signed char[::1] kinds = kinds_arr
    cdef long[::1] profiles = profiles_arr
    cdef long[::1] lcs = lc_arr
    cdef int bijf
    with nogil:
        bijf = scan_cell(&S, &counts[0], &kinds[0], &profiles[0], &lcs[0], nplanes)
    return {
        "counts": counts_arr,
        "kinds": kinds_arr,
        "profiles": profiles_arr,
        "level_counts": lc_arr,
        "bij_fail": bijf,
        "nplanes": int(nplanes),
    }


def count_projective_solutions(task_level, nvars):
    lt, polys = task_level
    cdef long N = lt.N
    cdef int nf = len(polys)
    cdef int nv = nvars
    cdef int nm_total = 0
    cdef int fi, mi, i
    mono_ev = np.zeros((MAXFORMS * MAXMONO, MAXVARS), dtype=np.int64)
    mono_c = np.full(MAXFORMS * MAXMONO, -1, dtype=np.int64)
    form_off = np.zeros(MAXFORMS + 1, dtype=np.int64)
    off = 0
    for fi, poly in enumerate(polys):
        form_off[fi] = off
        for ev, c in sorted(poly.items()):
            for i, a in enumerate(ev):
                mono_ev[off, i] = a
            mono_c[off] = c
            off += 1
    form_off[nf] = off
    exp_arr = np.ascontiguousarray(lt.exp, dtype=np.int64)
    logt_arr = np.ascontiguousarray(lt.logt, dtype=np.int64)
    zech_arr = np.ascontiguousarray(lt.zech, dtype=np.int64)
    sol2_arr = np.ascontiguousarray(lt.sol2, dtype=np.int64)
    cdef Level L
    cdef long[::1] expv = exp_arr
    cdef long[::1] logv = logt_arr
    cdef long[::1] zechv = zech_arr
    cdef long[::1] sol2v = sol2_arr
    L.N = lt.N
    L.p = lt.p
    L.exp = &expv[0]
    L.logt = &logv[0]
    L.zech = &zechv[0]
    L.sol2 = &sol2v[0]
    L.neg_shift = lt.neg_shift
    L.frob_mul = lt.frob_mul
    cdef long[:, ::1] mev = mono_ev
    cdef long[::1] mc = mono_c
    cdef long[::1] foff = form_off
    cdef long count
    with nogil:
        count = _count_proj(&L, nv, nf, &foff[0], &mev[0, 0], &mc[0])
    return int(count)


cdef long _count_proj(Level* L, int nv, int nf, long* foff, long* mev,
                      long* mc) noexcept nogil:
    cdef long logs[MAXVARS]
    cdef int odo[MAXVARS]
    cdef int lead, i, fi, ok
    cdef long mi, total, cells, cellidx, acc, t, a
    total = 0
    for lead in range(nv):
        # coordinates: 0..lead-1 zero, lead = 1, rest free
        cells = 1
        for i in range(lead + 1, nv):
            cells *= L.N
        for i in range(nv):
            odo[i] = 0
        for cellidx in range(cells):
            for i in range(lead):
                logs[i] = -1
            logs[lead] = 0
            for i in range(lead + 1, nv):
                logs[i] = L.logt[odo[i]]
            ok = 1
            for fi in range(nf):
                acc = -1
                for mi in range(foff[fi], foff[fi + 1]):
                    t = mc[mi]
                    for i in range(nv):
                        a = mev[mi * MAXVARS + i]
                        if a > 0:
                            if logs[i] < 0:
                                t = -1
                                break
                            t = (t + logs[i] * a) % (L.N - 1)
                    if t >= 0:
                        acc = gadd(L, acc, t)
                if acc >= 0:
                    ok = 0
                    break
            if ok:
                total += 1
            i = nv - 1
            while i > lead:
                odo[i] += 1
                if odo[i] < L.N:
                    break
                odo[i] = 0
                i -= 1
    return total

