"""Stratum censuses and the plane-counting identities.

Builds the per-plane scan tasks, assembles Galois-stable tuple counts
for every stratum of the extended relation, and checks the classic and
extended identities, the partition identities, dimension probes, the
Lang-Weil dichotomy at dimension zero, and the averaged term table.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from . import _core, geom, gf
from ._core import fallback as _fb
from ._core.task import ScanTask, make_tower
from .lring import specialize
from .motivic import (grassmann_through, grassmannian_class, proj_class,
                      rank_locus_class, sym_proj_class, uconf_proj_class,
                      dependent_tuple_classes)
from .params import ParamSet, ParameterViolation


class InsufficientSamples(ValueError):
    pass


class PositiveDimEncountered(Warning):
    pass


@dataclass
class StratumCounts:
    W: int = 0
    V: int = 0
    A: int = 0
    B1: int = 0
    B2: int = 0
    R: int = 0
    T1: int = 0
    T2: int = 0
    J: int = 0
    P: int = 0
    Q: int = 0
    M: int | None = None
    N: int | None = None
    gen_W: int = 0
    gen_V: int = 0
    n_planes: int = 0
    kind_histogram: dict = dc_field(default_factory=dict)
    posdim_planes: tuple = ()
    contained_planes: tuple = ()
    bijection_failures: int = 0
    pq_mode: str = "full"
    params: ParamSet | None = None
    e: int = 1
    profiles: tuple = dc_field(default=(), repr=False)
    level_counts: tuple = dc_field(default=(), repr=False)
    kinds: tuple = dc_field(default=(), repr=False)

    def check_invariants(self):
        assert self.W == self.J + self.B1, "W must split as J + B1"
        for name in ("W", "V", "A", "B1", "B2", "R", "T1", "T2", "J", "P", "Q"):
            assert getattr(self, name) >= 0

    def lhs(self):
        return self.W - self.B1 - self.B2 - self.A

    def rhs(self):
        return self.V - self.R - self.T1 - self.T2

    def as_dict(self):
        out = {k: getattr(self, k) for k in
               ("W", "V", "A", "B1", "B2", "R", "T1", "T2", "J", "P", "Q", "M", "N",
                "gen_W", "gen_V", "n_planes", "bijection_failures", "pq_mode", "e")}
        out["kind_histogram"] = dict(self.kind_histogram)
        out["posdim_plane_count"] = len(self.posdim_planes)
        out["contained_plane_count"] = len(self.contained_planes)
        if self.params is not None:
            out["params"] = self.params.as_dict()
        return out


def _forms_to_logs(Ye, tower):
    lt = tower.level(1)
    out = []
    for f in Ye.forms:
        monos = tuple(sorted((tuple(ev), int(lt.logt[c.code()]))
                             for ev, c in f.terms.items()))
        out.append((f.degree(), monos))
    return tuple(out)


def _pivot_sets(n, k):
    import itertools
    return list(itertools.combinations(range(n + 1), k + 1))


def _cell_size(pivots, n, N):
    nfree = len(_fb.free_positions(pivots, n))
    return N ** nfree


def plane_from_id(task, plane_id):
    """Rebuild the RREF rows (log form) of a plane from its scan index."""
    N = task.tower.level(1).N
    pivsets = _pivot_sets(task.n, task.nm)
    for pivots in pivsets:
        size = _cell_size(pivots, task.n, N)
        if plane_id < size:
            npos = len(_fb.free_positions(pivots, task.n))
            codes = []
            rem = plane_id
            for t in range(npos - 1, -1, -1):
                codes.append(rem // N ** t)
                rem %= N ** t
            return pivots, tuple(codes)
        plane_id -= size
    raise IndexError("plane id out of range")


def _contained_catalog(params: ParamSet, q):
    """Stratum contributions of a single contained plane."""
    nm = params.r
    r1, r2 = params.r1, params.r2

    def stable_subsets(r):
        return int(specialize(uconf_proj_class(nm, r).value, q)) if r else 1

    def generic_subsets(r, grank):
        if r == 0:
            return 1
        return int(specialize(rank_locus_class(grank, nm, r, distinct=True).value, q))

    cW = stable_subsets(r1)
    cJ = generic_subsets(r1, params.generic_rank(r1))
    cV = stable_subsets(r2)
    cR = generic_subsets(r2, r2)
    return {"W": cW, "J": cJ, "B1": cW - cJ, "A": cJ,
            "V": cV, "R": cR, "T1": cV - cR}


def stratum_counts(Y: geom.VarietySpec, params: ParamSet, e,
                   pq="full", with_mn="auto", workers=1, collect=False):
    """Full stratum census of Y over F_{q^e}.

    pq controls the tangent/positive-dimensional tuple counts: "full"
    computes P and Q everywhere, "cheap" skips the expensive long-tuple
    counts on positive-dimensional sections, False skips P/Q entirely.
    Positive-dimensional planes fall outside the gated strata and are
    reported in posdim_planes.
    """
    params.check_structural()
    params.validate_for(Y)
    Ye = Y.base_change(e)
    base = Ye.field
    nm = params.r
    r1, r2 = params.r1, params.r2
    tower = make_tower(base, Y.d, r1, r2)
    task = ScanTask(tower=tower, n=Y.n, nm=nm, d=Y.d, r1=r1, r2=r2,
                    g1_rank=params.generic_rank(r1),
                    forms=_forms_to_logs(Ye, tower), include_pq=bool(pq),
                    full_sweep=bool(collect))
    pivsets = _pivot_sets(Y.n, nm)
    N = base.order
    offsets = []
    total = 0
    for pv in pivsets:
        offsets.append(total)
        total += _cell_size(pv, Y.n, N)

    def run_block(i):
        return _core.scan_pivot_block(task, pivsets[i], offsets[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            blocks = list(ex.map(run_block, range(len(pivsets))))
    else:
        blocks = [run_block(i) for i in range(len(pivsets))]

    counts = np.zeros(len(_fb.IDX), dtype=np.int64)
    contained = []
    posdim = []
    bij = 0
    kinds_parts = []
    prof_parts = []
    lc_parts = []
    for b in blocks:
        counts += b["counts"]
        contained.extend(b["contained"])
        posdim.extend(b["posdim"])
        bij += b["bij_fail"]
        if collect:
            kinds_parts.append(b["kinds"])
            prof_parts.append(b["profiles"])
            lc_parts.append(b.get("level_counts", np.zeros(0, dtype=np.int64)))

    sc = StratumCounts(params=params, e=e, pq_mode=str(pq))
    for name in ("W", "V", "B1", "B2", "T1", "T2", "J", "P", "Q"):
        setattr(sc, name, int(counts[_fb.IDX[name]]))
    sc.gen_W = int(counts[_fb.IDX["GEN_W"]])
    sc.gen_V = int(counts[_fb.IDX["GEN_V"]])
    sc.bijection_failures = bij
    sc.n_planes = total
    sc.contained_planes = tuple(contained)
    sc.posdim_planes = tuple(posdim)

    if contained:
        cat = _contained_catalog(params, N)
        cnt = len(contained)
        sc.W += cnt * cat["W"]
        sc.J += cnt * cat["J"]
        sc.B1 += cnt * cat["B1"]
        sc.A += cnt * cat["A"]
        sc.V += cnt * cat["V"]
        sc.R += cnt * cat["R"]
        sc.T1 += cnt * cat["T1"]

    # positive-dimensional sections still carry P/Q tuples; both kernels
    # defer them to this slow path (cheap mode skips long tuples there)
    if posdim and pq:
        cheap = (pq == "cheap")
        for pid in posdim:
            pivots, codes = plane_from_id(task, pid)
            rows = _fb.plane_rows_logform(task, pivots, codes)
            restricted = [_fb.restrict_form(task, f, rows) for f in task.forms]
            if not cheap or r1 <= 2:
                sc.P += _fb.independent_subset_count(task, restricted, r1)
            if not cheap or r2 <= 2:
                sc.Q += _fb.independent_subset_count(task, restricted, r2)

    hist = {}
    if collect:
        kinds = np.concatenate(kinds_parts) if kinds_parts else np.zeros(0, dtype=np.int8)
        profs = np.concatenate(prof_parts) if prof_parts else np.zeros(0, dtype=np.int64)
        lcs = (np.concatenate(lc_parts) if lc_parts and all(len(x) for x in lc_parts)
               else np.zeros(0, dtype=np.int64))
        sc.kinds = tuple(int(k) for k in kinds)
        sc.profiles = tuple(int(p) for p in profs)
        sc.level_counts = tuple(int(c) for c in lcs)
        for k in kinds:
            name = _core.KIND_NAMES[int(k)]
            hist[name] = hist.get(name, 0) + 1
    else:
        hist["Contained"] = len(contained)
        hist["PositiveDim"] = len(posdim)
    sc.kind_histogram = hist

    if with_mn == "auto":
        with_mn = (r1 <= 3 and r2 <= 3 and N <= 3)
    if with_mn:
        sc.M = geom.dependent_multiset_count(Y, r2, e)
        sc.N = geom.dependent_multiset_count(Y, r1, e)
    sc.check_invariants()
    return sc


def unpack_profile(word):
    sizes = []
    while word:
        sizes.append(word & 0xF)
        word >>= 4
    return tuple(sorted(sizes, reverse=True))


# -- verifiers -------------------------------------------------------------

def verify_classic(Y: geom.VarietySpec, e_list):
    """Classic identities for a smooth cubic hypersurface.

    sym:   Sym^2 count = (1 + q^(e m)) #Y + q^(2e) #F_1
    hilb2: Hilb^2 count = #P^m(q^e) #Y + q^(2e) #F_1
    """
    if Y.s != 1 or Y.d != 3:
        raise ParameterViolation("verify_classic needs a cubic hypersurface")
    smooth, checked = Y.smooth_at_checked_points()
    rows = []
    all_ok = True
    for e in e_list:
        q = Y.field.order ** e
        n1 = geom.count_points(Y, e)
        fano = geom.fano_count(Y, 1, e)
        s2 = geom.sym_count(Y, 2, e)
        h2 = geom.hilb2_count(Y, e) if smooth else None
        pm = (q ** (Y.m + 1) - 1) // (q - 1)
        sym_rhs = (1 + q ** Y.m) * n1 + q ** 2 * fano
        row = {"e": e, "q_e": q, "points": n1, "fano_lines": fano,
               "sym2": s2, "sym2_rhs": sym_rhs, "sym_ok": s2 == sym_rhs}
        if h2 is not None:
            h_rhs = pm * n1 + q ** 2 * fano
            row.update({"hilb2": h2, "hilb2_rhs": h_rhs, "hilb_ok": h2 == h_rhs})
            all_ok = all_ok and row["hilb_ok"]
        all_ok = all_ok and row["sym_ok"]
        rows.append(row)
    return {"check": "classic", "smooth_flag": smooth, "smooth_checked_to": checked,
            "variety_hash": Y.content_hash(), "rows": rows, "ok": all_ok}


def verify_extended(Y: geom.VarietySpec, params: ParamSet, e_list,
                    workers=1, pq=False):
    """The extended relation W - B - A = V - R - T, with the per-plane
    complementation bijection on every transversal plane."""
    rows = []
    all_ok = True
    for e in e_list:
        sc = stratum_counts(Y, params, e, pq=pq, with_mn=False, workers=workers)
        ok = sc.lhs() == sc.rhs() and sc.bijection_failures == 0
        rows.append({"e": e, "q_e": Y.field.order ** e, "counts": sc.as_dict(),
                     "lhs": sc.lhs(), "rhs": sc.rhs(), "equal": sc.lhs() == sc.rhs(),
                     "bijection_failures": sc.bijection_failures,
                     "excluded_posdim_planes": len(sc.posdim_planes)})
        all_ok = all_ok and ok
    exclusions = any(r["excluded_posdim_planes"] for r in rows)
    return {"check": "extended", "params": params.as_dict(),
            "restriction_warnings": params.restriction_violations(),
            "variety_hash": Y.content_hash(), "rows": rows, "ok": all_ok,
            "has_exclusions": exclusions}


def verify_partition(Y: geom.VarietySpec, params: ParamSet, e, workers=1):
    """Low-regime partition identities as integer point counts.

    Long side:  W - B1 + P = (#Sym^(d-k-1) Y - N) * #G(planes through r1-tuple)
    Short side: V - T1 + Q = (#Sym^(k+1) Y - M) * #G(planes through r2-tuple)

    Both count pairs (independent stable tuple, plane through it); the
    contained-plane terms already sit inside W/V, so no A or R appears.
    """
    params.require_low_regime()
    sc = stratum_counts(Y, params, e, pq="full", with_mn=True, workers=workers)
    q = Y.field.order ** e
    g1 = int(specialize(grassmann_through(params.r1, Y.n, params.r).value, q))
    g2 = int(specialize(grassmann_through(params.r2, Y.n, params.r).value, q))
    sym1 = geom.sym_count(Y, params.r1, e)
    sym2 = geom.sym_count(Y, params.r2, e)
    lhs1 = sc.W - sc.B1 + sc.P
    rhs1 = (sym1 - sc.N) * g1
    lhs2 = sc.V - sc.T1 + sc.Q
    rhs2 = (sym2 - sc.M) * g2
    return {"check": "partition", "params": params.as_dict(), "e": e,
            "restriction_warnings": params.restriction_violations(),
            "variety_hash": Y.content_hash(),
            "long_side": {"lhs": lhs1, "rhs": rhs1, "ok": lhs1 == rhs1,
                          "sym_count": sym1, "dependent_N": sc.N, "gr_factor": g1},
            "short_side": {"lhs": lhs2, "rhs": rhs2, "ok": lhs2 == rhs2,
                           "sym_count": sym2, "dependent_M": sc.M, "gr_factor": g2},
            "counts": sc.as_dict(),
            "ok": lhs1 == rhs1 and lhs2 == rhs2}


# -- probes ----------------------------------------------------------------

@dataclass
class SlopeEstimate:
    dimension_estimate: Fraction | None
    q_list: tuple
    residual: Fraction

    @property
    def is_bottom(self):
        return self.dimension_estimate is None

    def rounded(self):
        return None if self.is_bottom else round(float(self.dimension_estimate))

    def at_most(self, bound, slack=Fraction(1, 2)):
        if self.is_bottom:
            return True
        return self.dimension_estimate <= bound + slack

    def within(self, target, slack=Fraction(1, 2)):
        if self.is_bottom:
            return False
        return abs(self.dimension_estimate - Fraction(target)) <= slack


def dimension_probe(counter, q_list):
    """Least-squares slope of log count against log q.

    counter maps each q in q_list to a count (zero samples are
    dropped); an all-zero family reports the BOTTOM estimate.
    """
    if len(q_list) < 3:
        raise InsufficientSamples("need at least 3 sample fields")
    pts = []
    for q in q_list:
        c = counter(q)
        if c:
            pts.append((math.log(q), math.log(c)))
    if not pts:
        return SlopeEstimate(None, tuple(q_list), Fraction(0))
    if len(pts) < 2:
        raise InsufficientSamples("too few nonzero samples for a slope")
    xbar = sum(x for x, _ in pts) / len(pts)
    ybar = sum(y for _, y in pts) / len(pts)
    den = sum((x - xbar) ** 2 for x, _ in pts)
    slope = sum((x - xbar) * (y - ybar) for x, y in pts) / den
    resid = sum((y - ybar - slope * (x - xbar)) ** 2 for x, y in pts)
    return SlopeEstimate(Fraction(slope).limit_denominator(10 ** 9),
                         tuple(q_list),
                         Fraction(resid).limit_denominator(10 ** 9))


def ratio_probe(numerator_counts, q_list, n, nm):
    """Probe of stratum/Grassmannian, as a relative dimension."""
    gg = grassmannian_class(nm, n).value

    def counter(q):
        return numerator_counts[q]

    if all(numerator_counts[q] == 0 for q in q_list):
        return SlopeEstimate(None, tuple(q_list), Fraction(0))
    est = dimension_probe(counter, q_list)
    if est.is_bottom:
        return est
    return SlopeEstimate(est.dimension_estimate - gg.top_exponent(),
                         est.q_list, est.residual)


# -- Lang-Weil at dimension zero -------------------------------------------

@dataclass
class LWDiagnostics:
    alpha_by_e: dict
    divisible_case: dict
    bound_residuals: list
    dichotomy_ok: bool
    alpha_range_ok: bool
    alpha_zero_rule_ok: bool
    alpha_full_rule_ok: bool
    n_transversal: int


def refine_profile(sizes, e):
    """Orbit sizes over F_{q^e} from sizes over F_q."""
    out = []
    for s in sizes:
        g = gcd(s, e)
        out.extend([s // g] * g)
    return tuple(sorted(out, reverse=True))


def stable_subset_count(sizes, r):
    dp = [1] + [0] * r
    for s in sizes:
        for t in range(r, s - 1, -1):
            dp[t] += dp[t - s]
    return dp[r] if r >= 0 else 0


def langweil_check(Y: geom.VarietySpec, params: ParamSet, e_list, workers=1):
    """Dichotomy of the 0-dimensional sections, orbit by orbit.

    Every F_q-irreducible component of a transversal section is a
    single orbit: it contributes its size over F_{q^e} when the size
    divides e and nothing otherwise; the bound residuals of the
    divisible case are exactly zero at dimension 0.  alpha counts the
    stable long subsets over F_{q^e}.
    """
    sc = stratum_counts(Y, params, 1, pq=False, with_mn=False,
                        workers=workers, collect=True)
    d = Y.d
    r1 = params.r1
    cap = math.comb(d, r1)
    alpha_by_e = {}
    divisible = {}
    residuals = []
    dich_ok = True
    range_ok = True
    zero_ok = True
    full_ok = True
    ntrans = 0
    for kind, word, lcw in zip(sc.kinds, sc.profiles, sc.level_counts):
        if kind != _core.KIND_TRANSVERSAL:
            continue
        ntrans += 1
        sizes = unpack_profile(word)
        for e in e_list:
            expected = sum(s for s in sizes if e % s == 0)
            if e <= d:
                observed = (lcw >> (8 * (e - 1))) & 0xFF
                if observed != expected:
                    dich_ok = False
            residuals.append(Fraction(0))
            refined = refine_profile(sizes, e)
            a = stable_subset_count(refined, r1)
            alpha_by_e.setdefault(e, []).append(a)
            if not 0 <= a <= cap:
                range_ok = False
            exists = any(sum(sub) == r1 for sub in _subsets(refined))
            if (a > 0) != exists:
                zero_ok = False
            div = e % lcm(*sizes) == 0 if sizes else True
            divisible.setdefault(e, []).append(div)
            if div and a != math.comb(d, params.r2):
                full_ok = False
    return LWDiagnostics(alpha_by_e={e: v for e, v in alpha_by_e.items()},
                         divisible_case=divisible,
                         bound_residuals=residuals,
                         dichotomy_ok=dich_ok,
                         alpha_range_ok=range_ok,
                         alpha_zero_rule_ok=zero_ok,
                         alpha_full_rule_ok=full_ok,
                         n_transversal=ntrans)


def _subsets(sizes):
    out = [()]
    for s in sizes:
        out += [sub + (s,) for sub in out]
    return out


# -- averaged term table -----------------------------------------------------

def averaged_table(entries, q_list, depth=32, plane_budget=2_000_000,
                   workers=1):
    """Term table of the averaged relation over a parameter sequence.

    Each entry is (loader, params): loader(q) returns the variety over
    F_q.  Cheap terms (Term 1 and its degenerate part) are probed over
    every q; plane-census terms run only where the Grassmannian fits
    the plane budget.  The exact-identity column cross-checks the
    census against the catalog whenever all ingredients are available.
    """
    rows = []
    prev_r = None
    for loader, params in entries:
        params.check_structural()
        if prev_r is not None and params.r < prev_r:
            raise ParameterViolation("entries must be ordered by nondecreasing r")
        prev_r = params.r
        n, nm = params.n, params.r
        g2 = grassmann_through(params.r2, n, nm).value
        gg = grassmannian_class(nm, n).value
        C, D = dependent_tuple_classes(params)
        term1_counts = {}
        m_counts = {}
        census = {}
        for q in q_list:
            Y = loader(q)
            params.validate_for(Y)
            term1_counts[q] = geom.sym_count(Y, params.r2, 1) * int(specialize(g2, q))
            if params.r2 <= 3:
                m_counts[q] = geom.dependent_multiset_count(Y, params.r2, 1) \
                    * int(specialize(g2, q))
            else:
                m_counts[q] = None
            nplanes = int(specialize(gg, q))
            if nplanes <= plane_budget:
                sc = stratum_counts(Y, params, 1, pq="cheap", with_mn=False,
                                    workers=workers)
                fano = len(sc.contained_planes)
                census[q] = (sc, fano)
        probes = {
            "term1_main": ratio_probe(term1_counts, q_list, n, nm),
            "term1_degenerate_M": (ratio_probe(m_counts, q_list, n, nm)
                                   if all(v is not None for v in m_counts.values())
                                   else None),
        }
        for name, getter in (("term2_J", lambda sc, f: sc.J),
                             ("term3_Q", lambda sc, f: sc.Q),
                             ("term4_B2", lambda sc, f: sc.B2),
                             ("term4_T2", lambda sc, f: sc.T2)):
            if len(census) >= 3:
                qs = sorted(census)
                probes[name] = ratio_probe({q: getter(*census[q]) for q in qs}, qs, n, nm)
            else:
                probes[name] = None
        exact_rows = {}
        for q, (sc, fano) in census.items():
            gg_q = int(specialize(gg, q))
            t1 = Fraction(term1_counts[q], gg_q)
            t1m = Fraction(m_counts[q], gg_q) if m_counts[q] is not None else None
            t2 = Fraction(sc.J, gg_q)
            t3 = Fraction(sc.Q, gg_q)
            t4 = Fraction(sc.B2 - sc.T2, gg_q)
            cd = int(specialize(C.value, q)) - int(specialize(D.value, q))
            t5 = Fraction(fano * cd, gg_q)
            long_cls = (sym_proj_class(nm, params.r1) if params.low_regime
                        else uconf_proj_class(nm, params.r1))
            lhs_counts = fano * (int(specialize(sym_proj_class(nm, params.r2).value, q))
                                 - int(specialize(long_cls.value, q)))
            lhs = Fraction(lhs_counts, gg_q)
            row = {"q": q, "term1": t1, "term1_M": t1m, "term2_J": t2,
                   "term3_Q": t3, "term4": t4, "term5": t5, "lhs_fano": lhs}
            q_complete = sc.pq_mode == "full" or (sc.pq_mode == "cheap" and params.r2 <= 2)
            if t1m is not None and q_complete:
                # exact form of the averaged relation at the count level:
                # lhs = (t1 - t1m) - t2 - t3 + t4 + t5
                row["exact_residual"] = lhs - ((t1 - t1m) - t2 - t3 + t4 + t5)
            exact_rows[q] = row
        rows.append({"params": params.as_dict(),
                     "restriction_warnings": params.restriction_violations(),
                     "probes": probes, "terms": exact_rows})
    return {"check": "averaged-table", "q_list": list(q_list), "rows": rows}
