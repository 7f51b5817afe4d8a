"""Replayable acceptance suites, shared by the ``verify`` subcommand and the tests."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import comb

from . import cacti
from . import constructions as cons
from . import ehrhart as eh
from . import equivalence as eq
from .linalg import random_affine_unimodular

CACTUS_COUNTS = (1, 2, 5, 13, 37, 111, 345, 1105, 3624, 12099,
          41000, 140647, 487440, 1704115, 6002600)


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def check(self, label: str, ok: bool, detail=""):
        self.checks.append((label, bool(ok), str(detail)))
        return ok

    def failures(self):
        return [(label, detail) for label, ok, detail in self.checks if not ok]

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed,
                "elapsed_ms": round(self.elapsed * 1000),
                "checks": len(self.checks),
                "failures": [{"check": a, "detail": b} for a, b in self.failures()]}


def _binom_row(n):
    return tuple(comb(n, k) for k in range(n + 1))


def _small_row(n):
    return tuple(comb(n - 1, k) for k in range(n)) + (0,)


def _d_ks(n):
    return [k for k in range(n) if (n - k) % 2 == 0]


# ---------------------------------------------------------------------- suites
def suite_table1(res: SuiteResult, max_enum=10, max_count=15):
    t0 = time.perf_counter()
    for n in range(1, max_enum + 1):
        got = len(cacti.enumerate_cacti(n))
        res.check(f"enumerate({n})", got == CACTUS_COUNTS[n - 1], f"{got} vs {CACTUS_COUNTS[n - 1]}")
        res.check(f"count({n}) = |enumerate({n})|", cacti.count_cacti(n) == got)
    t1 = time.perf_counter()
    res.check("enumeration time < 60 s", t1 - t0 < 60, f"{t1 - t0:.2f} s")
    for n in range(max_enum + 1, max_count + 1):
        got = cacti.count_cacti(n)
        res.check(f"count({n})", got == CACTUS_COUNTS[n - 1], f"{got} vs {CACTUS_COUNTS[n - 1]}")
    t2 = time.perf_counter()
    res.check("recurrence time < 600 s", t2 - t1 < 600, f"{t2 - t1:.3f} s")


def suite_hstar(res: SuiteResult, max_n=7):
    t0 = time.perf_counter()
    for n in range(1, max_n + 1):
        h = tuple(eh.hstar(cons.cross_polytope(n)))
        res.check(f"h*(cross {n})", h == _binom_row(n), h)
        h = tuple(eh.hstar(cons.small_cross_polytope(n)))
        res.check(f"h*(small cross {n})", h == _small_row(n), h)
    dt = time.perf_counter() - t0
    res.check("time < 120 s", dt < 120, f"{dt:.2f} s")


def suite_preq(res: SuiteResult, max_n=6):
    for n in range(1, max_n + 1):
        for (lo, hi), target in (((-1, 1), cons.cross_polytope(n)),
                                 ((0, 1), cons.small_cross_polytope(n))):
            D = cons.prequantize(cons.cube(n, lo, hi)).diagram
            w = eq.unimodular_equivalent(D, target)
            ok = w.equivalent and eq.maps_onto(w.map, D, target)
            res.check(f"preq [{lo},{hi}]^{n}", ok, w.verdict)


def suite_series(res: SuiteResult, max_n=6):
    for n in range(1, max_n + 1):
        hc = eh.hstar(cons.cross_polytope(n))
        hs = eh.hstar(cons.small_cross_polytope(n))
        res.check(f"cross = (1+z) small cross, n={n}", eh.series_product_check(hc, hs, 2, 1))
        if n < 2:
            continue
        for k in range(n):
            ht = eh.hstar(cons.family_Tk(n, k))
            for kd in _d_ks(n):
                hd = eh.hstar(cons.family_Dk(n, kd))
                res.check(f"T_{k} = (1+z) D_{kd}, n={n}", eh.series_product_check(ht, hd, 2, 1))


def suite_family(res: SuiteResult, max_n=6):
    for n in range(2, max_n + 1):
        T = [cons.family_Tk(n, k) for k in range(n)]
        for k, P in enumerate(T):
            h = tuple(eh.hstar(P))
            res.check(f"h*(T_{k}), n={n}", h == (1,) + (2,) * (n - 1) + (1,), h)
            pre = cons.prequantize(cons.family_Pk(n, k)).diagram
            res.check(f"T_{k} = preq(P_{k}), n={n}", eq.unimodular_equivalent(pre, P).equivalent)
        D = {k: cons.family_Dk(n, k) for k in _d_ks(n)}
        for k, P in D.items():
            h = tuple(eh.hstar(P))
            res.check(f"h*(D_{k}), n={n}", h == (1,) * n + (0,), h)
            pre = cons.prequantize(cons.family_Pk_half(n, k)).diagram
            res.check(f"D_{k} = preq(P'_{k}/2), n={n}", eq.unimodular_equivalent(pre, P).equivalent)
        for a in range(n):
            for b in range(a + 1, n):
                res.check(f"T_{a} !~ T_{b}, n={n}", not eq.unimodular_equivalent(T[a], T[b]).equivalent)
        ks = sorted(D)
        for i, a in enumerate(ks):
            for b in ks[i + 1:]:
                res.check(f"D_{a} !~ D_{b}, n={n}", not eq.unimodular_equivalent(D[a], D[b]).equivalent)


def suite_identify(res: SuiteResult, images=100, max_dk=6, max_sc=5, seed=2024):
    rng = random.Random(seed)
    for n in range(2, max_dk + 1):
        for k in _d_ks(n):
            D = cons.family_Dk(n, k)
            good = 0
            for _ in range(images):
                phi = random_affine_unimodular(n, rng)
                S = D.transform(phi)
                r = eq.identify_Dk(S)
                good += r.k == k and eq.maps_onto(r.map, S, D)
            res.check(f"identify_Dk n={n} k={k}", good == images, f"{good}/{images}")
    for n in range(1, max_sc + 1):
        S0 = cons.small_cross_polytope(n)
        good = 0
        for _ in range(images):
            phi = random_affine_unimodular(n, rng)
            S = S0.transform(phi)
            w = eq.is_small_cross(S)
            good += w.equivalent and eq.maps_onto(w.map, S, S0)
        res.check(f"is_small_cross accepts images n={n}", good == images, f"{good}/{images}")
        w = eq.is_small_cross(cons.cross_polytope(n))
        res.check(f"is_small_cross rejects cross n={n}", not w.equivalent, w.reason)
        rejected = [not eq.is_small_cross(cacti.realize(C)).equivalent
                    for C in cacti.enumerate_cacti(n)]
        res.check(f"is_small_cross rejects cacti n={n}", all(rejected), f"{sum(rejected)}/{len(rejected)}")


def suite_bridge(res: SuiteResult, max_n=4):
    for n in range(1, max_n + 1):
        cs = cacti.enumerate_cacti(n)
        R = [cacti.realize(C) for C in cs]
        pairs = disagree = 0
        for i in range(len(R)):
            for j in range(i, len(R)):
                w = eq.unimodular_equivalent(R[i], R[j])
                if w.equivalent and not eq.maps_onto(w.map, R[i], R[j]):
                    disagree += 1
                disagree += w.equivalent != (cs[i].code == cs[j].code)
                pairs += 1
        expect = len(cs) * (len(cs) + 1) // 2
        res.check(f"bridge n={n}", disagree == 0 and pairs == expect,
                  f"{pairs} pairs, {disagree} disagreements")


def suite_bott(res: SuiteResult):
    Ls = cons.BOTT_EXAMPLES_3
    res.check("five matrices monotone", all(cons.is_monotone_bott(L) for L in Ls))
    B = [cons.bott_diagram(L) for L in Ls]
    for i in range(5):
        for j in range(i + 1, 5):
            res.check(f"bott {i + 1} !~ bott {j + 1}", not eq.unimodular_equivalent(B[i], B[j]).equivalent)
    cross = cons.cross_polytope(3)
    for i, D in enumerate(B):
        res.check(f"bott {i + 1} Ehrhart-equivalent to cross", eq.ehrhart_equivalent(D, cross))
        pre = cons.prequantize(cons.bott_halfspaces(Ls[i])).diagram
        res.check(f"bott {i + 1} diagram = preq(moment polytope)", pre == D)
    forms = {eq.canonical_form(D) for D in B}
    cforms = {eq.canonical_form(cacti.realize(C)) for C in cacti.enumerate_cacti(3)}
    res.check("canonical forms match the 5 realized cacti", forms == cforms and len(forms) == 5)


def suite_betti(res: SuiteResult, max_n=7):
    for n in range(1, max_n + 1):
        hc = eh.hstar(cons.cross_polytope(n))
        hs = eh.hstar(cons.small_cross_polytope(n))
        cb = eh.contact_betti(hc).table(n + 2)
        want = [sum(comb(n, m) for m in range(min(k, n) + 1)) for k in range(n + 2)]
        res.check(f"cross table n={n}", cb == want, cb)
        cb = eh.contact_betti(hs).table(n + 2)
        want = [sum(comb(n - 1, n - m) for m in range(min(k, n) + 1)) for k in range(n + 2)]
        res.check(f"small cross table n={n}", cb == want and cb[:2] == [0, 1], cb)
        quot = [eh.betti_from_quotient(hc, 2, i) for i in range(n + 3)]
        res.check(f"quotient cross -> small cross n={n}",
                  quot == eh.contact_betti(hs).table(n + 3), quot)
        if n < 2:
            continue
        for k in _d_ks(n):
            hd = eh.hstar(cons.family_Dk(n, k))
            cb = eh.contact_betti(hd).table(n + 2)
            res.check(f"D_{k} table n={n}", cb == list(range(n + 1)) + [n], cb)
        for k in range(n):
            ht = eh.hstar(cons.family_Tk(n, k))
            hd = eh.hstar(cons.family_Dk(n, _d_ks(n)[0]))
            quot = [eh.betti_from_quotient(ht, 2, i) for i in range(n + 3)]
            res.check(f"quotient T_{k} -> D n={n}", quot == eh.contact_betti(hd).table(n + 3), quot)


def suite_roots(res: SuiteResult, max_n=10, count_upto=8, tol=1e-9):
    for n in range(1, max_n + 1):
        S, C = cons.small_cross_polytope(n), cons.cross_polytope(n)
        if n <= count_upto:
            Ls, Lc = eh.ehrhart(S), eh.ehrhart(C)
        else:
            # full counting is minutes here; spot-check the closed form instead
            Ls = eh.ehrhart_from_hstar(_small_row(n))
            Lc = eh.ehrhart_from_hstar(_binom_row(n))
            for t in (1, 2):
                res.check(f"small cross L({t}) n={n}", eh.count_points(S, t) == Ls(t))
                res.check(f"cross L({t}) n={n}", eh.count_points(C, t) == Lc(t))
        r = eh.root_real_parts(Ls, -1.0, tol)
        res.check(f"small cross roots n={n}", r.verdict,
                  max(abs(x + 1) for x in r.real_parts))
        r = eh.root_real_parts(Lc, -0.5, tol)
        res.check(f"cross roots n={n}", r.verdict,
                  max(abs(x + 0.5) for x in r.real_parts))


def builtin_polytopes(max_n=4):
    """Every built-in construction up to dimension max_n, labeled."""
    out = []
    for n in range(1, max_n + 1):
        out += [(f"cube[-1,1]^{n}", cons.cube(n)), (f"cube[0,1]^{n}", cons.cube(n, 0, 1)),
                (f"cross {n}", cons.cross_polytope(n)), (f"small cross {n}", cons.small_cross_polytope(n)),
                (f"simplex {n}", cons.simplex(n))]
        if n >= 2:
            for k in range(n):
                out += [(f"T_{k} n={n}", cons.family_Tk(n, k)), (f"P_{k} n={n}", cons.family_Pk(n, k))]
            for k in _d_ks(n):
                out += [(f"D_{k} n={n}", cons.family_Dk(n, k)),
                        (f"P'_{k}/2 n={n}", cons.family_Pk_half(n, k))]
            out.append((f"pyramid(cross {n - 1})", cons.pyramid(cons.cross_polytope(n - 1))))
        for C in cacti.enumerate_cacti(n):
            out.append((f"cactus {C.code.decode()}", cacti.realize(C)))
    for i, L in enumerate(cons.BOTT_EXAMPLES_3):
        out += [(f"bott diagram {i + 1}", cons.bott_diagram(L)),
                (f"bott moment {i + 1}", cons.bott_moment_polytope(L))]
    return out


def suite_oracle(res: SuiteResult, max_n=4, max_t=3):
    from .errors import InternalConsistencyError
    for label, P in builtin_polytopes(max_n):
        bad = []
        for t in range(max_t + 1):
            if eh.count_points(P, t) != eh.count_points_naive(P, t):
                bad.append(f"L({t})")
            if eh.count_interior(P, t) != eh.count_points_naive(P, t, strict=True):
                bad.append(f"int({t})")
        res.check(f"slicing = naive: {label}", not bad, ",".join(bad))
        try:
            eh.ehrhart(P)
            ok, detail = True, ""
        except InternalConsistencyError as exc:
            ok, detail = False, str(exc)
        res.check(f"self-check: {label}", ok, detail)


SUITES = {
    "table1": suite_table1,
    "hstar": suite_hstar,
    "preq": suite_preq,
    "series": suite_series,
    "family": suite_family,
    "identify": suite_identify,
    "bridge": suite_bridge,
    "bott": suite_bott,
    "betti": suite_betti,
    "roots": suite_roots,
    "oracle": suite_oracle,
}


def run_suite(name: str, **kw) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    res = SuiteResult(name)
    t0 = time.perf_counter()
    SUITES[name](res, **kw)
    res.elapsed = time.perf_counter() - t0
    return res
