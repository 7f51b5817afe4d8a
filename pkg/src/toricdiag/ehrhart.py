"""Lattice-point counting, Ehrhart polynomials and h*-vectors.

Counting slices tP coordinate by coordinate. For every prefix length j the
facets of the projection of P onto the first j coordinates are precomputed,
which pins down the exact integer range of the next coordinate. Prefixes are
processed breadth-first as numpy arrays; the last coordinate is never
materialized, only the lengths of its ranges are summed.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial, gcd

import numpy as np

from . import linalg as la
from .errors import InternalConsistencyError, PreconditionError
from .polytope import Polytope

_CHUNK = 1 << 18
_INT64_SAFE = 1 << 62
_FLOAT_SAFE = 1 << 50


@dataclass(frozen=True)
class HStarVector:
    """Coefficients h*_0..h*_n of the Ehrhart series numerator."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> int:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def degree(self) -> int:
        d = len(self.coeffs) - 1
        while d > 0 and self.coeffs[d] == 0:
            d -= 1
        return d

    def total(self) -> int:
        return sum(self.coeffs)

    def to_json(self):
        return [str(c) for c in self.coeffs]

    def __str__(self):
        return "(" + ", ".join(map(str, self.coeffs)) + ")"


def binomial_poly(x: int, n: int):
    """C(x, n) as the degree-n polynomial in x, valid for every integer x."""
    if 0 <= x:
        return comb(x, n)
    num = 1
    for i in range(n):
        num *= x - i
    return num // factorial(n)


@dataclass(frozen=True)
class EhrhartPolynomial:
    hstar: HStarVector

    @property
    def dim(self) -> int:
        return self.hstar.dim

    def __call__(self, t: int) -> int:
        n = self.dim
        return sum(h * binomial_poly(t + n - k, n) for k, h in enumerate(self.hstar))

    def interior(self, t: int) -> int:
        """Interior lattice points of tP by reciprocity."""
        return (-1) ** self.dim * self(-t)

    def coefficients(self) -> list[Fraction]:
        """Monomial coefficients c_0..c_n with L(t) = sum c_i t^i."""
        n = self.dim
        total = [Fraction(0)] * (n + 1)
        for k, h in enumerate(self.hstar):
            if not h:
                continue
            # C(t + n - k, n) = prod_{i=1..n} (t + n - k + 1 - i) / n!
            poly = [Fraction(1)]
            for i in range(1, n + 1):
                a = n - k + 1 - i
                nxt = [Fraction(0)] * (len(poly) + 1)
                for d, c in enumerate(poly):
                    nxt[d] += c * a
                    nxt[d + 1] += c
                poly = nxt
            for d, c in enumerate(poly):
                total[d] += h * c / factorial(n)
        return total

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "hstar": self.hstar.to_json(),
                "binomial_basis": [f"C(t+{self.dim - k},{self.dim})" for k in range(self.dim + 1)],
                "coefficients": [str(c) for c in self.coefficients()]}


@dataclass(frozen=True)
class BettiSequence:
    """cb_0, cb_2, ..., cb_{2n}, then constant ``tail`` in every higher even degree."""

    values: tuple
    tail: int

    def __getitem__(self, degree: int) -> int:
        if degree < 0 or degree % 2:
            return 0
        k = degree // 2
        return self.values[k] if k < len(self.values) else self.tail

    def table(self, upto: int | None = None) -> list[int]:
        upto = len(self.values) + 1 if upto is None else upto
        return [self[2 * k] for k in range(upto)]

    def to_json(self) -> dict:
        return {"cb": {str(2 * k): str(v) for k, v in enumerate(self.values)},
                "tail": str(self.tail)}


# --------------------------------------------------------------------- counting
class _Level:
    __slots__ = ("prefix", "coef", "off")

    def __init__(self, prefix, coef, off):
        self.prefix = prefix  # (k, j) integer matrix on the fixed prefix
        self.coef = coef      # (k,) coefficient of the new coordinate, nonzero
        self.off = off        # (k,) constant term, multiplied by t


class SliceCounter:
    """Precomputed projections of a polytope for counting points in its dilates."""

    def __init__(self, P: Polytope):
        self.dim = n = P.dim
        self.bound = max((abs(x) for v in P.vertices for x in v), default=0)
        self.levels: list[_Level] = []
        for j in range(1, n + 1):
            Q = P if j == n else Polytope([v[:j] for v in P.vertices])
            rows, coefs, offs = [], [], []
            for h in Q.facets():
                c = h.normal[j - 1]
                if c == 0:
                    continue  # implied by the previous projection
                d = h.offset.denominator if isinstance(h.offset, Fraction) else 1
                rows.append([x * d for x in h.normal[:j - 1]])
                coefs.append(c * d)
                offs.append(int(h.offset * d))
            self.levels.append(_Level(rows, coefs, offs))
        self.max_coef = max((abs(x) for L in self.levels for r in L.prefix for x in r), default=0)
        self.max_coef = max([self.max_coef] + [abs(x) for L in self.levels for x in L.coef + L.off])

    def _dtype(self, t: int):
        # |s| for any prefix of tP is below this
        scale = (self.dim + 2) * self.max_coef * (abs(t) + 1) * (self.bound + 1)
        if scale * self.max_coef < _FLOAT_SAFE:
            return np.float64
        return np.int64 if scale < _INT64_SAFE else object

    def _arrays(self, t):
        dt = self._dtype(t)
        out = []
        for L in self.levels:
            j = len(L.prefix[0]) if L.prefix and L.prefix[0] else 0
            A = np.array(L.prefix, dtype=object).reshape(len(L.coef), j)
            c = np.array(L.coef, dtype=object)
            b = np.array(L.off, dtype=object) * t
            pos = c > 0
            parts = []
            for mask, sign in ((pos, 1), (~pos, -1)):
                # constraint reads  sign*c' * x_new >= -(A x + b)  with c' > 0
                Ai = A[mask].astype(dt)
                bi = b[mask].astype(dt)
                ci = (c[mask] * sign).astype(dt)
                parts += [Ai, bi, ci, bool(np.all(ci == 1))]
            out.append(tuple(parts))
        return out, dt

    @staticmethod
    def _range(X, level, strict):
        Ap, bp, cp, unit_p, An, bn, cn, unit_n = level
        m = X.shape[0]
        sp = X @ Ap.T + bp if Ap.shape[1] else np.broadcast_to(bp, (m, bp.shape[0]))
        sn = X @ An.T + bn if An.shape[1] else np.broadcast_to(bn, (m, bn.shape[0]))
        if X.dtype == np.float64:
            qp = -sp if unit_p else -sp / cp
            qn = sn if unit_n else sn / cn
            if strict:
                lo = np.floor(qp).max(axis=1) + 1
                hi = np.ceil(qn).min(axis=1) - 1
            else:
                lo = np.ceil(qp).max(axis=1)
                hi = np.floor(qn).min(axis=1)
            return lo, hi
        if strict:
            lo = ((-sp) // cp + 1).max(axis=1)
            hi = (-((-sn) // cn) - 1).min(axis=1)
        else:
            lo = (-(sp // cp)).max(axis=1)
            hi = (sn // cn).min(axis=1)
        return lo, hi

    def _walk(self, X, level, arrays, strict, collect):
        lo, hi = self._range(X, arrays[level], strict)
        cnt = hi - lo + 1
        cnt[cnt < 0] = 0
        last = level == len(arrays) - 1
        if last and collect is None:
            return int(cnt.astype(np.int64).sum()) if cnt.dtype == np.float64 else int(cnt.sum())
        keep = cnt > 0
        X, lo, cnt = X[keep], lo[keep], cnt[keep]
        total = 0
        start = 0
        m = X.shape[0]
        cum = np.cumsum(cnt.astype(np.int64))
        while start < m:
            base = int(cum[start - 1]) if start else 0
            stop = int(np.searchsorted(cum, base + _CHUNK, side="right"))
            stop = max(stop, start + 1)
            sub_cnt = cnt[start:stop].astype(np.int64)
            sub_n = int(sub_cnt.sum())
            rep = np.repeat(np.arange(start, stop), sub_cnt)
            offs = np.arange(sub_n) - np.repeat(np.cumsum(sub_cnt) - sub_cnt, sub_cnt)
            newcol = lo[rep] + offs.astype(X.dtype)
            Y = np.concatenate([X[rep], newcol.reshape(-1, 1)], axis=1)
            if last:
                collect.extend(tuple(int(x) for x in row) for row in Y)
                total += Y.shape[0]
            else:
                total += self._walk(Y, level + 1, arrays, strict, collect)
            start = stop
        return total

    def count(self, t: int, strict: bool = False, workers: int = 1, collect=None) -> int:
        if t == 0:
            # 0P is one point, with empty interior once dim >= 1
            if strict and self.dim:
                return 0
            if collect is not None:
                collect.append((0,) * self.dim)
            return 1
        arrays, dt = self._arrays(t)
        X = np.zeros((1, 0), dtype=dt)
        if workers > 1 and collect is None and self.dim > 1:
            lo, hi = self._range(X, arrays[0], strict)
            vals = list(range(int(lo[0]), int(hi[0]) + 1))
            if len(vals) > 1:
                groups = [vals[i::workers] for i in range(workers) if vals[i::workers]]
                with ProcessPoolExecutor(max_workers=len(groups)) as ex:
                    futs = [ex.submit(_count_group, self, t, strict, g) for g in groups]
                    return sum(f.result() for f in futs)
        return self._walk(X, 0, arrays, strict, collect)


def _count_group(counter: SliceCounter, t, strict, values):
    arrays, dt = counter._arrays(t)
    X = np.array([[v] for v in values], dtype=dt)
    return counter._walk(X, 1, arrays, strict, None)


def _counter(P: Polytope) -> SliceCounter:
    return P._cached("slice_counter", lambda: SliceCounter(P))


def count_points(P: Polytope, t: int = 1, workers: int = 1) -> int:
    """Number of lattice points in tP (1 for t = 0)."""
    if t < 0:
        raise PreconditionError("dilation factor must be nonnegative")
    return _counter(P).count(t, False, workers)


def count_interior(P: Polytope, t: int = 1, workers: int = 1) -> int:
    """Lattice points in the interior of tP."""
    if t < 0:
        raise PreconditionError("dilation factor must be nonnegative")
    return _counter(P).count(t, True, workers)


def count_boundary(P: Polytope, t: int = 1, workers: int = 1) -> int:
    if t == 0:
        return 1
    return count_points(P, t, workers) - count_interior(P, t, workers)


def lattice_points(P: Polytope, t: int = 1, strict: bool = False) -> list[tuple]:
    out: list[tuple] = []
    _counter(P).count(t, strict, 1, out)
    return sorted(out)


def count_points_naive(P: Polytope, t: int = 1, strict: bool = False) -> int:
    """Bounding-box scan with exact facet tests; the oracle for the slicing counter."""
    verts = [la.vscale(t, v) for v in P.vertices]
    box = []
    for i in range(P.dim):
        xs = [v[i] for v in verts]
        lo, hi = min(xs), max(xs)
        box.append(range(int(-((-lo) // 1)), int(hi // 1) + 1))
    hs = [(h.normal, h.offset * t) for h in P.facets()]
    n = 0
    for x in product(*box):
        vals = (la.dot(a, x) + b for a, b in hs)
        if strict:
            n += all(v > 0 for v in vals)
        else:
            n += all(v >= 0 for v in vals)
    return n


# ------------------------------------------------------------------- h* vectors
def hstar_from_values(values: list[int], n: int) -> HStarVector:
    """Solve L(t) = sum_k h_k C(t+n-k, n) for t = 0..n by forward substitution.

    Values beyond t = n are checked against the interpolation.
    """
    if len(values) < n + 1:
        raise PreconditionError(f"need counts for t = 0..{n}, got {len(values)} values")
    h: list[int] = []
    for j in range(n + 1):
        acc = values[j]
        for k in range(j):
            acc -= h[k] * comb(j + n - k, n)
        h.append(acc)  # coefficient of h_j at t = j is C(n, n) = 1
    hs = HStarVector(h)
    if any(c < 0 for c in hs):
        raise InternalConsistencyError(f"negative h* coefficient {hs}")
    L = EhrhartPolynomial(hs)
    for t in range(n + 1, len(values)):
        if values[t] != L(t):
            raise InternalConsistencyError(
                f"count at t={t} is {values[t]}, interpolation predicts {L(t)}")
    return hs


def ehrhart(P: Polytope, workers: int = 1) -> EhrhartPolynomial:
    """Ehrhart polynomial of an integral polytope from exact counts.

    Counts at t = n+1 and n+2 serve as a self-check of the interpolation.
    """
    if not P.is_integral():
        raise PreconditionError("Ehrhart polynomials here require an integral polytope")

    def build():
        n = P.dim
        values = [count_points(P, t, workers) for t in range(n + 3)]
        return EhrhartPolynomial(hstar_from_values(values, n))
    return P._cached("ehrhart", build)


def hstar(P: Polytope, workers: int = 1) -> HStarVector:
    return ehrhart(P, workers).hstar


def ehrhart_from_hstar(h) -> EhrhartPolynomial:
    return EhrhartPolynomial(h if isinstance(h, HStarVector) else HStarVector(h))


def hibi_palindromic(h) -> bool:
    c = list(h)
    n = len(c) - 1
    return all(c[k] == c[n - k] for k in range(n + 1))


def gorenstein_palindromic(h, r: int) -> bool:
    c = list(h)
    n = len(c) - 1
    center = n + 1 - r
    if center < 0:
        return False
    get = lambda k: c[k] if 0 <= k <= n else 0
    return all(get(k) == get(center - k) for k in range(n + 1)) and all(
        get(k) == 0 for k in range(center + 1, n + 1))


def contact_betti(h) -> BettiSequence:
    c = list(h)
    n = len(c) - 1
    vals = []
    acc = 0
    for k in range(n + 1):
        acc += c[n - k]
        vals.append(acc)
    return BettiSequence(tuple(vals), sum(c))


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a, b) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def series_product_check(hD, hD2, r: int, s: int = 1) -> bool:
    """Whether hD(z) == (1 + z^s + ... + z^{s(r-1)}) * hD2(z)."""
    if r < 1 or s < 0:
        return False
    factor = [0] * (s * (r - 1) + 1)
    for j in range(r):
        factor[s * j] += 1
    return _trim(hD) == _trim(poly_mul(factor, list(hD2)))


def betti_from_quotient(hD, r: int, i: int) -> int:
    """cb_{2i} of the index-r quotient diagram, read off the reflexive h* alone."""
    if r < 1:
        raise PreconditionError("r must be at least 1")
    c = list(hD)
    total = 0
    k = 0
    while True:
        idx = i - r * k - r + 1
        if idx < 0:
            break
        if idx < len(c):
            total += c[idx]
        k += 1
    return total


# ------------------------------------------------------------------------ roots
@dataclass(frozen=True)
class RootReport:
    roots: tuple
    real_parts: tuple
    target: float
    tol: float
    verdict: bool

    def to_json(self) -> dict:
        return {"roots": [[float(z.real), float(z.imag)] for z in self.roots],
                "real_parts": list(self.real_parts),
                "target": self.target, "tol": self.tol, "verdict": self.verdict}


def root_real_parts(L: EhrhartPolynomial, target: float = -1.0, tol: float = 1e-9,
                    dps: int = 60) -> RootReport:
    """Roots of L(t) numerically; verdict says whether every real part is within tol of target."""
    import mpmath

    coeffs = L.coefficients()
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        raise PreconditionError("polynomial has degree 0")
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in reversed(coeffs)]
    with mpmath.workdps(dps):
        rts = mpmath.polyroots(ints, maxsteps=500, extraprec=4 * dps)
        roots = tuple(complex(z) for z in (rts if isinstance(rts, list) else [rts]))
    reals = tuple(z.real for z in roots)
    ok = all(abs(x - target) <= tol for x in reals)
    return RootReport(roots, reals, float(target), float(tol), ok)
