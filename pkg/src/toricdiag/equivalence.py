"""Affine unimodular equivalence, canonical forms and family recognition."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import comb

import numpy as np

from . import linalg as la
from .constructions import family_Dk, small_cross_polytope
from .ehrhart import count_interior, count_points, hstar, lattice_points
from .errors import (DimensionError, InternalConsistencyError, NotInFamilyError,
                     PreconditionError)
from .polytope import Polytope, _popcount_iter


@dataclass(frozen=True)
class EquivalenceWitness:
    equivalent: bool
    map: la.AffineUnimodularMap | None = None
    reason: str | None = None

    @property
    def verdict(self) -> str:
        return "equivalent" if self.equivalent else "inequivalent"

    def __bool__(self):
        return self.equivalent

    def to_json(self) -> dict:
        doc = {"verdict": self.verdict}
        if self.map is not None:
            doc["map"] = self.map.to_json()
        if self.reason:
            doc["failed_step"] = self.reason
        return doc


@dataclass(frozen=True)
class FamilyIdentification:
    n: int
    k: int
    map: la.AffineUnimodularMap
    family: str = field(default="D_k")

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "k": self.k, "map": self.map.to_json()}


def maps_onto(phi: la.AffineUnimodularMap, P: Polytope, Q: Polytope) -> bool:
    """Whether phi sends the vertex set of P bijectively onto that of Q."""
    return len(P.vertices) == len(Q.vertices) and set(phi.apply_all(P.vertices)) == Q.vertex_set()


# ------------------------------------------------------------------ invariants
def _pairing(P: Polytope):
    """Lattice distance of every vertex from every facet: rows vertices, columns facets."""
    return P._cached("pairing", lambda: tuple(
        tuple(h.value(v) for h in P.facets()) for v in P.vertices))


def _signatures(P: Polytope):
    def build():
        M = _pairing(P)
        vs = tuple(tuple(sorted(row)) for row in M)
        fs = tuple(tuple(sorted(col)) for col in zip(*M))
        return vs, fs
    return P._cached("signatures", build)


def _quick_invariants(P: Polytope):
    vs, fs = _signatures(P)
    return len(P.vertices), len(fs), tuple(sorted(vs)), tuple(sorted(fs))


def _ridge_neighbor(P: Polytope, f: int, u: int) -> int:
    """For a simplicial P: the vertex across the ridge of facet f opposite vertex u."""
    fm = P.facet_vertex_masks()
    ridge = fm[f] & ~(1 << u)
    for g, m in enumerate(fm):
        if g != f and m & ridge == ridge:
            rest = m & ~ridge
            return rest.bit_length() - 1
    raise InternalConsistencyError("ridge has only one facet")


def _neighbors(P: Polytope) -> list[list[int]]:
    def build():
        out = [[] for _ in P.vertices]
        for i, j in P.edges():
            out[i].append(j)
            out[j].append(i)
        return out
    return P._cached("neighbors", build)


# ------------------------------------------------------------- frame search
def _matchings(sigs_needed, pool, pool_sig):
    """Ordered tuples of distinct pool elements whose signatures match position-wise."""
    out = []
    k = len(sigs_needed)
    acc: list[int] = []

    def rec(i):
        if i == k:
            out.append(tuple(acc))
            return
        for w in pool:
            if w not in acc and pool_sig[w] == sigs_needed[i]:
                acc.append(w)
                rec(i + 1)
                acc.pop()

    rec(0)
    return out


def _frame_search(P: Polytope, Q: Polytope, frame: list[int], cands: np.ndarray):
    """Try every candidate image tuple for the affine frame of P; first hit wins."""
    if len(cands) == 0:
        return None
    n = P.dim
    V1 = P.vertices
    A = [la.vsub(V1[i], V1[frame[0]]) for i in frame[1:]]
    A = la.transpose(A)  # columns are the frame vectors
    det = la.determinant(A)
    if det == 0:
        raise InternalConsistencyError("anchor frame is affinely dependent")
    inv = la.inverse(A)
    adj = [[int(x * det) for x in row] for row in inv]
    big = max(abs(x) for v in Q.vertices for x in v) * max(abs(x) for r in adj for x in r) * n
    dt = np.int64 if big < (1 << 60) else object
    W = np.array(Q.vertices, dtype=dt)
    cands = np.asarray(cands)
    base = W[cands[:, 0]]
    B = W[cands[:, 1:]] - base[:, None, :]     # (m, n, n): rows are the image vectors
    B = np.transpose(B, (0, 2, 1))             # columns are the image vectors
    M = B @ np.array(adj, dtype=dt)
    ok = np.all(M % det == 0, axis=(1, 2))
    target = Q.vertex_set()
    for idx in np.nonzero(ok)[0]:
        L = tuple(tuple(int(x) // det for x in row) for row in M[idx])
        if abs(la.determinant(L)) != 1:
            continue
        t = la.vsub(tuple(int(x) for x in base[idx]), la.matvec(L, V1[frame[0]]))
        phi = la.AffineUnimodularMap(L, t)
        if set(phi.apply_all(V1)) == target:
            return phi
    return None


def unimodular_equivalent(D1: Polytope, D2: Polytope, prune: bool = True) -> EquivalenceWitness:
    """Decide whether an affine unimodular map sends D1 onto D2.

    With ``prune=False`` no invariant is consulted: the frame search runs over
    every facet (or vertex star) and every ordering.
    """
    if D1.dim != D2.dim:
        raise DimensionError(f"dimensions differ: {D1.dim} vs {D2.dim}")
    if not (D1.is_integral() and D2.is_integral()):
        raise PreconditionError("equivalence is decided for lattice polytopes only")
    if D1.dim == 0:
        return EquivalenceWitness(True, la.AffineUnimodularMap((), ()))
    if prune:
        if _quick_invariants(D1) != _quick_invariants(D2):
            return EquivalenceWitness(False, reason="invariants")
        vs1, fs1 = _signatures(D1)
        vs2, fs2 = _signatures(D2)
    else:
        vs1 = vs2 = [0] * max(len(D1.vertices), len(D2.vertices))
        fs1 = [0] * len(D1.facets())
        fs2 = [0] * len(D2.facets())
    n = D1.dim
    if D1.is_simplicial() and (prune or D2.is_simplicial()):
        # anchor on the facet whose signature is rarest
        counts = {}
        for s in fs2:
            counts[s] = counts.get(s, 0) + 1
        f1 = min(range(len(fs1)), key=lambda f: (counts.get(fs1[f], 0), f))
        verts1 = list(_popcount_iter(D1.facet_vertex_masks()[f1]))
        p1 = _ridge_neighbor(D1, f1, verts1[0])
        frame = verts1 + [p1]
        need = [vs1[i] for i in verts1]
        rows = []
        for g, m in enumerate(D2.facet_vertex_masks()):
            if fs2[g] != fs1[f1]:
                continue
            pool = list(_popcount_iter(m))
            for tup in _matchings(need, pool, vs2):
                p2 = _ridge_neighbor(D2, g, tup[0])
                if vs2[p2] == vs1[p1]:
                    rows.append(tup + (p2,))
    else:
        nb1, nb2 = _neighbors(D1), _neighbors(D2)
        counts = {}
        for s in vs2:
            counts[s] = counts.get(s, 0) + 1
        v1 = min(range(len(vs1)), key=lambda v: (counts.get(vs1[v], 0), len(nb1[v]), v))
        chosen = []
        for j in nb1[v1]:
            trial = chosen + [j]
            if la.rank([la.vsub(D1.vertices[i], D1.vertices[v1]) for i in trial]) == len(trial):
                chosen = trial
            if len(chosen) == n:
                break
        frame = [v1] + chosen
        need = [vs1[i] for i in chosen]
        rows = []
        for w in range(len(D2.vertices)):
            if vs2[w] != vs1[v1] or len(nb2[w]) != len(nb1[v1]):
                continue
            rows.extend((w,) + tup for tup in _matchings(need, nb2[w], vs2))
    phi = _frame_search(D1, D2, frame, np.array(rows, dtype=np.int64).reshape(-1, n + 1))
    if phi is None:
        return EquivalenceWitness(False, reason="exhausted")
    return EquivalenceWitness(True, phi)


def ehrhart_equivalent(D1: Polytope, D2: Polytope) -> bool:
    if D1.dim != D2.dim:
        raise DimensionError(f"dimensions differ: {D1.dim} vs {D2.dim}")
    return hstar(D1) == hstar(D2)


# --------------------------------------------------------------- canonical form
def canonical_form(D: Polytope) -> tuple:
    """Lexicographically least sorted vertex list over all facet-frame normalizations.

    Two toric diagrams have equal canonical forms iff they are unimodularly
    equivalent.
    """
    return D._cached("canonical_form", lambda: _canonical_form(D))


def _canonical_form(D: Polytope) -> tuple:
    if not D.is_toric_diagram():
        raise PreconditionError("canonical forms are defined for toric diagrams")
    n = D.dim
    V = D.vertices
    nv = len(V)
    best = None
    plist = list(permutations(range(n - 1)))
    perms = np.array(plist, dtype=np.int64).reshape(len(plist), n - 1)
    for f, (h, m) in enumerate(zip(D.facets(), D.facet_vertex_masks())):
        fv = list(_popcount_iter(m))
        ustar = la.unit_dual(h.normal)
        for u1 in fv:
            others = [i for i in fv if i != u1]
            basis = la.transpose([la.vsub(V[i], V[u1]) for i in others] + [ustar])
            Minv = la.inverse(basis)
            X = [la.matvec(Minv, la.vsub(v, V[u1])) for v in V]
            p = X[_ridge_neighbor(D, f, u1)]
            hgt = p[n - 1]
            shift = [-(p[i] // hgt) for i in range(n - 1)]
            Y = [tuple(x[i] + x[n - 1] * shift[i] for i in range(n - 1)) + (x[n - 1],) for x in X]
            cand = _best_permutation(Y, perms, n, nv)
            if best is None or cand < best:
                best = cand
    return best


def _best_permutation(Y, perms, n, nv):
    """Least sorted vertex tuple among column permutations of the first n-1 coords."""
    lo = min(min(r) for r in Y)
    hi = max(max(r) for r in Y)
    base = hi - lo + 1
    if base ** n >= (1 << 62):
        cands = []
        for pi in perms:
            rows = sorted(tuple(r[i] for i in pi) + (r[n - 1],) for r in Y)
            cands.append(tuple(rows))
        return min(cands)
    A = np.array(Y, dtype=np.int64) - lo
    P = A[:, perms]                      # (nv, nperm, n-1)
    P = np.transpose(P, (1, 0, 2))       # (nperm, nv, n-1)
    last = A[:, n - 1]
    key = np.zeros(P.shape[:2], dtype=np.int64)
    for j in range(n - 1):
        key = key * base + P[:, :, j]
    key = key * base + last[None, :]
    key.sort(axis=1)
    order = np.lexsort(key.T[::-1])
    win = key[order[0]]
    rows = []
    for kv in win.tolist():
        digits = []
        for _ in range(n):
            kv, d = divmod(kv, base)
            digits.append(d + lo)
        rows.append(tuple(reversed(digits)))
    return tuple(rows)


# ------------------------------------------------------ family recognition
def identify_Dk(S: Polytope) -> FamilyIdentification:
    """Find k and an explicit unimodular map from S onto family_Dk(n, k)."""
    n = S.dim
    if n < 2:
        raise NotInFamilyError("family members have dimension at least 2")
    if not S.is_integral() or not S.is_toric_diagram():
        raise NotInFamilyError("input is not a toric diagram")
    target = tuple([1] * n + [0])
    h = tuple(hstar(S))
    if h != target:
        raise NotInFamilyError(f"h* is {h}, expected {target}")
    if len(S.vertices) != n + 2 or count_points(S, 1) != n + 2:
        raise NotInFamilyError("lattice points are not exactly n+2 vertices")
    V = list(S.vertices)
    rows = [[v[i] for v in V] for i in range(n)] + [[1] * (n + 2)]
    ker = la.nullspace(rows, n + 2)
    if len(ker) != 1:
        raise InternalConsistencyError("affine dependency is not unique")
    lam = ker[0]
    if any(x == 0 for x in lam):
        raise InternalConsistencyError("affine dependency has a zero coefficient")
    posi = [i for i, x in enumerate(lam) if x > 0]
    negi = [i for i, x in enumerate(lam) if x < 0]
    if len(posi) == 2 and len(negi) == n:
        posi, negi = negi, posi
        lam = tuple(-x for x in lam)
    if len(posi) != n or len(negi) != 2:
        raise InternalConsistencyError(f"dependency splits {len(posi)}+{len(negi)}, expected n+2")
    base_coef = {lam[i] for i in posi}
    if len(base_coef) != 1:
        raise InternalConsistencyError("base coefficients differ")
    c = base_coef.pop()
    mus = sorted(((-lam[i], i) for i in negi))
    # normalized so the base sums with coefficient one
    if any(mu % c for mu, _ in mus):
        raise InternalConsistencyError("apex coefficients are not integral")
    mu1, y1 = mus[0][0] // c, mus[0][1]
    mu2, y2 = mus[1][0] // c, mus[1][1]
    if mu1 + mu2 != n:
        raise InternalConsistencyError("apex coefficients do not sum to n")
    k = mu2 - mu1
    if not 0 <= k < n or (n - k) % 2:
        raise InternalConsistencyError(f"apex coefficients give k={k} for n={n}")
    D = family_Dk(n, k)
    a = D.vertices  # a_1..a_{n+2}
    base = sorted(V[i] for i in posi)
    src = base[:n - 1] + [V[y1], V[y2]]
    dst = list(a[:n - 1]) + [a[n - 1], a[n]]
    phi = la.solve_affine_frame(src, dst)
    if phi is None or not maps_onto(phi, S, D):
        raise InternalConsistencyError("frame map onto D_k failed")
    return FamilyIdentification(n, k, phi)


def is_small_cross(S: Polytope) -> EquivalenceWitness:
    """Run the recognition steps for the small cross-polytope, stopping at the first failure."""
    n = S.dim

    def fail(step):
        return EquivalenceWitness(False, reason=step)

    if not S.is_integral():
        return fail("integral")
    h = tuple(hstar(S))
    if h != tuple(comb(n - 1, k) for k in range(n)) + (0,):
        return fail("hstar")
    if count_points(S, 1) != 2 * n:
        return fail("L(1)")
    if count_points(S, 2) != 2 * n * n + 1:
        return fail("L(2)")
    if len(S.vertices) != 2 * n:
        return fail("vertices")
    edges = set(S.edges())
    if n >= 2 and len(edges) != 2 * n * (n - 1):
        return fail("edges")
    if count_interior(S, 2) != 1:
        return fail("interior")
    c = lattice_points(S, 2, strict=True)[0]
    index = {v: i for i, v in enumerate(S.vertices)}
    pairs = set()
    for i, v in enumerate(S.vertices):
        w = la.vsub(c, v)
        if w not in index:
            return fail("antipodal")
        pairs.add((min(i, index[w]), max(i, index[w])))
    nonedges = {(i, j) for i in range(2 * n) for j in range(i + 1, 2 * n)} - edges
    # a segment's two endpoints are antipodal and also its only edge
    if n >= 2 and pairs != nonedges:
        return fail("antipodal")
    fv = S.facet_vertex_sets()[0]
    if len(fv) != n or any(index[la.vsub(c, S.vertices[i])] in fv for i in fv):
        return fail("frame")
    vs = [S.vertices[i] for i in fv]
    vn = vs[-1]
    cols = [la.vsub(v, vn) for v in vs[:-1]] + [la.vsub(c, la.vscale(2, vn))]
    Minv = la.transpose(cols)
    if abs(la.determinant(Minv)) != 1:
        return fail("frame")
    M = la.inverse(Minv)
    phi = la.AffineUnimodularMap(M, la.vscale(-1, la.matvec(M, vn)))
    if not maps_onto(phi, S, small_cross_polytope(n)):
        return fail("frame")
    return EquivalenceWitness(True, phi)
