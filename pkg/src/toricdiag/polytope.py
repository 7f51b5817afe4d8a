"""Convex polytopes with exact (integer or rational) vertices."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple

from . import linalg as la
from ._cone import extreme_rays
from .errors import DegenerateError, DimensionError, ParameterError, PreconditionError


class Halfspace(NamedTuple):
    """The inequality ``normal . x + offset >= 0`` with a primitive normal."""

    normal: tuple
    offset: int | Fraction

    def value(self, x):
        return la.dot(self.normal, x) + self.offset


class HalfspaceSystem(tuple):
    """Tuple of :class:`Halfspace`; irredundant when produced by :func:`facets`."""

    def contains(self, x, strict: bool = False) -> bool:
        if strict:
            return all(h.value(x) > 0 for h in self)
        return all(h.value(x) >= 0 for h in self)

    def to_json(self):
        return [{"normal": list(h.normal), "offset": _num_json(h.offset)} for h in self]


@dataclass(frozen=True)
class FaceLattice:
    """Faces grouped by dimension; ``faces[d + 1]`` holds the d-dimensional ones.

    Each face is a frozenset of vertex indices.
    """

    dim: int
    faces: tuple

    def of_dim(self, d: int) -> tuple:
        return self.faces[d + 1]

    def f_vector(self) -> list[int]:
        """Counts f_{-1}, f_0, ..., f_n."""
        return [len(level) for level in self.faces]

    def covers(self, d: int) -> list[tuple[int, int]]:
        """Incidences between (d-1)-faces and d-faces as index pairs."""
        lower, upper = self.of_dim(d - 1), self.of_dim(d)
        return [(i, j) for j, G in enumerate(upper) for i, F in enumerate(lower) if F < G]


def _num_json(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _parse_num(x):
    if isinstance(x, bool):
        raise ValueError("booleans are not coordinates")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        f = Fraction(x)
        return f.numerator if f.denominator == 1 else f
    if isinstance(x, float) and x.is_integer():
        return int(x)
    raise ValueError(f"coordinate {x!r} is not an integer or an exact rational string")


def _popcount_iter(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class Polytope:
    """A full-dimensional convex polytope given by its vertices.

    Vertices are tuples of ``int`` (lattice points) or ``Fraction``. The
    constructor prunes non-extreme points. Facets, incidences and the face
    lattice are computed lazily and cached.
    """

    __slots__ = ("vertices", "dim", "_lock", "_cache")

    def __init__(self, points: Iterable, _trusted: bool = False):
        pts = []
        seen = set()
        for p in points:
            v = la.as_vector(p)
            if v not in seen:
                seen.add(v)
                pts.append(v)
        if not pts:
            raise DegenerateError("a polytope needs at least one point")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise DimensionError("points have mixed dimensions")
        self.dim = n
        self._lock = threading.RLock()
        self._cache: dict = {}
        if n == 0:
            self.vertices = ((),)
            self._cache["facets"] = (HalfspaceSystem(), ())
            return
        if la.affine_rank(pts) < n:
            raise DegenerateError(
                f"points span an affine subspace of dimension {la.affine_rank(pts)} < {n}")
        if _trusted:
            self.vertices = tuple(pts)
            return
        self.vertices = tuple(pts)
        system, incid = self._compute_facets()
        keep = []
        for i, p in enumerate(pts):
            tight = [h.normal for h in system if h.value(p) == 0]
            if len(tight) >= n and la.rank(tight) == n:
                keep.append(i)
        self.vertices = tuple(pts[i] for i in keep)
        # re-index facet incidences onto the pruned vertex list
        remap = {old: new for new, old in enumerate(keep)}
        new_incid = []
        for m in incid:
            nm = 0
            for old in _popcount_iter(m):
                if old in remap:
                    nm |= 1 << remap[old]
            new_incid.append(nm)
        self._cache["facets"] = (system, tuple(new_incid))

    # ------------------------------------------------------------------ basics
    def __repr__(self):
        return f"Polytope(dim={self.dim}, vertices={len(self.vertices)})"

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.vertex_set() == other.vertex_set()

    def __hash__(self):
        return hash(self.vertex_set())

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def sorted_vertices(self) -> list[tuple]:
        return sorted(self.vertices)

    def _cached(self, key, fn):
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = fn()
            return self._cache[key]

    # ------------------------------------------------------------------ facets
    def _compute_facets(self):
        n = self.dim
        verts = self.vertices
        # rows are (denom*v, denom), so a ray (a, b) reads as a.v + b >= 0
        denom = 1
        for v in verts:
            for x in v:
                if isinstance(x, Fraction):
                    denom = denom * x.denominator // gcd(denom, x.denominator)
        rows = [tuple(int(x * denom) for x in v) + (denom,) for v in verts]
        rays = extreme_rays(rows, n + 1)
        out = []
        for ray, mask in rays:
            a = ray[:n]
            normal = la.primitive(a)
            g = la.content(a)
            offset = Fraction(ray[n], g)
            offset = offset.numerator if offset.denominator == 1 else offset
            out.append((Halfspace(normal, offset), mask))
        out.sort(key=lambda t: (t[0].normal, t[0].offset))
        return HalfspaceSystem(h for h, _ in out), tuple(m for _, m in out)

    def facets(self) -> HalfspaceSystem:
        return self._cached("facets", self._compute_facets)[0]

    def facet_vertex_masks(self) -> tuple:
        """Bitmask of incident vertex indices, one per facet (same order as facets())."""
        return self._cached("facets", self._compute_facets)[1]

    def facet_vertex_sets(self) -> list[tuple[int, ...]]:
        return [tuple(_popcount_iter(m)) for m in self.facet_vertex_masks()]

    def vertex_facet_masks(self) -> tuple:
        def build():
            out = [0] * len(self.vertices)
            for j, m in enumerate(self.facet_vertex_masks()):
                for i in _popcount_iter(m):
                    out[i] |= 1 << j
            return tuple(out)
        return self._cached("vfmasks", build)

    def contains(self, x, strict: bool = False) -> bool:
        return self.facets().contains(la.as_vector(x), strict)

    # ------------------------------------------------------------ combinatorics
    def edges(self) -> list[tuple[int, int]]:
        """Vertex index pairs spanning an edge."""
        def build():
            fm = self.facet_vertex_masks()
            vf = self.vertex_facet_masks()
            allv = (1 << len(self.vertices)) - 1
            out = []
            for i in range(len(self.vertices)):
                for j in range(i + 1, len(self.vertices)):
                    common = vf[i] & vf[j]
                    face = allv
                    for f in _popcount_iter(common):
                        face &= fm[f]
                        if face == (1 << i) | (1 << j):
                            break
                    if face == (1 << i) | (1 << j):
                        out.append((i, j))
            return tuple(out)
        return list(self._cached("edges", build))

    def face_lattice(self) -> FaceLattice:
        return self._cached("lattice", self._build_lattice)

    def _build_lattice(self) -> FaceLattice:
        n = self.dim
        nv = len(self.vertices)
        fm = list(dict.fromkeys(self.facet_vertex_masks()))
        levels: list[list[int]] = [[] for _ in range(n + 2)]
        levels[n + 1] = [(1 << nv) - 1]
        if n >= 1:
            levels[n] = fm
        for d in range(n - 1, 1, -1):
            found: dict[int, None] = {}
            for F in levels[d + 1]:
                cands = {F & G for G in fm if F & G != F and F & G}
                for c in cands:
                    if not any(c != o and c & o == c for o in cands):
                        found[c] = None
            levels[d] = list(found)
        if n >= 1:
            levels[1] = [1 << i for i in range(nv)]
        levels[0] = [0]
        faces = tuple(tuple(sorted((frozenset(_popcount_iter(m)) for m in lvl),
                                   key=lambda s: sorted(s)))
                      for lvl in levels)
        return FaceLattice(n, faces)

    def f_vector(self) -> list[int]:
        """f_{-1}, f_0, ..., f_n."""
        return self.face_lattice().f_vector()

    # --------------------------------------------------------------- predicates
    def is_integral(self) -> bool:
        return all(la.is_integral_vector(v) for v in self.vertices)

    def is_simplicial(self) -> bool:
        return all(m.bit_count() == self.dim for m in self.facet_vertex_masks())

    def is_simple(self) -> bool:
        return all(m.bit_count() == self.dim for m in self.vertex_facet_masks())

    def is_delzant(self) -> bool:
        if not self.is_simple():
            return False
        nbrs: dict[int, list[int]] = {i: [] for i in range(len(self.vertices))}
        for i, j in self.edges():
            nbrs[i].append(j)
            nbrs[j].append(i)
        for i, v in enumerate(self.vertices):
            dirs = [la.primitive(la.vsub(self.vertices[j], v)) for j in nbrs[i]]
            if len(dirs) != self.dim or abs(la.determinant(dirs)) != 1:
                return False
        return True

    def is_toric_diagram(self) -> bool:
        """Simplicial, and each facet is a unimodular simplex of its hyperplane."""
        if not self.is_integral() or not self.is_simplicial():
            return False
        for h, vs in zip(self.facets(), self.facet_vertex_sets()):
            v0 = self.vertices[vs[0]]
            frame = [la.vsub(self.vertices[i], v0) for i in vs[1:]]
            frame.append(la.unit_dual(h.normal))
            if abs(la.determinant(frame)) != 1:
                return False
        return True

    def reflexive_translation(self, r: int = 1):
        """Integer w with ``r*P - w`` reflexive, or None."""
        if not self.is_integral():
            return None
        hs = self.facets()
        A = [h.normal for h in hs]
        rhs = [1 - r * h.offset for h in hs]
        w = la.solve(A, rhs)
        if w is None or not la.is_integral_vector(w):
            return None
        return w

    def is_reflexive(self) -> bool:
        return self.reflexive_translation(1) is not None

    def gorenstein_index(self) -> int | None:
        for r in range(1, self.dim + 2):
            if self.reflexive_translation(r) is not None:
                return r
        return None

    # ------------------------------------------------------------- operations
    def dilate(self, t) -> "Polytope":
        if not isinstance(t, (int, Fraction)) or t <= 0:
            raise ParameterError(f"dilation factor must be positive, got {t!r}")
        return Polytope([la.vscale(t, v) for v in self.vertices], _trusted=True)

    def translate(self, w) -> "Polytope":
        w = la.as_vector(w)
        if len(w) != self.dim:
            raise DimensionError("translation vector has the wrong length")
        return Polytope([la.vadd(v, w) for v in self.vertices], _trusted=True)

    def transform(self, phi) -> "Polytope":
        return Polytope([phi(v) for v in self.vertices], _trusted=True)

    def polar_dual(self) -> "Polytope":
        hs = self.facets()
        if any(h.offset <= 0 for h in hs):
            raise PreconditionError("origin is not in the interior")
        verts = [la.as_vector(Fraction(-a) / h.offset for a in h.normal) for h in hs]
        return Polytope(verts, _trusted=True)

    def lattice_distance(self, x) -> list:
        return [h.value(x) for h in self.facets()]

    # -------------------------------------------------------------------- json
    def to_json(self) -> dict:
        return {"dim": self.dim,
                "vertices": [[_num_json(x) for x in v] for v in self.vertices]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, doc) -> "Polytope":
        if isinstance(doc, str):
            doc = json.loads(doc)
        if not isinstance(doc, dict) or "vertices" not in doc:
            raise ValueError("polytope JSON needs a 'vertices' field")
        verts = doc["vertices"]
        if not isinstance(verts, list) or not verts:
            raise ValueError("field 'vertices' must be a nonempty list")
        parsed = []
        for i, v in enumerate(verts):
            if not isinstance(v, list):
                raise ValueError(f"vertices[{i}] is not a list")
            try:
                parsed.append(tuple(_parse_num(x) for x in v))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"vertices[{i}]: {exc}") from None
        if "dim" in doc and any(len(v) != doc["dim"] for v in parsed):
            raise DimensionError(f"vertex length differs from dim={doc['dim']}")
        return cls(parsed)

    @classmethod
    def from_halfspaces(cls, pairs) -> "Polytope":
        """Polytope ``{x : a . x + b >= 0}`` for ``(a, b)`` in pairs; must be bounded."""
        pairs = [(la.as_vector(a), la.as_vector([b])[0]) for a, b in pairs]
        if not pairs:
            raise DegenerateError("no halfspaces given")
        n = len(pairs[0][0])
        rows = []
        for a, b in pairs:
            rows.append(la.clear_denominators(a + (b,)))
        rows.append((0,) * n + (1,))
        verts = []
        for ray, _ in extreme_rays(rows, n + 1):
            s = ray[n]
            if s == 0:
                raise DegenerateError("halfspace system is unbounded")
            verts.append(la.as_vector(Fraction(x, s) for x in ray[:n]))
        return cls(verts)


LatticePolytope = Polytope


def hull(points) -> Polytope:
    """Convex hull of a full-dimensional point set, pruned to its vertices."""
    return Polytope(points)


def facets(P: Polytope) -> HalfspaceSystem:
    return P.facets()


def face_lattice(P: Polytope) -> FaceLattice:
    return P.face_lattice()


def f_vector(P: Polytope) -> list[int]:
    return P.f_vector()


def polar_dual(P: Polytope) -> Polytope:
    return P.polar_dual()


def dilate(P: Polytope, t) -> Polytope:
    return P.dilate(t)


def translate(P: Polytope, v) -> Polytope:
    return P.translate(v)


def is_integral(P: Polytope) -> bool:
    return P.is_integral()


def is_simple(P: Polytope) -> bool:
    return P.is_simple()


def is_simplicial(P: Polytope) -> bool:
    return P.is_simplicial()


def is_delzant(P: Polytope) -> bool:
    return P.is_delzant()


def is_toric_diagram(P: Polytope) -> bool:
    return P.is_toric_diagram()


def is_reflexive(P: Polytope) -> bool:
    return P.is_reflexive()


def gorenstein_index(P: Polytope) -> int | None:
    return P.gorenstein_index()


def brute_force_facets(P: Polytope) -> set[tuple[tuple, object]]:
    """Facets by testing every n-subset of vertices. Slow; used as a test oracle."""
    from itertools import combinations
    n = P.dim
    out = set()
    V = P.vertices
    for sub in combinations(range(len(V)), n):
        rows = [tuple(V[i]) + (1,) for i in sub]
        ker = la.nullspace(rows, n + 1)
        if len(ker) != 1:
            continue
        a, b = ker[0][:n], ker[0][n]
        if not any(a):
            continue
        vals = [la.dot(a, v) + b for v in V]
        if all(x >= 0 for x in vals):
            pass
        elif all(x <= 0 for x in vals):
            a, b = la.vscale(-1, a), -b
        else:
            continue
        g = la.content(a)
        off = Fraction(b, g)
        out.add((tuple(x // g for x in a), off.numerator if off.denominator == 1 else off))
    return out
