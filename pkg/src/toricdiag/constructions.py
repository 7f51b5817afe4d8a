"""Builders for the standard polytope families and the prequantization."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import linalg as la
from .errors import (NotGorensteinError, ParameterError, PreconditionError,
                     ValidityError)
from .polytope import Polytope


def _unit(n: int, i: int) -> tuple:
    return tuple(int(j == i) for j in range(n))


def _check_n(n, least=1):
    if not isinstance(n, int) or n < least:
        raise ParameterError(f"dimension must be an integer >= {least}, got {n!r}")


def cube(n: int, lo: int = -1, hi: int = 1) -> Polytope:
    _check_n(n)
    if lo >= hi:
        raise ParameterError("cube needs lo < hi")
    return Polytope(product((lo, hi), repeat=n), _trusted=True)


def cross_polytope(n: int) -> Polytope:
    _check_n(n)
    verts = []
    for i in range(n):
        e = _unit(n, i)
        verts += [e, la.vscale(-1, e)]
    return Polytope(verts, _trusted=True)


def small_cross_polytope(n: int) -> Polytope:
    """0, e_n, and e_i, e_n - e_i for i < n."""
    _check_n(n)
    en = _unit(n, n - 1)
    verts = [(0,) * n, en]
    for i in range(n - 1):
        e = _unit(n, i)
        verts += [e, la.vsub(en, e)]
    return Polytope(verts, _trusted=True)


def simplex(n: int) -> Polytope:
    _check_n(n)
    return Polytope([(0,) * n] + [_unit(n, i) for i in range(n)], _trusted=True)


def pyramid(P: Polytope) -> Polytope:
    """Pyramid over P at height one; the apex sits over the origin."""
    n = P.dim
    verts = [tuple(v) + (0,) for v in P.vertices]
    verts.append((0,) * n + (1,))
    return Polytope(verts, _trusted=True)


def pseudo_bipyramid(P: Polytope, s1, s2, strict: bool = False) -> Polytope:
    """conv of P x {0}, (s1, 1) and (s2, -1), for lattice points s1, s2 of P.

    With ``strict`` the apices may not lie on a common facet of P, which is
    needed for the result to be a toric diagram.
    """
    s1, s2 = la.as_vector(s1), la.as_vector(s2)
    for s in (s1, s2):
        if len(s) != P.dim:
            raise PreconditionError("apex base point has the wrong dimension")
        if not la.is_integral_vector(s) or not P.contains(s):
            raise PreconditionError(f"{s} is not a lattice point of the base")
    if strict:
        for h in P.facets():
            if h.value(s1) == 0 and h.value(s2) == 0:
                raise ValidityError(f"{s1} and {s2} lie on the common facet {h.normal}")
    verts = [tuple(v) + (0,) for v in P.vertices]
    verts += [s1 + (1,), s2 + (-1,)]
    return Polytope(verts)


def bipyramid(P: Polytope, s=None) -> Polytope:
    s = (0,) * P.dim if s is None else s
    return pseudo_bipyramid(P, s, s)


# ------------------------------------------------------------- prequantization
@dataclass(frozen=True)
class Prequantization:
    """The toric diagram together with the unimodular map T and the vector c.

    ``transform`` acts on Z^{n+1} and sends every (normal, offset) pair to
    height one; its last row is ``c``.
    """

    diagram: Polytope
    transform: la.AffineUnimodularMap
    c: tuple
    index: int

    def to_json(self) -> dict:
        return {"diagram": self.diagram.to_json(),
                "transform": self.transform.to_json(),
                "c": [str(x) for x in self.c],
                "index": self.index}


def _halfspace_pairs(P):
    if isinstance(P, Polytope):
        if not P.is_integral():
            raise PreconditionError("prequantization needs an integral polytope")
        if not P.is_delzant():
            raise PreconditionError("prequantization needs a Delzant polytope")
        return [(h.normal, h.offset) for h in P.facets()]
    pairs = [(la.as_vector(a), la.as_vector([b])[0]) for a, b in P]
    for a, b in pairs:
        if la.content(a) != 1 or not la.is_integral_vector(a + (b,)):
            raise PreconditionError(f"normal {a} with offset {b} is not a primitive integral pair")
    return pairs


def prequantize(P) -> Prequantization:
    """Cone over P x {1}, rotated so every facet normal sits at height one.

    ``P`` is either a Polytope or a list of (normal, offset) pairs describing
    ``{x : normal . x + offset >= 0}``.
    """
    pairs = _halfspace_pairs(P)
    rows = [tuple(a) + (b,) for a, b in pairs]
    c = la.solve(rows, [1] * len(rows))
    if c is None:
        raise NotGorensteinError("no vector has inner product 1 with every (normal, offset) pair")
    if not la.is_integral_vector(c):
        raise NotGorensteinError(f"the height-one functional {c} is not integral")
    T = la.hermite_completion(c)
    n = len(c) - 1
    images = [la.matvec(T, r) for r in rows]
    if any(v[n] != 1 for v in images):
        raise NotGorensteinError("completion failed to reach height one")
    D = Polytope([v[:n] for v in images])
    # index r: c = (w, r) makes r*P - w' reflexive; the last entry of c is r
    return Prequantization(D, la.AffineUnimodularMap(T, (0,) * (n + 1)), c, c[n])


# -------------------------------------------------------------------- families
def _check_family(n, k, parity=False):
    _check_n(n, 2)
    if not isinstance(k, int) or not 0 <= k < n:
        raise ParameterError(f"k must satisfy 0 <= k < n, got k={k!r}, n={n}")
    if parity and (n - k) % 2:
        raise ParameterError(f"k must be congruent to n mod 2, got k={k}, n={n}")


def _scaled_simplex(m, d):
    """Vertices of m * standard simplex in R^d."""
    return [(0,) * d] + [la.vscale(m, _unit(d, i)) for i in range(d)]


def family_Pk(n: int, k: int) -> Polytope:
    """Frustum with bottom (n+k)Δ - 1 at height -1 and top (n-k)Δ - 1 at height 1."""
    _check_family(n, k)
    ones = (1,) * (n - 1)
    bot = [la.vsub(v, ones) + (-1,) for v in _scaled_simplex(n + k, n - 1)]
    top = [la.vsub(v, ones) + (1,) for v in _scaled_simplex(n - k, n - 1)]
    return Polytope(bot + top, _trusted=True)


def family_Pk_half(n: int, k: int) -> Polytope:
    """(P_k + 1)/2: bottom ((n+k)/2)Δ at height 0, top ((n-k)/2)Δ at height 1."""
    _check_family(n, k, parity=True)
    bot = [v + (0,) for v in _scaled_simplex((n + k) // 2, n - 1)]
    top = [v + (1,) for v in _scaled_simplex((n - k) // 2, n - 1)]
    return Polytope(bot + top, _trusted=True)


def family_Tk(n: int, k: int) -> Polytope:
    _check_family(n, k)
    en = _unit(n, n - 1)
    vk = (-1,) * (n - 1) + (-k,)
    return Polytope([_unit(n, i) for i in range(n)] + [la.vscale(-1, en), vk], _trusted=True)


def family_Dk(n: int, k: int) -> Polytope:
    """Vertices a_1..a_{n+2} in their closed form; the apices are a_n and a_{n+1}."""
    _check_family(n, k, parity=True)
    verts = [(0,) * n]
    verts += [_unit(n, i) for i in range(n - 1)]
    verts.append(la.vsub(_unit(n, n - 1), _unit(n, n - 2)))
    last = [-1] * (n - 2) + [-k, (n + k) // 2]
    verts.append(tuple(last))
    return Polytope(verts, _trusted=True)


# ------------------------------------------------------------------------ Bott
@dataclass(frozen=True)
class BottMatrix:
    """Lower triangular integer matrix with -1 on the diagonal."""

    entries: tuple

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.entries)
        n = len(M)
        if n < 1 or any(len(r) != n for r in M):
            raise ParameterError("Bott matrix must be square and nonempty")
        for i in range(n):
            if M[i][i] != -1:
                raise ParameterError(f"diagonal entry ({i + 1},{i + 1}) must be -1")
            if any(M[i][j] for j in range(i + 1, n)):
                raise ParameterError(f"row {i + 1} has entries above the diagonal")
        object.__setattr__(self, "entries", M)

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def from_lower(cls, n: int, lower: dict) -> "BottMatrix":
        """Build from {(i, j): a_ij} with 1-based indices, i > j."""
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            M[i][i] = -1
        for (i, j), a in lower.items():
            if not 1 <= j < i <= n:
                raise ParameterError(f"entry ({i},{j}) is not strictly below the diagonal")
            M[i - 1][j - 1] = a
        return cls(tuple(map(tuple, M)))

    def a(self, i: int, j: int) -> int:
        """1-based entry a_{i,j}."""
        return self.entries[i - 1][j - 1]

    def normals(self) -> list[tuple]:
        n = self.n
        cols = [_unit(n, j) for j in range(n)]
        cols += [tuple(self.entries[i][j] for i in range(n)) for j in range(n)]
        return cols

    def to_json(self):
        return [list(r) for r in self.entries]


def _column_ok(L: BottMatrix, j: int) -> bool:
    n = L.n
    below = [L.a(i, j) for i in range(j + 1, n + 1)]
    if all(x == 0 for x in below):
        return True
    ones = [i for i in range(j + 1, n + 1) if L.a(i, j) == 1]
    if len(ones) == 1 and all(L.a(i, j) == 0 for i in range(j + 1, n + 1) if i != ones[0]):
        return True
    for q in range(j + 1, n + 1):
        if L.a(q, j) != -1:
            continue
        if all(L.a(i, j) == 0 for i in range(j + 1, q)) and all(
                L.a(i, j) == L.a(i, q) for i in range(q + 1, n + 1)):
            return True
    return False


def is_monotone_bott(L: BottMatrix) -> bool:
    return all(_column_ok(L, j) for j in range(1, L.n))


def bott_halfspaces(L: BottMatrix) -> list[tuple[tuple, int]]:
    return [(nu, 1) for nu in L.normals()]


def bott_moment_polytope(L: BottMatrix) -> Polytope:
    return Polytope.from_halfspaces(bott_halfspaces(L))


def bott_diagram(L: BottMatrix) -> Polytope:
    if not is_monotone_bott(L):
        raise ValidityError("matrix fails the monotonicity conditions")
    return Polytope(L.normals())


BOTT_EXAMPLES_3 = (
    BottMatrix.from_lower(3, {}),
    BottMatrix.from_lower(3, {(3, 2): 1}),
    BottMatrix.from_lower(3, {(3, 1): 1, (3, 2): -1}),
    BottMatrix.from_lower(3, {(3, 1): 1, (3, 2): 1}),
    BottMatrix.from_lower(3, {(2, 1): 1, (3, 2): 1}),
)
