"""Rooted 3-cacti: canonical codes, enumeration, counting, and the bridge to
toric diagrams (realization and extraction of additive triples)."""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import combinations

from .errors import DomainError, ParameterError
from .polytope import Polytope


class RootedCactus:
    """A node: a multiset of triangles, each an unordered pair of child nodes.

    Triangles and the children inside each triangle are stored sorted by
    canonical code, so structurally equal cacti compare equal.
    """

    __slots__ = ("triangles", "_code", "_size")

    def __init__(self, triangles=()):
        tris = []
        for t in triangles:
            a, b = t
            a = a if isinstance(a, RootedCactus) else RootedCactus(a)
            b = b if isinstance(b, RootedCactus) else RootedCactus(b)
            if b.code < a.code:
                a, b = b, a
            tris.append((a, b))
        tris.sort(key=lambda t: _tri_code(t[0].code, t[1].code))
        self.triangles = tuple(tris)
        self._code = None
        self._size = None

    @property
    def code(self) -> bytes:
        if self._code is None:
            self._code = b"(" + b"".join(_tri_code(a.code, b.code) for a, b in self.triangles) + b")"
        return self._code

    @property
    def size(self) -> int:
        """Number of triangles."""
        if self._size is None:
            self._size = sum(1 + a.size + b.size for a, b in self.triangles)
        return self._size

    @property
    def num_vertices(self) -> int:
        return 2 * self.size + 1

    def __eq__(self, other):
        return isinstance(other, RootedCactus) and self.code == other.code

    def __lt__(self, other):
        return self.code < other.code

    def __hash__(self):
        return hash(self.code)

    def __repr__(self):
        return f"RootedCactus({self.code.decode()})"

    def to_json(self):
        return [[a.to_json(), b.to_json()] for a, b in self.triangles]

    @classmethod
    def from_json(cls, doc) -> "RootedCactus":
        if isinstance(doc, str):
            doc = json.loads(doc)
        if not isinstance(doc, list):
            raise ValueError("a cactus node must be a list of triangles")
        tris = []
        for i, t in enumerate(doc):
            if not isinstance(t, list) or len(t) != 2:
                raise ValueError(f"triangle {i} must be a pair of nodes")
            tris.append((cls.from_json(t[0]), cls.from_json(t[1])))
        return cls(tris)

    @classmethod
    def from_code(cls, code: bytes) -> "RootedCactus":
        node, pos = _parse_node(code, 0)
        if pos != len(code):
            raise ValueError("trailing bytes after cactus code")
        return node

    def edges(self) -> list[tuple[int, int]]:
        """Edge list with vertex 0 the root, numbered depth first."""
        out = []
        counter = [0]

        def walk(node, v):
            for a, b in node.triangles:
                ia = counter[0] = counter[0] + 1
                ib = counter[0] = counter[0] + 1
                out.extend([(v, ia), (v, ib), (ia, ib)])
                walk(a, ia)
                walk(b, ib)
        walk(self, 0)
        return out


def _tri_code(ca: bytes, cb: bytes) -> bytes:
    if cb < ca:
        ca, cb = cb, ca
    return b"[" + ca + cb + b"]"


def _parse_node(code: bytes, pos: int):
    if code[pos:pos + 1] != b"(":
        raise ValueError(f"expected '(' at byte {pos}")
    pos += 1
    tris = []
    while code[pos:pos + 1] == b"[":
        a, pos = _parse_node(code, pos + 1)
        b, pos = _parse_node(code, pos)
        if code[pos:pos + 1] != b"]":
            raise ValueError(f"expected ']' at byte {pos}")
        pos += 1
        tris.append((a, b))
    if code[pos:pos + 1] != b")":
        raise ValueError(f"expected ')' at byte {pos}")
    return RootedCactus(tris), pos + 1


def canonical_code(C: RootedCactus) -> bytes:
    return C.code


def star(n: int) -> RootedCactus:
    leaf = RootedCactus()
    return RootedCactus([(leaf, leaf)] * n)


def chain(n: int) -> RootedCactus:
    node = RootedCactus()
    for _ in range(n):
        node = RootedCactus([(node, RootedCactus())])
    return node


# ----------------------------------------------------------------- enumeration
@lru_cache(maxsize=None)
def _triangles_of_size(s: int) -> tuple:
    """All triangles with s triangles in total (itself included), sorted by code."""
    out = []
    for a in range((s - 1) // 2 + 1):
        b = s - 1 - a
        na, nb = _nodes_of_size(a), _nodes_of_size(b)
        if a == b:
            for i in range(len(na)):
                for j in range(i, len(na)):
                    out.append((na[i], na[j]))
        else:
            out.extend((x, y) for x in na for y in nb)
    out.sort(key=lambda t: _tri_code(t[0].code, t[1].code))
    return tuple(out)


@lru_cache(maxsize=None)
def _nodes_of_size(m: int) -> tuple:
    if m == 0:
        return (RootedCactus(),)
    # every triangle of size <= m in a fixed order; choose multisets by
    # nondecreasing position so each multiset appears once
    pool = [t for s in range(1, m + 1) for t in _triangles_of_size(s)]
    sizes = [1 + a.size + b.size for a, b in pool]
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(RootedCactus(acc))
            return
        for i in range(start, len(pool)):
            if sizes[i] <= remaining:
                acc.append(pool[i])
                rec(i, remaining - sizes[i], acc)
                acc.pop()

    rec(0, m, [])
    out.sort(key=lambda c: c.code)
    return tuple(out)


def enumerate_cacti(n: int) -> list[RootedCactus]:
    """One rooted 3-cactus with n triangles per isomorphism class, in code order."""
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"need n >= 1 triangles, got {n!r}")
    return list(_nodes_of_size(n))


def count_cacti(n: int) -> int:
    """Number of classes with n triangles, by the Euler-transform recurrence."""
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"need n >= 1 triangles, got {n!r}")
    return _count_table(n)[0][n]


def _count_table(n):
    # N: nodes by triangle count; T: triangles by triangle count
    N = [1] + [0] * n
    T = [0] * (n + 1)
    for m in range(1, n + 1):
        # T[m] = [x^{m-1}] (N(x)^2 + N(x^2)) / 2
        sq = sum(N[i] * N[m - 1 - i] for i in range(m))
        half = N[(m - 1) // 2] if (m - 1) % 2 == 0 else 0
        T[m] = (sq + half) // 2
        # Euler transform: m N[m] = sum_k c_k N[m-k], c_k = sum_{d | k} d T[d]
        acc = 0
        for k in range(1, m + 1):
            ck = sum(d * T[d] for d in range(1, k + 1) if k % d == 0)
            acc += ck * N[m - k]
        N[m] = acc // m
    return N, T


# ------------------------------------------------------------------ realization
def realize_points(C: RootedCactus) -> list[tuple]:
    """Vertex vectors of the realization, root first (the origin)."""
    n = C.size
    pts = [(0,) * n]
    step = [0]

    def walk(node, y):
        for a, b in node.triangles:
            k = step[0]
            step[0] += 1
            ek = tuple(int(i == k) for i in range(n))
            ya = ek
            yb = tuple(x - e for x, e in zip(y, ek))
            pts.extend([ya, yb])
            walk(a, ya)
            walk(b, yb)

    walk(C, (0,) * n)
    return pts


def realize(C: RootedCactus) -> Polytope:
    """Toric diagram attached to the cactus; the root becomes the interior origin."""
    if C.size < 1:
        raise ParameterError("cannot realize a cactus without triangles")
    return Polytope(realize_points(C)[1:])


# ------------------------------------------------------------------- extraction
def _validate_member(D: Polytope):
    from .ehrhart import count_interior, hstar, lattice_points
    from math import comb

    n = D.dim
    if not D.is_integral():
        raise DomainError("diagram is not integral")
    if not D.is_toric_diagram():
        raise DomainError("not a toric diagram")
    if len(D.vertices) != 2 * n:
        raise DomainError(f"expected {2 * n} vertices, found {len(D.vertices)}")
    if count_interior(D, 1) != 1:
        raise DomainError("expected exactly one interior lattice point")
    pts = lattice_points(D, 1)
    if len(pts) != 2 * n + 1:
        raise DomainError(f"expected {2 * n + 1} lattice points, found {len(pts)}")
    if tuple(hstar(D)) != tuple(comb(n, k) for k in range(n + 1)):
        raise DomainError("h* is not the binomial row")
    inner = lattice_points(D, 1, strict=True)[0]
    return [tuple(x - c for x, c in zip(p, inner)) for p in pts]


def extract_cactus(D: Polytope) -> RootedCactus:
    """Read the cactus off the additive triples a + b = c among lattice points."""
    pts = _validate_member(D)
    n = D.dim
    zero = (0,) * n
    pset = set(pts)
    kids: dict[tuple, list[tuple]] = {p: [] for p in pts}
    seen_child = set()
    count = 0
    nonzero = [p for p in pts if p != zero]
    for a, b in combinations(nonzero, 2):
        c = tuple(x + y for x, y in zip(a, b))
        if c in pset:
            for x in (a, b):
                if x in seen_child:
                    raise DomainError(f"vertex {x} is a child in two triangles")
                seen_child.add(x)
            kids[c].append((a, b))
            count += 1
    if count != n or len(seen_child) != 2 * n:
        raise DomainError(f"additive triples do not form a cactus ({count} triangles)")

    def build(v, depth=0):
        if depth > n:
            raise DomainError("additive triples contain a cycle")
        return RootedCactus([(build(a, depth + 1), build(b, depth + 1)) for a, b in kids[v]])

    C = build(zero)
    if C.size != n:
        raise DomainError("additive triples are not connected to the root")
    return C
