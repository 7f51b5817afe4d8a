"""Exact integer and rational linear algebra.

Vectors are plain tuples of ``int`` (lattice vectors) or ``Fraction``
(rational vectors); matrices are tuples of row tuples. Nothing in here
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DegenerateError, DimensionError, PreconditionError

Vector = tuple
Matrix = tuple


def as_vector(v) -> tuple:
    """Normalize a coordinate sequence; integral Fractions collapse to int."""
    out = []
    for x in v:
        if isinstance(x, Fraction):
            out.append(x.numerator if x.denominator == 1 else x)
        elif isinstance(x, int):
            out.append(int(x))
        else:
            # numpy integers and the like
            f = Fraction(x)
            out.append(f.numerator if f.denominator == 1 else f)
    return tuple(out)


def as_matrix(rows) -> tuple:
    return tuple(as_vector(r) for r in rows)


def identity(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vsub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vadd(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vscale(c, v) -> tuple:
    return tuple(c * a for a in v)


def transpose(M) -> tuple:
    return tuple(zip(*M)) if M else ()


def matmul(A, B) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def matvec(A, v) -> tuple:
    return tuple(dot(row, v) for row in A)


def is_integral_vector(v) -> bool:
    return all(isinstance(x, int) or x.denominator == 1 for x in v)


def content(v) -> int:
    """gcd of the entries of an integer vector (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v) -> tuple:
    """Divide an integer vector by the (positive) gcd of its entries.

    Rational input is first cleared of denominators, so the result is the
    primitive lattice vector on the same ray.
    """
    v = as_vector(v)
    if not is_integral_vector(v):
        den = 1
        for x in v:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        v = tuple(int(x * den) for x in v)
    g = content(v)
    if g == 0:
        raise DegenerateError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def clear_denominators(v) -> tuple:
    """Smallest positive integer multiple of a rational vector (not reduced by gcd)."""
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    return tuple(int(x * den) for x in v)


def _check_square(M) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionError(f"expected a square matrix, got {n} rows of lengths "
                             f"{sorted({len(r) for r in M})}")
    return n


def determinant(M) -> int | Fraction:
    """Exact determinant.

    Integer matrices use fraction-free Bareiss elimination; any rational entry
    switches to plain Gaussian elimination over ``Fraction``.
    """
    n = _check_square(M)
    if n == 0:
        return 1
    A = [list(row) for row in as_matrix(M)]
    if not all(is_integral_vector(r) for r in A):
        return _rational_det(A, n)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def _rational_det(A, n):
    A = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    return det.numerator if det.denominator == 1 else det


def row_echelon(rows, ncols: int | None = None):
    """Reduced row echelon form over the rationals.

    Returns ``(R, pivots)`` with ``R`` a list of Fraction rows (only the
    nonzero ones) and ``pivots`` the pivot column of each.
    """
    A = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return len(row_echelon(rows)[1])


def affine_rank(points) -> int:
    """Dimension of the affine span of a point set (-1 for no points)."""
    points = list(points)
    if not points:
        return -1
    p0 = points[0]
    return rank([vsub(p, p0) for p in points[1:]]) if len(points) > 1 else 0


def independent_subset(rows) -> list[int]:
    """Indices of a greedily chosen maximal linearly independent subset of rows."""
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for idx, row in enumerate(rows):
        r = [Fraction(x) for x in row]
        for b, p in zip(basis, pivots):
            if r[p] != 0:
                f = r[p]
                r = [x - f * y for x, y in zip(r, b)]
        p = next((j for j, x in enumerate(r) if x != 0), None)
        if p is None:
            continue
        piv = r[p]
        r = [x / piv for x in r]
        # keep basis reduced on earlier pivots
        for k, b in enumerate(basis):
            if b[p] != 0:
                f = b[p]
                basis[k] = [x - f * y for x, y in zip(b, r)]
        basis.append(r)
        pivots.append(p)
        chosen.append(idx)
    return chosen


def nullspace(rows, ncols: int) -> list[tuple]:
    """Basis of the rational right kernel, returned as primitive integer vectors."""
    R, pivots = row_echelon(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


def inverse(M) -> tuple:
    """Exact inverse over the rationals (entries normalized by ``as_vector``)."""
    n = _check_square(M)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, pivots = row_echelon(aug, n)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise DegenerateError("matrix is singular")
    return tuple(as_vector(row[n:]) for row in R)


def solve(A, b) -> tuple | None:
    """Solve ``A x = b`` exactly. Returns None if inconsistent.

    ``A`` must have full column rank; with more rows than columns the extra
    equations are checked for consistency.
    """
    ncols = len(A[0])
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(A, b)]
    R, pivots = row_echelon(aug, ncols + 1)
    if ncols in pivots:
        return None
    if len(pivots) < ncols:
        raise DegenerateError("system does not determine a unique solution")
    x = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[ncols]
    return as_vector(x)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _unit_reduction(c) -> tuple[list[list[int]], list[list[int]]]:
    """Integer column operations taking the row vector ``c`` to ``e_n``.

    Returns ``(U, Uinv)`` with ``c U = e_n`` and both unimodular. Requires
    ``c`` primitive.
    """
    n = len(c)
    c = list(c)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Uinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_addmul(i, j, q):
        # column_i -= q * column_j on (c, U); inverse op is row_j += q * row_i
        c[i] -= q * c[j]
        for row in U:
            row[i] -= q * row[j]
        Uinv[j] = [a + q * b for a, b in zip(Uinv[j], Uinv[i])]

    def col_swap(i, j):
        c[i], c[j] = c[j], c[i]
        for row in U:
            row[i], row[j] = row[j], row[i]
        Uinv[i], Uinv[j] = Uinv[j], Uinv[i]

    def col_neg(i):
        c[i] = -c[i]
        for row in U:
            row[i] = -row[i]
        Uinv[i] = [-a for a in Uinv[i]]

    while True:
        nz = [i for i in range(n) if c[i] != 0]
        if len(nz) <= 1:
            break
        j = min(nz, key=lambda i: (abs(c[i]), i))
        for i in nz:
            if i != j:
                col_addmul(i, j, c[i] // c[j])
    j = next(i for i in range(n) if c[i] != 0)
    if abs(c[j]) != 1:
        raise PreconditionError(f"vector is not primitive (content {abs(c[j])})")
    if c[j] < 0:
        col_neg(j)
    if j != n - 1:
        col_swap(j, n - 1)
    return U, Uinv


def hermite_completion(c) -> tuple:
    """Unimodular integer matrix whose last row is the primitive vector ``c``.

    Then ``x -> M x`` sends the hyperplane ``{y : c.y = 1}`` into ``x_n = 1``.
    For ``c = e_n`` this is the identity.
    """
    c = as_vector(c)
    if not is_integral_vector(c):
        raise PreconditionError("completion requires an integer vector")
    if content(c) != 1:
        raise PreconditionError(f"vector {c} is not primitive")
    _, Uinv = _unit_reduction(c)
    return tuple(tuple(row) for row in Uinv)


def unit_dual(a) -> tuple:
    """An integer vector ``u`` with ``a . u == 1`` for primitive ``a``."""
    U, _ = _unit_reduction(as_vector(a))
    return tuple(row[-1] for row in U)


@dataclass(frozen=True)
class AffineUnimodularMap:
    """``x -> linear @ x + translation`` with ``|det(linear)| == 1``."""

    linear: tuple
    translation: tuple

    def __post_init__(self):
        lin = as_matrix(self.linear)
        tr = as_vector(self.translation)
        n = _check_square(lin)
        if len(tr) != n:
            raise DimensionError("translation length does not match the linear part")
        if not all(is_integral_vector(r) for r in lin) or not is_integral_vector(tr):
            raise PreconditionError("affine unimodular maps have integer entries")
        if abs(determinant(lin)) != 1:
            raise PreconditionError("linear part is not unimodular")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)

    @property
    def dim(self) -> int:
        return len(self.translation)

    @classmethod
    def identity(cls, n: int) -> "AffineUnimodularMap":
        return cls(identity(n), (0,) * n)

    def __call__(self, x) -> tuple:
        return as_vector(vadd(matvec(self.linear, x), self.translation))

    def apply_all(self, points) -> list[tuple]:
        return [self(p) for p in points]

    def compose(self, other: "AffineUnimodularMap") -> "AffineUnimodularMap":
        """``self o other`` (apply ``other`` first)."""
        return AffineUnimodularMap(matmul(self.linear, other.linear),
                                   self(other.translation))

    def inverse(self) -> "AffineUnimodularMap":
        inv = inverse(self.linear)
        return AffineUnimodularMap(inv, vscale(-1, matvec(inv, self.translation)))

    def to_json(self) -> dict:
        return {"linear": [[str(x) for x in r] for r in self.linear],
                "translation": [str(x) for x in self.translation]}

    @classmethod
    def from_json(cls, doc: dict) -> "AffineUnimodularMap":
        return cls(tuple(tuple(int(x) for x in r) for r in doc["linear"]),
                   tuple(int(x) for x in doc["translation"]))


def solve_affine_frame(src: Sequence, dst: Sequence) -> AffineUnimodularMap | None:
    """The affine map sending ``src[i]`` to ``dst[i]``, if it is unimodular.

    ``src`` must be ``n+1`` affinely independent points of ``R^n``. Returns
    None when the unique affine map through the frames is not integral or not
    unimodular.
    """
    src = [as_vector(p) for p in src]
    dst = [as_vector(p) for p in dst]
    if not src or len(src) != len(dst):
        raise DimensionError("frames must have equal, nonzero length")
    n = len(src[0])
    if len(src) != n + 1 or any(len(p) != n for p in src + dst):
        raise DimensionError(f"an affine frame in dimension {n} has {n + 1} points")
    A = transpose([vsub(p, src[0]) for p in src[1:]])
    B = transpose([vsub(p, dst[0]) for p in dst[1:]])
    if n == 0:
        return AffineUnimodularMap((), ())
    try:
        Ainv = inverse(A)
    except DegenerateError:
        raise PreconditionError("source points are affinely dependent") from None
    L = as_matrix(matmul(B, Ainv))
    if not all(is_integral_vector(r) for r in L) or abs(determinant(L)) != 1:
        return None
    t = vsub(dst[0], matvec(L, src[0]))
    if not is_integral_vector(t):
        return None
    return AffineUnimodularMap(L, t)


def random_unimodular(n: int, rng, steps: int | None = None, spread: int = 1) -> tuple:
    """A random matrix in GL(n, Z): signed permutation times elementary shears."""
    M = [[0] * n for _ in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    for i, j in enumerate(perm):
        M[i][j] = rng.choice((-1, 1))
    for _ in range(n if steps is None else steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        q = rng.choice([x for x in range(-spread, spread + 1) if x])
        M[i] = [a + q * b for a, b in zip(M[i], M[j])]
    return tuple(map(tuple, M))


def random_affine_unimodular(n: int, rng, shift: int = 3, **kw) -> AffineUnimodularMap:
    return AffineUnimodularMap(random_unimodular(n, rng, **kw),
                               tuple(rng.randint(-shift, shift) for _ in range(n)))
