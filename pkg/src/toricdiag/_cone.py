"""Extreme rays of a pointed polyhedral cone by double description.

Integer arithmetic only. Zero sets are kept as int bitmasks over the row
indices so the combinatorial adjacency test is a couple of AND operations.
"""

from __future__ import annotations

from math import gcd

from .errors import DegenerateError
from .linalg import independent_subset, inverse, primitive


def _prim(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def extreme_rays(rows, dim: int | None = None) -> list[tuple[tuple, int]]:
    """Extreme rays of ``{y : r . y >= 0 for r in rows}``.

    Returns a list of ``(ray, zero_mask)`` where ``ray`` is a primitive
    integer vector and bit ``i`` of ``zero_mask`` is set iff ``rows[i] . ray == 0``.
    The cone must be pointed (rows of full rank).
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    if dim is None:
        dim = len(rows[0]) if rows else 0
    basis = independent_subset(rows)
    if len(basis) < dim:
        raise DegenerateError(f"cone is not pointed (row rank {len(basis)} < {dim})")

    inv = inverse([rows[i] for i in basis])
    rays: list[tuple] = []
    masks: list[int] = []
    for j in range(dim):
        rays.append(primitive([inv[i][j] for i in range(dim)]))
    # compute zero sets against the basis rows
    for r in rays:
        m = 0
        for i in basis:
            if sum(a * b for a, b in zip(rows[i], r)) == 0:
                m |= 1 << i
        masks.append(m)

    in_basis = set(basis)
    for h, row in enumerate(rows):
        if h in in_basis:
            continue
        vals = [sum(a * b for a, b in zip(row, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        bit = 1 << h
        new_rays = []
        new_masks = []
        for i, v in enumerate(vals):
            if v >= 0:
                new_rays.append(rays[i])
                new_masks.append(masks[i] | bit if v == 0 else masks[i])
        if neg:
            need = dim - 2
            for p in pos:
                mp = masks[p]
                vp = vals[p]
                rp = rays[p]
                for q in neg:
                    common = mp & masks[q]
                    if common.bit_count() < need:
                        continue
                    adjacent = True
                    for s, ms in enumerate(masks):
                        if s != p and s != q and ms & common == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    vq = vals[q]
                    rq = rays[q]
                    nr = _prim(tuple(vp * b - vq * a for a, b in zip(rp, rq)))
                    new_rays.append(nr)
                    new_masks.append(common | bit)
        rays, masks = new_rays, new_masks
        if not rays:
            raise DegenerateError("cone is trivial")
    return list(zip(rays, masks))
