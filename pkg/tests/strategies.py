"""Shared hypothesis strategies."""

import random

from hypothesis import assume
from hypothesis import strategies as st

from toricdiag import linalg as la
from toricdiag.polytope import Polytope


def lattice_points(n, lo=-3, hi=3):
    return st.tuples(*[st.integers(lo, hi)] * n)


@st.composite
def point_sets(draw, dims=(2, 3), min_size=None, max_size=8, lo=-3, hi=3):
    n = draw(st.sampled_from(dims))
    pts = draw(st.lists(lattice_points(n, lo, hi), min_size=min_size or n + 1,
                        max_size=max_size, unique=True))
    assume(la.affine_rank(pts) == n)
    return pts


@st.composite
def polytopes(draw, **kw):
    return Polytope(draw(point_sets(**kw)))


@st.composite
def unimodular_maps(draw, n, shift=3):
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    return la.random_affine_unimodular(n, rng, shift=shift)
