from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import point_sets, polytopes, unimodular_maps
from toricdiag import constructions as cons
from toricdiag import ehrhart as eh
from toricdiag.errors import InternalConsistencyError
from toricdiag.polytope import Polytope


@given(polytopes(dims=(1, 2, 3)), st.integers(0, 3))
def test_slicing_matches_naive(P, t):
    assert eh.count_points(P, t) == eh.count_points_naive(P, t)
    assert eh.count_interior(P, t) == eh.count_points_naive(P, t, strict=True)


@given(st.lists(st.tuples(st.fractions(-3, 3, max_denominator=4),
                          st.fractions(-3, 3, max_denominator=4)),
                min_size=3, max_size=6, unique=True),
       st.integers(1, 4))
def test_slicing_matches_naive_rational(pts, t):
    from toricdiag import linalg as la
    if la.affine_rank(pts) < 2:
        return
    P = Polytope(pts)
    assert eh.count_points(P, t) == eh.count_points_naive(P, t)
    assert eh.count_interior(P, t) == eh.count_points_naive(P, t, strict=True)


@given(polytopes(dims=(2, 3)), st.integers(0, 2))
def test_lattice_points_listing(P, t):
    pts = eh.lattice_points(P, t)
    assert pts == sorted(pts)
    assert len(pts) == len(set(pts)) == eh.count_points(P, t)
    Q = P.dilate(t) if t else None
    if Q is not None:
        assert all(Q.contains(p) for p in pts)
    inner = eh.lattice_points(P, t, strict=True)
    assert len(inner) == eh.count_interior(P, t)
    assert eh.count_boundary(P, t) == len(pts) - len(inner)


def shoelace2(vertices):
    # twice the area, vertices sorted by angle around the centroid
    import math
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    vs = sorted(vertices, key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
    return abs(sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(vs, vs[1:] + vs[:1])))


@given(polytopes(dims=(2,), max_size=10, lo=-4, hi=4))
def test_planar_hstar_sums_to_normalized_area(P):
    h = eh.hstar(P)
    assert h.total() == shoelace2(P.vertices)
    assert h[0] == 1
    assert h[1] == eh.count_points(P, 1) - 3
    # Pick: h*_2 is the number of interior points
    assert h[2] == eh.count_interior(P, 1)


@settings(max_examples=30)
@given(polytopes(dims=(3,), max_size=7, lo=-2, hi=2))
def test_hstar_nonnegative_and_predicts_counts(P):
    L = eh.ehrhart(P)
    assert all(x >= 0 for x in L.hstar.coeffs)
    for t in range(6):
        assert L(t) == eh.count_points_naive(P, t)
    # reciprocity: L(-t) = (-1)^n * interior count
    for t in range(1, 4):
        assert L.interior(t) == eh.count_interior(P, t)


@settings(max_examples=30)
@given(st.sampled_from([cons.cross_polytope(3), cons.small_cross_polytope(3), cons.family_Tk(3, 2),
                        cons.cube(2, 0, 3), cons.simplex(3)])
       .flatmap(lambda P: st.tuples(st.just(P), unimodular_maps(P.dim))))
def test_hstar_unimodular_invariance(arg):
    P, phi = arg
    assert eh.hstar(P.transform(phi)) == eh.hstar(P)


@pytest.mark.parametrize("n", range(1, 6))
def test_hstar_known_rows(n):
    assert tuple(eh.hstar(cons.simplex(n))) == (1,) + (0,) * n
    # unit cube: Eulerian numbers
    eul = tuple(sum((-1) ** j * comb(n + 1, j) * (k + 1 - j) ** n for j in range(k + 2)) for k in range(n))
    assert tuple(eh.hstar(cons.cube(n, 0, 1)))[:n] == eul
    assert eh.hstar(cons.cube(n, 0, 1)).total() == factorial(n)


@pytest.mark.parametrize("P", [cons.cross_polytope(3), cons.cube(3), cons.family_Tk(3, 1),
                               cons.small_cross_polytope(4)], ids=["cross", "cube", "T1", "small4"])
def test_pyramid_keeps_hstar(P):
    assert tuple(eh.hstar(cons.pyramid(P))) == tuple(eh.hstar(P)) + (0,)


@pytest.mark.parametrize("P", [cons.cross_polytope(2), cons.cube(2), cons.family_Tk(3, 1),
                               Polytope([(-1, -1), (2, 0), (0, 1)])], ids=["cross", "cube", "T1", "tri"])
def test_bipyramid_multiplies_by_one_plus_z(P):
    # free sum with the reflexive segment [-1, 1]
    h = eh.hstar(cons.bipyramid(P))
    assert tuple(h)[:P.dim + 2] == tuple(eh.poly_mul(eh.hstar(P).coeffs, (1, 1))) + (0,) * 0


@pytest.mark.parametrize("P", [cons.cross_polytope(3), cons.cube(3), cons.family_Dk(4, 0).dilate(2)],
                         ids=["cross", "cube", "2D"])
def test_reflexive_interior_shift(P):
    w = P.reflexive_translation(1)
    Q = P.translate(tuple(-x for x in w))
    assert Q.is_reflexive()
    assert eh.hibi_palindromic(eh.hstar(Q))
    for t in range(4):
        assert eh.count_interior(Q, t + 1) == eh.count_points(Q, t)


def test_gorenstein_palindromic():
    h = eh.hstar(cons.family_Tk(4, 2))
    assert eh.gorenstein_palindromic(h, 1) and not eh.gorenstein_palindromic(h, 2)
    h = eh.hstar(cons.family_Dk(4, 2))
    assert eh.gorenstein_palindromic(h, 2) and not eh.gorenstein_palindromic(h, 1)
    assert eh.hibi_palindromic((1, 2, 1)) and not eh.hibi_palindromic((1, 2, 0))


@pytest.mark.parametrize("patch", [("_FLOAT_SAFE", 0), ("_INT64_SAFE", 0)], ids=["int64", "object"])
def test_dtype_paths_agree(monkeypatch, patch):
    shapes = [cons.cross_polytope(4), cons.family_Pk(3, 1), Polytope([(0, 0), (Fraction(7, 2), 1), (1, 5)])]
    expect = [[eh.count_points(P, t) for t in range(4)] for P in shapes]
    monkeypatch.setattr(eh, "_FLOAT_SAFE", 0)
    if patch[0] == "_INT64_SAFE":
        monkeypatch.setattr(eh, "_INT64_SAFE", 0)
    fresh = [Polytope(P.vertices) for P in shapes]
    c = eh.SliceCounter(fresh[0])
    assert c._dtype(3) == (object if patch[0] == "_INT64_SAFE" else __import__("numpy").int64)
    got = [[eh.count_points(P, t) for t in range(4)] for P in fresh]
    assert got == expect
    assert [eh.count_interior(P, 2) for P in fresh] == [eh.count_points_naive(P, 2, strict=True) for P in fresh]


def test_large_coordinates_use_exact_arithmetic():
    # a unimodular triangle with a vertex far beyond float64 precision
    m = 10**15
    P = Polytope([(0, 0), (0, 1), (1, m)])
    assert eh.SliceCounter(P)._dtype(4) is object
    for t in range(5):
        assert eh.count_points(P, t) == comb(t + 2, 2)
        assert eh.count_interior(P, t) == (comb(t - 1, 2) if t else 0)
    assert eh.lattice_points(P, 1) == [(0, 0), (0, 1), (1, m)]


def test_workers_agree():
    P = cons.cross_polytope(4)
    assert eh.count_points(P, 3, workers=2) == eh.count_points(P, 3)


def test_hstar_from_values_self_check():
    good = [eh.ehrhart_from_hstar((1, 3, 3, 1))(t) for t in range(6)]
    assert tuple(eh.hstar_from_values(good, 3)) == (1, 3, 3, 1)
    assert tuple(eh.hstar_from_values(good[:4], 3)) == (1, 3, 3, 1)
    bad = good[:]
    bad[5] += 1
    with pytest.raises(InternalConsistencyError):
        eh.hstar_from_values(bad, 3)
    with pytest.raises(InternalConsistencyError):
        eh.hstar_from_values([1, 0, 0, 0], 3)


def test_ehrhart_polynomial_coefficients():
    L = eh.ehrhart(cons.cube(2, 0, 1))
    assert L.coefficients() == [1, 2, 1]
    assert [L(t) for t in range(4)] == [1, 4, 9, 16]
    assert eh.HStarVector((1, 2))[5] == 0


def test_betti_sequences():
    cb = eh.contact_betti((1, 3, 3, 1))
    assert cb.table(6) == [1, 4, 7, 8, 8, 8]
    assert cb.tail == 8
    cb = eh.contact_betti((1, 2, 1, 0))
    assert cb.table(5) == [0, 1, 3, 4, 4]
    # D_p in the plane: cb_0 = p, cb_2 = 2p + 1, then 2p + 2
    for p in range(1, 5):
        Dp = Polytope([(0, 0), (1, 0), (0, 1), (p + 1, p + 1)])
        assert eh.contact_betti(eh.hstar(Dp)).table(4) == [p, 2 * p + 1, 2 * p + 2, 2 * p + 2]


def test_series_product_and_quotient():
    assert eh.poly_mul((1, 1), (1, 2, 1)) == [1, 3, 3, 1]
    assert eh.series_product_check((1, 3, 3, 1), (1, 2, 1, 0), 2, 1)
    assert not eh.series_product_check((1, 3, 3, 1), (1, 1, 1, 0), 2, 1)
    hc = (1, 3, 3, 1)
    quot = [eh.betti_from_quotient(hc, 2, i) for i in range(6)]
    assert quot == eh.contact_betti((1, 2, 1, 0)).table(6)


def test_root_report():
    # L(t) = 2t + 1 for the segment [-1, 1]
    r = eh.root_real_parts(eh.ehrhart(cons.cross_polytope(1)), -0.5)
    assert r.verdict and abs(r.real_parts[0] + 0.5) < 1e-12
    r = eh.root_real_parts(eh.ehrhart(cons.simplex(3)), -1.0)
    assert not r.verdict
    assert sorted(round(x, 9) for x in r.real_parts) == [-3.0, -2.0, -1.0]
