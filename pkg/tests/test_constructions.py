from math import comb, gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toricdiag import constructions as cons
from toricdiag import ehrhart as eh
from toricdiag import linalg as la
from toricdiag.equivalence import unimodular_equivalent
from toricdiag.errors import (NotGorensteinError, ParameterError, PreconditionError,
                              ValidityError)
from toricdiag.polytope import Polytope


@pytest.mark.parametrize("n", range(1, 6))
def test_basic_shapes(n):
    assert len(cons.cube(n).vertices) == 2 ** n
    assert len(cons.cross_polytope(n).vertices) == 2 * n
    S = cons.small_cross_polytope(n)
    assert len(S.vertices) == 2 * n
    assert S.is_toric_diagram()
    assert len(cons.simplex(n).vertices) == n + 1


def test_parameter_errors():
    with pytest.raises(ParameterError):
        cons.cube(0)
    with pytest.raises(ParameterError):
        cons.cube(2, 1, 1)
    with pytest.raises(ParameterError):
        cons.family_Tk(3, 3)
    with pytest.raises(ParameterError):
        cons.family_Dk(3, 0)
    with pytest.raises(ParameterError):
        cons.family_Pk_half(4, 1)
    with pytest.raises(ParameterError):
        cons.family_Tk(1, 0)


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("lo,hi", [(-1, 1), (0, 1), (0, 2), (-2, 1)])
def test_prequantization_lifts_every_facet_to_height_one(n, lo, hi):
    C = cons.cube(n, lo, hi)
    if hi - lo == 3:
        # side 3 needs c = (.., 2/3): no integral lift
        with pytest.raises(NotGorensteinError):
            cons.prequantize(C)
        return
    pre = cons.prequantize(C)
    T = pre.transform.linear
    assert T[-1] == pre.c
    assert abs(la.determinant(T)) == 1
    for h in C.facets():
        assert la.matvec(T, tuple(h.normal) + (h.offset,))[-1] == 1
    D = pre.diagram
    assert D.is_toric_diagram()
    assert len(D.vertices) == 2 * n
    assert pre.index == (2 if hi - lo == 1 else 1)


def test_prequantization_rejections():
    rect = [((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 2)]
    with pytest.raises(NotGorensteinError):
        cons.prequantize(rect)
    with pytest.raises(PreconditionError):
        cons.prequantize(cons.cross_polytope(3))
    with pytest.raises(PreconditionError):
        cons.prequantize([((2, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1)])


@pytest.mark.parametrize("n", range(1, 6))
def test_prequantized_simplex_is_the_simplex_diagram(n):
    pre = cons.prequantize(cons.simplex(n))
    assert pre.index == n + 1
    assert unimodular_equivalent(pre.diagram, cons.simplex(n)).equivalent


@pytest.mark.parametrize("n", range(2, 6))
def test_family_shapes(n):
    for k in range(n):
        P = cons.family_Pk(n, k)
        assert len(P.vertices) == 2 * n
        assert len(P.facets()) == n + 2
        assert P.is_delzant()
        T = cons.family_Tk(n, k)
        assert len(T.vertices) == n + 2
        assert T.is_toric_diagram() and T.is_reflexive()
    for k in range(n % 2, n, 2):
        H = cons.family_Pk_half(n, k)
        assert H.is_delzant() and H.is_integral()
        D = cons.family_Dk(n, k)
        assert len(D.vertices) == n + 2
        assert D.is_toric_diagram()
        assert D.gorenstein_index() == 2


def test_pyramid_and_bipyramids():
    P = cons.cross_polytope(2)
    Y = cons.pyramid(P)
    assert len(Y.vertices) == 5 and Y.dim == 3
    B = cons.bipyramid(P)
    assert B == cons.cross_polytope(3)
    Q = cons.pseudo_bipyramid(P, (1, 0), (-1, 0), strict=True)
    assert len(Q.vertices) == 6 and Q.is_toric_diagram()
    with pytest.raises(ValidityError):
        cons.pseudo_bipyramid(cons.cube(2), (1, 1), (1, 0), strict=True)
    with pytest.raises(PreconditionError):
        cons.pseudo_bipyramid(P, (2, 0), (0, 0))
    with pytest.raises(PreconditionError):
        cons.pseudo_bipyramid(P, (0, 0, 0), (0, 0))


@given(st.integers(2, 3).flatmap(
    lambda n: st.tuples(st.just(n),
                        st.sampled_from(eh.lattice_points(cons.cross_polytope(n), 1)),
                        st.sampled_from(eh.lattice_points(cons.cross_polytope(n), 1)))))
def test_pseudo_bipyramid_volume(arg):
    # the two apices are at height +-1 over a base of normalized volume 2^n
    n, s1, s2 = arg
    P = cons.cross_polytope(n)
    B = cons.pseudo_bipyramid(P, s1, s2)
    assert eh.hstar(B).total() == 2 * eh.hstar(P).total()


def test_bott_matrices():
    for L in cons.BOTT_EXAMPLES_3:
        assert cons.is_monotone_bott(L)
        M = cons.bott_moment_polytope(L)
        assert M.is_delzant() and M.is_reflexive()
        D = cons.bott_diagram(L)
        assert tuple(eh.hstar(D)) == (1, 3, 3, 1)
    L = cons.BottMatrix.from_lower(2, {(2, 1): 1})
    assert L.a(2, 1) == 1 and L.entries == ((-1, 0), (1, -1))
    bad = cons.BottMatrix.from_lower(2, {(2, 1): 3})
    assert not cons.is_monotone_bott(bad)
    with pytest.raises(ValidityError):
        cons.bott_diagram(bad)
    with pytest.raises(ParameterError):
        cons.BottMatrix(((1, 0), (0, -1)))
    with pytest.raises(ParameterError):
        cons.BottMatrix(((-1, 1), (0, -1)))
    with pytest.raises(ParameterError):
        cons.BottMatrix.from_lower(2, {(1, 2): 1})


def test_bott_n1_is_the_segment():
    L = cons.BottMatrix(((-1,),))
    assert cons.bott_diagram(L) == cons.cross_polytope(1)


def test_plane_examples_not_equivalent():
    for p in range(1, 4):
        Dp = Polytope([(0, 0), (1, 0), (0, 1), (p + 1, p + 1)])
        assert Dp.is_toric_diagram()
        for q in range(1, p + 1):
            if gcd(q, p + 1) != 1:
                continue
            Dpq = Polytope([(0, 0), (1, 0), (p + 1, q), (p + 1, q + 1)])
            assert not unimodular_equivalent(Dp, Dpq).equivalent


@pytest.mark.parametrize("n", range(1, 5))
def test_cross_and_small_cross_rows(n):
    assert tuple(eh.hstar(cons.cross_polytope(n))) == tuple(comb(n, k) for k in range(n + 1))
    assert tuple(eh.hstar(cons.small_cross_polytope(n))) == tuple(comb(n - 1, k) for k in range(n)) + (0,)
