"""Exact lattice polytopes, Ehrhart theory and toric diagrams."""

from .cacti import (RootedCactus, canonical_code, count_cacti, enumerate_cacti,
                    extract_cactus, realize)
from .constructions import (BottMatrix, Prequantization, bott_diagram, bott_moment_polytope,
                            cross_polytope, cube, family_Dk, family_Pk, family_Pk_half,
                            family_Tk, is_monotone_bott, prequantize, pseudo_bipyramid,
                            pyramid, simplex, small_cross_polytope)
from .ehrhart import (BettiSequence, EhrhartPolynomial, HStarVector, betti_from_quotient,
                      contact_betti, count_boundary, count_interior, count_points,
                      gorenstein_palindromic, hibi_palindromic, hstar, lattice_points,
                      root_real_parts, series_product_check)
from .equivalence import (EquivalenceWitness, FamilyIdentification, canonical_form,
                          ehrhart_equivalent, identify_Dk, is_small_cross,
                          unimodular_equivalent)
from .errors import ToricError
from .linalg import AffineUnimodularMap, determinant, hermite_completion, primitive, solve_affine_frame
from .polytope import HalfspaceSystem, LatticePolytope, Polytope, hull


__version__ = "0.1.0"
