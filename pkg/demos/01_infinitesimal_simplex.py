"""
Arithmetic on an infinitesimal simplex
======================================

Functions on n+1 mutually first-order-close points are polynomials in the
base coordinates x<a> and displacements d<i>_<a> (point i minus point 0,
axis a), where products of displacements obey a quadratic rule.
"""
from gerbecalc.algebra import AlgebraContext, degeneracy_subst, displacement_dimension, format_poly, parse_poly, substitute

# two base coordinates, a 2-simplex, base polynomials kept to degree 2
ctx = AlgebraContext(2, 2, 2)
P = lambda s: parse_poly(s, ctx)  # noqa: E731

# a displacement squared vanishes, and the two slots anticommute in their axes
print("d1_1 * d1_2      =", format_poly(P("d1_1") * P("d1_2")))
print("d1_2 * d2_1      =", format_poly(P("d1_2") * P("d2_1")))
print("d1_1 * d2_2      =", format_poly(P("d1_1") * P("d2_2")))

# moving the base point is an exact, finite Taylor shift
print("x1^2 at point 1  =", format_poly(substitute(P("x1*x1"), (1,))))

# the edge (1, 2) seen from vertex 1: d1 -> d2 - d1
print("d1_1 on edge 12  =", format_poly(substitute(P("d1_1"), (1, 2))))

# collapsing vertex 2 onto vertex 1 kills anything antisymmetric in them
print("degenerate       =", format_poly(degeneracy_subst(P("d1_1*d2_2"), 1, 2)))

# the displacement part has sum_k C(n,k) C(d,k) basis monomials
for n in range(1, 5):
    print(f"n={n}: {displacement_dimension(n, 2)} displacement monomials over d=2")
