import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gerbecalc.algebra import (AlgebraContext, codegeneracy_map, degeneracy_subst, displacement_dimension, face_map,
                               format_poly, parse_poly, pullback, substitute)
from gerbecalc.sampling import random_base_poly, random_form_entry, rng_for

from oracles import element_to_poly, in_ideal, poly_product, quotient_dimension

CTX = AlgebraContext(2, 3, 2)
P = lambda s, ctx=CTX: parse_poly(s, ctx)  # noqa: E731


def random_element(seed, ctx=CTX):
    rng = rng_for(seed, 11)
    out = random_base_poly(rng, ctx, 2)
    for k in range(1, ctx.simplex_order + 1):
        out = out + random_form_entry(rng, ctx, min(k, ctx.base_dim))
    return out


seeds = st.integers(0, 10 ** 6)


# -- hand-expanded values -------------------------------------------------------

def test_same_slot_products_vanish():
    assert (P("d1_1") * P("d1_2")).is_zero
    assert (P("d2_1") * P("d2_1")).is_zero


def test_cross_slot_antisymmetry():
    assert P("d1_1") * P("d2_2") == -(P("d1_2") * P("d2_1"))
    assert (P("d1_1") * P("d2_1")).is_zero


def test_hand_expanded_product():
    # (1 + x1 d1_1)(x2 + d1_2) = x2 + d1_2 + x1 x2 d1_1 + x1 d1_1 d1_2, and d1_1 d1_2 = 0
    assert P("1 + x1*d1_1") * P("x2 + d1_2") == P("x2 + d1_2 + x1*x2*d1_1")


def test_taylor_shift():
    # x -> x + d_1 on x1^2: x1^2 + 2 x1 d1_1 + d1_1^2, the square vanishing
    assert substitute(P("x1*x1"), (1,)) == P("x1*x1 + 2*x1*d1_1")


def test_vertex_map_on_displacements():
    # (0, 1) -> (2, 1): d1 -> d1 - d2 and x -> x + d2
    assert substitute(P("x1*d1_2"), (2, 1)) == P("x1*d1_2 - x1*d2_2 + d2_1*d1_2")


def test_weight_truncation():
    ctx = AlgebraContext(1, 1, 0)   # weight cap 1
    assert (parse_poly("x1", ctx) * parse_poly("x1", ctx)).is_zero
    assert not (parse_poly("x1", ctx) + parse_poly("d1_1", ctx)).is_zero


def test_dimension_formula_values():
    assert [displacement_dimension(n, 2) for n in range(1, 5)] == [3, 6, 10, 15]
    assert displacement_dimension(3, 3) == 20


@pytest.mark.parametrize("n,d", list(itertools.product(range(1, 4), range(1, 3))))
def test_dimension_matches_ideal_quotient(n, d):
    assert quotient_dimension(n, d) == displacement_dimension(n, d) == len(AlgebraContext(d, n, 0).displacement_basis())


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2)])
def test_product_rule_matches_ideal_quotient(n, d):
    ctx = AlgebraContext(d, n, 0)
    basis = [ctx.monomial(pairs=tuple(zip(S, A))) for S, A in ctx.displacement_basis()]
    for a, b in itertools.product(basis, repeat=2):
        diff = poly_product(element_to_poly(a, n, d), element_to_poly(b, n, d))
        for m, c in element_to_poly(a * b, n, d).items():
            diff[m] = diff.get(m, 0) - c
        k = next((sum(m) for m in diff), 0)
        assert in_ideal(diff, n, d, k)


def test_face_and_codegeneracy_maps():
    assert face_map(3, 1) == (0, 2, 3)
    assert codegeneracy_map(2, 0) == (0, 0, 1)
    assert codegeneracy_map(2, 1) == (0, 1, 1)


def test_degeneracy_substitution():
    f = P("x1 + d2_1 - d1_1")
    assert degeneracy_subst(f, 1, 2) == P("x1")


def test_pullback_rejects_non_injective():
    with pytest.raises(ValueError):
        pullback(P("d1_1"), (0, 0))


# -- grammar ----------------------------------------------------------------------

@pytest.mark.parametrize("bad", ["", "x", "x9", "d1", "d9_1", "1/0", "2 x1", "x1 ++ x2", "y1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_poly(bad, CTX)


def test_parse_example():
    a = P("1 - 1/3*x2*d1_1 + d1_1*d2_2")
    assert a.constant_term() == 1
    assert format_poly(a) == "1 - 1/3*x2*d1_1 + d1_1*d2_2"


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_format_parse_roundtrip(seed):
    a = random_element(seed)
    assert P(format_poly(a)) == a


# -- ring axioms ---------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(seeds, seeds, seeds)
def test_ring_axioms(s1, s2, s3):
    x, y, z = random_element(s1), random_element(s2), random_element(s3)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == CTX.zero
    assert x * CTX.one == x


@settings(max_examples=30, deadline=None)
@given(seeds, st.permutations([0, 1, 2, 3]))
def test_pullback_functorial(seed, perm):
    u = random_element(seed).only_slots((1, 2))
    f = (2, 0, 3)                     # Delta^2 -> Delta^3
    g = tuple(perm)                   # Delta^3 -> Delta^3
    assert pullback(pullback(u, f), g) == pullback(u, tuple(g[v] for v in f))


@settings(max_examples=30, deadline=None)
@given(seeds, seeds)
def test_pullback_is_ring_map(s1, s2):
    u, v = random_element(s1).only_slots((1,)), random_element(s2).only_slots((1,))
    assert substitute(u * v, (3, 1)) == substitute(u, (3, 1)) * substitute(v, (3, 1))
    assert substitute(u + v, (3, 1)) == substitute(u, (3, 1)) + substitute(v, (3, 1))
