import pytest
from hypothesis import given, settings, strategies as st

from gerbecalc.algebra import AlgebraContext, face_map, format_poly, parse_poly
from gerbecalc.crossed import (CMFormData, CrossedModule, check_AB, make_oracle_data, normalize,
                               verify_normalization)
from gerbecalc.groups import GroupElement, GroupFlavor, Matrix
from gerbecalc.sampling import random_group_element, rng_for

U3 = GroupFlavor.named("u3")
CENTER, FULL = CrossedModule(U3, "center"), CrossedModule(U3, "full")


def literal(g):
    return [[format_poly(e) for e in row] for row in g.matrix.rows]


def failing(records):
    return sorted((r.tag, r.simplex) for r in records if not r.passed)


def test_axioms_hold():
    ctx = AlgebraContext(2, 2, 2)
    assert not failing(CENTER.check_axioms(ctx))
    assert not failing(FULL.check_axioms(ctx))


def test_center_kernel_needs_unitriangular():
    with pytest.raises(ValueError):
        CrossedModule(GroupFlavor.named("gl3"), "center")


def test_one_step_by_hand():
    # g = I + (1 + x1 + d1_1) E13, phi_0 = g at x_1 = x_0 = I + (1 + x1) E13
    ctx = AlgebraContext(2, 1, 2)
    g = GroupElement(Matrix.elementary(ctx, 3, 0, 2, parse_poly("1 + x1 + d1_1", ctx)), U3)
    phi0 = GroupElement(Matrix.elementary(ctx, 3, 0, 2, parse_poly("1 + x1", ctx)), U3)
    dat = CMFormData(CENTER, 1, g, [phi0])
    assert not failing(check_AB(dat))
    g1, chi, _ = normalize(dat)
    assert literal(g1) == [["1", "0", "d1_1"], ["0", "1", "0"], ["0", "0", "1"]]
    assert chi == phi0
    assert not failing(verify_normalization(dat, g1, chi))


def test_trivial_phis_leave_g_alone():
    ctx = AlgebraContext(2, 2, 2)
    dat0 = make_oracle_data(FULL, 2, 3, ctx=ctx)
    g2, _, _ = normalize(dat0)          # a degenerate-vanishing element
    one = GroupElement.identity(ctx, U3)
    dat = CMFormData(FULL, 2, g2, [one, one])
    g3, chi, _ = normalize(dat)
    assert chi.is_identity() and g3 == g2


def test_identity_chi_gives_identity_phis():
    dat = make_oracle_data(FULL, 2, 4, chi0=GroupElement.identity(AlgebraContext(2, 2, 2), U3))
    assert all(f.is_identity() for f in dat.phi)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("cm", [CENTER, FULL], ids=["center", "full"])
def test_stage_invariants(cm, n):
    for seed in range(4):
        dat = make_oracle_data(cm, n, seed)
        g2, chi, stages = normalize(dat, debug=True)
        assert not failing(stages)
        assert not failing(verify_normalization(dat, g2, chi))


def test_corrupted_phi_fails_locally():
    dat = make_oracle_data(CENTER, 3, 5)
    bad = list(dat.phi)
    bad[1] = bad[1] * GroupElement(Matrix.elementary(dat.ctx, 3, 0, 2, parse_poly("x1", dat.ctx)), U3)
    fails = failing(check_AB(CMFormData(CENTER, 3, dat.g, bad)))
    assert ("A", (1,)) in fails
    # phi_1 enters A_1, B_00 (against phi_1) and B_11 (phi_1 degenerated)
    assert set(fails) <= {("A", (1,)), ("B", (0, 0)), ("B", (1, 1))}


def test_product_order_matters():
    # chi must be psi_0 psi_1 ... psi_{n-1}; the reversed product fails for a non-abelian kernel
    broken = 0
    for seed in range(6):
        dat = make_oracle_data(FULL, 3, seed)
        g2, chi, _ = normalize(dat)
        n = dat.n
        # recover the factors psi_k and rebuild chi in the opposite order
        psis, gk, phis = [], dat.g, list(dat.phi)
        for k in range(n):
            psis.append(phis[k].substitute(face_map(n, k + 1)))
            gk = psis[-1].inverse() * gk
            nxt = []
            for i in range(n):
                if i < k + 1:
                    nxt.append(GroupElement.identity(dat.ctx, U3))
                elif i == k + 1:
                    nxt.append(phis[k].inverse() * phis[k + 1])
                else:
                    verts = list(range(k + 1)) + list(range(k + 2, i + 1)) + [i] + list(range(i + 1, n))
                    nxt.append(phis[k].substitute(verts).inverse() * phis[i])
            phis = nxt
        reversed_chi = GroupElement.identity(dat.ctx, U3)
        for p in reversed(psis):
            reversed_chi = reversed_chi * p
        broken += not (reversed_chi * g2 == dat.g)
    assert broken > 0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2, 3]))
def test_normalize_recovers_factorization(seed, n):
    dat = make_oracle_data(FULL, n, seed)
    g2, chi, _ = normalize(dat)
    assert chi * g2 == dat.g
    assert not failing(verify_normalization(dat, g2, chi))


def test_shape_mismatch_rejected():
    dat = make_oracle_data(CENTER, 2, 0)
    with pytest.raises(ValueError):
        check_AB(CMFormData(CENTER, 2, dat.g, dat.phi[:1]))


def test_oracle_degree_bound():
    with pytest.raises(ValueError):
        make_oracle_data(CENTER, 4, 0)
    assert random_group_element(rng_for(0, 1), AlgebraContext(2, 2, 2), U3) is not None
