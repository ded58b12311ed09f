"""Seeded random elements, forms and connections.

Everything is driven by a numpy Generator so that a (seed, context) pair
always produces the same data.  Values are kept sparse: a few monomials per
matrix entry with small integer coefficients.
"""
from __future__ import annotations

import itertools

import numpy as np

from .algebra import AlgebraContext, AlgebraElement, asum
from .forms import AmbientForm, GroupForm
from .groups import AmbientAutomorphism, GroupConnection, GroupElement, GroupFlavor, Matrix


def rng_for(seed: int, *salt: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), *[int(s) for s in salt]])


def _coeff(rng: np.random.Generator) -> int:
    c = int(rng.integers(1, 4))
    return c if rng.random() < 0.5 else -c


def random_base_poly(rng, ctx: AlgebraContext, max_degree: int, terms: int = 2, constant: bool = True) -> AlgebraElement:
    """Sparse polynomial in the base coordinates of degree <= max_degree."""
    parts = []
    lo = 0 if constant else 1
    if max_degree < lo:
        return ctx.zero
    for _ in range(terms):
        deg = int(rng.integers(lo, max_degree + 1))
        exps = [0] * ctx.base_dim
        for _ in range(deg):
            exps[int(rng.integers(ctx.base_dim))] += 1
        parts.append(ctx.monomial(exps).scale(_coeff(rng)))
    return asum(parts, ctx)


def random_form_entry(rng, ctx: AlgebraContext, degree: int, terms: int = 2) -> AlgebraElement:
    """Sparse element supported on the full slot set {1..degree} (0 on every degeneracy)."""
    if degree == 0:
        return random_base_poly(rng, ctx, ctx.weight_cap, terms)
    if degree > ctx.base_dim:
        return ctx.zero
    axes_sets = list(itertools.combinations(range(1, ctx.base_dim + 1), degree))
    parts = []
    for _ in range(terms):
        axes = axes_sets[int(rng.integers(len(axes_sets)))]
        base = random_base_poly(rng, ctx, ctx.weight_cap - degree, 1)
        disp = ctx.monomial(None, list(zip(range(1, degree + 1), axes)))
        parts.append(base * disp)
    return asum(parts, ctx)


def _entries(flavor: GroupFlavor, diagonal: bool):
    k = flavor.size
    if flavor.kind == "unitriangular":
        return [(i, j) for i in range(k) for j in range(i if diagonal else i + 1, k)]
    return [(i, j) for i in range(k) for j in range(k)]


def _fill(rng, ctx, flavor, entries, make, density: float) -> Matrix:
    k = flavor.size
    rows = [[ctx.one if i == j else ctx.zero for j in range(k)] for i in range(k)]
    for i, j in entries:
        if rng.random() < density:
            rows[i][j] = rows[i][j] + make()
    return Matrix(ctx, rows)


def _unimodular_constant(rng, k: int):
    """Integer matrix with determinant 1 (lower times upper unitriangular)."""
    lower = np.eye(k, dtype=np.int64)
    upper = np.eye(k, dtype=np.int64)
    for i in range(k):
        for j in range(k):
            if i > j:
                lower[i, j] = int(rng.integers(-1, 2))
            elif i < j:
                upper[i, j] = int(rng.integers(-1, 2))
    return (lower @ upper).tolist()


def random_group_element(rng, ctx: AlgebraContext, flavor: GroupFlavor, terms: int = 2, density: float = 0.8) -> GroupElement:
    """0-form: a section of G depending on the base only."""
    if flavor.kind == "unitriangular":
        m = _fill(rng, ctx, flavor, _entries(flavor, False),
                  lambda: random_base_poly(rng, ctx, ctx.weight_cap, terms), density)
        return GroupElement(m, flavor, check=False)
    c = Matrix.constant(ctx, _unimodular_constant(rng, flavor.size))
    m = _fill(rng, ctx, flavor, _entries(flavor, False),
              lambda: random_base_poly(rng, ctx, ctx.weight_cap, terms, constant=False), density)
    return GroupElement(c @ m, flavor)


def random_group_form(rng, ctx: AlgebraContext, flavor: GroupFlavor, degree: int, terms: int = 2, density: float = 0.8) -> GroupForm:
    if degree == 0:
        return GroupForm(0, random_group_element(rng, ctx, flavor, terms, density))
    m = _fill(rng, ctx, flavor, _entries(flavor, False),
              lambda: random_form_entry(rng, ctx, degree, terms), density)
    return GroupForm(degree, GroupElement(m, flavor, check=False))


def central_form(rng, ctx: AlgebraContext, flavor: GroupFlavor, degree: int, terms: int = 2) -> GroupForm:
    """Form with values in the centre I + t E_{1k} of a unitriangular group."""
    k = flavor.size
    m = Matrix.elementary(ctx, k, 0, k - 1, random_form_entry(rng, ctx, degree, terms))
    return GroupForm(degree, GroupElement(m, flavor, check=False))


def random_ambient(rng, ctx: AlgebraContext, flavor: GroupFlavor, terms: int = 2, density: float = 0.7,
                   scalings: bool = True) -> AmbientAutomorphism:
    """Automorphism depending on the base only: a Borel (upper triangular) matrix for
    unitriangular targets, an invertible matrix otherwise."""
    k = flavor.size
    if flavor.kind == "unitriangular":
        diag = [1] * k
        if scalings:
            diag = [int(rng.choice([1, -1, 1, 2])) for _ in range(k)]
        c = Matrix.constant(ctx, [[diag[i] if i == j else 0 for j in range(k)] for i in range(k)])
        m = _fill(rng, ctx, flavor, _entries(flavor, False),
                  lambda: random_base_poly(rng, ctx, ctx.weight_cap, terms), density)
        return AmbientAutomorphism(c @ m, flavor, check=False)
    c = Matrix.constant(ctx, _unimodular_constant(rng, k))
    m = _fill(rng, ctx, flavor, _entries(flavor, False),
              lambda: random_base_poly(rng, ctx, ctx.weight_cap, terms, constant=False), density)
    return AmbientAutomorphism(c @ m, flavor, check=False)


def random_ambient_form(rng, ctx: AlgebraContext, flavor: GroupFlavor, degree: int, terms: int = 2,
                        density: float = 0.6) -> AmbientForm:
    """Aut(G)-valued form I + (full-slot terms), diagonal entries allowed."""
    if degree == 0:
        return AmbientForm(0, random_ambient(rng, ctx, flavor, terms))
    m = _fill(rng, ctx, flavor, _entries(flavor, True),
              lambda: random_form_entry(rng, ctx, degree, terms), density)
    return AmbientForm(degree, AmbientAutomorphism(m, flavor, check=False))


def random_connection(rng, ctx: AlgebraContext, flavor: GroupFlavor, terms: int = 2, density: float = 0.6,
                      diagonal=None) -> GroupConnection:
    """Connection I + sum_a N_a(x) d_1^a acting by conjugation.

    ``diagonal`` optionally fixes the diagonal part (a list of elements) so
    that several connections share it.
    """
    u = random_ambient_form(rng, ctx, flavor, 1, terms, density)
    if diagonal is not None:
        rows = [list(r) for r in u.value.matrix.rows]
        for i in range(flavor.size):
            rows[i][i] = ctx.one + diagonal[i]
        u = AmbientForm(1, AmbientAutomorphism(Matrix(ctx, rows), flavor, check=False))
    return GroupConnection(u.value, check=False)


def random_diagonal_1form(rng, ctx: AlgebraContext, flavor: GroupFlavor, terms: int = 2):
    """Diagonal first-order parts shared by connections (for gluing constructions)."""
    return [random_form_entry(rng, ctx, 1, terms) if rng.random() < 0.6 else ctx.zero for _ in range(flavor.size)]


def random_simplex_function(rng, ctx: AlgebraContext, n: int, terms: int = 3) -> AlgebraElement:
    """Arbitrary function on the n-simplex: base polynomials times displacement monomials
    with any slot set (no vanishing condition on degeneracies)."""
    parts = [random_base_poly(rng, ctx, ctx.weight_cap, 1)]
    kmax = min(n, ctx.base_dim)
    for _ in range(terms):
        k = int(rng.integers(1, kmax + 1)) if kmax else 0
        if k == 0:
            continue
        slots = sorted(rng.choice(np.arange(1, n + 1), size=k, replace=False).tolist())
        axes = sorted(rng.choice(np.arange(1, ctx.base_dim + 1), size=k, replace=False).tolist())
        base = random_base_poly(rng, ctx, ctx.weight_cap - k, 1)
        parts.append(base * ctx.monomial(None, list(zip(slots, axes))))
    return asum(parts, ctx)
