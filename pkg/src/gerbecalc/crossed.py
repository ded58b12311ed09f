"""Crossed modules of matrix groups and the normalization of crossed-module valued forms.

A crossed module is realized as a normal subgroup G1 of G0 with the
inclusion as boundary map and conjugation as action.  Form data of degree n
is a tuple (g, phi_0, ..., phi_{n-1}) with g a G0-valued function on the
n-simplex whose restriction to the i-th degenerate face is the image of
phi_i (condition A_i), the phi's agreeing on double degeneracies
(condition B_ij).  ``normalize`` peels the phi's off one at a time and
returns (g', chi) with delta(chi) g' = g and g' trivial on every degenerate
face.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraContext, codegeneracy_map, face_map
from .groups import GroupElement, GroupFlavor, Matrix
from .report import compare, truth

SUITE = "cm"


@dataclass(frozen=True)
class CrossedModule:
    """G1 -> G0: ``kernel`` is "center" (I + t E_{1k}) or "full" (G1 = G0)."""
    flavor: GroupFlavor
    kernel: str = "center"

    def __post_init__(self):
        if self.kernel not in ("center", "full"):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.kernel == "center" and self.flavor.kind != "unitriangular":
            raise ValueError("the center kernel is defined for unitriangular flavors")

    def in_G1(self, f: GroupElement) -> bool:
        if self.kernel == "full":
            return True
        k = self.flavor.size
        m = f.matrix
        return all((m[r, c].is_one if r == c else m[r, c].is_zero) for r in range(k) for c in range(k)
                   if (r, c) != (0, k - 1))

    def boundary(self, f: GroupElement) -> GroupElement:
        return f

    def act(self, g: GroupElement, f: GroupElement) -> GroupElement:
        return g * f * g.inverse()

    def check_axioms(self, ctx: AlgebraContext) -> list:
        """Equivariance and the Peiffer identity on elementary generators."""
        k = self.flavor.size
        gens0 = [GroupElement(Matrix.elementary(ctx, k, i, j, ctx.x(1) + ctx.one), self.flavor)
                 for i, j in _strict_upper(k, self.flavor)]
        gens1 = [f for f in gens0 if self.in_G1(f)]
        if self.kernel == "center":
            gens1.append(GroupElement(Matrix.elementary(ctx, k, 0, k - 1, ctx.x(1) + 2), self.flavor))
        out = []
        for g in gens0:
            for f in gens1:
                out.append(compare(SUITE, "equivariance", (), self.boundary(self.act(g, f)),
                                   g * self.boundary(f) * g.inverse()))
                out.append(truth(SUITE, "normal", (), self.in_G1(self.act(g, f))))
        for f in gens1:
            for f2 in gens1:
                out.append(compare(SUITE, "peiffer", (), self.act(self.boundary(f), f2), f * f2 * f.inverse()))
        return out


def _strict_upper(k, flavor):
    if flavor.kind == "unitriangular":
        return [(i, j) for i in range(k) for j in range(i + 1, k)]
    return [(i, j) for i in range(k) for j in range(k) if i != j]


@dataclass
class CMFormData:
    cm: CrossedModule
    n: int
    g: GroupElement
    phi: list

    @property
    def ctx(self):
        return self.g.ctx


def _identity(dat: CMFormData) -> GroupElement:
    return GroupElement.identity(dat.ctx, dat.cm.flavor)


def _codeg(x: GroupElement, n: int, i: int) -> GroupElement:
    """x(x_0, .., x_i, x_i, .., x_{n-1}) for x a function on the n-simplex."""
    return x.substitute(codegeneracy_map(n, i))


def ab_records(n: int, g: GroupElement, phi: list, cm: CrossedModule, stage: str = "") -> list:
    """Records for A_i (0 <= i <= n-1), B_ij (i <= j <= n-2) and G1-membership."""
    out = []
    for i in range(n):
        out.append(compare(SUITE, f"A{stage}", (i,), _codeg(g, n, i), cm.boundary(phi[i])))
        out.append(truth(SUITE, f"G1{stage}", (i,), cm.in_G1(phi[i])))
    for i in range(n - 1):
        for j in range(i, n - 1):
            out.append(compare(SUITE, f"B{stage}", (i, j), _codeg(phi[i], n - 1, j), _codeg(phi[j + 1], n - 1, i)))
    return out


def check_AB(dat: CMFormData) -> list:
    if len(dat.phi) != dat.n:
        raise ValueError("need exactly n phi's")
    if dat.g.matrix.max_slot() > dat.n or any(f.matrix.max_slot() > dat.n - 1 for f in dat.phi):
        raise ValueError("shape mismatch between g, phi and the degree")
    return ab_records(dat.n, dat.g, dat.phi, dat.cm)


def normalize(dat: CMFormData, debug: bool = False):
    """Return (g', chi, stage_records).

    Stage k replaces g by delta(phi_k(.., x_{k+1} omitted, ..))^-1 g and updates the
    phi's so that phi_i = 1 for i <= k.  With psi_k the factor removed at stage k,
    g = psi_0 psi_1 ... psi_{n-1} g', so chi = psi_0 ... psi_{n-1}.
    With ``debug`` the conditions A, B and C are recorded after every stage.
    """
    n = dat.n
    one = _identity(dat)
    gk = dat.g
    phis = list(dat.phi)
    psis = []
    stages = []
    for k in range(n):
        psi = phis[k].substitute(face_map(n, k + 1))
        psis.append(psi)
        g_next = dat.cm.boundary(psi).inverse() * gk
        new = []
        for i in range(n):
            if i < k + 1:
                new.append(one)
            elif i == k + 1:
                new.append(phis[k].inverse() * phis[k + 1])
            else:
                verts = list(range(k + 1)) + list(range(k + 2, i + 1)) + [i] + list(range(i + 1, n))
                new.append(phis[k].substitute(verts).inverse() * phis[i])
        gk, phis = g_next, new
        if debug:
            tag = f"^{k + 1}"
            stages += ab_records(n, gk, phis, dat.cm, stage=tag)
            for i in range(k + 1):
                stages.append(truth(SUITE, f"C{tag}", (i,), phis[i].is_identity()))
                stages.append(truth(SUITE, f"deg{tag}", (i,), _codeg(gk, n, i).is_identity()))
    chi = one
    for psi in psis:
        chi = chi * psi
    return gk, chi, stages


def verify_normalization(dat: CMFormData, g_prime: GroupElement, chi: GroupElement) -> list:
    n = dat.n
    out = [compare(SUITE, "lemdeg", (), dat.cm.boundary(chi) * g_prime, dat.g),
           truth(SUITE, "chi-in-G1", (), dat.cm.in_G1(chi))]
    for i in range(n):
        out.append(truth(SUITE, "normalized", (i,), _codeg(g_prime, n, i).is_identity()))
    # every degeneracy x_i = x_j, not only adjacent ones
    for j in range(1, n + 1):
        for i in range(j):
            out.append(truth(SUITE, "degenerate-vanishing", (i, j), g_prime.degenerate(i, j).is_identity()))
    return out


def cm_tasks(dat: CMFormData) -> list:
    def run():
        g2, chi, stages = normalize(dat, debug=True)
        return stages + verify_normalization(dat, g2, chi)
    return [lambda: dat.cm.check_axioms(dat.ctx), lambda: check_AB(dat), run]


def make_oracle_data(cm: CrossedModule, n: int, seed: int, ctx: AlgebraContext | None = None,
                     base_dim: int = 2, trunc: int = 2, chi0=None, g0=None) -> CMFormData:
    """g = delta(chi0) g0 with g0 trivial on degenerate faces; phi_i = chi0 restricted to the i-th one."""
    from .sampling import random_group_form, random_simplex_function, rng_for
    if not 1 <= n <= 3:
        raise ValueError("oracle data supports 1 <= n <= 3")
    ctx = ctx or AlgebraContext(base_dim, n, trunc)
    rng = rng_for(seed, 0xC4, n)
    k = cm.flavor.size
    if chi0 is None:
        if cm.kernel == "center":
            m = Matrix.elementary(ctx, k, 0, k - 1, random_simplex_function(rng, ctx, n))
        else:
            rows = [[ctx.one if r == c else ctx.zero for c in range(k)] for r in range(k)]
            for r in range(k):
                for c in range(r + 1, k):
                    rows[r][c] = random_simplex_function(rng, ctx, n)
            m = Matrix(ctx, rows)
        chi0 = GroupElement(m, cm.flavor)
    if g0 is None:
        g0 = random_group_form(rng, ctx, cm.flavor, n).value
    g = cm.boundary(chi0) * g0
    phi = [_codeg(chi0, n, i) for i in range(n)]
    return CMFormData(cm, n, g, phi)
