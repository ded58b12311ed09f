"""Deterministic generators of valid data.

Everything is built through constructions that satisfy the equations
identically, never by rejection sampling:

* torsor: coboundary cocycle g_ij = h_i^-1 h_j with glued connection forms
  omega_i = omega^{* h_i};
* gerbe band: ambient paths Phi_ij (diagonal constants times G-valued
  sections), lambda_ij = conjugation by Phi_ij, g_ijk = Phi_ij Phi_jk Phi_ik^-1;
* gerbe connection: connections M_i = I + N_i d_1 whose diagonal parts agree
  for all i, gamma_ij = M_i Phi_ij(y) M_j^-1 Phi_ij(x)^-1 (a G-valued 1-form);
* triples: pi_i = M^_i M_i^-1 and eta_ij = gamma^_ij gamma_ij^-1 for two further
  connection families, arbitrary E_i and alpha_i;
* equivalences: arrows chi_i and defects delta_ij define the second band
  through Phi'_ij = delta_ij chi_i Phi_ij chi_j^-1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraContext
from .crossed import CMFormData, CrossedModule, make_oracle_data
from .forms import AmbientForm, GroupForm, delta_mu
from .gerbe import (EquivalenceData, GerbeCocycle, TransformationTriple, TripleEquivalence, apply_triple,
                    derive)
from .groups import AmbientAutomorphism, GroupConnection, GroupElement, GroupFlavor, Matrix
from .nerve import CoverNerve
from .sampling import (random_ambient, random_connection, random_diagonal_1form, random_group_element,
                       random_group_form, rng_for)
from .torsor import TorsorData

MODES = ("trivial", "coboundary", "abelian", "torsor", "cm")
GERBE_ORDER = 4  # relnufi needs delta^3, i.e. the 4-simplex


@dataclass
class Bundle:
    """Everything a dataset file can hold (see ``dataset``)."""
    context: dict
    nerve: CoverNerve
    torsor: TorsorData | None = None
    gerbe: GerbeCocycle | None = None
    triple_source: GerbeCocycle | None = None
    triple: TransformationTriple | None = None
    rho: TripleEquivalence | None = None
    equivalence: dict | None = None
    cm: CMFormData | None = None
    cm_normal: tuple | None = None  # (g', chi) once normalize has run


# -- building blocks --------------------------------------------------------

def _diag(ctx, values):
    k = len(values)
    return Matrix.constant(ctx, [[values[a] if a == b else 0 for b in range(k)] for a in range(k)])


def ambient_paths(rng, ctx: AlgebraContext, flavor: GroupFlavor, nerve: CoverNerve) -> dict:
    """Phi_ij per pair; Borel-valued for unitriangular flavors."""
    k = flavor.size
    if flavor.kind != "unitriangular":
        return {p: random_ambient(rng, ctx, flavor).matrix for p in nerve.pairs}
    T = {i: _diag(ctx, [int(rng.choice([1, -1, 2])) for _ in range(k)]) for i in nerve.indices}
    return {(i, j): T[i] @ random_group_element(rng, ctx, flavor).matrix @ T[j].inverse() for i, j in nerve.pairs}


def band_from_paths(nerve: CoverNerve, flavor: GroupFlavor, phi: dict):
    lam = {p: AmbientAutomorphism(phi[p], flavor, check=False) for p in nerve.pairs}
    g = {(i, j, k): GroupForm(0, GroupElement(phi[i, j] @ phi[j, k] @ phi[i, k].inverse(), flavor))
         for i, j, k in nerve.triples}
    return lam, g


def connection_family(rng, ctx, flavor, nerve, canonical: bool = False) -> dict:
    if canonical:
        return {i: GroupConnection.canonical(ctx, flavor) for i in nerve.indices}
    diag = random_diagonal_1form(rng, ctx, flavor) if flavor.kind == "unitriangular" else None
    return {i: random_connection(rng, ctx, flavor, diagonal=diag) for i in nerve.indices}


def gammas_for(m: dict, phi: dict, flavor) -> dict:
    """gamma_ij = M_i Phi_ij(y) M_j^-1 Phi_ij(x)^-1."""
    out = {}
    for (i, j), P in phi.items():
        val = m[i].aut.matrix @ P.substitute((1,)) @ m[j].aut.matrix_inverse() @ P.inverse()
        out[i, j] = GroupForm(1, GroupElement(val, flavor))
    return out


def random_triple(rng, ctx, flavor, nerve, phi: dict) -> TransformationTriple:
    if phi:
        fam1 = connection_family(rng, ctx, flavor, nerve)
        fam2 = connection_family(rng, ctx, flavor, nerve)
        g1, g2 = gammas_for(fam1, phi, flavor), gammas_for(fam2, phi, flavor)
        pi = {i: AmbientForm(1, fam2[i].aut * fam1[i].aut.inverse()) for i in nerve.indices}
        eta = {p: GroupForm(1, g2[p].value * g1[p].value.inverse()) for p in nerve.pairs}
    else:
        pi = {i: AmbientForm(1, random_connection(rng, ctx, flavor).aut) for i in nerve.indices}
        eta = {}
    E = {i: random_group_form(rng, ctx, flavor, 1) for i in nerve.indices}
    alpha = {i: random_group_form(rng, ctx, flavor, 2) for i in nerve.indices}
    return TransformationTriple(E=E, pi=pi, eta=eta, alpha=alpha)


def random_rho(rng, ctx, flavor, nerve) -> TripleEquivalence:
    return TripleEquivalence({i: random_group_form(rng, ctx, flavor, 1) for i in nerve.indices})


def equivalence_from_arrows(rng, c: GerbeCocycle, phi: dict):
    """Second band (lambda', g') plus a 1-arrow u, a 1-arrow v and a 2-arrow theta: u => v.

    Returns (target, u, v, paths of the target)."""
    ctx, fl, nerve = c.ctx, c.flavor, c.nerve
    chi = {i: random_ambient(rng, ctx, fl).matrix for i in nerve.indices}
    du = {p: random_group_element(rng, ctx, fl) for p in nerve.pairs}
    phi2 = {(i, j): du[i, j].matrix @ chi[i] @ phi[i, j] @ chi[j].inverse() for i, j in nerve.pairs}
    lam2, g2 = band_from_paths(nerve, fl, phi2)
    target = GerbeCocycle(nerve, fl, ctx, lam=lam2, g=g2)
    mu_ = {i: AmbientAutomorphism(chi[i], fl, check=False) for i in nerve.indices}
    u = EquivalenceData(mu_, {p: GroupForm(0, du[p]) for p in nerve.pairs})
    theta = {i: GroupForm(0, random_group_element(rng, ctx, fl)) for i in nerve.indices}
    mv = {i: AmbientAutomorphism.inner(theta[i].value) * mu_[i] for i in nerve.indices}
    dv = {(i, j): GroupForm(0, lam2[i, j](theta[j].value) * du[i, j] * theta[i].value.inverse())
          for i, j in nerve.pairs}
    u.theta = theta
    return target, u, EquivalenceData(mv, dv), phi2


# -- modes ------------------------------------------------------------------

def _context(base_dim, trunc, flavor, seed, mode, order):
    return {"base_dim": base_dim, "trunc_degree": trunc, "simplex_order": order,
            "matrix_size": flavor.size, "flavor": flavor.name, "seed": seed, "mode": mode}


def generate(mode: str, seed: int = 0, base_dim: int = 2, trunc: int = 2, flavor: str | None = None,
             n_open: int | None = None, cm_degree: int = 2, cm_kernel: str = "center") -> Bundle:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if base_dim < 1 or trunc < 0:
        raise ValueError("base_dim must be >= 1 and trunc >= 0")
    fname = flavor or ("u2" if mode == "abelian" else "u3")
    fl = GroupFlavor.named(fname)
    if mode == "abelian" and not fl.abelian:
        raise ValueError("abelian mode needs an abelian flavor (u2)")
    rng = rng_for(seed, MODES.index(mode))
    if mode == "cm":
        return _gen_cm(rng, seed, base_dim, trunc, fl, cm_degree, cm_kernel)
    ctx = AlgebraContext(base_dim, GERBE_ORDER, trunc)
    ctxd = _context(base_dim, trunc, fl, seed, mode, GERBE_ORDER)
    if mode == "torsor":
        return _gen_torsor(rng, ctx, ctxd, fl, n_open or 3)
    if mode == "trivial":
        return _gen_trivial(rng, ctx, ctxd, fl)
    if mode == "abelian":
        return _gen_abelian(rng, ctx, ctxd, fl, n_open or 4)
    return _gen_coboundary(rng, ctx, ctxd, fl, n_open or 4)


def _gen_torsor(rng, ctx, ctxd, fl, n_open):
    nerve = CoverNerve.complete(n_open)
    mu = random_connection(rng, ctx, fl)
    h = {i: random_group_form(rng, ctx, fl, 0) for i in nerve.indices}
    w = random_group_form(rng, ctx, fl, 1)
    g = {(i, j): GroupForm(0, h[i].value.inverse() * h[j].value) for i, j in nerve.pairs}
    from .forms import twisted_adjoint
    omega = {i: twisted_adjoint(w, h[i], mu) for i in nerve.indices}
    gauge = {i: random_group_form(rng, ctx, fl, 0) for i in nerve.indices}
    data = TorsorData(nerve, mu, g, omega, gauge)
    return Bundle(ctxd, nerve, torsor=data)


def _gen_trivial(rng, ctx, ctxd, fl):
    nerve = CoverNerve.complete(1)
    m = {0: random_connection(rng, ctx, fl)}
    B = {0: random_group_form(rng, ctx, fl, 2)}
    src = GerbeCocycle(nerve, fl, ctx, m=m, B=B)
    t = random_triple(rng, ctx, fl, nerve, {})
    c = apply_triple(src, t)
    rho = random_rho(rng, ctx, fl, nerve)
    return Bundle(ctxd, nerve, gerbe=c, triple_source=derive(src), triple=t, rho=rho)


def _gen_coboundary(rng, ctx, ctxd, fl, n_open):
    nerve = CoverNerve.complete(n_open)
    phi = ambient_paths(rng, ctx, fl, nerve)
    lam, g = band_from_paths(nerve, fl, phi)
    m = connection_family(rng, ctx, fl, nerve)
    gamma = gammas_for(m, phi, fl)
    B = {i: random_group_form(rng, ctx, fl, 2) for i in nerve.indices}
    src = derive(GerbeCocycle(nerve, fl, ctx, lam=lam, g=g, m=m, gamma=gamma, B=B))
    t = random_triple(rng, ctx, fl, nerve, phi)
    c = apply_triple(src, t)
    rho = random_rho(rng, ctx, fl, nerve)
    target, u, v, _ = equivalence_from_arrows(rng, c, phi)
    return Bundle(ctxd, nerve, gerbe=c, triple_source=src, triple=t, rho=rho,
                  equivalence={"target": target, "u": u, "v": v})


def _gen_abelian(rng, ctx, ctxd, fl, n_open):
    """lambda = 1, canonical m, g = Cech coboundary of h, gamma_ij = delta^0 h_ij - theta_i + theta_j,
    B_i = B - d theta_i (so delta_ij = 0 and omega_i = dB for all i)."""
    nerve = CoverNerve.complete(n_open)
    can = GroupConnection.canonical(ctx, fl)
    ident = AmbientAutomorphism.identity(ctx, fl)
    h = {p: random_group_form(rng, ctx, fl, 0) for p in nerve.pairs}
    theta = {i: random_group_form(rng, ctx, fl, 1) for i in nerve.indices}
    Bglob = random_group_form(rng, ctx, fl, 2)
    lam = {p: ident for p in nerve.pairs}
    g = {(i, j, k): GroupForm(0, h[i, j].value * h[j, k].value * h[i, k].value.inverse())
         for i, j, k in nerve.triples}
    m = {i: can for i in nerve.indices}
    gamma = {(i, j): GroupForm(1, delta_mu(0, h[i, j], can).value * theta[i].value.inverse() * theta[j].value)
             for i, j in nerve.pairs}
    B = {i: GroupForm(2, Bglob.value * delta_mu(1, theta[i], can).value.inverse()) for i in nerve.indices}
    c = derive(GerbeCocycle(nerve, fl, ctx, lam=lam, g=g, m=m, gamma=gamma, B=B))
    return Bundle(ctxd, nerve, gerbe=c)


def _gen_cm(rng, seed, base_dim, trunc, fl, n, kernel):
    cm = CrossedModule(fl, kernel)
    ctx = AlgebraContext(base_dim, n, trunc)
    dat = make_oracle_data(cm, n, seed, ctx=ctx)
    ctxd = _context(base_dim, trunc, fl, seed, "cm", n)
    return Bundle(ctxd, CoverNerve(()), cm=dat)
