"""Cocycle data of a gerbe with connection and its transformations.

All indices are taken on the oriented nerve (i < j < k < l).  A cocycle
carries the band data (lambda_ij, g_ijk), the connection data (m_i,
gamma_ij, B_i) and, once ``derive`` has run, the associated forms
(nu_i, delta_ij, omega_i).  Every check compares two exact values and
emits one record per (equation, simplex).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .forms import (AmbientForm, GroupForm, bracket_ff, bracket_fu, bracket_uf, bracket_uu, classical_d,
                    classical_extract, delta_mu, tensors_equal, tilde_delta0, truncate_tensor)
from .groups import AmbientAutomorphism, GroupConnection, GroupFlavor, connection_curvature
from .nerve import CoverNerve
from .report import compare, truth


@dataclass
class GerbeCocycle:
    nerve: CoverNerve
    flavor: GroupFlavor
    ctx: object
    lam: dict = field(default_factory=dict)
    g: dict = field(default_factory=dict)
    m: dict = field(default_factory=dict)
    gamma: dict = field(default_factory=dict)
    B: dict = field(default_factory=dict)
    nu: dict | None = None
    delta: dict | None = None
    omega: dict | None = None

    @property
    def derived(self) -> bool:
        return self.nu is not None

    def lam_y(self, p) -> AmbientAutomorphism:
        return self.lam[p].substitute((1,))

    def band(self, i, j, k) -> AmbientAutomorphism:
        """lambda_ij lambda_jk lambda_ik^-1, which equals i_{g_ijk}."""
        return self.lam[i, j] * self.lam[j, k] * self.lam[i, k].inverse()


@dataclass
class TransformationTriple:
    """(E_i, (pi_i, eta_ij), alpha_i) relating a source cocycle c' to a target c."""
    E: dict
    pi: dict
    eta: dict
    alpha: dict


@dataclass
class TripleEquivalence:
    rho: dict


@dataclass
class EquivalenceData:
    """(m_i, delta_ij) between two band cocycles, with an optional 2-arrow datum theta_i."""
    m: dict
    delta: dict
    theta: dict | None = None


def _each(fn, *args, items):
    return [lambda s=s: fn(*args, s) for s in items]


# -- derived forms ----------------------------------------------------------

def nu_form(m: GroupConnection, B: GroupForm) -> AmbientForm:
    """nu = i_B^-1 kappa_m."""
    return AmbientForm(2, AmbientAutomorphism.inner(B.value).inverse() * connection_curvature(m))


def delta_form(c: GerbeCocycle, p) -> GroupForm:
    """delta_ij with delta_ij + B_i = lambda_ij(B_j) - delta^1_{m_i}(-gamma_ij) (2-forms commute)."""
    i, j = p
    lb = c.lam[p](c.B[j].value)
    d1 = delta_mu(1, c.gamma[p].inverse(), c.m[i]).value
    return GroupForm(2, lb * d1.inverse() * c.B[i].value.inverse())


def derive(c: GerbeCocycle) -> GerbeCocycle:
    """Fill (nu_i, delta_ij, omega_i); omega needs simplex order >= 3."""
    if c.ctx.simplex_order < 2:
        raise ValueError("derive needs simplex order >= 2")
    nu = {i: nu_form(c.m[i], c.B[i]) for i in c.nerve.indices}
    delta = {p: delta_form(c, p) for p in c.nerve.pairs}
    omega = None
    if c.ctx.simplex_order >= 3:
        omega = {i: delta_mu(2, c.B[i], c.m[i]) for i in c.nerve.indices}
    return replace(c, nu=nu, delta=delta, omega=omega)


def _need_derived(c: GerbeCocycle) -> GerbeCocycle:
    return c if c.derived else derive(c)


# -- band and connection equations -----------------------------------------

S = "gerbe"


def _coclam(c, t):
    i, j, k = t
    lhs = c.lam[i, j] * c.lam[j, k]
    rhs = AmbientAutomorphism.inner(c.g[t].value) * c.lam[i, k]
    return [compare(S, "coclam", t, lhs, rhs)]


def _cocg(c, q):
    i, j, k, l = q
    lhs = c.lam[i, j](c.g[j, k, l].value) * c.g[i, j, l].value
    rhs = c.g[i, j, k].value * c.g[i, k, l].value
    return [compare(S, "cocg", q, lhs, rhs)]


def _cocep1(c, p):
    """i_gamma (lambda m_j lambda(y)^-1) = m_i, i.e. ^{lambda*}m_j = -i_gamma + m_i."""
    i, j = p
    lhs = AmbientAutomorphism.inner(c.gamma[p].value) * c.lam[p] * c.m[j].aut * c.lam_y(p).inverse()
    return [compare(S, "cocep1", p, lhs, c.m[i].aut)]


def _cocep2(c, t):
    """gamma_ij lambda_ij(gamma_jk) band(gamma_ik^-1) = m_i(g(y)) g(x)^-1."""
    i, j, k = t
    lhs = c.gamma[i, j].value * c.lam[i, j](c.gamma[j, k].value) * c.band(i, j, k)(c.gamma[i, k].value.inverse())
    rhs = tilde_delta0(c.g[t], c.m[i])
    return [compare(S, "cocep2", t, lhs, rhs)]


def check_gerbe_cocycle(c: GerbeCocycle) -> list:
    out = [r for t in c.nerve.triples for r in _coclam(c, t)]
    return out + [r for q in c.nerve.quadruples for r in _cocg(c, q)]


def check_connection_pair(c: GerbeCocycle) -> list:
    out = [r for p in c.nerve.pairs for r in _cocep1(c, p)]
    return out + [r for t in c.nerve.triples for r in _cocep2(c, t)]


# -- fake curvature and 3-curvature -----------------------------------------

def _ifi(c, i):
    lhs = AmbientAutomorphism.inner(c.B[i].value) * c.nu[i].value
    return [compare(S, "ifi", (i,), lhs, connection_curvature(c.m[i]))]


def _compfifj2(c, p):
    i, j = p
    lhs = c.delta[p].value * c.B[i].value
    rhs = c.lam[p](c.B[j].value) * delta_mu(1, c.gamma[p].inverse(), c.m[i]).value.inverse()
    return [compare(S, "compfifj2", p, lhs, rhs)]


def _relkeps2(c, p):
    """B_i delta_ij = gamma_01 n_01(gamma_12) (n_01 n_12)(gamma_02)^-1 lambda(B_j), n = ^{lambda*}m_j."""
    i, j = p
    n = GroupConnection(c.lam[p] * c.m[j].aut * c.lam_y(p).inverse(), check=False)
    G = c.gamma[p]
    t01, t12 = n.transport(0, 1), n.transport(1, 2)
    mid = G.value * t01(G.at((1, 2))) * (t01 * t12)(G.at((0, 2))).inverse()
    lhs = c.B[i].value * c.delta[p].value
    return [compare(S, "relKeps2", p, lhs, mid * c.lam[p](c.B[j].value))]


def _cockap1(c, p):
    """i_delta lambda nu_j lambda^-1 = nu_i."""
    i, j = p
    lam = c.lam[p]
    lhs = AmbientAutomorphism.inner(c.delta[p].value) * lam * c.nu[j].value * lam.inverse()
    return [compare(S, "cockap1", p, lhs, c.nu[i].value)]


def _cockap2(c, t):
    i, j, k = t
    lhs = c.delta[i, j].value * c.lam[i, j](c.delta[j, k].value) * c.band(i, j, k)(c.delta[i, k].value.inverse())
    rhs = bracket_uf(c.nu[i], c.g[t], c.m[i])
    return [compare(S, "cockap2", t, lhs, rhs)]


def _omidef1(c, i):
    return [compare(S, "omidef1", (i,), c.omega[i], delta_mu(2, c.B[i], c.m[i]))]


def _comoioj(c, p):
    """lambda(omega_j) = omega_i + delta^2_m(delta_ij) + [gamma, nu_i] - [gamma, delta_ij]."""
    i, j = p
    m = c.m[i]
    lhs = c.lam[p](c.omega[j].value)
    rhs = (c.omega[i].value * delta_mu(2, c.delta[p], m).value * bracket_fu(c.gamma[p], c.nu[i], m).value
           * bracket_ff(c.gamma[p], c.delta[p], m).value.inverse())
    return [compare(S, "comoioj", p, lhs, rhs)]


def _relnufi(c, i):
    m = c.m[i]
    return [compare(S, "relnufi", (i,), delta_mu(3, c.omega[i], m), bracket_uf(c.nu[i], c.B[i], m))]


def _ificonj(c, i):
    lhs = AmbientAutomorphism.inner(c.omega[i].value)
    return [compare(S, "ificonj", (i,), lhs, delta_mu(2, c.nu[i], c.m[i]).value.inverse())]


def check_fake_curvature(c: GerbeCocycle) -> list:
    c = _need_derived(c)
    out = [r for p in c.nerve.pairs for r in _cockap1(c, p)]
    return out + [r for t in c.nerve.triples for r in _cockap2(c, t)]


def check_omega(c: GerbeCocycle) -> list:
    c = _need_derived(c)
    if c.omega is None:
        return []
    out = [r for p in c.nerve.pairs for r in _comoioj(c, p)]
    if c.ctx.simplex_order >= 4:
        out += [r for i in c.nerve.indices for r in _relnufi(c, i)]
    return out + [r for i in c.nerve.indices for r in _ificonj(c, i)]


def gerbe_tasks(c: GerbeCocycle) -> list:
    """Every per-simplex check of the cocycle suite, as independent tasks."""
    n = c.nerve
    tasks = _each(_coclam, c, items=n.triples) + _each(_cocg, c, items=n.quadruples)
    if not (c.m or c.gamma or c.B):
        return tasks            # band only
    missing = ([f"m_{i}" for i in n.indices if i not in c.m] + [f"B_{i}" for i in n.indices if i not in c.B]
               + [f"gamma_{i}{j}" for i, j in n.pairs if (i, j) not in c.gamma])
    if missing:
        raise ValueError("incomplete connection data: " + ", ".join(missing))
    tasks += _each(_cocep1, c, items=n.pairs) + _each(_cocep2, c, items=n.triples)
    if c.ctx.simplex_order < 2:
        return tasks
    d = _need_derived(c)
    if c.derived:
        # stored derived forms must agree with their definitions
        fresh = derive(c)
        tasks += [lambda i=i: [compare(S, "ifi-stored", (i,), d.nu[i].value, fresh.nu[i].value)] for i in n.indices]
        tasks += [lambda p=p: [compare(S, "compfifj2-stored", p, d.delta[p], fresh.delta[p])] for p in n.pairs]
    tasks += _each(_ifi, d, items=n.indices)
    tasks += _each(_compfifj2, d, items=n.pairs) + _each(_relkeps2, d, items=n.pairs)
    tasks += _each(_cockap1, d, items=n.pairs) + _each(_cockap2, d, items=n.triples)
    if d.omega is not None:
        tasks += _each(_omidef1, d, items=n.indices)
        tasks += _each(_comoioj, d, items=n.pairs)
        if c.ctx.simplex_order >= 4:
            tasks += _each(_relnufi, d, items=n.indices)
        tasks += _each(_ificonj, d, items=n.indices)
    if is_abelian(c):
        tasks += abelian_tasks(d)
    return tasks


# -- abelian reduction ------------------------------------------------------

def is_abelian(c: GerbeCocycle) -> bool:
    return c.flavor.abelian and all(u.acts_trivially() for u in c.lam.values())


def _ab_cocep2(c, t):
    """With lambda = 1: gamma_ij + gamma_jk - gamma_ik = delta^0_m(g_ijk)."""
    i, j, k = t
    lhs = c.gamma[i, j].value * c.gamma[j, k].value * c.gamma[i, k].value.inverse()
    return [compare(S, "cocep2:ab", t, lhs, delta_mu(0, c.g[t], c.m[i]))]


def _ab_dgamma(c, p):
    """B_j - B_i = -d gamma_ij (zero fake curvature)."""
    i, j = p
    lhs = c.B[j].value * c.B[i].value.inverse()
    return [compare(S, "dgamma:ab", p, lhs, delta_mu(1, c.gamma[p], c.m[i]).value.inverse())]


def _ab_glue(c, p):
    i, j = p
    return [compare(S, "omglue:ab", p, c.omega[i], c.omega[j])]


def _ab_closed(c, i):
    return [truth(S, "closed:ab", (i,), delta_mu(3, c.omega[i], c.m[i]).value.is_identity())]


def _ab_classical(c, i):
    """omega_i = dB_i on classical coefficients (canonical m only)."""
    if not c.m[i].is_canonical:
        return []
    ctx = c.ctx
    cap = ctx.weight_cap - 3
    lhs = truncate_tensor(classical_extract(c.omega[i]), cap)
    rhs = truncate_tensor(classical_d(classical_extract(c.B[i]), 2, ctx, c.flavor.size), cap)
    return [truth(S, "dB:ab", (i,), tensors_equal(lhs, rhs))]


def abelian_tasks(c: GerbeCocycle) -> list:
    n = c.nerve
    tasks = _each(_ab_cocep2, c, items=n.triples) + _each(_ab_dgamma, c, items=n.pairs)
    if c.omega is not None:
        tasks += _each(_ab_glue, c, items=n.pairs) + _each(_ab_classical, c, items=n.indices)
        if c.ctx.simplex_order >= 4:
            tasks += _each(_ab_closed, c, items=n.indices)
    return tasks


def run_suite(c: GerbeCocycle) -> list:
    return [r for t in gerbe_tasks(c) for r in t()]


# -- coboundary triples -----------------------------------------------------

def apply_triple(src: GerbeCocycle, t: TransformationTriple) -> GerbeCocycle:
    """Target (m, gamma, B) from the source (m', gamma', B') and a triple.

    i_E m' = pi m,   E gamma' = pi(gamma) eta lambda(E_j),   alpha = B' - B + delta^1_{m'}(E).
    """
    m, gamma, B = {}, {}, {}
    for i in src.nerve.indices:
        E = t.E[i]
        m[i] = GroupConnection(t.pi[i].value.inverse() * AmbientAutomorphism.inner(E.value) * src.m[i].aut,
                               check=False)
        B[i] = GroupForm(2, src.B[i].value * t.alpha[i].value.inverse()
                         * delta_mu(1, E, src.m[i]).value)
    for p in src.nerve.pairs:
        i, j = p
        val = (t.E[i].value * src.gamma[p].value * src.lam[p](t.E[j].value).inverse()
               * t.eta[p].value.inverse())
        gamma[p] = GroupForm(1, t.pi[i].value.inverse()(val))
    out = replace(src, m=m, gamma=gamma, B=B, nu=None, delta=None, omega=None)
    return derive(out) if src.ctx.simplex_order >= 2 else out


T = "triple"


def _pij1(c, t, p):
    i, j = p
    lam = c.lam[p]
    rhs = AmbientAutomorphism.inner(t.eta[p].value) * lam * t.pi[j].value * lam.inverse()
    return [compare(T, "pij1", p, t.pi[i].value, rhs)]


def _d1eij(c, t, s):
    i, j, k = s
    g = c.g[s].value
    lhs = t.eta[i, j].value * c.lam[i, j](t.eta[j, k].value) * g
    return [compare(T, "d1eij", s, lhs, t.pi[i].value(g) * t.eta[i, k].value)]


def _cobe1(c, src, t, i):
    lhs = AmbientAutomorphism.inner(t.E[i].value) * src.m[i].aut
    return [compare(T, "cobe1", (i,), lhs, t.pi[i].value * c.m[i].aut)]


def _cobe2(c, src, t, p):
    i, j = p
    lhs = t.E[i].value * src.gamma[p].value
    rhs = t.pi[i].value(c.gamma[p].value) * t.eta[p].value * c.lam[p](t.E[j].value)
    return [compare(T, "cobe2", p, lhs, rhs)]


def _cob3(c, src, t, i):
    """B' = B + alpha - dE + [E]^(2) - [m, E] - [pi, E], i.e. B alpha delta^1_m(E)^-1 [E, E] [pi, E]^-1."""
    m, E = c.m[i], t.E[i]
    rhs = (c.B[i].value * t.alpha[i].value * delta_mu(1, E, m).value.inverse()
           * bracket_ff(E, E, m).value * bracket_uf(t.pi[i], E, m).value.inverse())
    return [compare(T, "cob3-i", (i,), src.B[i], GroupForm(2, rhs))]


def _cob2(c, src, t, i):
    """nu_i delta^1_m(pi_i) = i_alpha nu'_i."""
    lhs = c.nu[i].value * delta_mu(1, t.pi[i], c.m[i]).value
    rhs = AmbientAutomorphism.inner(t.alpha[i].value) * src.nu[i].value
    return [compare(T, "cob2-i", (i,), lhs, rhs)]


def _def5(c, src, t, i):
    """nu' = nu + d pi + [pi]^(2) + [m, pi] - i_alpha with m read as an Aut(G)-valued 1-form."""
    ctx, fl = c.ctx, c.flavor
    can = GroupConnection.canonical(ctx, fl)
    mform = AmbientForm.from_connection(c.m[i])
    rhs = (c.nu[i].value * delta_mu(1, t.pi[i], can).value * bracket_uu(mform, t.pi[i], can).value
           * AmbientAutomorphism.inner(t.alpha[i].value).inverse())
    return [compare(T, "def:5-i", (i,), src.nu[i].value, rhs)]


def _alpheqij(c, src, t, p):
    """delta - delta' + lambda(alpha_j) - alpha_i = -d1(eta) + [eta, eta] - [pi, eta] + [gamma, eta] - [gamma, pi]."""
    i, j = p
    m = c.m[i]
    eta, pi, gam = t.eta[p], t.pi[i], c.gamma[p]
    lhs = (c.delta[p].value * src.delta[p].value.inverse() * c.lam[p](t.alpha[j].value)
           * t.alpha[i].value.inverse())
    rhs = (delta_mu(1, eta, m).value.inverse() * bracket_ff(eta, eta, m).value
           * bracket_uf(pi, eta, m).value.inverse() * bracket_ff(gam, eta, m).value
           * bracket_fu(gam, pi, m).value.inverse())
    return [compare(T, "alpheqij", p, lhs, rhs)]


def _cob4(c, src, t, i):
    """omega' = omega + delta^2_m(alpha) - [nu', E] + [pi, B] + [pi, alpha]."""
    m = c.m[i]
    E, pi = t.E[i], t.pi[i]
    rhs = (c.omega[i].value * delta_mu(2, t.alpha[i], m).value
           * bracket_uf(src.nu[i], E, m).value.inverse()
           * bracket_uf(pi, c.B[i], m).value * bracket_uf(pi, t.alpha[i], m).value)
    return [compare(T, "cob4-i", (i,), src.omega[i], rhs)]


def _def6(c, src, t, i):
    """Term-by-term expansion of the omega relation through the original forms only."""
    ctx, fl = c.ctx, c.flavor
    can = GroupConnection.canonical(ctx, fl)
    m = c.m[i]
    mform = AmbientForm.from_connection(m)
    E, pi, alpha = t.E[i], t.pi[i], t.alpha[i]
    dpi_sq = delta_mu(1, pi, can)                      # d pi + [pi]^(2)
    m_pi = bracket_uu(mform, pi, can)                   # [m, pi]
    rhs = (c.omega[i].value
           * delta_mu(2, alpha, can).value              # d alpha
           * bracket_uf(mform, alpha, can).value        # [m, alpha]
           * bracket_uf(c.nu[i], E, m).value.inverse()
           * bracket_uf(dpi_sq, E, m).value.inverse()
           * bracket_uf(m_pi, E, m).value.inverse()
           * bracket_ff(alpha, E, m).value
           * bracket_uf(pi, c.B[i], m).value
           * bracket_uf(pi, alpha, m).value)
    return [compare(T, "def:6-i", (i,), src.omega[i], GroupForm(3, rhs))]


def triple_tasks(c: GerbeCocycle, src: GerbeCocycle, t: TransformationTriple) -> list:
    """Checks relating target c, source c' and a triple."""
    if c.nerve != src.nerve:
        raise ValueError("nerve mismatch")
    n = c.nerve
    tasks = _each(_pij1, c, t, items=n.pairs) + _each(_d1eij, c, t, items=n.triples)
    tasks += _each(_cobe1, c, src, t, items=n.indices) + _each(_cobe2, c, src, t, items=n.pairs)
    if c.ctx.simplex_order < 2:
        return tasks
    tasks += _each(_cob3, c, src, t, items=n.indices)
    dc, ds = _need_derived(c), _need_derived(src)
    tasks += _each(_cob2, dc, ds, t, items=n.indices) + _each(_def5, dc, ds, t, items=n.indices)
    tasks += _each(_alpheqij, dc, ds, t, items=n.pairs)
    if dc.omega is not None:
        tasks += _each(_cob4, dc, ds, t, items=n.indices) + _each(_def6, dc, ds, t, items=n.indices)
    return tasks


def check_triple(c: GerbeCocycle, src: GerbeCocycle, t: TransformationTriple) -> list:
    return [r for task in triple_tasks(c, src, t) for r in task()]


def identity_triple(c: GerbeCocycle) -> TransformationTriple:
    ctx, fl = c.ctx, c.flavor
    return TransformationTriple(
        E={i: GroupForm.identity(ctx, fl, 1) for i in c.nerve.indices},
        pi={i: AmbientForm.identity(ctx, fl, 1) for i in c.nerve.indices},
        eta={p: GroupForm.identity(ctx, fl, 1) for p in c.nerve.pairs},
        alpha={i: GroupForm.identity(ctx, fl, 2) for i in c.nerve.indices})


# -- equivalences of triples ------------------------------------------------

def target_connections(src: GerbeCocycle, t: TransformationTriple) -> dict:
    return {i: GroupConnection(t.pi[i].value.inverse() * AmbientAutomorphism.inner(t.E[i].value) * src.m[i].aut,
                               check=False) for i in src.nerve.indices}


def apply_rho(t: TransformationTriple, rho: TripleEquivalence, src: GerbeCocycle) -> TransformationTriple:
    """pi' = pi + i_rho, eta' = eta + rho_i - lambda(rho_j), E' = E + rho,
    alpha' = alpha + delta^1_m(rho) + [pi, rho] (m the target connection)."""
    m = target_connections(src, t)
    r = rho.rho
    pi = {i: AmbientForm(1, AmbientAutomorphism.inner(r[i].value) * t.pi[i].value) for i in t.pi}
    eta = {p: GroupForm(1, t.eta[p].value * r[p[0]].value * src.lam[p](r[p[1]].value).inverse()) for p in t.eta}
    E = {i: t.E[i] * r[i] for i in t.E}
    alpha = {i: GroupForm(2, t.alpha[i].value * delta_mu(1, r[i], m[i]).value
                          * bracket_uf(t.pi[i], r[i], m[i]).value) for i in t.alpha}
    return TransformationTriple(E=E, pi=pi, eta=eta, alpha=alpha)


def invert_rho(rho: TripleEquivalence) -> TripleEquivalence:
    return TripleEquivalence({i: r.inverse() for i, r in rho.rho.items()})


def compose_rho(r1: TripleEquivalence, r2: TripleEquivalence) -> TripleEquivalence:
    """Pointwise product (first r1, then r2)."""
    return TripleEquivalence({i: r1.rho[i] * r2.rho[i] for i in r1.rho})


R = "rho"


def same_cocycle_records(suite: str, a: GerbeCocycle, b: GerbeCocycle, prefix: str = "") -> list:
    """Field-by-field exact comparison of two cocycles on one nerve."""
    n = a.nerve
    out = [compare(suite, prefix + "m", (i,), a.m[i].aut, b.m[i].aut) for i in n.indices]
    out += [compare(suite, prefix + "gamma", p, a.gamma[p], b.gamma[p]) for p in n.pairs]
    out += [compare(suite, prefix + "B", (i,), a.B[i], b.B[i]) for i in n.indices]
    if a.derived and b.derived:
        out += [compare(suite, prefix + "nu", (i,), a.nu[i].value, b.nu[i].value) for i in n.indices]
        out += [compare(suite, prefix + "delta", p, a.delta[p], b.delta[p]) for p in n.pairs]
        if a.omega is not None and b.omega is not None:
            out += [compare(suite, prefix + "omega", (i,), a.omega[i], b.omega[i]) for i in n.indices]
    return out


def rho_tasks(src: GerbeCocycle, t: TransformationTriple, rho: TripleEquivalence,
              t2: TransformationTriple | None = None) -> list:
    n = src.nerve
    m = target_connections(src, t)
    r = rho.rho
    t2 = apply_rho(t, rho, src) if t2 is None else t2

    def irho(i):
        lhs = t2.pi[i].value
        return [compare(R, "equ:irho-i", (i,), lhs, AmbientAutomorphism.inner(r[i].value) * t.pi[i].value)]

    def rhoij(p):
        i, j = p
        lhs = src.lam[p](r[j].value) * r[i].value.inverse()
        return [compare(R, "rhoij", p, lhs, t.eta[p].value * t2.eta[p].value.inverse())]

    def defrho(i):
        return [compare(R, "def:rho-i", (i,), t2.E[i], t.E[i] * r[i])]

    def eqrho2(i):
        ctx, fl = src.ctx, src.flavor
        can = GroupConnection.canonical(ctx, fl)
        mform = AmbientForm.from_connection(m[i])
        rhs = (t.alpha[i].value * delta_mu(1, r[i], can).value * bracket_uf(mform, r[i], can).value
               * bracket_uf(t.pi[i], r[i], m[i]).value)
        return [compare(R, "eqrho2-i", (i,), t2.alpha[i], GroupForm(2, rhs))]

    def coherence():
        return same_cocycle_records(R, apply_triple(src, t), apply_triple(src, t2), prefix="same-")

    tasks = [lambda i=i: irho(i) for i in n.indices] + [lambda p=p: rhoij(p) for p in n.pairs]
    tasks += [lambda i=i: defrho(i) for i in n.indices]
    if src.ctx.simplex_order >= 2:
        tasks += [lambda i=i: eqrho2(i) for i in n.indices]
    tasks.append(coherence)
    return tasks


# -- equivalence data between band cocycles --------------------------------

Q = "equivalence"


def equivalence_tasks(c: GerbeCocycle, c2: GerbeCocycle, e: EquivalenceData,
                      other: EquivalenceData | None = None) -> list:
    """cocd1/cocd2 for e, and for a 2-arrow theta: e => other the conditions cocthet1/cocthet2."""
    n = c.nerve

    def cocd1(p):
        i, j = p
        lhs = c2.lam[p] * e.m[j]
        rhs = AmbientAutomorphism.inner(e.delta[p].value) * e.m[i] * c.lam[p]
        return [compare(Q, "cocd1", p, lhs, rhs)]

    def cocd2(s):
        i, j, k = s
        lhs = c2.g[s].value * e.delta[i, k].value
        rhs = c2.lam[i, j](e.delta[j, k].value) * e.delta[i, j].value * e.m[i](c.g[s].value)
        return [compare(Q, "cocd2", s, lhs, rhs)]

    tasks = [lambda p=p: cocd1(p) for p in n.pairs] + [lambda s=s: cocd2(s) for s in n.triples]
    if other is not None and e.theta is not None:
        th = e.theta

        def cocthet1(i):
            return [compare(Q, "cocthet1", (i,), other.m[i], AmbientAutomorphism.inner(th[i].value) * e.m[i])]

        def cocthet2(p):
            i, j = p
            rhs = other.delta[p].value * th[i].value * e.delta[p].value.inverse()
            return [compare(Q, "cocthet2", p, c2.lam[p](th[j].value), rhs)]

        tasks += [lambda i=i: cocthet1(i) for i in n.indices] + [lambda p=p: cocthet2(p) for p in n.pairs]
        other_only = EquivalenceData(other.m, other.delta)
        tasks += [lambda t=t: [replace(r, tag=r.tag + "/target") for r in t()]
                  for t in equivalence_tasks(c, c2, other_only)]
    return tasks


def check_equivalence_data(c: GerbeCocycle, c2: GerbeCocycle, e: EquivalenceData,
                           other: EquivalenceData | None = None) -> list:
    return [r for t in equivalence_tasks(c, c2, e, other) for r in t()]


def compose_equivalence(e2: EquivalenceData, e1: EquivalenceData) -> EquivalenceData:
    """e2 after e1: (m2 m1, delta2 m2(delta1)); 2-arrows compose horizontally as theta2 m2(theta1)."""
    m = {i: e2.m[i] * e1.m[i] for i in e1.m}
    delta = {p: GroupForm(0, e2.delta[p].value * e2.m[p[0]](e1.delta[p].value)) for p in e1.delta}
    theta = None
    if e1.theta is not None or e2.theta is not None:
        theta = {}
        for i in e1.m:
            t1 = e1.theta[i].value if e1.theta else None
            t2 = e2.theta[i].value if e2.theta else None
            val = e2.m[i](t1) if t1 is not None else None
            if t2 is not None:
                val = t2 if val is None else t2 * val
            theta[i] = GroupForm(0, val)
    return EquivalenceData(m, delta, theta)


def compose_2arrows(theta: dict, theta_next: dict) -> dict:
    """Vertical composition: first theta, then theta_next, giving theta_next * theta."""
    return {i: GroupForm(0, theta_next[i].value * theta[i].value) for i in theta}


def whisker(e: EquivalenceData, theta: dict) -> dict:
    """Right whiskering by e transforms a 2-arrow by m^e."""
    return {i: GroupForm(0, e.m[i](theta[i].value)) for i in theta}
