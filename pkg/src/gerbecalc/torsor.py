"""Cech-level torsor data with connection: cocycles, gluing, curvature, Bianchi, gauge."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .forms import (AmbientForm, GroupForm, _delta_aut, bracket_uf, d1d0_sides, d1rule_sides,
                    delta_mu, kd11_sides, tensors_equal, twisted_adjoint)
from .groups import AmbientAutomorphism, GroupConnection, connection_curvature, connection_perturb
from .nerve import CoverNerve
from .report import compare, truth

SUITE = "torsor"


@dataclass
class TorsorData:
    """g_ij (i < j) glue the local trivializations; omega_i are the local connection forms."""
    nerve: CoverNerve
    mu: GroupConnection
    g: dict
    omega: dict
    gauge: dict = field(default_factory=dict)

    @property
    def ctx(self):
        return self.mu.ctx

    @property
    def flavor(self):
        return self.mu.flavor


def _each(fn, *args, items):
    return [lambda s=s: fn(*args, s) for s in items]


# -- per-simplex checks -----------------------------------------------------

def _cocycle1_at(data: TorsorData, t):
    i, j, k = t
    return [compare(SUITE, "1coc", t, data.g[i, j].value * data.g[j, k].value, data.g[i, k].value)]


def _glue_at(data: TorsorData, p):
    i, j = p
    return [compare(SUITE, "omcoc1", p, data.omega[j], twisted_adjoint(data.omega[i], data.g[p], data.mu))]


def curvature_glue_sides(kappa_i: GroupForm, g: GroupForm, mu: GroupConnection, corrected: bool = True):
    """kappa_j predicted from kappa_i: g^-1 kappa_i kappa_mu(g), or the bare g^-1 kappa_i g."""
    g0 = g.value
    tail = connection_curvature(mu)(g0) if corrected else g0
    return GroupForm(2, g0.inverse() * kappa_i.value * tail)


def _curv_glue_at(data: TorsorData, kappa: dict, p):
    i, j = p
    return [compare(SUITE, "k-twist", p, kappa[j], curvature_glue_sides(kappa[i], data.g[p], data.mu))]


def bianchi_torsor_sides(omega: GroupForm, mu: GroupConnection):
    """delta^2 of kappa = delta^1_mu omega for the connection i_omega o mu, and its expected value.

    The expected value [kappa_mu, omega]_mu is the identity when mu is flat,
    in particular for the canonical connection.
    """
    eps = GroupConnection(AmbientAutomorphism.inner(omega.value) * mu.aut, check=False)
    kappa = delta_mu(1, omega, mu)
    lhs = delta_mu(2, kappa, eps)
    rhs = bracket_uf(AmbientForm(2, connection_curvature(mu)), omega, mu)
    return lhs, rhs


def _bianchi_at(data: TorsorData, i):
    lhs, rhs = bianchi_torsor_sides(data.omega[i], data.mu)
    return [compare(SUITE, "bianchi:cl", (i,), lhs, rhs)]


def _gauge_glue_at(data: TorsorData, i):
    # the gauge 0-cochain itself carries no condition; re-check by apply_gauge instead
    return []


# -- public checks ----------------------------------------------------------

def check_cocycle1(data: TorsorData) -> list:
    return [r for t in data.nerve.triples for r in _cocycle1_at(data, t)]


def check_connection_glue(data: TorsorData) -> list:
    return [r for p in data.nerve.pairs for r in _glue_at(data, p)]


def torsor_curvature(data: TorsorData) -> dict:
    return {i: delta_mu(1, data.omega[i], data.mu) for i in data.nerve.indices}


def check_curvature_glue(data: TorsorData) -> list:
    kappa = torsor_curvature(data)
    return [r for p in data.nerve.pairs for r in _curv_glue_at(data, kappa, p)]


def check_bianchi_torsor(data: TorsorData) -> list:
    return [r for i in data.nerve.indices for r in _bianchi_at(data, i)]


def bianchi_group_value(mu: GroupConnection) -> AmbientForm:
    return _delta_aut(2, AmbientForm(2, connection_curvature(mu)), mu)


def check_bianchi_group(mu: GroupConnection, suite: str = "group", simplex=()) -> list:
    return [truth(suite, "defkapmu0", simplex, bianchi_group_value(mu).acts_trivially())]


def check_bianchi_change(mu: GroupConnection, alpha: AmbientForm, suite: str = "group", simplex=()) -> list:
    """kappa_{alpha mu} = (delta^1_{mu^ad} alpha) kappa_mu as automorphisms."""
    mu2 = connection_perturb(mu, alpha.value, check=False)
    lhs = connection_curvature(mu2)
    rhs = _delta_aut(1, alpha, mu).value * connection_curvature(mu)
    return [compare(suite, "bianchigroup-ii", simplex, lhs, rhs)]


def check_connection_change(data: TorsorData, h: dict) -> list:
    """Changing omega_i to h_i omega_i multiplies kappa_i by delta^1 of h_i for the torsor connection."""
    out = []
    for i in data.nerve.indices:
        w = data.omega[i]
        eps = GroupConnection(AmbientAutomorphism.inner(w.value) * data.mu.aut, check=False)
        lhs = delta_mu(1, h[i] * w, data.mu)
        rhs = delta_mu(1, h[i], eps) * delta_mu(1, w, data.mu)
        out.append(compare(SUITE, "cobcap", (i,), lhs, rhs))
    return out


def apply_gauge(data: TorsorData, gamma: dict) -> TorsorData:
    """g_ij -> gamma_i g_ij gamma_j^-1, omega_i -> omega_i^{* gamma_i^-1}."""
    g = {(i, j): GroupForm(0, gamma[i].value * v.value * gamma[j].value.inverse()) for (i, j), v in data.g.items()}
    omega = {i: twisted_adjoint(w, gamma[i].inverse(), data.mu) for i, w in data.omega.items()}
    return replace(data, g=g, omega=omega, gauge={})


def torsor_tasks(data: TorsorData) -> list:
    """Independent per-simplex checks of the torsor suite."""
    n = data.nerve
    tasks = _each(_cocycle1_at, data, items=n.triples)
    tasks += _each(_glue_at, data, items=n.pairs)
    if data.ctx.simplex_order >= 2:
        kappa = torsor_curvature(data)
        tasks += _each(_curv_glue_at, data, kappa, items=n.pairs)
    if data.ctx.simplex_order >= 3:
        tasks += _each(_bianchi_at, data, items=n.indices)
    if data.gauge:
        gauged = apply_gauge(data, data.gauge)
        tasks += [lambda: [replace(r, tag=r.tag + "/gauge") for r in check_cocycle1(gauged)]]
        tasks += [lambda: [replace(r, tag=r.tag + "/gauge") for r in check_connection_glue(gauged)]]
    return tasks


def run_suite(data: TorsorData) -> list:
    return [r for t in torsor_tasks(data) for r in t()]


# -- group suite: identities of a single connection --------------------------

def group_tasks(mu: GroupConnection, zero_forms: dict, one_forms: dict, where=()) -> list:
    """delta^1 delta^0 = [[kappa_mu, -]], Bianchi for kappa_mu, d1rule and (canonical mu) the Cartan equation."""
    tasks = []
    if mu.ctx.simplex_order >= 3:
        tasks.append(lambda: check_bianchi_group(mu, simplex=where))
    for key, g in sorted(zero_forms.items()):
        def t(g=g, key=key):
            lhs, rhs = d1d0_sides(g, mu)
            return [compare("group", "d1d0", key, lhs, rhs)]
        tasks.append(t)
    for key, w in sorted(one_forms.items()):
        def t1(w=w, key=key):
            lhs, rhs = d1rule_sides(w, mu)
            return [compare("group", "d1rule", key, lhs, rhs)]
        tasks.append(t1)
        def t2(w=w, key=key):
            lhs, rhs = kd11_sides(w)
            return [truth("group", "kd11", key, tensors_equal(lhs, rhs))]
        tasks.append(t2)
    return tasks
