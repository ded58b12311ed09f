"""Group- and automorphism-valued combinatorial forms and their calculus.

A form of degree n is stored as its value on the generic n-simplex
(x; d_1..d_n).  ``form.at(verts)`` is the value on the simplex
(x_{verts[0]}, ..., x_{verts[n]}) inside a bigger simplex.
"""
from __future__ import annotations

import itertools

import numpy as np

from .algebra import AlgebraContext, AlgebraElement, asum, degeneracies, face_map
from .groups import (AmbientAutomorphism, GroupConnection, GroupElement, GroupFlavor, Matrix,
                     commutator)


class GroupForm:
    """G-valued combinatorial n-form."""

    __slots__ = ("degree", "value", "_at")

    def __init__(self, degree: int, value: GroupElement, check: bool = False):
        if degree < 0:
            raise ValueError("negative degree")
        if value.matrix.max_slot() > degree:
            raise ValueError(f"value depends on displacements beyond slot {degree}")
        self.degree = degree
        self.value = value
        self._at = {}
        if check and not self.degenerate_vanishing():
            raise ValueError("not identity on the degenerate simplices")

    @classmethod
    def identity(cls, ctx: AlgebraContext, flavor: GroupFlavor, degree: int) -> "GroupForm":
        return cls(degree, GroupElement.identity(ctx, flavor))

    @property
    def flavor(self) -> GroupFlavor:
        return self.value.flavor

    @property
    def ctx(self) -> AlgebraContext:
        return self.value.ctx

    def at(self, verts) -> GroupElement:
        verts = tuple(verts)
        if len(verts) != self.degree + 1:
            raise ValueError("vertex list does not match the degree")
        if verts == tuple(range(self.degree + 1)):
            return self.value
        v = self._at.get(verts)
        if v is None:
            v = self._at[verts] = self.value.substitute(verts)
        return v

    def inverse(self) -> "GroupForm":
        return GroupForm(self.degree, self.value.inverse())

    def __mul__(self, other: "GroupForm") -> "GroupForm":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return GroupForm(self.degree, self.value * other.value)

    def is_identity(self) -> bool:
        return self.value.is_identity()

    def degenerate_vanishing(self) -> bool:
        if self.degree == 0:
            return self.value.matrix.max_slot() == 0
        return all(self.value.degenerate(i, j).is_identity() for i, j in degeneracies(self.degree))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupForm) and self.degree == other.degree and self.value == other.value

    def __hash__(self):
        return hash((self.degree, self.value))

    def __repr__(self) -> str:
        return f"GroupForm({self.degree}, {self.value!r})"


class AmbientForm:
    """Aut(G)-valued combinatorial n-form (ambient conjugation)."""

    __slots__ = ("degree", "value", "_at")

    def __init__(self, degree: int, value: AmbientAutomorphism, check: bool = False):
        if value.matrix.max_slot() > degree:
            raise ValueError(f"value depends on displacements beyond slot {degree}")
        self.degree = degree
        self.value = value
        self._at = {}
        if check and not self.degenerate_vanishing():
            raise ValueError("not the identity on the degenerate simplices")

    @classmethod
    def identity(cls, ctx: AlgebraContext, flavor: GroupFlavor, degree: int) -> "AmbientForm":
        return cls(degree, AmbientAutomorphism.identity(ctx, flavor))

    @classmethod
    def inner(cls, f: GroupForm) -> "AmbientForm":
        """i_f."""
        return cls(f.degree, AmbientAutomorphism.inner(f.value))

    @classmethod
    def from_connection(cls, mu: GroupConnection) -> "AmbientForm":
        """A connection on G viewed as an Aut(G)-valued 1-form (G constant, canonical connection trivial)."""
        return cls(1, mu.aut)

    @property
    def flavor(self) -> GroupFlavor:
        return self.value.flavor

    @property
    def ctx(self) -> AlgebraContext:
        return self.value.ctx

    def at(self, verts) -> AmbientAutomorphism:
        verts = tuple(verts)
        if len(verts) != self.degree + 1:
            raise ValueError("vertex list does not match the degree")
        if verts == tuple(range(self.degree + 1)):
            return self.value
        v = self._at.get(verts)
        if v is None:
            v = self._at[verts] = self.value.substitute(verts)
        return v

    def inverse(self) -> "AmbientForm":
        return AmbientForm(self.degree, self.value.inverse())

    def __mul__(self, other: "AmbientForm") -> "AmbientForm":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return AmbientForm(self.degree, self.value * other.value)

    def acts_trivially(self) -> bool:
        return self.value.acts_trivially()

    def same_action(self, other: "AmbientForm") -> bool:
        return self.degree == other.degree and self.value.same_action(other.value)

    def degenerate_vanishing(self) -> bool:
        return all(self.value.degenerate(i, j).acts_trivially() for i, j in degeneracies(self.degree))

    def __repr__(self) -> str:
        return f"AmbientForm({self.degree}, {self.value!r})"


def _simplex(a: int, b: int) -> tuple:
    return tuple(range(a, b + 1))


def _face_factor(n: int, i: int) -> tuple:
    """Vertex list for the i-th face factor of delta^n (i >= 1).

    Even faces are taken as they are; odd faces with their last two vertices
    swapped, which realizes the inverse through the transposition law.
    """
    f = list(face_map(n + 1, i))
    if i % 2:
        f[-1], f[-2] = f[-2], f[-1]
    return tuple(f)


def delta_mu(n: int, omega, mu: GroupConnection):
    """Twisted differential of a G-valued (GroupForm) or Aut(G)-valued (AmbientForm) n-form."""
    if omega.degree != n:
        raise ValueError("degree mismatch")
    if n + 1 > omega.ctx.simplex_order:
        raise ValueError("context simplex order too small for this differential")
    if isinstance(omega, AmbientForm):
        return _delta_aut(n, omega, mu)
    if n == 0:
        g = omega.value
        return GroupForm(1, g.inverse() * mu.transport(0, 1)(omega.at((1,))))
    if n == 1:
        w01 = omega.value
        w12 = mu.transport(0, 1)(omega.at((1, 2)))
        w02 = omega.at((0, 2))
        return GroupForm(2, w01 * w12 * w02.inverse())
    lead = mu.transport(0, 1)(omega.at(_simplex(1, n + 1)))
    result = lead
    for i in range(1, n + 2):
        result = result * omega.at(_face_factor(n, i))
    return GroupForm(n + 1, result)


def _delta_aut(n: int, u: AmbientForm, mu: GroupConnection) -> AmbientForm:
    t01 = mu.transport(0, 1)
    if n == 0:
        return AmbientForm(1, u.value.inverse() * t01.conjugate(u.at((1,))))
    if n == 1:
        return AmbientForm(2, u.value * t01.conjugate(u.at((1, 2))) * u.at((0, 2)).inverse())
    result = t01.conjugate(u.at(_simplex(1, n + 1)))
    for i in range(1, n + 2):
        result = result * u.at(_face_factor(n, i))
    return AmbientForm(n + 1, result)


def delta_mu_original(omega: GroupForm, mu: GroupConnection) -> GroupForm:
    """delta^1 in its three-transport form: w(x,y) mu(x,y)(w(y,z)) [mu(x,y)mu(y,z)](w(z,x))."""
    t01, t12 = mu.transport(0, 1), mu.transport(1, 2)
    back = (t01 * t12)(omega.at((2, 0)))
    return GroupForm(2, omega.value * t01(omega.at((1, 2))) * back)


def delta_mu_inverse_faces(n: int, omega: GroupForm, mu: GroupConnection) -> GroupForm:
    """delta^n (n >= 2) written with monotone faces and explicit inverses."""
    result = mu.transport(0, 1)(omega.at(_simplex(1, n + 1)))
    for i in range(1, n + 2):
        f = omega.at(face_map(n + 1, i))
        result = result * (f.inverse() if i % 2 else f)
    return GroupForm(n + 1, result)


def tilde_delta0(g: GroupForm, mu: GroupConnection) -> GroupForm:
    """mu(x,y)(g(y)) g(x)^-1."""
    return GroupForm(1, mu.transport(0, 1)(g.at((1,))) * g.value.inverse())


def bracket_ff(f: GroupForm, g: GroupForm, mu: GroupConnection) -> GroupForm:
    m, n = f.degree, g.degree
    front = f.at(_simplex(0, m))
    back = mu.transport(0, m)(g.at(_simplex(m, m + n))) if m else g.value
    return GroupForm(m + n, commutator(front, back))


def bracket_uf(u: AmbientForm, g: GroupForm, mu: GroupConnection) -> GroupForm:
    """[u, g] = u(x_0..x_m)(mu_0m(g(x_m..))) * mu_0m(g(x_m..))^-1."""
    m, n = u.degree, g.degree
    back = mu.transport(0, m)(g.at(_simplex(m, m + n))) if m else g.value
    return GroupForm(m + n, u.at(_simplex(0, m))(back) * back.inverse())


def bracket_fu(g: GroupForm, u: AmbientForm, mu: GroupConnection) -> GroupForm:
    """[g, u] = g(x_0..x_m) * (mu_0m u(x_m..) mu_0m^-1)(g(x_0..x_m)^-1)."""
    m, n = g.degree, u.degree
    front = g.at(_simplex(0, m))
    back = u.at(_simplex(m, m + n))
    if m:
        back = mu.transport(0, m).conjugate(back)
    return GroupForm(m + n, front * back(front.inverse()))


def bracket_uu(u: AmbientForm, v: AmbientForm, mu: GroupConnection) -> AmbientForm:
    """Commutator pairing of two Aut(G)-valued forms."""
    m, n = u.degree, v.degree
    front = u.at(_simplex(0, m))
    back = v.at(_simplex(m, m + n))
    if m:
        back = mu.transport(0, m).conjugate(back)
    return AmbientForm(m + n, front * back * front.inverse() * back.inverse())


def double_bracket(u: AmbientForm, g: GroupForm) -> GroupForm:
    """[[u, g]] = g(x_0)^-1 u(x_0..x_m)(g(x_0))."""
    if g.degree != 0:
        raise ValueError("double bracket expects a 0-form")
    g0 = g.value
    return GroupForm(u.degree, g0.inverse() * u.value(g0))


def twisted_adjoint(omega: GroupForm, g: GroupForm, mu: GroupConnection) -> GroupForm:
    """omega^{*g}(x, y) = g(x)^-1 omega(x, y) mu(x, y)(g(y))."""
    return GroupForm(1, g.value.inverse() * omega.value * mu.transport(0, 1)(g.at((1,))))


def adjoint(omega: GroupForm, g: GroupForm) -> GroupForm:
    """Naive right adjoint action omega^g = g(x)^-1 omega g(x)."""
    g0 = g.value
    return GroupForm(omega.degree, g0.inverse() * omega.value * g0)


def apply_aut(u: AmbientAutomorphism, omega: GroupForm) -> GroupForm:
    """Apply a degree-0 automorphism (function of x only) to a form."""
    return GroupForm(omega.degree, u(omega.value))


def permutation_act(omega: GroupForm, sigma, mu: GroupConnection) -> GroupForm:
    """mu_{0 sigma(0)}(sigma omega): the form pulled back along sigma and transported to x_0."""
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(omega.degree + 1)):
        raise ValueError("not a permutation of the vertices")
    val = omega.at(sigma)
    if sigma[0] != 0:
        val = mu.transport(0, sigma[0])(val)
    return GroupForm(omega.degree, val)


def permutation_sign(sigma) -> int:
    sigma = list(sigma)
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def form_power(omega: GroupForm, e: int) -> GroupForm:
    return omega if e == 1 else omega.inverse()


# -- classical dictionary --------------------------------------------------

class NotAForm(ValueError):
    pass


def _base_part(ctx: AlgebraContext, keys, nums, den) -> AlgebraElement:
    """Strip displacement bits from keys and rebuild weights from base degrees."""
    base_mask = (1 << ctx.s_shift) - 1
    bk = keys & base_mask
    eb = ctx.ebits
    w = np.zeros_like(bk)
    for a in range(ctx.base_dim):
        w += (bk >> (a * eb)) & ((1 << eb) - 1)
    new = bk | (w << ctx.w_shift)
    order = np.argsort(new, kind="stable")
    return AlgebraElement(ctx, new[order], nums[order], den)


def top_coefficients(value: Matrix, degree: int, check: bool = True):
    """{axes: Matrix of base polynomials} for the slot set {1..degree} part of value - I."""
    ctx = value.ctx
    k = value.size
    full = ctx.slot_mask_of(range(1, degree + 1))
    smask = ((1 << ctx.simplex_order) - 1) << ctx.s_shift
    amask_shift = ctx.a_shift
    out = {}
    for r in range(k):
        for c in range(k):
            e = value.rows[r][c]
            if r == c:
                e = e - ctx.one
            if e.is_zero:
                continue
            slots = e.keys & smask
            if check and np.any(slots != full):
                raise NotAForm("lower displacement terms present")
            amasks = (e.keys >> amask_shift) & ((1 << ctx.base_dim) - 1)
            for am in np.unique(amasks):
                sel = amasks == am
                axes = tuple(a + 1 for a in range(ctx.base_dim) if int(am) >> a & 1)
                coeff = _base_part(ctx, e.keys[sel], e.nums[sel], e.den)
                out.setdefault(axes, {})[(r, c)] = coeff
    result = {}
    for axes, entries in sorted(out.items()):
        rows = [[entries.get((r, c), ctx.zero) for c in range(k)] for r in range(k)]
        result[axes] = Matrix(ctx, rows)
    return result


def classical_extract(omega) -> dict:
    """Top-degree coefficients of a G-valued form as {ascending axes: coefficient matrix}."""
    if isinstance(omega, AmbientForm):
        raise TypeError("classical_extract expects a G-valued form")
    if not omega.degenerate_vanishing():
        raise NotAForm("input is not identity on the degenerate simplices")
    return top_coefficients(omega.value.matrix, omega.degree)


def partial(a: AlgebraElement, axis: int) -> AlgebraElement:
    """Derivative of a base polynomial with respect to x^axis."""
    ctx = a.ctx
    if a.is_zero:
        return a
    if np.any(a.keys & ctx.disp_mask):
        raise ValueError("partial derivative of a displacement-dependent element")
    eb = ctx.ebits
    shift = (axis - 1) * eb
    e = (a.keys >> shift) & ((1 << eb) - 1)
    sel = e > 0
    keys = a.keys[sel] - (1 << shift) - (1 << ctx.w_shift)
    nums = a.nums[sel] * e[sel].astype(a.nums.dtype if a.nums.dtype != object else object)
    order = np.argsort(keys, kind="stable")
    return asum([AlgebraElement(ctx, keys[order], nums[order], a.den)], ctx)


def truncate_base(a: AlgebraElement, max_degree: int) -> AlgebraElement:
    ctx = a.ctx
    sel = (a.keys >> ctx.w_shift) <= max_degree
    return AlgebraElement(ctx, a.keys[sel], a.nums[sel], a.den) if not sel.all() else a


def _tensor_zero(ctx: AlgebraContext, k: int) -> Matrix:
    return Matrix(ctx, [[ctx.zero] * k for _ in range(k)])


def _shuffles(axes, p):
    """(I, J, sign) over splits of the ascending tuple ``axes`` with |I| = p."""
    n = len(axes)
    for idx in itertools.combinations(range(n), p):
        rest = tuple(i for i in range(n) if i not in idx)
        inv = sum(1 for i in idx for j in rest if i > j)
        yield tuple(axes[i] for i in idx), tuple(axes[j] for j in rest), (-1) ** inv


def classical_d(coeffs: dict, degree: int, ctx: AlgebraContext, k: int) -> dict:
    """Exterior derivative of {axes: Matrix} (degree -> degree + 1)."""
    out = {}
    for A in itertools.combinations(range(1, ctx.base_dim + 1), degree + 1):
        total = _tensor_zero(ctx, k)
        for t, a in enumerate(A):
            rest = A[:t] + A[t + 1:]
            if rest in coeffs:
                term = coeffs[rest].map(lambda x, a=a: partial(x, a))
                total = total + term if t % 2 == 0 else total - term
        out[A] = total
    return _prune(out)


def classical_wedge(x: dict, p: int, y: dict, q: int, ctx: AlgebraContext, k: int, bracket: bool) -> dict:
    """Sum over shuffles of X_I Y_J (or [X_I, Y_J] when ``bracket``)."""
    out = {}
    for A in itertools.combinations(range(1, ctx.base_dim + 1), p + q):
        total = _tensor_zero(ctx, k)
        for I, J, s in _shuffles(A, p):
            if I in x and J in y:
                term = x[I] @ y[J]
                if bracket:
                    term = term - y[J] @ x[I]
                total = total + term if s > 0 else total - term
        out[A] = total
    return _prune(out)


def _prune(d: dict) -> dict:
    return {a: m for a, m in d.items() if not m.is_zero()}


def truncate_tensor(d: dict, max_degree: int) -> dict:
    return _prune({a: m.map(lambda x: truncate_base(x, max_degree)) for a, m in d.items()})


def tensors_equal(a: dict, b: dict) -> bool:
    return _prune(a) == _prune(b)


def ambient_generator_coefficients(u: AmbientForm) -> dict:
    """Coefficients N_A of an ambient form I + sum N_A d^A (matrix level)."""
    return top_coefficients(u.value.matrix, u.degree, check=True)


def square_term(omega: GroupForm) -> dict:
    """[omega]^(2) read off combinatorially: classical part of delta^1 at the canonical connection minus d omega."""
    ctx = omega.ctx
    k = omega.flavor.size
    mu = GroupConnection.canonical(ctx, omega.flavor)
    total = classical_extract(delta_mu(1, omega, mu))
    d = classical_d(classical_extract(omega), 1, ctx, k)
    out = {}
    for A in set(total) | set(d):
        out[A] = total.get(A, _tensor_zero(ctx, k)) - d.get(A, _tensor_zero(ctx, k))
    return _prune(out)


def classical_square(omega: GroupForm) -> dict:
    """Half the classical bracket [omega, omega] of a 1-form, i.e. omega ^ omega."""
    ctx = omega.ctx
    w = classical_extract(omega)
    return truncate_tensor(classical_wedge(w, 1, w, 1, ctx, omega.flavor.size, bracket=False), ctx.weight_cap - 2)


def kd11_sides(omega: GroupForm):
    """Classical top coefficients of delta^1 omega and of d omega + omega ^ omega (canonical connection)."""
    ctx = omega.ctx
    k = omega.flavor.size
    cap = ctx.weight_cap - 2
    lhs = truncate_tensor(classical_extract(delta_mu(1, omega, GroupConnection.canonical(ctx, omega.flavor))), cap)
    d = classical_d(classical_extract(omega), 1, ctx, k)
    sq = classical_square(omega)
    rhs = {}
    for A in set(d) | set(sq):
        rhs[A] = d.get(A, _tensor_zero(ctx, k)) + sq.get(A, _tensor_zero(ctx, k))
    return lhs, truncate_tensor(rhs, cap)


def d1d0_sides(g: GroupForm, mu: GroupConnection):
    """delta^1 delta^0 g and [[kappa_mu, g]]."""
    from .groups import connection_curvature
    lhs = delta_mu(1, delta_mu(0, g, mu), mu)
    rhs = double_bracket(AmbientForm(2, connection_curvature(mu)), g)
    return lhs, rhs


def d1rule_sides(gamma: GroupForm, mu: GroupConnection):
    """delta^1(gamma^-1) and delta^1(gamma)^-1 [gamma, gamma] (2-forms commute)."""
    lhs = delta_mu(1, gamma.inverse(), mu)
    rhs = delta_mu(1, gamma, mu).inverse() * bracket_ff(gamma, gamma, mu)
    return lhs, rhs
