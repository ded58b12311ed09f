"""Matrix models of the group G, of Aut(G) by ambient conjugation, and of
connections on G."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraContext, AlgebraElement, asum, substitute, degeneracies, degeneracy_subst


@dataclass(frozen=True)
class GroupFlavor:
    kind: str  # "unitriangular" or "general_linear"
    size: int

    def __post_init__(self):
        if self.kind not in ("unitriangular", "general_linear"):
            raise ValueError(f"unknown flavor kind {self.kind!r}")
        if self.kind == "unitriangular" and self.size < 2:
            raise ValueError("unitriangular flavor needs size >= 2")
        if self.size < 1:
            raise ValueError("flavor size must be positive")

    @classmethod
    def named(cls, name: str) -> "GroupFlavor":
        table = {"u2": cls("unitriangular", 2), "u3": cls("unitriangular", 3),
                 "u4": cls("unitriangular", 4), "gl2": cls("general_linear", 2),
                 "gl3": cls("general_linear", 3)}
        if name not in table:
            raise ValueError(f"unknown flavor {name!r}")
        return table[name]

    @property
    def name(self) -> str:
        return ("u" if self.kind == "unitriangular" else "gl") + str(self.size)

    @property
    def abelian(self) -> bool:
        return self.kind == "unitriangular" and self.size == 2 or self.size == 1

    def generators(self):
        """Index pairs (i, j) of the elementary matrices an automorphism is tested on."""
        k = self.size
        if self.kind == "unitriangular":
            return [(i, i + 1) for i in range(k - 1)]
        return [(i, j) for i in range(k) for j in range(k)]


def _fraction_inverse(m):
    """Gauss-Jordan inverse of a square list-of-lists of Fractions."""
    k = len(m)
    a = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(m)]
    for col in range(k):
        piv = next((r for r in range(col, k) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("constant part is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(k):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[k:] for row in a]


class Matrix:
    """Square matrix with AlgebraElement entries."""

    __slots__ = ("ctx", "rows", "size")

    def __init__(self, ctx: AlgebraContext, rows):
        self.ctx = ctx
        self.rows = tuple(tuple(r) for r in rows)
        self.size = len(self.rows)

    @classmethod
    def identity(cls, ctx: AlgebraContext, k: int) -> "Matrix":
        return cls(ctx, [[ctx.one if i == j else ctx.zero for j in range(k)] for i in range(k)])

    @classmethod
    def elementary(cls, ctx: AlgebraContext, k: int, i: int, j: int, value=None) -> "Matrix":
        """I + value * E_ij (0-based indices)."""
        value = ctx.one if value is None else value
        rows = [[ctx.one if r == c else ctx.zero for c in range(k)] for r in range(k)]
        rows[i][j] = rows[i][j] + value
        return cls(ctx, rows)

    @classmethod
    def constant(cls, ctx: AlgebraContext, values) -> "Matrix":
        return cls(ctx, [[ctx.const(v) for v in row] for row in values])

    def __getitem__(self, ij) -> AlgebraElement:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if other.size != self.size:
            raise ValueError("size mismatch")
        k = self.size
        ctx = self.ctx
        a, b = self.rows, other.rows
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                parts = []
                for l in range(k):
                    x, y = a[i][l], b[l][j]
                    if x.is_zero or y.is_zero:
                        continue
                    parts.append(x * y)
                row.append(asum(parts, ctx))
            out.append(row)
        return Matrix(ctx, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ctx, [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ctx, [[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c: AlgebraElement) -> "Matrix":
        return Matrix(self.ctx, [[c * x for x in r] for r in self.rows])

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def map(self, fn) -> "Matrix":
        return Matrix(self.ctx, [[fn(x) for x in r] for r in self.rows])

    def substitute(self, verts) -> "Matrix":
        return self.map(lambda x: substitute(x, verts))

    def degenerate(self, i: int, j: int) -> "Matrix":
        return self.map(lambda x: degeneracy_subst(x, i, j))

    def is_identity(self) -> bool:
        return all((x.is_one if i == j else x.is_zero) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def is_zero(self) -> bool:
        return all(x.is_zero for r in self.rows for x in r)

    def constant_part(self):
        return [[x.constant_term() for x in r] for r in self.rows]

    def max_slot(self) -> int:
        return max(x.max_slot() for r in self.rows for x in r)

    def inverse(self) -> "Matrix":
        """Exact inverse: constant part inverted over Q, nilpotent rest by a terminating series."""
        if self.is_identity():
            return self
        k = self.size
        ctx = self.ctx
        c0 = self.constant_part()
        c0inv = _fraction_inverse(c0)
        m0inv = Matrix.constant(ctx, c0inv)
        ident = Matrix.identity(ctx, k)
        q = m0inv @ self - ident  # no constant terms, hence nilpotent
        if q.is_zero():
            return m0inv
        neg_q = q.map(lambda x: -x)
        total = ident
        power = ident
        for _ in range(ctx.weight_cap + k + 1):
            power = power @ neg_q
            if power.is_zero():
                break
            total = total + power
        return total @ m0inv

    def __repr__(self) -> str:
        return "Matrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"


def _check_flavor(m: Matrix, flavor: GroupFlavor) -> None:
    if m.size != flavor.size:
        raise ValueError("matrix size does not match flavor")
    if flavor.kind == "unitriangular":
        for i, row in enumerate(m.rows):
            for j, x in enumerate(row):
                if i == j and not x.is_one or i > j and not x.is_zero:
                    raise ValueError("not unitriangular")
    else:
        c0 = m.constant_part()
        try:
            _fraction_inverse(c0)
        except ZeroDivisionError:
            raise ValueError("constant term of the determinant vanishes") from None


class GroupElement:
    """Section of G: a matrix in the flavor's group."""

    __slots__ = ("matrix", "flavor")

    def __init__(self, matrix: Matrix, flavor: GroupFlavor, check: bool = True):
        if check:
            _check_flavor(matrix, flavor)
        self.matrix = matrix
        self.flavor = flavor

    @property
    def ctx(self) -> AlgebraContext:
        return self.matrix.ctx

    @classmethod
    def identity(cls, ctx: AlgebraContext, flavor: GroupFlavor) -> "GroupElement":
        return cls(Matrix.identity(ctx, flavor.size), flavor, check=False)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.flavor != self.flavor:
            raise ValueError("flavor mismatch")
        return GroupElement(self.matrix @ other.matrix, self.flavor, check=False)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.matrix.inverse(), self.flavor, check=False)

    def substitute(self, verts) -> "GroupElement":
        return GroupElement(self.matrix.substitute(verts), self.flavor, check=False)

    def degenerate(self, i: int, j: int) -> "GroupElement":
        return GroupElement(self.matrix.degenerate(i, j), self.flavor, check=False)

    def is_identity(self) -> bool:
        return self.matrix.is_identity()

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.flavor == other.flavor and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"GroupElement({self.flavor.name}, {self.matrix!r})"


def group_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def group_inv(a: GroupElement) -> GroupElement:
    return a.inverse()


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    """a b a^-1 b^-1."""
    return a * b * a.inverse() * b.inverse()


def _commutes_with_elementary(w: Matrix, i: int, j: int) -> bool:
    # (w E_ij)_{rc} = w_{ri} [c == j],  (E_ij w)_{rc} = [r == i] w_{jc}
    k = w.size
    for r in range(k):
        for c in range(k):
            left = w.rows[r][i] if c == j else w.ctx.zero
            right = w.rows[j][c] if r == i else w.ctx.zero
            if left != right:
                return False
    return True


class AmbientAutomorphism:
    """Automorphism of G given by conjugation with an invertible ambient matrix."""

    __slots__ = ("matrix", "flavor", "_inv")

    def __init__(self, matrix: Matrix, flavor: GroupFlavor, check: bool = True):
        if matrix.size != flavor.size:
            raise ValueError("matrix size does not match flavor")
        self.matrix = matrix
        self.flavor = flavor
        self._inv = None
        if check:
            _fraction_inverse(matrix.constant_part())
            if flavor.kind == "unitriangular":
                ctx = matrix.ctx
                for i, j in flavor.generators():
                    img = self.apply_matrix(Matrix.elementary(ctx, flavor.size, i, j))
                    _check_flavor(img, flavor)

    @property
    def ctx(self) -> AlgebraContext:
        return self.matrix.ctx

    @classmethod
    def identity(cls, ctx: AlgebraContext, flavor: GroupFlavor) -> "AmbientAutomorphism":
        return cls(Matrix.identity(ctx, flavor.size), flavor, check=False)

    @classmethod
    def inner(cls, g: GroupElement) -> "AmbientAutomorphism":
        """i_g: conjugation by g."""
        return cls(g.matrix, g.flavor, check=False)

    def matrix_inverse(self) -> Matrix:
        if self._inv is None:
            self._inv = self.matrix.inverse()
        return self._inv

    def apply_matrix(self, m: Matrix) -> Matrix:
        if self.matrix.is_identity():
            return m
        return self.matrix @ m @ self.matrix_inverse()

    def __call__(self, g: GroupElement) -> GroupElement:
        if g.flavor != self.flavor:
            raise ValueError("flavor mismatch")
        return GroupElement(self.apply_matrix(g.matrix), g.flavor, check=False)

    def __mul__(self, other: "AmbientAutomorphism") -> "AmbientAutomorphism":
        """Composition: (u * v)(g) = u(v(g))."""
        if self.matrix.is_identity():
            return other
        if other.matrix.is_identity():
            return self
        return AmbientAutomorphism(self.matrix @ other.matrix, self.flavor, check=False)

    def inverse(self) -> "AmbientAutomorphism":
        out = AmbientAutomorphism(self.matrix_inverse(), self.flavor, check=False)
        out._inv = self.matrix
        return out

    def conjugate(self, other: "AmbientAutomorphism") -> "AmbientAutomorphism":
        """self o other o self^-1."""
        if self.matrix.is_identity():
            return other
        return AmbientAutomorphism(self.apply_matrix(other.matrix), self.flavor, check=False)

    def substitute(self, verts) -> "AmbientAutomorphism":
        return AmbientAutomorphism(self.matrix.substitute(verts), self.flavor, check=False)

    def degenerate(self, i: int, j: int) -> "AmbientAutomorphism":
        return AmbientAutomorphism(self.matrix.degenerate(i, j), self.flavor, check=False)

    def acts_trivially(self) -> bool:
        m = self.matrix
        if m.is_identity():
            return True
        return all(_commutes_with_elementary(m, i, j) for i, j in self.flavor.generators())

    def same_action(self, other: "AmbientAutomorphism") -> bool:
        """Equality as automorphisms of G."""
        if self.matrix == other.matrix:
            return True
        return (self.inverse() * other).acts_trivially()

    def __repr__(self) -> str:
        return f"AmbientAutomorphism({self.flavor.name}, {self.matrix!r})"


def aut_apply(u: AmbientAutomorphism, g: GroupElement) -> GroupElement:
    return u(g)


class GroupConnection:
    """Connection on G: an automorphism mu(x, y) over the 1-simplex, trivial on the diagonal."""

    __slots__ = ("aut", "_transports")

    def __init__(self, aut: AmbientAutomorphism, check: bool = True):
        if check:
            if aut.matrix.max_slot() > 1:
                raise ValueError("connection must only depend on the first displacement")
            if not aut.degenerate(0, 1).acts_trivially():
                raise ValueError("connection is not the identity on the diagonal")
        self.aut = aut
        self._transports = {}

    @classmethod
    def canonical(cls, ctx: AlgebraContext, flavor: GroupFlavor) -> "GroupConnection":
        return cls(AmbientAutomorphism.identity(ctx, flavor), check=False)

    @property
    def flavor(self) -> GroupFlavor:
        return self.aut.flavor

    @property
    def ctx(self) -> AlgebraContext:
        return self.aut.ctx

    @property
    def is_canonical(self) -> bool:
        return self.aut.matrix.is_identity()

    def transport(self, i: int, j: int) -> AmbientAutomorphism:
        """mu(x_i, x_j): identifies the fibre at x_j with the fibre at x_i."""
        key = (i, j)
        t = self._transports.get(key)
        if t is None:
            t = self._transports[key] = self.aut.substitute((i, j))
        return t

    def __repr__(self) -> str:
        return f"GroupConnection({self.aut!r})"


def connection_curvature(mu: GroupConnection) -> AmbientAutomorphism:
    """kappa_mu = mu_01 mu_12 mu_02^-1 over the 2-simplex."""
    if mu.is_canonical:
        return AmbientAutomorphism.identity(mu.ctx, mu.flavor)
    return mu.transport(0, 1) * mu.transport(1, 2) * mu.transport(0, 2).inverse()


def connection_perturb(mu: GroupConnection, alpha: AmbientAutomorphism, check: bool = True) -> GroupConnection:
    """alpha o mu for an automorphism-valued 1-form alpha."""
    if check and not alpha.degenerate(0, 1).acts_trivially():
        raise ValueError("perturbation is not the identity on the diagonal")
    return GroupConnection(alpha * mu.aut, check=False)


def degenerate_trivially(u: AmbientAutomorphism, n: int) -> bool:
    """True when every degeneracy of the n-simplex restricts u to the identity."""
    return all(u.degenerate(i, j).acts_trivially() for i, j in degeneracies(n))
