"""Exact arithmetic on functions of an infinitesimal simplex.

An element is a polynomial in base coordinates x^1..x^d and displacement
generators d_i^a (slot i = 1..n, axis a = 1..d) subject to

    d_i^a d_i^b = 0,    d_i^a d_j^b = -d_i^b d_j^a,

with d_0 = 0.  A displacement monomial of degree k is labelled by a slot
set S and an axis set A with |S| = |A| = k and stands for the product
d_{s_1}^{a_1} ... d_{s_k}^{a_k} with both lists sorted.  Writing
d_i^a = t_i e^a with anticommuting t's and e's gives the product rule

    m(S, A) m(T, B) = sh(S, T) sh(A, B) m(S u T, A u B)   (S, T and A, B disjoint)

where sh is the sign of the shuffle permutation.

Truncation keeps monomials of total degree (base degree plus displacement
degree) at most ``weight_cap = trunc_degree + simplex_order``.  That ideal
is stable under the Taylor shift x -> x + d used by pullbacks, so every
identity of the untruncated ring survives truncation.  The top displacement
sector keeps base degree up to ``trunc_degree``.

Monomials are packed into one int64 key, from the low bits up: base
exponents (``ebits`` each), slot mask, axis mask, total weight.  Adding two
keys with disjoint masks gives the key of the product, and the weight field
makes the truncation test a single comparison.
"""
from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from functools import lru_cache

import numpy as np

_SAFE = 1 << 62


def _popcount_table(bits: int) -> np.ndarray:
    t = np.zeros(1 << bits, dtype=np.int64)
    for b in range(bits):
        t += (np.arange(1 << bits) >> b) & 1
    return t


def _shuffle_parity(bits: int) -> np.ndarray:
    """parity[u, v] = number of pairs (s in u, t in v) with s > t, mod 2."""
    size = 1 << bits
    u = np.arange(size)[:, None]
    v = np.arange(size)[None, :]
    pc = _popcount_table(bits)
    par = np.zeros((size, size), dtype=np.int64)
    for t in range(bits):
        above = u >> (t + 1)
        par += ((v >> t) & 1) * pc[above]
    return par & 1


class AlgebraContext:
    """Shape of the ring: base_dim d, simplex_order n, trunc_degree D."""

    _registry: dict = {}

    def __new__(cls, base_dim: int, simplex_order: int, trunc_degree: int):
        key = (base_dim, simplex_order, trunc_degree)
        if key in cls._registry:
            return cls._registry[key]
        if base_dim < 1 or not 0 <= simplex_order <= 5 or trunc_degree < 0:
            raise ValueError(f"unsupported context {key}")
        if base_dim > 6:
            raise ValueError("base_dim above 6 is not supported")
        self = super().__new__(cls)
        self._setup(base_dim, simplex_order, trunc_degree)
        cls._registry[key] = self
        return self

    def _setup(self, d: int, n: int, D: int) -> None:
        self.base_dim = d
        self.simplex_order = n
        self.trunc_degree = D
        self.weight_cap = D + n
        N = self.weight_cap
        self.ebits = max(1, (2 * N).bit_length())
        self.s_shift = d * self.ebits
        self.a_shift = self.s_shift + n
        self.w_shift = self.a_shift + d
        if self.w_shift + (2 * N).bit_length() + 1 > 62:
            raise ValueError("context too large for packed monomial keys")
        self.disp_mask = ((1 << (n + d)) - 1) << self.s_shift
        self.limit = (N + 1) << self.w_shift
        par = _shuffle_parity(max(n, d))
        ns, na = 1 << n, 1 << d
        # sign[p, q] for packed disp ids p = S | A << n; 0 when they overlap
        sp = np.arange(ns * na)
        S, A = sp & (ns - 1), sp >> n
        sign = np.where((par[S[:, None], S[None, :]] + par[A[:, None], A[None, :]]) & 1, -1, 1)
        overlap = ((S[:, None] & S[None, :]) | (A[:, None] & A[None, :])) != 0
        sign[overlap] = 0
        self.sign = sign.astype(np.int8)
        self.zero = AlgebraElement(self, np.zeros(0, np.int64), np.zeros(0, np.int64), 1)
        self.one = AlgebraElement(self, np.zeros(1, np.int64), np.ones(1, np.int64), 1)
        self._pull_cache: dict = {}

    def __repr__(self) -> str:
        return f"AlgebraContext(base_dim={self.base_dim}, simplex_order={self.simplex_order}, trunc_degree={self.trunc_degree})"

    def __reduce__(self):
        return (AlgebraContext, (self.base_dim, self.simplex_order, self.trunc_degree))

    # -- monomial keys -------------------------------------------------
    def monomial(self, exps=None, pairs=()) -> "AlgebraElement":
        """x^exps times the product of d_slot^axis over ``pairs`` (in the given order)."""
        d = self.base_dim
        exps = tuple(exps) if exps is not None else (0,) * d
        if len(exps) != d or min(exps, default=0) < 0:
            raise ValueError("bad exponent vector")
        w = sum(exps)
        key = 0
        for a, e in enumerate(exps):
            key |= e << (a * self.ebits)
        result = self._single(key, w, 1)
        for slot, axis in pairs:
            result = result * self.disp(slot, axis)
        return result

    def _single(self, base_key: int, weight: int, coeff) -> "AlgebraElement":
        if weight > self.weight_cap:
            return self.zero
        key = base_key | (weight << self.w_shift)
        return AlgebraElement(self, np.array([key], np.int64), np.array([coeff], np.int64), 1)

    def x(self, axis: int) -> "AlgebraElement":
        if not 1 <= axis <= self.base_dim:
            raise ValueError(f"base coordinate x{axis} out of range")
        return self._single(1 << ((axis - 1) * self.ebits), 1, 1)

    def disp(self, slot: int, axis: int) -> "AlgebraElement":
        if not 1 <= axis <= self.base_dim:
            raise ValueError(f"axis {axis} out of range")
        if slot == 0:
            return self.zero
        if not 1 <= slot <= self.simplex_order:
            raise ValueError(f"slot {slot} out of range")
        key = (1 << (self.s_shift + slot - 1)) | (1 << (self.a_shift + axis - 1))
        return self._single(key, 1, 1)

    def const(self, c) -> "AlgebraElement":
        c = Fraction(c)
        if c == 0:
            return self.zero
        return AlgebraElement(self, np.zeros(1, np.int64), np.array([c.numerator], dtype=_dtype_for(abs(c.numerator))), c.denominator)

    def decode(self, key: int):
        """(exps, slots, axes) of a packed key."""
        eb = self.ebits
        m = (1 << eb) - 1
        exps = tuple((key >> (a * eb)) & m for a in range(self.base_dim))
        smask = (key >> self.s_shift) & ((1 << self.simplex_order) - 1)
        amask = (key >> self.a_shift) & ((1 << self.base_dim) - 1)
        slots = tuple(i + 1 for i in range(self.simplex_order) if smask >> i & 1)
        axes = tuple(a + 1 for a in range(self.base_dim) if amask >> a & 1)
        return exps, slots, axes

    def slot_mask_of(self, slots) -> int:
        m = 0
        for s in slots:
            m |= 1 << (self.s_shift + s - 1)
        return m

    def basis(self, simplex_order: int | None = None):
        """All basis monomial keys with slots up to ``simplex_order``."""
        n = self.simplex_order if simplex_order is None else simplex_order
        keys = []
        for k in range(min(n, self.base_dim) + 1):
            for S in itertools.combinations(range(1, n + 1), k):
                for A in itertools.combinations(range(1, self.base_dim + 1), k):
                    for exps in _exponents(self.base_dim, self.weight_cap - k):
                        key = 0
                        for a, e in enumerate(exps):
                            key |= e << (a * self.ebits)
                        for s in S:
                            key |= 1 << (self.s_shift + s - 1)
                        for a in A:
                            key |= 1 << (self.a_shift + a - 1)
                        key |= (sum(exps) + k) << self.w_shift
                        keys.append(key)
        return sorted(keys)

    def displacement_basis(self, simplex_order: int | None = None):
        n = self.simplex_order if simplex_order is None else simplex_order
        return [(S, A) for k in range(min(n, self.base_dim) + 1)
                for S in itertools.combinations(range(1, n + 1), k)
                for A in itertools.combinations(range(1, self.base_dim + 1), k)]


def _exponents(d: int, max_total: int):
    if max_total < 0:
        return []
    out = []
    for total in range(max_total + 1):
        for c in itertools.combinations_with_replacement(range(d), total):
            e = [0] * d
            for a in c:
                e[a] += 1
            out.append(tuple(e))
    return out


def _dtype_for(bound: int):
    return np.int64 if bound < _SAFE else object


def _maxabs(nums: np.ndarray) -> int:
    if nums.size == 0:
        return 0
    if nums.dtype == object:
        return max(abs(int(v)) for v in nums)
    return int(np.abs(nums).max())


def _as_object(nums: np.ndarray) -> np.ndarray:
    if nums.dtype == object:
        return nums
    out = np.empty(nums.shape, dtype=object)
    out[:] = [int(v) for v in nums.ravel()]
    return out.reshape(nums.shape)


def _aggregate(keys: np.ndarray, nums: np.ndarray):
    """Sum coefficients of equal keys and drop zeros."""
    if keys.size == 0:
        return keys, nums
    order = np.argsort(keys, kind="stable")
    ks = keys[order]
    vs = nums[order]
    if ks.size > 1:
        starts = np.concatenate(([0], np.flatnonzero(ks[1:] != ks[:-1]) + 1))
        if starts.size != ks.size:
            vs = np.add.reduceat(vs, starts)
            ks = ks[starts]
    nz = vs != 0
    if nz.dtype == object:
        nz = nz.astype(bool)
    if not nz.all():
        ks, vs = ks[nz], vs[nz]
    return ks, vs


def _normalize(ctx, keys, nums, den) -> "AlgebraElement":
    if nums.dtype == object and nums.size and _maxabs(nums) < _SAFE:
        nums = nums.astype(np.int64)
    if den != 1 and nums.size:
        g = den
        if nums.dtype == object:
            for v in nums:
                g = math.gcd(g, int(v))
                if g == 1:
                    break
        else:
            g = math.gcd(g, int(np.gcd.reduce(nums)))
        if g != 1:
            nums = nums // g
            den //= g
    if nums.size == 0:
        den = 1
    return AlgebraElement(ctx, keys, nums, den)


class AlgebraElement:
    """Immutable sparse element: packed keys, integer numerators, one denominator."""

    __slots__ = ("ctx", "keys", "nums", "den", "_hash")

    def __init__(self, ctx: AlgebraContext, keys: np.ndarray, nums: np.ndarray, den: int):
        self.ctx = ctx
        self.keys = keys
        self.nums = nums
        self.den = den
        self._hash = None

    # -- predicates -----------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.keys.size == 0

    @property
    def is_one(self) -> bool:
        return self.keys.size == 1 and self.keys[0] == 0 and self.nums[0] == 1 and self.den == 1

    def __len__(self) -> int:
        return int(self.keys.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            if isinstance(other, (int, Fraction)):
                return self == self.ctx.const(other)
            return NotImplemented
        return (self.ctx is other.ctx and self.den == other.den
                and np.array_equal(self.keys, other.keys)
                and all(int(a) == int(b) for a, b in zip(self.nums, other.nums)))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.keys.tobytes(), tuple(int(v) for v in self.nums), self.den))
        return self._hash

    def _check(self, other: "AlgebraElement") -> None:
        if other.ctx is not self.ctx:
            raise ValueError("context mismatch")

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        return None

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return add_many([self, other])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.ctx, self.keys, -self.nums, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return add_many([self, -other])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return add_many([other, -self])

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        if c == 0 or self.is_zero:
            return self.ctx.zero
        p, q = c.numerator, c.denominator
        nums = self.nums
        if _maxabs(nums) * abs(p) >= _SAFE:
            nums = _as_object(nums)
        return _normalize(self.ctx, self.keys, nums * p, self.den * q)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        result = self.ctx.one
        for _ in range(k):
            result = result * self
        return result

    # -- structure ------------------------------------------------------
    def terms(self):
        """Iterate (key, Fraction coefficient) in key order."""
        for k, v in zip(self.keys, self.nums):
            yield int(k), Fraction(int(v), self.den)

    def to_dict(self):
        ctx = self.ctx
        return {ctx.decode(k): c for k, c in self.terms()}

    def constant_term(self) -> Fraction:
        if self.keys.size and self.keys[0] == 0:
            return Fraction(int(self.nums[0]), self.den)
        return Fraction(0)

    def max_slot(self) -> int:
        ctx = self.ctx
        if self.is_zero:
            return 0
        m = int(np.bitwise_or.reduce((self.keys >> ctx.s_shift) & ((1 << ctx.simplex_order) - 1)))
        return m.bit_length()

    def only_slots(self, slots) -> "AlgebraElement":
        """Part whose displacement slot set is exactly ``slots``."""
        ctx = self.ctx
        want = ctx.slot_mask_of(slots)
        smask = ((1 << ctx.simplex_order) - 1) << ctx.s_shift
        sel = (self.keys & smask) == want
        return AlgebraElement(ctx, self.keys[sel], self.nums[sel], self.den) if not sel.all() else self

    def displacement_degree(self) -> int:
        if self.is_zero:
            return 0
        ctx = self.ctx
        pc = _popcount_table(ctx.simplex_order)
        return int(pc[(self.keys >> ctx.s_shift) & ((1 << ctx.simplex_order) - 1)].max())

    def __repr__(self) -> str:
        return f"AlgebraElement({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def add_many(elements) -> AlgebraElement:
    """Sum of a non-empty list of elements sharing one context."""
    ctx = elements[0].ctx
    elements = [e for e in elements if not e.is_zero]
    if not elements:
        return ctx.zero
    if len(elements) == 1:
        return elements[0]
    den = 1
    for e in elements:
        if e.ctx is not ctx:
            raise ValueError("context mismatch")
        den = den * e.den // math.gcd(den, e.den)
    bound = 0
    parts = []
    for e in elements:
        f = den // e.den
        bound += _maxabs(e.nums) * f
        parts.append((e.nums, f))
    obj = bound >= _SAFE
    arrays = []
    for nums, f in parts:
        if obj:
            nums = _as_object(nums)
        arrays.append(nums * f if f != 1 else nums)
    keys = np.concatenate([e.keys for e in elements])
    nums = np.concatenate(arrays)
    keys, nums = _aggregate(keys, nums)
    return _normalize(ctx, keys, nums, den)


def asum(elements, ctx: AlgebraContext) -> AlgebraElement:
    """Sum of a possibly empty iterable of elements in ``ctx``."""
    elements = [e for e in elements if not e.is_zero]
    if not elements:
        return ctx.zero
    return add_many(elements)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    ctx = a.ctx
    if a.is_zero or b.is_zero:
        return ctx.zero
    if a.is_one:
        return b
    if b.is_one:
        return a
    na, nb = a.keys.size, b.keys.size
    ka = a.keys[:, None]
    kb = b.keys[None, :]
    ks = ka + kb
    valid = ks < ctx.limit
    nd = ctx.simplex_order + ctx.base_dim
    dm = (1 << nd) - 1
    sg = ctx.sign[(ka >> ctx.s_shift) & dm, (kb >> ctx.s_shift) & dm]
    valid &= sg != 0
    if not valid.any():
        return ctx.zero
    ia, ib = np.nonzero(valid)
    keys = ks[ia, ib]
    signs = sg[ia, ib]
    bound = _maxabs(a.nums) * _maxabs(b.nums) * min(na, nb)
    if bound >= _SAFE:
        nums = _as_object(a.nums)[ia] * _as_object(b.nums)[ib] * signs.astype(object)
    else:
        nums = a.nums[ia] * b.nums[ib] * signs.astype(np.int64)
    keys, nums = _aggregate(keys, nums)
    return _normalize(ctx, keys, nums, a.den * b.den)


def alg_add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a + b


def alg_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


# -- substitution along vertex maps ---------------------------------------

def _generator_images(ctx: AlgebraContext, verts: tuple):
    v0 = verts[0]
    d = ctx.base_dim
    xs = [ctx.x(a) + ctx.disp(v0, a) for a in range(1, d + 1)]
    ds = {}
    for j in range(1, len(verts)):
        for a in range(1, d + 1):
            ds[(j, a)] = ctx.disp(verts[j], a) - ctx.disp(v0, a)
    return xs, ds


def _monomial_image(ctx: AlgebraContext, verts: tuple, key: int, gens) -> AlgebraElement:
    exps, slots, axes = ctx.decode(key)
    xs, ds = gens
    result = ctx.one
    for a, e in enumerate(exps):
        for _ in range(e):
            result = result * xs[a]
    for s, a in zip(slots, axes):
        result = result * ds[(s, a)]
    return result


def substitute(a: AlgebraElement, verts) -> AlgebraElement:
    """Pull ``a`` back along an arbitrary vertex map j -> verts[j].

    ``a`` is a function on the simplex with vertices 0..m (m = len(verts)-1)
    and the result is the function on the simplex spanned by the vertices
    of the target: x -> x + d_{verts[0]}, d_j -> d_{verts[j]} - d_{verts[0]}.
    """
    ctx = a.ctx
    verts = tuple(int(v) for v in verts)
    m = len(verts) - 1
    if a.is_zero:
        return a
    if any(v < 0 or v > ctx.simplex_order for v in verts):
        raise ValueError("vertex map leaves the context")
    if a.max_slot() > m:
        raise ValueError("element uses slots outside the source simplex")
    if verts == tuple(range(m + 1)):
        return a
    cache = ctx._pull_cache.setdefault(verts, {})
    gens = cache.get("gens")
    if gens is None:
        gens = cache["gens"] = _generator_images(ctx, verts)
    key_parts = []
    num_parts = []
    bound = 0
    for key, num in zip(a.keys.tolist(), a.nums.tolist() if a.nums.dtype != object else list(a.nums)):
        img = cache.get(key)
        if img is None:
            img = _monomial_image(ctx, verts, key, gens)
            img = cache[key] = (img.keys, img.nums)
        if img[0].size == 0:
            continue
        key_parts.append(img[0])
        num_parts.append((img[1], num))
        bound += _maxabs(img[1]) * abs(num)
    if not key_parts:
        return ctx.zero
    obj = bound >= _SAFE
    arrays = []
    for arr, c in num_parts:
        if obj:
            arrays.append(_as_object(arr) * int(c))
        else:
            arrays.append(arr * c)
    keys, nums = _aggregate(np.concatenate(key_parts), np.concatenate(arrays))
    return _normalize(ctx, keys, nums, a.den)


def pullback(a: AlgebraElement, alpha) -> AlgebraElement:
    """Pullback along an injective vertex map alpha: [0..m] -> [0..n]."""
    alpha = tuple(alpha)
    if len(set(alpha)) != len(alpha):
        raise ValueError("pullback expects an injective vertex map")
    return substitute(a, alpha)


def degeneracy_subst(a: AlgebraElement, i: int, j: int) -> AlgebraElement:
    """Restrict to the degenerate locus x_i = x_j, i.e. d_j -> d_i (d_0 = 0)."""
    n = a.ctx.simplex_order
    if not 0 <= i < j <= n:
        raise ValueError(f"bad degeneracy ({i}, {j})")
    verts = list(range(n + 1))
    verts[j] = i
    return substitute(a, verts)


def degeneracies(n: int):
    """All pairs (i, j), 0 <= i < j <= n."""
    return [(i, j) for j in range(1, n + 1) for i in range(j)]


def face_map(n: int, k: int) -> tuple:
    """Vertex map of the face of the n-simplex omitting vertex k."""
    return tuple(v for v in range(n + 1) if v != k)


def codegeneracy_map(n: int, i: int) -> tuple:
    """Vertex map [0..n] -> [0..n-1] hitting i twice: (x_0..x_i, x_i, .., x_{n-1})."""
    return tuple(j if j <= i else j - 1 for j in range(n + 1))


# -- polynomial grammar ---------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR = re.compile(r"^(?:(\d+)(?:/(\d+))?|x(\d+)(?:\^(\d+))?|d(\d+)_(\d+))$")


def parse_poly(text: str, ctx: AlgebraContext) -> AlgebraElement:
    """Parse e.g. ``1 - 1/3*x2*d1_1 + d1_1*d2_2``."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    pos = 0
    parts = []
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r}")
        sign, body = m.group(1), m.group(2).strip()
        if sign is None and not first:
            raise ValueError(f"missing operator in {text!r}")
        first = False
        pos = m.end()
        coeff = Fraction(-1 if sign == "-" else 1)
        term = ctx.one
        for factor in body.split("*"):
            f = factor.strip()
            fm = _FACTOR.match(f)
            if not fm:
                raise ValueError(f"bad factor {f!r} in {text!r}")
            num, den, xa, xe, ds, da = fm.groups()
            if num is not None:
                if den is not None and int(den) == 0:
                    raise ValueError("zero denominator")
                coeff *= Fraction(int(num), int(den) if den else 1)
            elif xa is not None:
                term = term * (ctx.x(int(xa)) ** (int(xe) if xe else 1))
            else:
                term = term * ctx.disp(int(ds), int(da))
        parts.append(term.scale(coeff))
    return asum(parts, ctx)


def format_poly(a: AlgebraElement) -> str:
    if a.is_zero:
        return "0"
    ctx = a.ctx
    out = []
    # constant first, then by weight and key for readability
    for key, c in sorted(a.terms(), key=lambda kc: (kc[0] >> ctx.w_shift, kc[0])):
        exps, slots, axes = ctx.decode(key)
        factors = []
        for i, e in enumerate(exps):
            factors.extend([f"x{i + 1}"] * e)
        factors.extend(f"d{s}_{ax}" for s, ax in zip(slots, axes))
        mag = abs(c)
        cs = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        if factors:
            body = "*".join(factors) if mag == 1 else cs + "*" + "*".join(factors)
        else:
            body = cs
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


@lru_cache(maxsize=None)
def displacement_dimension(n: int, d: int) -> int:
    return sum(math.comb(n, k) * math.comb(d, k) for k in range(min(n, d) + 1))
