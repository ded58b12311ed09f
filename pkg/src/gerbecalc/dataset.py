"""JSON dataset files.

Layout::

    {"format": "gerbecalc-dataset/1",
     "context": {"base_dim", "trunc_degree", "simplex_order", "matrix_size", "flavor", "seed", "mode"},
     "nerve": {"indices", "pairs", "triples", "quadruples"},
     "torsor": {...}, "gerbe": {...}, "triple": {...}, "rho": {...},
     "equivalence": {...}, "crossed_module": {...}}

Matrices are row-major lists of polynomial strings.  Per-simplex data is
keyed by the comma-joined vertex list ("0", "0,1", "0,1,2").  Since
polynomials are printed in normal form, two datasets hold equal values
exactly when their serializations agree.
"""
from __future__ import annotations

import json

from .algebra import AlgebraContext, parse_poly
from .crossed import CMFormData, CrossedModule
from .forms import AmbientForm, GroupForm
from .generate import Bundle
from .gerbe import EquivalenceData, GerbeCocycle, TransformationTriple, TripleEquivalence
from .groups import AmbientAutomorphism, GroupConnection, GroupElement, GroupFlavor, Matrix
from .nerve import CoverNerve
from .report import matrix_literal
from .torsor import TorsorData

FORMAT = "gerbecalc-dataset/1"
SECTIONS = ("torsor", "gerbe", "triple", "rho", "equivalence", "crossed_module")


class DatasetError(ValueError):
    """Malformed dataset (maps to exit code 2)."""


def _key(s) -> str:
    return ",".join(str(v) for v in (s if isinstance(s, tuple) else (s,)))


def _unkey(k: str, size: int):
    try:
        parts = tuple(int(v) for v in k.split(","))
    except ValueError:
        raise DatasetError(f"bad simplex key {k!r}") from None
    if len(parts) != size:
        raise DatasetError(f"simplex key {k!r} should have {size} vertices")
    return parts[0] if size == 1 else parts


# -- writing ----------------------------------------------------------------

def _mat(x) -> list:
    x = getattr(x, "value", x)      # forms
    x = getattr(x, "aut", x)        # connections
    return matrix_literal(x.matrix)


def _table(d: dict) -> dict:
    return {_key(s): _mat(v) for s, v in sorted(d.items())}


def _gerbe_dict(c: GerbeCocycle, band_only: bool = False) -> dict:
    out = {"lambda": _table(c.lam), "g": _table(c.g)}
    if band_only:
        return out
    out.update({"m": _table(c.m), "gamma": _table(c.gamma), "B": _table(c.B)})
    if c.derived:
        out["derived"] = {"nu": _table(c.nu), "delta": _table(c.delta)}
        if c.omega is not None:
            out["derived"]["omega"] = _table(c.omega)
    return out


def _equiv_dict(e: EquivalenceData) -> dict:
    out = {"m": _table(e.m), "delta": _table(e.delta)}
    if e.theta is not None:
        out["theta"] = _table(e.theta)
    return out


def to_dict(b: Bundle) -> dict:
    out = {"format": FORMAT, "context": dict(b.context), "nerve": b.nerve.to_dict()}
    if b.torsor is not None:
        t = b.torsor
        out["torsor"] = {"mu": _mat(t.mu), "g": _table(t.g), "omega": _table(t.omega)}
        if t.gauge:
            out["torsor"]["gauge"] = _table(t.gauge)
    if b.gerbe is not None:
        out["gerbe"] = _gerbe_dict(b.gerbe)
    if b.triple is not None:
        t = b.triple
        out["triple"] = {"source": _gerbe_dict(b.triple_source), "E": _table(t.E), "pi": _table(t.pi),
                         "eta": _table(t.eta), "alpha": _table(t.alpha)}
    if b.rho is not None:
        out["rho"] = {"rho": _table(b.rho.rho)}
    if b.equivalence is not None:
        e = b.equivalence
        out["equivalence"] = {"target": _gerbe_dict(e["target"], band_only=True),
                              "u": _equiv_dict(e["u"]), "v": _equiv_dict(e["v"])}
    if b.cm is not None:
        out["crossed_module"] = {"kernel": b.cm.cm.kernel, "degree": b.cm.n, "g": _mat(b.cm.g),
                                 "phi": [_mat(f) for f in b.cm.phi]}
        if b.cm_normal is not None:
            out["crossed_module"]["normalized"] = {"g": _mat(b.cm_normal[0]), "chi": _mat(b.cm_normal[1])}
    return out


def dumps(b: Bundle) -> str:
    return json.dumps(to_dict(b), indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def save(b: Bundle, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(b))


# -- reading ----------------------------------------------------------------

class _Reader:
    def __init__(self, ctx: AlgebraContext, flavor: GroupFlavor):
        self.ctx, self.flavor = ctx, flavor

    def matrix(self, rows) -> Matrix:
        k = self.flavor.size
        if not isinstance(rows, list) or len(rows) != k or any(not isinstance(r, list) or len(r) != k for r in rows):
            raise DatasetError(f"expected a {k}x{k} matrix literal")
        try:
            return Matrix(self.ctx, [[parse_poly(str(e), self.ctx) for e in r] for r in rows])
        except ValueError as exc:
            raise DatasetError(f"bad polynomial: {exc}") from None

    def element(self, rows) -> GroupElement:
        try:
            return GroupElement(self.matrix(rows), self.flavor)
        except DatasetError:
            raise
        except (ValueError, ZeroDivisionError) as exc:
            raise DatasetError(f"matrix is not in {self.flavor.name}: {exc}") from None

    def aut(self, rows) -> AmbientAutomorphism:
        try:
            return AmbientAutomorphism(self.matrix(rows), self.flavor)
        except DatasetError:
            raise
        except (ValueError, ZeroDivisionError) as exc:
            raise DatasetError(f"not an automorphism of {self.flavor.name}: {exc}") from None

    def form(self, rows, degree: int) -> GroupForm:
        try:
            return GroupForm(degree, self.element(rows), check=True)
        except DatasetError:
            raise
        except ValueError as exc:
            raise DatasetError(f"bad {degree}-form: {exc}") from None

    def aform(self, rows, degree: int) -> AmbientForm:
        try:
            return AmbientForm(degree, self.aut(rows), check=True)
        except DatasetError:
            raise
        except ValueError as exc:
            raise DatasetError(f"bad ambient {degree}-form: {exc}") from None

    def connection(self, rows) -> GroupConnection:
        try:
            return GroupConnection(self.aut(rows))
        except DatasetError:
            raise
        except ValueError as exc:
            raise DatasetError(f"bad connection: {exc}") from None


def _section(d: dict, name: str) -> dict:
    sec = d.get(name)
    if not isinstance(sec, dict):
        raise DatasetError(f"section {name!r} must be an object")
    return sec


def _read_table(sec: dict, name: str, expect: tuple, make, optional: bool = False) -> dict:
    raw = sec.get(name)
    if raw is None:
        if optional:
            return None
        raise DatasetError(f"missing field {name!r}")
    if not isinstance(raw, dict):
        raise DatasetError(f"field {name!r} must be an object")
    size = len(expect[0]) if expect and isinstance(expect[0], tuple) else 1
    out = {}
    for k, v in raw.items():
        out[_unkey(k, size)] = make(v)
    if set(out) != set(expect):
        raise DatasetError(f"field {name!r} does not match the nerve")
    return out


def _read_gerbe(sec: dict, r: _Reader, nerve: CoverNerve, band_only: bool = False) -> GerbeCocycle:
    lam = _read_table(sec, "lambda", nerve.pairs, r.aut)
    g = _read_table(sec, "g", nerve.triples, lambda v: r.form(v, 0))
    c = GerbeCocycle(nerve, r.flavor, r.ctx, lam=lam, g=g)
    if band_only:
        return c
    c.m = _read_table(sec, "m", nerve.indices, r.connection)
    c.gamma = _read_table(sec, "gamma", nerve.pairs, lambda v: r.form(v, 1))
    c.B = _read_table(sec, "B", nerve.indices, lambda v: r.form(v, 2))
    der = sec.get("derived")
    if der is not None:
        if not isinstance(der, dict):
            raise DatasetError("'derived' must be an object")
        c.nu = _read_table(der, "nu", nerve.indices, lambda v: r.aform(v, 2))
        c.delta = _read_table(der, "delta", nerve.pairs, lambda v: r.form(v, 2))
        c.omega = _read_table(der, "omega", nerve.indices, lambda v: r.form(v, 3), optional=True)
    return c


def _read_equiv(sec: dict, r: _Reader, nerve: CoverNerve) -> EquivalenceData:
    e = EquivalenceData(_read_table(sec, "m", nerve.indices, r.aut),
                        _read_table(sec, "delta", nerve.pairs, lambda v: r.form(v, 0)))
    e.theta = _read_table(sec, "theta", nerve.indices, lambda v: r.form(v, 0), optional=True)
    return e


def _int(ctxd: dict, name: str, lo: int, hi: int) -> int:
    v = ctxd.get(name)
    if not isinstance(v, int) or isinstance(v, bool) or not lo <= v <= hi:
        raise DatasetError(f"context.{name} must be an integer in [{lo}, {hi}]")
    return v


def from_dict(d: dict) -> Bundle:
    if not isinstance(d, dict):
        raise DatasetError("dataset must be a JSON object")
    if d.get("format", FORMAT) != FORMAT:
        raise DatasetError(f"unsupported format {d.get('format')!r}")
    ctxd = _section(d, "context")
    base_dim = _int(ctxd, "base_dim", 1, 6)
    trunc = _int(ctxd, "trunc_degree", 0, 8)
    order = _int(ctxd, "simplex_order", 1, 5)
    try:
        flavor = GroupFlavor.named(str(ctxd.get("flavor")))
    except ValueError as exc:
        raise DatasetError(str(exc)) from None
    if ctxd.get("matrix_size", flavor.size) != flavor.size:
        raise DatasetError("context.matrix_size does not match the flavor")
    unknown = set(d) - set(SECTIONS) - {"format", "context", "nerve"}
    if unknown:
        raise DatasetError(f"unknown sections {sorted(unknown)}")
    try:
        nerve = CoverNerve.from_dict(_section(d, "nerve")) if "nerve" in d else CoverNerve(())
        ctx = AlgebraContext(base_dim, order, trunc)
    except (ValueError, TypeError) as exc:
        raise DatasetError(str(exc)) from None
    r = _Reader(ctx, flavor)
    b = Bundle(dict(ctxd), nerve)
    if "torsor" in d:
        sec = _section(d, "torsor")
        b.torsor = TorsorData(nerve, r.connection(sec.get("mu")),
                              _read_table(sec, "g", nerve.pairs, lambda v: r.form(v, 0)),
                              _read_table(sec, "omega", nerve.indices, lambda v: r.form(v, 1)),
                              _read_table(sec, "gauge", nerve.indices, lambda v: r.form(v, 0), optional=True) or {})
    if "gerbe" in d:
        b.gerbe = _read_gerbe(_section(d, "gerbe"), r, nerve)
    if "triple" in d:
        sec = _section(d, "triple")
        b.triple_source = _read_gerbe(_section(sec, "source"), r, nerve)
        b.triple = TransformationTriple(_read_table(sec, "E", nerve.indices, lambda v: r.form(v, 1)),
                                        _read_table(sec, "pi", nerve.indices, lambda v: r.aform(v, 1)),
                                        _read_table(sec, "eta", nerve.pairs, lambda v: r.form(v, 1)),
                                        _read_table(sec, "alpha", nerve.indices, lambda v: r.form(v, 2)))
    if "rho" in d:
        b.rho = TripleEquivalence(_read_table(_section(d, "rho"), "rho", nerve.indices, lambda v: r.form(v, 1)))
    if "equivalence" in d:
        sec = _section(d, "equivalence")
        b.equivalence = {"target": _read_gerbe(_section(sec, "target"), r, nerve, band_only=True),
                         "u": _read_equiv(_section(sec, "u"), r, nerve),
                         "v": _read_equiv(_section(sec, "v"), r, nerve)}
    if "crossed_module" in d:
        b.cm, b.cm_normal = _read_cm(_section(d, "crossed_module"), base_dim, trunc, flavor)
    return b


def _read_cm(sec: dict, base_dim: int, trunc: int, flavor: GroupFlavor) -> CMFormData:
    n = sec.get("degree")
    if not isinstance(n, int) or not 1 <= n <= 4:
        raise DatasetError("crossed_module.degree must be an integer in [1, 4]")
    try:
        cm = CrossedModule(flavor, sec.get("kernel", "center"))
    except ValueError as exc:
        raise DatasetError(str(exc)) from None
    r = _Reader(AlgebraContext(base_dim, n, trunc), flavor)
    phi = sec.get("phi")
    if not isinstance(phi, list) or len(phi) != n:
        raise DatasetError("crossed_module.phi must list exactly `degree` matrices")
    g = r.element(sec.get("g"))
    phis = [r.element(f) for f in phi]
    if g.matrix.max_slot() > n or any(f.matrix.max_slot() > n - 1 for f in phis):
        raise DatasetError("crossed_module entries depend on too many displacement slots")
    normal = None
    if "normalized" in sec:
        ns = _section(sec, "normalized")
        normal = (r.element(ns.get("g")), r.element(ns.get("chi")))
    return CMFormData(cm, n, g, phis), normal


def loads(text: str) -> Bundle:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"invalid JSON: {exc}") from None
    return from_dict(d)


def load(path) -> Bundle:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from None
    return loads(text)
