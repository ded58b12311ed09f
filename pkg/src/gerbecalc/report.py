"""Check records, reports and the fan-out runner used by every suite.

A record is one (equation, simplex) verdict.  Equations are compared
multiplicatively: the residual is LHS * RHS^-1, which is the identity
exactly when the check passes.  For automorphism-valued equations the
residual is the ambient matrix of LHS o RHS^-1; it acts trivially exactly
when the check passes.
"""
from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
from dataclasses import dataclass, field

from .algebra import format_poly
from .groups import AmbientAutomorphism, GroupElement, Matrix

SUITES = ("group", "torsor", "gerbe", "triple", "rho", "equivalence", "cm")


def matrix_literal(m: Matrix) -> list:
    return [[format_poly(e) for e in row] for row in m.rows]


@dataclass(frozen=True)
class Record:
    suite: str
    tag: str
    simplex: tuple
    passed: bool
    residual: list | None = None

    def sort_key(self):
        suite = SUITES.index(self.suite) if self.suite in SUITES else len(SUITES)
        return (suite, self.simplex, self.tag)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "tag": self.tag, "simplex": list(self.simplex),
                "verdict": "pass" if self.passed else "fail", "residual": self.residual}


def _simplex(s) -> tuple:
    return tuple(s) if isinstance(s, (tuple, list)) else (s,)


def compare(suite: str, tag: str, simplex, lhs, rhs) -> Record:
    """Exact comparison of two group elements or two automorphisms."""
    simplex = _simplex(simplex)
    lhs, rhs = getattr(lhs, "value", lhs), getattr(rhs, "value", rhs)
    if isinstance(lhs, AmbientAutomorphism):
        ok = lhs.same_action(rhs)
        res = None if ok else matrix_literal((lhs * rhs.inverse()).matrix)
        return Record(suite, tag, simplex, ok, res)
    if isinstance(lhs, GroupElement):
        ok = lhs == rhs
        res = None if ok else matrix_literal((lhs * rhs.inverse()).matrix)
        return Record(suite, tag, simplex, ok, res)
    raise TypeError(f"cannot compare {type(lhs).__name__} with {type(rhs).__name__}")


def truth(suite: str, tag: str, simplex, ok: bool, detail=None) -> Record:
    """Record for a predicate that has no natural LHS/RHS (e.g. degenerate-vanishing)."""
    return Record(suite, tag, _simplex(simplex), bool(ok), None if ok else detail)


@dataclass
class Report:
    records: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def extend(self, recs) -> None:
        self.records.extend(recs)

    def finalize(self) -> "Report":
        self.records.sort(key=Record.sort_key)
        return self

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def failed(self) -> list:
        return [r for r in self.records if not r.passed]

    @property
    def ok(self) -> bool:
        return not self.failed

    @property
    def vacuous(self) -> bool:
        return not self.records

    def summary(self) -> dict:
        per_tag = {}
        for r in self.records:
            key = f"{r.suite}:{r.tag}"
            p, f = per_tag.get(key, (0, 0))
            per_tag[key] = (p + r.passed, f + (not r.passed))
        return {
            "total": self.total,
            "passed": self.total - len(self.failed),
            "failed": len(self.failed),
            "vacuous": self.vacuous,
            "equations": {k: {"passed": p, "failed": f} for k, (p, f) in sorted(per_tag.items())},
        }

    def to_json(self) -> str:
        doc = {
            "engine": {"name": "gerbecalc", "version": _version(),
                       "automorphisms": "inner (ambient conjugation) only"},
            "config": self.config,
            "fingerprint": fingerprint(self.config),
            "summary": self.summary(),
            "notes": list(self.notes),
            "records": [r.as_dict() for r in self.records],
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    def to_text(self) -> str:
        lines = []
        for r in self.records:
            simplex = ",".join(map(str, r.simplex)) or "-"
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.suite:<11} {r.tag:<16} ({simplex})")
            if r.residual is not None:
                lines.append(f"      residual: {json.dumps(r.residual)}")
        s = self.summary()
        for n in self.notes:
            lines.append(f"note: {n}")
        tail = f"{s['passed']}/{s['total']} checks passed"
        if s["vacuous"]:
            tail += " (vacuous: no checks)"
        lines.append(tail)
        return "\n".join(lines)


def fingerprint(config: dict) -> str:
    blob = json.dumps({"engine": _version(), "config": config}, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _version() -> str:
    from . import __version__
    return __version__


# -- fan-out ------------------------------------------------------------------

_TASKS: list = []


def _run_one(i: int):
    return _TASKS[i]()


def default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def run_tasks(tasks, jobs: int | None = None) -> list:
    """Evaluate zero-argument callables returning record lists; result order is the task order.

    With jobs > 1 the tasks run in forked worker processes, which inherit the
    (immutable) data the closures refer to; only records travel back.
    """
    global _TASKS
    tasks = list(tasks)
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(tasks) < 2 or "fork" not in multiprocessing.get_all_start_methods():
        out = []
        for t in tasks:
            out.extend(t())
        return out
    _TASKS = tasks
    try:
        with multiprocessing.get_context("fork").Pool(min(jobs, len(tasks))) as pool:
            chunks = pool.map(_run_one, range(len(tasks)), chunksize=1)
    finally:
        _TASKS = []
    return [r for chunk in chunks for r in chunk]
