"""Command line: ``gerbecalc check|generate|derive|normalize``.

Exit codes: 0 all checks pass (or the command succeeded), 1 violations
found, 2 malformed input or bad parameters.
"""
from __future__ import annotations

import argparse
import sys

from . import dataset
from .crossed import cm_tasks, normalize, verify_normalization
from .dataset import DatasetError
from .forms import delta_mu
from .generate import MODES, Bundle, generate
from .gerbe import derive, equivalence_tasks, gerbe_tasks, rho_tasks, triple_tasks
from .report import SUITES, Report, run_tasks
from .torsor import check_bianchi_change, check_connection_change, group_tasks, torsor_tasks

EXIT_OK, EXIT_FAIL, EXIT_BAD = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- suite selection ----------------------------------------------------------

def _group_suite(b: Bundle) -> list:
    tasks = []
    if b.torsor is not None:
        t = b.torsor
        tasks += group_tasks(t.mu, t.g, t.omega)
        if t.gauge and t.ctx.simplex_order >= 2:
            # perturb each omega_i by the 1-form delta^0 of its gauge function
            h = {i: delta_mu(0, v, t.mu) for i, v in t.gauge.items()}
            tasks.append(lambda: check_connection_change(t, h))
    c = b.gerbe
    if c is not None and c.ctx.simplex_order >= 2:
        for i in c.nerve.indices:
            zero = {s: g for s, g in c.g.items() if s[0] == i}
            one = {p: w for p, w in c.gamma.items() if p[0] == i}
            tasks += group_tasks(c.m[i], zero, one, where=(i,))
            if b.triple is not None:
                tasks.append(lambda i=i: check_bianchi_change(c.m[i], b.triple.pi[i], simplex=(i,)))
    return tasks


def _cm_suite(b: Bundle) -> list:
    if b.cm is None:
        return []
    tasks = cm_tasks(b.cm)
    if b.cm_normal is not None:
        g2, chi = b.cm_normal
        tasks.append(lambda: [r.__class__(r.suite, r.tag + "/stored", r.simplex, r.passed, r.residual)
                              for r in verify_normalization(b.cm, g2, chi)])
    return tasks


def suite_tasks(b: Bundle, suite: str) -> list:
    if suite == "group":
        return _group_suite(b)
    if suite == "torsor":
        return torsor_tasks(b.torsor) if b.torsor is not None else []
    if suite == "gerbe":
        return gerbe_tasks(b.gerbe) if b.gerbe is not None else []
    if suite == "triple":
        if b.triple is None or b.gerbe is None:
            return []
        return triple_tasks(b.gerbe, b.triple_source, b.triple)
    if suite == "rho":
        if b.rho is None or b.triple is None:
            return []
        return rho_tasks(b.triple_source, b.triple, b.rho)
    if suite == "equivalence":
        if b.equivalence is None or b.gerbe is None:
            return []
        e = b.equivalence
        return equivalence_tasks(b.gerbe, e["target"], e["u"], e["v"])
    if suite == "cm":
        return _cm_suite(b)
    raise UsageError(f"unknown suite {suite!r}")


def run_check(b: Bundle, suites, jobs: int | None = None) -> Report:
    tasks = []
    for s in suites:
        tasks += suite_tasks(b, s)
    rep = Report(config={"context": b.context, "suites": list(suites)})
    rep.extend(run_tasks(tasks, jobs))
    if b.nerve.is_empty and b.cm is None:
        rep.notes.append("empty nerve")
    return rep.finalize()


# -- commands -----------------------------------------------------------------

def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def cmd_check(args) -> int:
    b = dataset.load(args.input)
    suites = SUITES if args.suite == "all" else (args.suite,)
    rep = run_check(b, suites, args.jobs)
    _write(rep.to_json() if args.report == "json" else rep.to_text(), args.output)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_generate(args) -> int:
    try:
        b = generate(args.mode, args.seed, base_dim=args.base_dim, trunc=args.trunc, flavor=args.flavor,
                     n_open=args.opens, cm_degree=args.degree, cm_kernel=args.kernel)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(dataset.dumps(b), args.output)
    return EXIT_OK


def cmd_derive(args) -> int:
    b = dataset.load(args.input)
    if b.gerbe is None:
        raise DatasetError("derive needs a 'gerbe' section")
    try:
        b.gerbe = derive(b.gerbe)
        if b.triple_source is not None:
            b.triple_source = derive(b.triple_source)
    except ValueError as exc:
        raise DatasetError(str(exc)) from None
    _write(dataset.dumps(b), args.output)
    return EXIT_OK


def cmd_normalize(args) -> int:
    b = dataset.load(args.input)
    if b.cm is None:
        raise DatasetError("normalize needs a 'crossed_module' section")
    rep = Report(config={"context": b.context, "suites": ["cm"]})
    rep.extend(run_tasks(cm_tasks(b.cm)[1:2], 1))
    if not rep.ok:
        sys.stderr.write(rep.finalize().to_text() + "\n")
        return EXIT_FAIL
    g2, chi, _ = normalize(b.cm)
    post = verify_normalization(b.cm, g2, chi)
    if not all(r.passed for r in post):
        sys.stderr.write(Report(post).finalize().to_text() + "\n")
        return EXIT_FAIL
    b.cm_normal = (g2, chi)
    _write(dataset.dumps(b), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gerbecalc", description="Exact combinatorial calculus for torsors and gerbes with connection.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run equation suites on a dataset")
    c.add_argument("--input", required=True)
    c.add_argument("--output", help="report destination (default stdout)")
    c.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    c.add_argument("--report", default="text", choices=["text", "json"])
    c.add_argument("--jobs", type=int, default=None, help="worker processes (default: available CPUs)")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("generate", help="write a dataset that is valid by construction")
    g.add_argument("mode", choices=MODES)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output")
    g.add_argument("--base-dim", type=int, default=2)
    g.add_argument("--trunc", type=int, default=2)
    g.add_argument("--flavor", choices=["u2", "u3", "gl3"])
    g.add_argument("--opens", type=int, default=None, help="number of open sets (multi-index modes)")
    g.add_argument("--degree", type=int, default=2, help="form degree for the cm mode")
    g.add_argument("--kernel", default="center", choices=["center", "full"], help="G1 for the cm mode")
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("derive", help="fill nu, delta, omega in the gerbe section")
    d.add_argument("--input", required=True)
    d.add_argument("--output")
    d.set_defaults(func=cmd_derive)

    n = sub.add_parser("normalize", help="normalize crossed-module form data")
    n.add_argument("--input", required=True)
    n.add_argument("--output")
    n.set_defaults(func=cmd_normalize)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", None) is not None and args.jobs < 1:
            raise UsageError("--jobs must be positive")
        if getattr(args, "opens", None) is not None and not 1 <= args.opens <= 6:
            raise UsageError("--opens must be between 1 and 6")
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"gerbecalc: error: {exc}\n")
        return EXIT_BAD
    except DatasetError as exc:
        sys.stderr.write(f"gerbecalc: malformed input: {exc}\n")
        return EXIT_BAD


if __name__ == "__main__":
    sys.exit(main())
