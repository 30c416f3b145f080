"""Command-line front end.

Subcommands: generate, cohomology, bockstein, pontryagin, q, period-index,
verify.  Outputs are deterministic: identical inputs and versions produce
byte-identical files.  Every error family exits with its own code and prints
one machine-parseable line `error<TAB>kind<TAB>message` to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import errors
from .cache import DiskCache, cache_from_env
from .cohomology import Cochain, read_cochain, write_cochain
from .operations import (
    OperationContext,
    bockstein,
    pontryagin_square,
    square_class,
)
from .period_index import index_bound, verify_lift_independence, REPORT_FIELDS
from .simplicial import (
    DEFAULT_BUDGET,
    SimplicialSet,
    circle,
    em_space_2,
    moore_polygon,
    point,
    product,
    read_sset,
    skeleton,
    standard_simplex,
    suspension,
    torus,
    wbar_cyclic,
    write_sset,
)
from .verify import DEFAULT_SEED, SCOPES, run_suite

EXIT_CODES = {
    errors.FormatError: 3,
    errors.BudgetExceeded: 4,
    errors.NotTorsion: 5,
    errors.NoLift: 6,
    errors.CosetTooLarge: 7,
    errors.NotACocycle: 8,
    errors.InternalConsistencyError: 9,
}


# ---------------------------------------------------------------------------
# space expression parser
# ---------------------------------------------------------------------------

def _split_args(body: str) -> list[str]:
    parts = []
    depth = 0
    cur = []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_space(expr: str, budget: int = DEFAULT_BUDGET) -> SimplicialSet:
    """Space expressions.

    Atoms: point, torus, em2:N:D, wbar:N:D, moore:N, circle:K, simplex:N,
    file:PATH.  Combinators: susp(E), sk:D(E), prod(E,E[,DMAX]).
    """
    expr = expr.strip()
    if expr.startswith("susp(") and expr.endswith(")"):
        return suspension(parse_space(expr[5:-1], budget), budget=budget)
    if expr.startswith("sk:"):
        head, _, rest = expr.partition("(")
        if not rest.endswith(")"):
            raise errors.FormatError(f"bad skeleton expression {expr!r}")
        return skeleton(parse_space(rest[:-1], budget), int(head[3:]))
    if expr.startswith("prod(") and expr.endswith(")"):
        parts = _split_args(expr[5:-1])
        if len(parts) == 2:
            a, b = parts
            dmax = None
        elif len(parts) == 3:
            a, b = parts[:2]
            dmax = int(parts[2])
        else:
            raise errors.FormatError(f"prod takes 2 or 3 arguments: {expr!r}")
        return product(parse_space(a, budget), parse_space(b, budget),
                       dmax=dmax, budget=budget)
    if expr == "point":
        return point()
    if expr == "torus":
        return torus()
    head, *args = expr.split(":")
    try:
        if head == "em2":
            return em_space_2(int(args[0]), int(args[1]), budget=budget)
        if head == "wbar":
            return wbar_cyclic(int(args[0]), int(args[1]), budget=budget)
        if head == "moore":
            return moore_polygon(int(args[0]))
        if head == "circle":
            return circle(int(args[0]) if args else 1)
        if head == "simplex":
            return standard_simplex(int(args[0]))
        if head == "file":
            path = ":".join(args)
            return read_sset(Path(path).read_text(), label=Path(path).stem)
    except (IndexError, ValueError) as exc:
        raise errors.FormatError(f"bad space expression {expr!r}: {exc}")
    raise errors.FormatError(f"unknown space expression {expr!r}")


# ---------------------------------------------------------------------------
# class sources
# ---------------------------------------------------------------------------

def resolve_class(ctx: OperationContext, source: str, degree: int,
                  modulus: int):
    """gen | gen:i | coords:a,b,... | file:PATH -> CohomologyClass."""
    G = ctx.group(degree, modulus)
    if source == "gen":
        n = G.presentation.ngens
        if n == 0:
            raise errors.FormatError(
                f"H^{degree} is trivial; there is no generator")
        return G.generators()[n - 1]  # the highest-order torsion generator
    if source.startswith("gen:"):
        return G.generators()[int(source[4:])]
    if source.startswith("coords:"):
        coords = [int(x) for x in source[7:].split(",")]
        if len(coords) != G.presentation.ngens:
            raise errors.FormatError(
                f"expected {G.presentation.ngens} coordinates")
        return G.class_from_coords(coords)
    if source.startswith("file:"):
        c = read_cochain(Path(source[5:]).read_text(), ctx.space)
        if c.degree != degree or c.modulus != modulus:
            raise errors.FormatError(
                "cochain file degree/modulus does not match the request")
        return G.express(c)
    raise errors.FormatError(f"bad class source {source!r}")


def _class_report(label: str, cls) -> str:
    G = cls.group
    return "\n".join([
        f"group   {G!r}",
        f"{label}  {cls.format_coords()}",
        f"order   {cls.order()}",
    ])


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _make_ctx(ns) -> OperationContext:
    space = parse_space(ns.space, budget=ns.budget)
    cache = None
    if not ns.no_cache:
        cache = DiskCache(ns.cache_dir) if ns.cache_dir else cache_from_env()
    return OperationContext(space, cache=cache)


def cmd_generate(ns) -> int:
    if ns.generator == "em2":
        X = em_space_2(ns.n, ns.dmax, budget=ns.budget)
    elif ns.generator == "wbar":
        X = wbar_cyclic(ns.n, ns.dmax, budget=ns.budget)
    elif ns.generator == "moore":
        X = moore_polygon(ns.n)
    elif ns.generator == "circle":
        X = circle(ns.n)
    else:
        X = parse_space(ns.generator, budget=ns.budget)
    text = write_sset(X)
    out = Path(ns.out) if ns.out else Path(
        X.label.replace("(", "_").replace(")", "").replace(",", "_")
        .replace(" ", "") + ".sset")
    out.write_text(text)
    print(f"wrote {out} ({X.label}: dim {X.dim}, "
          f"{sum(X.n_simplices(d) for d in range(X.dim + 1))} nondegenerate)")
    return 0


def cmd_cohomology(ns) -> int:
    ctx = _make_ctx(ns)
    G = ctx.group(ns.degree, ns.modulus)
    print(G.describe())
    if ns.out:
        lines = [f"# H^{ns.degree}({ctx.space.label}; "
                 f"{'Z' if not ns.modulus else f'Z/{ns.modulus}'})",
                 G.describe()]
        Path(ns.out).write_text("\n".join(lines) + "\n")
    return 0


def cmd_bockstein(ns) -> int:
    ctx = _make_ctx(ns)
    if ns.modulus < 2:
        raise errors.FormatError("bockstein needs --modulus n >= 2")
    cls = resolve_class(ctx, ns.cls, ns.degree, ns.modulus)
    out = bockstein(ctx, cls)
    print(_class_report("beta", out))
    if ns.out:
        Path(ns.out).write_text(write_cochain(out.representative()))
    return 0


def cmd_pontryagin(ns) -> int:
    ctx = _make_ctx(ns)
    cls = resolve_class(ctx, ns.cls, 2, ns.modulus)
    out = pontryagin_square(ctx, cls)
    print(_class_report("P2", out))
    if ns.out:
        Path(ns.out).write_text(write_cochain(out.representative()))
    return 0


def cmd_q(ns) -> int:
    ctx = _make_ctx(ns)
    cls = resolve_class(ctx, ns.cls, 2, ns.modulus)
    out = square_class(ctx, cls)
    print(_class_report("Q", out))
    if ns.out:
        Path(ns.out).write_text(write_cochain(out.representative()))
    return 0


def cmd_period_index(ns) -> int:
    ctx = _make_ctx(ns)
    alpha = resolve_class(ctx, ns.alpha, 3, 0)
    report = index_bound(ctx, alpha)
    if ns.verify_lifts:
        ok, _ = verify_lift_independence(ctx, alpha, report.per,
                                         cap=ns.lift_cap)
        report = type(report)(**{**report.__dict__, "lift_independence": ok})
    print(report.human_table())
    record = "\t".join(REPORT_FIELDS) + "\n" + report.record() + "\n"
    if ns.out:
        Path(ns.out).write_text(record)
    else:
        print(record, end="")
    if ns.figure:
        from .plotting import group_summary, render_report_figure
        render_report_figure(report, group_summary(ctx, upto=5), ns.figure)
        print(f"figure written to {ns.figure}")
    return 0


def cmd_verify(ns) -> int:
    results = run_suite(ns.scope, seed=ns.seed)
    for r in results:
        print(r.line())
    passed = sum(1 for r in results if r.passed)
    print(f"{passed}/{len(results)} invariant suites passed")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pertop",
        description="Period and index of torsion degree-3 classes on finite "
                    "simplicial sets, via exact cochain-level operations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="cap on canonical simplex references")
        p.add_argument("--cache-dir", default=None,
                       help="content-addressed cache directory "
                            "(default: $PERTOP_CACHE_DIR)")
        p.add_argument("--no-cache", action="store_true",
                       help="disable the decomposition cache")

    p = sub.add_parser("generate", help="generate a space and write an sset file")
    p.add_argument("generator",
                   help="em2 | wbar | moore | circle | any space expression")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--dmax", type=int, default=6)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("cohomology", help="compute one cohomology group")
    p.add_argument("--space", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--modulus", type=int, default=0)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("bockstein", help="integral Bockstein of a mod-n class")
    p.add_argument("--space", required=True)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--class", dest="cls", default="gen",
                   help="gen | gen:i | coords:a,b | file:PATH")
    p.add_argument("--out", default=None,
                   help="write a representative cochain file")
    common(p)
    p.set_defaults(func=cmd_bockstein)

    p = sub.add_parser("pontryagin",
                       help="square refinement H^2(;Z/2m) -> H^4(;Z/4m)")
    p.add_argument("--space", required=True)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--class", dest="cls", default="gen")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_pontryagin)

    p = sub.add_parser("q", help="degree-5 obstruction class of a mod-n "
                                 "degree-2 class")
    p.add_argument("--space", required=True)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--class", dest="cls", default="gen")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_q)

    p = sub.add_parser("period-index",
                       help="period, index bound, and report for alpha in "
                            "H^3(X;Z)")
    p.add_argument("--space", required=True)
    p.add_argument("--alpha", default="gen",
                   help="gen | gen:i | coords:a,b | file:PATH")
    p.add_argument("--out", default=None, help="write the record file")
    p.add_argument("--figure", default=None,
                   help="render a summary figure (PNG) next to the record")
    p.add_argument("--verify-lifts", action="store_true",
                   help="exhaustively check lift independence")
    p.add_argument("--lift-cap", type=int, default=512)
    common(p)
    p.set_defaults(func=cmd_period_index)

    p = sub.add_parser("verify", help="run invariant suites "
                                      "(failures are results, exit 0)")
    p.add_argument("--scope", default="all", choices=("all",) + SCOPES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except errors.PertopError as exc:
        kind = type(exc).__name__
        print(f"error\t{kind}\t{exc}", file=sys.stderr)
        for cls, code in EXIT_CODES.items():
            if isinstance(exc, cls):
                return code
        return 1
    except ValueError as exc:
        print(f"error\tValueError\t{exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
