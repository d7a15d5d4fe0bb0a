"""Command line interface: `realocus <command> ...`.

Exit codes: 0 on success, 1 when an internal invariant fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from math import isqrt

from . import __version__
from .classgroup import _is_prime, class_number, kappa
from .coding import DEFAULT_MAX_STEPS, NCycle, components, n_cycle
from .homology import (
    component_class,
    component_rank,
    component_symbols,
    format_symbols,
    genus,
)
from .pell import negative_pell, pell_fundamental
from .periods import CURVES_ENV, alpha, get_curve
from .plot import cycle_arcs, render_svg
from .qform import Form

FORMATS = ("table", "json", "csv", "svg")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    max_cycle_steps: int = DEFAULT_MAX_STEPS
    tol: float = 1e-5
    fmt: str = "table"
    curves: str | None = None
    out: str | None = None

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise InputError("--tol must be positive")
        if self.max_cycle_steps <= 0:
            raise InputError("--max-steps must be positive")
        if self.fmt not in FORMATS:
            raise InputError(f"unknown format {self.fmt!r}")


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = []
    for r in cells:
        parts = [r[0].rjust(widths[0])] + [c.ljust(w) for c, w in zip(r[1:-1], widths[1:-1])]
        parts.append(r[-1].rjust(widths[-1]) if len(r) > 1 else "")
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines) + "\n"


def _primes(args: list[int]) -> list[int]:
    if len(args) == 1:
        N = args[0]
        if N < 5 or not _is_prime(N):
            raise InputError(f"N={N} must be a prime >= 5")
        return [N]
    lo, hi = args
    return [n for n in range(max(lo, 5), hi + 1) if _is_prime(n)]


def _form(a: int, b: int, c: int) -> Form:
    q = Form(a, b, c)
    d = q.disc
    if d <= 0:
        raise InputError(f"{q} is not indefinite")
    if isqrt(d) ** 2 == d:
        raise InputError(f"{q} has square discriminant")
    if not q.is_primitive():
        raise InputError(f"{q} is not primitive")
    return q


# commands

def cmd_pell(args, cfg: Config) -> str:
    D = args.D
    try:
        sol = pell_fundamental(D)
        neg = negative_pell(D)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if cfg.fmt == "json":
        return _json({"D": D, "x": sol.x, "y": sol.y,
                      "negative": None if neg is None else [neg.x, neg.y]})
    if cfg.fmt == "csv":
        return _csv([["D", "x", "y"], [D, sol.x, sol.y]])
    return f"{sol.x} {sol.y}\n"


def cmd_hclass(args, cfg: Config) -> str:
    try:
        h = class_number(args.D, narrow=args.narrow)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if cfg.fmt == "json":
        return _json({"D": args.D, "h": h, "narrow": args.narrow})
    if cfg.fmt == "csv":
        return _csv([[args.D, h]])
    return f"{h}\n"


def _h_or_blank(N: int):
    # N = 3 mod 4 is not a discriminant; the count then uses h(4N) alone
    return class_number(N) if N % 4 == 1 else ""


def cmd_kappa(args, cfg: Config) -> str:
    rows = [[N, _h_or_blank(N), class_number(4 * N), kappa(N)] for N in _primes(args.N)]
    if cfg.fmt == "json":
        return _json([dict(zip(("N", "hN", "h4N", "kappa"), r)) for r in rows])
    if cfg.fmt == "table":
        return _table(["N", "h(N)", "h(4N)", "kappa"], rows)
    return _csv(rows)


def _cycle_rows(c: NCycle) -> list[list]:
    return [[n, q, m, t.symbol] for n, q, m, t in c.rows()]


def cmd_ncycle(args, cfg: Config) -> str:
    if args.N < 5 or not _is_prime(args.N):
        raise InputError(f"N={args.N} must be a prime >= 5")
    c = n_cycle(args.N, _form(args.A, args.B, args.C), cfg.max_cycle_steps)
    if cfg.fmt == "json":
        return _json({"N": c.N, "rows": [
            {"n": n, "form": q.tolist(), "matrix": m.tolist(), "case": t.value}
            for n, q, m, t in c.rows()]})
    if cfg.fmt == "csv":
        return _csv([["n", "A", "B", "C", "a", "b", "c", "d", "case"]]
                    + [[n, *q, *m, t.value] for n, q, m, t in c.rows()])
    return _table(["n", "Q_n", "M_n", "Case"], _cycle_rows(c))


def cmd_components(args, cfg: Config) -> str:
    comps = components(args.N, cfg.max_cycle_steps)
    rows = [[k, c.kind, c.generator, c.rows, int(c.halfcycle), format_symbols(component_symbols(c))]
            for k, c in enumerate(comps)]
    if cfg.fmt == "json":
        return _json([{"index": k, "kind": c.kind, "generator": c.generator.tolist(),
                       "rows": c.rows, "halfcycle": c.halfcycle, "doubled": c.doubled,
                       "symbols": [s.c for s in component_symbols(c)]}
                      for k, c in enumerate(comps)])
    if cfg.fmt == "csv":
        return _csv([[k, kind, " ".join(map(str, g)), r, h, s] for k, kind, g, r, h, s in rows])
    return _table(["k", "kind", "generator", "rows", "half", "class"], rows)


def cmd_manin(args, cfg: Config) -> str:
    if args.form:
        c = n_cycle(args.N, _form(*args.form), cfg.max_cycle_steps)
        syms, doubled = component_class(c), False
    else:
        comps = components(args.N, cfg.max_cycle_steps)
        if not 0 <= args.K < len(comps):
            raise InputError(f"component index {args.K} out of range 0..{len(comps) - 1}")
        comp = comps[args.K]
        syms, doubled = component_symbols(comp), comp.doubled
    if cfg.fmt == "json":
        return _json({"N": args.N, "symbols": [s.c for s in syms], "doubled": doubled})
    if cfg.fmt == "csv":
        return _csv([[s.c, s.d] for s in syms])
    return format_symbols(syms) + "\n"


def cmd_rank(args, cfg: Config) -> str:
    rows = [[N, kappa(N), genus(N), component_rank(N)] for N in _primes(args.N)]
    if cfg.fmt == "json":
        return _json([dict(zip(("N", "kappa", "genus", "rank"), r)) for r in rows])
    if cfg.fmt == "table":
        return _table(["N", "kappa", "genus", "rank"], rows)
    return _csv(rows)


def cmd_plot(args, cfg: Config) -> str:
    if args.N < 5 or not _is_prime(args.N):
        raise InputError(f"N={args.N} must be a prime >= 5")
    c = n_cycle(args.N, _form(args.A, args.B, args.C), cfg.max_cycle_steps)
    if cfg.fmt == "json":
        return _json([a.to_dict() for a in cycle_arcs(c)])
    if cfg.fmt in ("svg", "table"):
        return render_svg(c)
    raise InputError("plot supports --format svg or json")


def cmd_periods(args, cfg: Config) -> str:
    try:
        curve = get_curve(args.curve, cfg.curves)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    if curve.conductor != args.level:
        raise InputError(f"{curve.label} has conductor {curve.conductor}, not {args.level}")
    comps = components(args.level, cfg.max_cycle_steps)
    if not 0 <= args.component < len(comps):
        raise InputError(f"component index {args.component} out of range 0..{len(comps) - 1}")
    res = alpha(args.level, curve, comps[args.component], cfg.tol)
    return _json(res.to_dict())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default=None)
    common.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS,
                        help="bound on the length of an N-cycle")
    common.add_argument("--tol", type=float, default=1e-5,
                        help="relative tolerance for alpha")
    common.add_argument("--curves", default=None,
                        help=f"curve data file (overrides ${CURVES_ENV})")
    common.add_argument("--out", default=None, help="write output to this file")

    p = argparse.ArgumentParser(prog="realocus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pell", parents=[common], help="fundamental solution of x^2 - D y^2 = 1")
    s.add_argument("D", type=int)
    s.set_defaults(func=cmd_pell)

    s = sub.add_parser("hclass", parents=[common], help="class number h(D) (wide for D > 0)")
    s.add_argument("D", type=int)
    s.add_argument("--narrow", action="store_true")
    s.set_defaults(func=cmd_hclass)

    s = sub.add_parser("kappa", parents=[common], help="CSV rows N,h(N),h(4N),kappa")
    s.add_argument("N", type=int, nargs="+", metavar="N", help="a prime, or a range LO HI")
    s.set_defaults(func=cmd_kappa, default_fmt="csv")

    s = sub.add_parser("ncycle", parents=[common], help="N-cycle table of a form")
    for name in ("N", "A", "B", "C"):
        s.add_argument(name, type=int)
    s.set_defaults(func=cmd_ncycle)

    s = sub.add_parser("components", parents=[common], help="components of the real locus")
    s.add_argument("N", type=int)
    s.set_defaults(func=cmd_components)

    s = sub.add_parser("manin", parents=[common], help="M-symbol class of a component")
    s.add_argument("N", type=int)
    s.add_argument("K", type=int, nargs="?", default=0, help="component index (0 is the cusp)")
    s.add_argument("--form", type=int, nargs=3, metavar=("A", "B", "C"),
                   help="use the N-cycle of this form instead")
    s.set_defaults(func=cmd_manin)

    s = sub.add_parser("rank", parents=[common], help="CSV rows N,kappa,genus,rank")
    s.add_argument("N", type=int, nargs="+", help="a prime, or a range LO HI")
    s.set_defaults(func=cmd_rank, default_fmt="csv")

    s = sub.add_parser("plot", parents=[common], help="SVG or JSON arcs of an N-cycle")
    for name in ("N", "A", "B", "C"):
        s.add_argument(name, type=int)
    s.set_defaults(func=cmd_plot, default_fmt="svg")

    s = sub.add_parser("periods", parents=[common], help="alpha for a curve and a component")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--curve", required=True)
    s.add_argument("--component", type=int, default=0)
    s.set_defaults(func=cmd_periods, default_fmt="json")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("kappa", "rank") and len(args.N) > 2:
        parser.error("expected a prime or a range LO HI")
    try:
        cfg = Config(args.max_steps, args.tol, args.fmt or getattr(args, "default_fmt", "table"),
                     args.curves or os.environ.get(CURVES_ENV), args.out)
        text = args.func(args, cfg)
    except InputError as exc:
        print(f"realocus: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, AssertionError, RuntimeError) as exc:
        print(f"realocus: invariant violation: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"realocus: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
