"""Command-line entry point.

Exit status: 0 success, 1 invalid input, 2 resource limit, 3 a proven
inequality failed numerically.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import io
from .analysis import (
    FigureKind,
    convergence_sweep,
    figure1_data,
    figure_keyboard,
    verify_proposition1,
)
from .enumeration import top_n, verify_csiszar_bounds, verify_rank_bounds
from .errors import BoundViolation, DegenerateSampleError, ResourceError
from .exponent import ExponentReport, solve_root
from .keyboard import (
    DEFAULT_C,
    DEFAULT_S,
    DistributionSpec,
    Keyboard,
    keyboard_from_spacings,
    miller_keyboard,
    sample_spacings,
)

SEED_ENV = "MONKEYZIPF_SEED"
EXIT_OK, EXIT_INVALID, EXIT_RESOURCE, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _add_mass(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--c", type=float, help=f"total letter probability (default {DEFAULT_C})")
    g.add_argument("--s", type=float, help="space probability, 1 - c")


def _add_keyboard(p, spec_default="uniform"):
    p.add_argument("--K", type=int, default=26, help="alphabet size (default 26)")
    _add_mass(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--miller", action="store_true", help="equal letter probabilities")
    src.add_argument("--keyboard", metavar="JSON", help="read q and s from a JSON file")
    p.add_argument("--spec", choices=["uniform", "beta32", "quantile"], default=spec_default,
                   help="break-point distribution for random keyboards")
    p.add_argument("--table", metavar="JSON",
                   help="quantile table [[p, x], ...] for --spec quantile")
    p.add_argument("--seed", type=int, default=None)


def _add_output(p, default_format="csv"):
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="monkeyzipf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {io.__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="random spacings and the keyboard built from them")
    p.add_argument("--K", type=int, default=26)
    _add_mass(p)
    p.add_argument("--spec", choices=["uniform", "beta32", "quantile"], default="uniform")
    p.add_argument("--table", metavar="JSON")
    p.add_argument("--seed", type=int, default=None)
    _add_output(p, "json")

    p = sub.add_parser("exponent", help="solve for beta, R0 and the bound constants")
    _add_keyboard(p)
    _add_output(p)

    p = sub.add_parser("enumerate", help="top-N ranked words")
    _add_keyboard(p)
    p.add_argument("--N", type=int, default=475_255)
    _add_output(p)

    p = sub.add_parser("counts", help="N(t) and N_cum(t) on a grid, with their bounds")
    _add_keyboard(p)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--tstep", type=float, default=0.5)
    _add_output(p)

    p = sub.add_parser("verify", help="check a proven inequality")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--csiszar", action="store_true", help="b R0^t < N(t) <= R0^t")
    which.add_argument("--rankbounds", action="store_true", help="C1 B^(-1/beta) < r < C2 B^(-1/beta)")
    which.add_argument("--prop1", action="store_true", help="mean radix-K log <= -beta")
    _add_keyboard(p)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--tstep", type=float, default=0.5)
    p.add_argument("--N", type=int, default=100_000)
    _add_output(p)

    p = sub.add_parser("figure", help="log-log series for one panel of the rank plot")
    p.add_argument("--kind", choices=[k.value for k in FigureKind], required=True)
    p.add_argument("--K", type=int, default=26)
    _add_mass(p)
    p.add_argument("--N", type=int, default=475_255)
    p.add_argument("--seed", type=int, default=None)
    _add_output(p)

    p = sub.add_parser("sweep", help="exponent versus K over many seeds")
    p.add_argument("--spec", choices=["uniform", "beta32", "quantile"], default="uniform")
    p.add_argument("--table", metavar="JSON")
    p.add_argument("--Ks", type=int, nargs="+", default=[10, 100, 1000])
    p.add_argument("--seeds", type=int, default=20, help="seeds per K")
    p.add_argument("--seed", type=int, default=None, help="first seed")
    p.add_argument("--workers", type=int, default=None)
    _add_mass(p)
    _add_output(p)
    return parser


def _mass(args) -> tuple[float, float]:
    """Letter mass ``c`` and space probability ``s``, whichever was given kept exact."""
    if args.s is not None:
        c, s = 1.0 - args.s, args.s
    elif args.c is not None:
        c, s = args.c, 1.0 - args.c
    else:
        c, s = DEFAULT_C, DEFAULT_S
    if not 0.0 < c < 1.0:
        raise ValueError(f"letter mass must lie in (0, 1), got {c}")
    return c, s


def _seed(args) -> int:
    return _default_seed() if args.seed is None else args.seed


def _spec(args) -> DistributionSpec:
    if args.spec == "quantile":
        if not args.table:
            raise ValueError("--spec quantile needs --table")
        with open(args.table) as fh:
            return DistributionSpec.quantile(json.load(fh))
    if args.table:
        raise ValueError("--table is only valid with --spec quantile")
    return DistributionSpec.uniform() if args.spec == "uniform" else DistributionSpec.beta32()


def _keyboard(args) -> tuple[Keyboard, dict]:
    c, s = _mass(args)
    if args.keyboard:
        with open(args.keyboard) as fh:
            kb = Keyboard.from_dict(json.load(fh))
        return kb, {"keyboard": args.keyboard}
    if args.miller:
        return miller_keyboard(args.K, s), {"model": "equal", "K": args.K, "s": repr(s)}
    spec = _spec(args)
    seed = _seed(args)
    kb = keyboard_from_spacings(sample_spacings(spec, args.K, seed), c)
    return kb, {"spec": spec.kind.value, "K": args.K, "c": repr(c), "seed": seed}


def _exponent(kb: Keyboard) -> ExponentReport:
    rep = solve_root(kb)
    if not rep.beta > 1.0:
        raise BoundViolation(f"exponent beta = {rep.beta!r} is not above 1")
    return rep


def _t_grid(tmax: float, tstep: float) -> list[float]:
    if tstep <= 0 or tmax < 0:
        raise ValueError("need tmax >= 0 and tstep > 0")
    n = int(math.floor(tmax / tstep + 1e-9))
    return [k * tstep for k in range(n + 1)]


def _emit(args, argv, meta, header, columns, extra=None):
    """Write a table as CSV, or as JSON records plus ``extra`` fields."""
    if args.format == "json":
        records = [dict(zip(header, row)) for row in zip(*columns)]
        payload = {"provenance": io.provenance(argv, **meta)[2:].strip(), "rows": records}
        payload.update(extra or {})
        text = io.json_text(payload)
    else:
        text = io.csv_columns(header, columns, io.provenance(argv, **meta))
    io.write_text(text, args.out)


def cmd_sample(args, argv):
    spec = _spec(args)
    seed = _seed(args)
    c, _ = _mass(args)
    sample = sample_spacings(spec, args.K, seed)
    kb = keyboard_from_spacings(sample, c)
    meta = {"spec": spec.kind.value, "K": args.K, "c": repr(c), "seed": seed}
    if args.format == "json":
        payload = {"provenance": io.provenance(argv, **meta)[2:].strip(),
                   **kb.to_dict(), **sample.to_dict()}
        io.write_text(io.json_text(payload), args.out)
        return EXIT_OK
    columns = [list(range(1, args.K + 1)), sample.spacings.tolist(),
               sample.sorted_spacings.tolist(), list(kb.q)]
    _emit(args, argv, meta, ("i", "spacing", "sorted_spacing", "q"), columns)
    return EXIT_OK


def cmd_exponent(args, argv):
    kb, meta = _keyboard(args)
    rep = _exponent(kb)
    header = ("K", "R0", "beta", "minus_beta", "b", "C1", "C2", "residual")
    values = (kb.K, rep.R0, rep.beta, -rep.beta, rep.b, rep.C1, rep.C2, rep.residual)
    if args.format == "json":
        payload = {"provenance": io.provenance(argv, **meta)[2:].strip(),
                   **rep.to_dict(), "K": kb.K, "minus_beta": -rep.beta,
                   "alphas": rep.alphas.tolist()}
        io.write_text(io.json_text(payload), args.out)
    else:
        _emit(args, argv, meta, header, [[v] for v in values])
    return EXIT_OK


def cmd_enumerate(args, argv):
    kb, meta = _keyboard(args)
    _exponent(kb)
    _emit(args, argv, meta, io.RANKED_HEADER, io.ranked_columns(top_n(kb, args.N)))
    return EXIT_OK


def _csiszar(args, argv):
    kb, meta = _keyboard(args)
    rep = _exponent(kb)
    report = verify_csiszar_bounds(kb, _t_grid(args.tmax, args.tstep), report=rep)
    columns = [[getattr(r, f) for r in report] for f in ("t", "N", "Ncum", "lower", "upper", "ok")]
    bad = [r for r in report if not r.ok]
    _emit(args, argv, meta, io.COUNTS_HEADER, columns, {"violations": len(bad)})
    if bad:
        raise BoundViolation(f"{len(bad)} counting-bound violations, first at t = {bad[0].t}")
    return EXIT_OK


def _rankbounds(args, argv):
    kb, meta = _keyboard(args)
    rep = _exponent(kb)
    report = verify_rank_bounds(kb, top_n(kb, args.N), report=rep)
    columns = [report.rank.tolist(), report.log_base.tolist(), report.lower.tolist(),
               report.upper.tolist(), report.ok.tolist()]
    _emit(args, argv, meta, io.RANKBOUNDS_HEADER, columns, {"violations": report.violations})
    if report.violations:
        raise BoundViolation(f"{report.violations} rank-bound violations")
    return EXIT_OK


def _prop1(args, argv):
    kb, meta = _keyboard(args)
    _exponent(kb)
    res = verify_proposition1(kb)
    _emit(args, argv, meta, ("mu_bar", "minus_beta", "ratio", "holds"),
          [[res.mu_bar], [res.minus_beta], [res.ratio], [res.holds]])
    if not res.holds:
        raise BoundViolation(f"mean log {res.mu_bar!r} exceeds -beta {res.minus_beta!r}")
    return EXIT_OK


def cmd_verify(args, argv):
    if args.csiszar:
        return _csiszar(args, argv)
    if args.rankbounds:
        return _rankbounds(args, argv)
    return _prop1(args, argv)


def cmd_counts(args, argv):
    return _csiszar(args, argv)


def cmd_figure(args, argv):
    c, _ = _mass(args)
    seed = _seed(args)
    _exponent(figure_keyboard(args.kind, args.K, c, seed))
    series = figure1_data(args.kind, args.K, c, args.N, seed)
    meta = {"kind": args.kind, "K": args.K, "c": repr(c), "N": args.N}
    if args.kind != FigureKind.EQUAL.value:
        meta["seed"] = seed
    columns = [series.ranks.tolist(), series.log_rank.tolist(), series.log_base.tolist()]
    _emit(args, argv, meta, io.SERIES_HEADER, columns)
    return EXIT_OK


def cmd_sweep(args, argv):
    spec = _spec(args)
    c, _ = _mass(args)
    seed = _seed(args)
    result = convergence_sweep(spec, args.Ks, args.seeds, c, first_seed=seed, workers=args.workers)
    bad = [r for r in result.rows if not 1.0 < r.beta <= -r.mu_bar + 1e-12]
    columns = [[getattr(r, f) for r in result.rows] for f in io.SWEEP_HEADER]
    meta = {"spec": spec.kind.value, "c": repr(c), "seed": seed}
    medians = {str(k): v for k, v in result.medians().items()}
    _emit(args, argv, meta, io.SWEEP_HEADER, columns, {"medians": medians})
    if bad:
        raise BoundViolation(f"{len(bad)} sweep rows violate 1 < beta <= -mu_bar")
    return EXIT_OK


COMMANDS = {
    "sample": cmd_sample,
    "exponent": cmd_exponent,
    "enumerate": cmd_enumerate,
    "counts": cmd_counts,
    "verify": cmd_verify,
    "figure": cmd_figure,
    "sweep": cmd_sweep,
}


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:
        # --help and --version
        return exc.code or EXIT_OK
    except ResourceError as exc:
        print(f"monkeyzipf: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except BoundViolation as exc:
        print(f"monkeyzipf: bound violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ValueError, DegenerateSampleError, OSError, json.JSONDecodeError) as exc:
        print(f"monkeyzipf: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
