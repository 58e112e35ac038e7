"""Command-line interface: every computation as a subcommand writing CSV.

Each CSV starts with a block of ``#`` manifest lines, followed by a header
row and the data rows. Floats are written with ``repr`` so identical runs are
byte-identical apart from the timestamp line.

Exit codes: 0 success, 2 usage error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import math
import os
import sys
from collections.abc import Iterable, Sequence
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import __version__
from .arith import SumParams, cohen_sum, cohen_sum_table
from .bartz import evaluate_decomposition, functional_equation_check, residue_probe
from .config import RunManifest, TruncationConfig
from .explicit import explicit_c, explicit_psi
from .series import convergence_sweep, growth_exponent
from .zeta import (
    TABLE_ENV_VAR,
    ZeroTable,
    ZeroTableError,
    dump_zero_table,
    hardy_z,
    load_zero_table,
    parse_zero_text,
    refine_zero,
    zeta_eval,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(ValueError):
    pass


# -- parsing helpers ----------------------------------------------------------

def parse_complex(text: str) -> complex:
    """Parse ``a``, ``a+bi``, ``a-bi``, ``bi`` (``j`` accepted for ``i``)."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_cutoffs(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cutoffs must be comma-separated integers: {text!r}") from None
    if not values or any(v < 1 for v in values) or values != sorted(values):
        raise argparse.ArgumentTypeError("cutoffs must be ascending positive integers")
    return values


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _grid(xmin: float, xmax: float, step: float) -> list[float]:
    if xmax < xmin:
        raise UsageError(f"--xmax ({xmax}) is below --xmin ({xmin})")
    count = int(math.floor((xmax - xmin) / step + 1e-9)) + 1
    return [round(xmin + i * step, 12) for i in range(count)]


# -- output -------------------------------------------------------------------

@contextmanager
def _open_out(target: str):
    if target in ("-", ""):
        yield sys.stdout
    else:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="") as fh:
            yield fh


def render_csv(manifest: RunManifest, columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    for line in manifest.header_lines():
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(args: argparse.Namespace, manifest: RunManifest, columns, rows) -> None:
    with _open_out(args.out) as fh:
        fh.write(render_csv(manifest, columns, rows))


def _table(args: argparse.Namespace) -> ZeroTable:
    source = args.table or os.environ.get(TABLE_ENV_VAR) or "bundled"
    return load_zero_table(source)


def _manifest(args: argparse.Namespace, name: str, table: ZeroTable | None = None,
              **parameters) -> RunManifest:
    return RunManifest(
        subcommand=name, parameters=parameters,
        table_source=table.source if table is not None else "-",
        table_count=len(table) if table is not None else 0,
    )


# -- subcommands ----------------------------------------------------------------

def cmd_csum(args: argparse.Namespace) -> int:
    params = SumParams(args.n, args.beta)
    if args.qmin > args.qmax:
        raise UsageError("--qmin exceeds --qmax")
    table = cohen_sum_table(args.qmax, params)
    rows = [(q, int(table[q])) for q in range(args.qmin, args.qmax + 1)]
    manifest = _manifest(args, "csum", n=args.n, beta=args.beta, qmin=args.qmin, qmax=args.qmax)
    _emit(args, manifest, ("q", "c_q"), rows)
    return EXIT_OK


def _explicit_sweep(xs: Sequence[float], evaluate) -> list[tuple[float, float, float, float]]:
    rows = []
    for x in xs:
        ev = evaluate(x)
        rows.append((ev.x, ev.actual_sharp, ev.formula_total, ev.residual))
    return rows


def _explicit_common(args: argparse.Namespace, name: str, evaluate) -> int:
    table = _table(args)
    TruncationConfig(zero_pairs=args.pairs).check_table(len(table))
    xs = _grid(args.xmin, args.xmax, args.xstep)
    rows = _explicit_sweep(xs, lambda x: evaluate(x, table))
    manifest = _manifest(
        args, name, table, n=args.n, beta=args.beta, xmin=args.xmin, xmax=args.xmax,
        xstep=args.xstep, pairs=args.pairs, truncation_height=table.truncation_height(args.pairs),
    )
    _emit(args, manifest, ("x", "actual_sharp", "formula", "residual"), rows)
    if args.plot:
        from .plotting import plot_explicit

        plot_explicit({args.pairs: rows}, Path(args.plot), f"{name} n={args.n} beta={args.beta}")
    return EXIT_OK


def cmd_explicit_c(args: argparse.Namespace) -> int:
    params = SumParams(args.n, args.beta)
    tol = args.tol if args.tol is not None else 1e-16
    return _explicit_common(
        args, "explicit-c", lambda x, table: explicit_c(x, params, table, args.pairs, tol))


def cmd_explicit_psi(args: argparse.Namespace) -> int:
    SumParams(args.n, args.beta)
    if args.xmin <= args.n:
        raise UsageError(f"--xmin must exceed n={args.n}")
    tol = args.tol if args.tol is not None else 1e-17
    return _explicit_common(
        args, "explicit-psi",
        lambda x, table: explicit_psi(x, args.n, args.beta, table, args.pairs, tol))


def _series_rows(s: complex, params: SumParams, cutoffs: Sequence[int]):
    diag = convergence_sweep(s, params, cutoffs)
    return [
        (q, p.real, p.imag, diag.target.real, diag.target.imag, r)
        for q, p, r in zip(diag.cutoffs, diag.partials, diag.residuals)
    ]


def cmd_series(args: argparse.Namespace) -> int:
    params = SumParams(args.n, args.beta)
    if args.cutoffs is None and args.qmax is None:
        raise UsageError("give --cutoffs or --qmax")
    cutoffs = args.cutoffs if args.cutoffs is not None else list(range(1, args.qmax + 1))
    rows = _series_rows(args.s, params, cutoffs)
    s_text = f"{args.s.real!r}{args.s.imag:+}i"
    manifest = _manifest(args, "series", s=s_text, n=args.n, beta=args.beta,
                         cutoffs=f"{cutoffs[0]}..{cutoffs[-1]} ({len(cutoffs)})")
    _emit(args, manifest, ("Q", "partial_re", "partial_im", "target_re", "target_im", "residual"), rows)
    if args.plot:
        from .plotting import plot_partial_sums

        label = f"partial - target, s={s_text}, n={args.n}, beta={args.beta}"
        plot_partial_sums([(label, [r[0] for r in rows], [r[1] - r[3] for r in rows])],
                          Path(args.plot))
    return EXIT_OK


def _config(args: argparse.Namespace) -> TruncationConfig:
    return TruncationConfig(zero_pairs=args.pairs, q_cutoff=args.qcut, t_cut=args.t_cut,
                            quad_step=args.quad_step)


def cmd_bartz(args: argparse.Namespace) -> int:
    params = SumParams(args.n, args.beta)
    cfg = _config(args)
    common = dict(n=args.n, beta=args.beta, pairs=cfg.zero_pairs, q_cutoff=cfg.q_cutoff)
    if args.mode == "residue":
        manifest = _manifest(args, "bartz residue", eps=args.eps, **common)
        rows = []
        for q in args.q:
            value = residue_probe(q, params, eps=args.eps, cfg=cfg)
            expected = -cohen_sum(q, params) / (2j * cmath.pi)
            rows.append((q, value.real, value.imag, expected.real, expected.imag,
                         abs(value - expected) / abs(expected)))
        _emit(args, manifest, ("q", "residue_re", "residue_im", "expected_re", "expected_im",
                               "rel_error"), rows)
        return EXIT_OK

    table = _table(args)
    cfg.check_table(len(table))
    manifest = _manifest(args, f"bartz {args.mode}", table, **common)
    rows = []
    if args.mode == "decomp":
        for z in args.z:
            ev = evaluate_decomposition(z, params, table, cfg)
            rows.append((z.real, z.imag, ev.varpi_zero_sum.real, ev.varpi_zero_sum.imag,
                         ev.varpi1.real, ev.varpi1.imag, ev.varpi2.real, ev.varpi2.imag,
                         ev.varpi3.real, ev.varpi3.imag, abs(ev.decomposition_residual)))
        columns = ("z_re", "z_im", "zero_sum_re", "zero_sum_im", "varpi1_re", "varpi1_im",
                   "varpi2_re", "varpi2_im", "varpi3_re", "varpi3_im", "residual")
    else:
        for z in args.z:
            chk = functional_equation_check(z, params, table, cfg)
            rows.append((z.real, z.imag, chk.lhs.real, chk.lhs.imag, chk.a_derived.real,
                         chk.a_derived.imag, abs(chk.residual_derived), abs(chk.residual_stated)))
        columns = ("z_re", "z_im", "lhs_re", "lhs_im", "a_re", "a_im", "residual",
                   "residual_stated_form")
    _emit(args, manifest, columns, rows)
    return EXIT_OK


def _sign_change(gamma: float, delta: float = 1e-3) -> bool:
    lo, hi = hardy_z(np.array([gamma - delta, gamma + delta]))
    return bool(np.sign(lo) != np.sign(hi))


def cmd_zeros(args: argparse.Namespace) -> int:
    source = args.source or args.table or os.environ.get(TABLE_ENV_VAR) or "bundled"
    if args.action == "dump":
        table = load_zero_table(source)
        with _open_out(args.out) as fh:
            fh.write(dump_zero_table(table, header=f"ramsum {__version__} zero table ({len(table)} ordinates)"))
        return EXIT_OK

    tol = args.tol if args.tol is not None else 1e-8
    if source == "bundled":
        from importlib import resources

        text = resources.files("ramsum.data").joinpath("zeros100.txt").read_text("utf-8")
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ZeroTableError(f"cannot read zero table {source}: {exc}") from None
    seeds = parse_zero_text(text)
    rows = []
    failures = 0
    for k, seed in enumerate(seeds, start=1):
        refined = refine_zero(seed)
        residual = abs(zeta_eval(complex(0.5, refined)))
        if args.action == "verify":
            ok = residual < tol and _sign_change(refined)
            failures += not ok
            rows.append((k, refined, residual, _sign_change(refined), ok))
        else:
            rows.append((k, seed, refined, refined - seed, residual))
    manifest = RunManifest(subcommand=f"zeros {args.action}", parameters={"tol": tol},
                           table_source=source, table_count=len(seeds))
    columns = (("index", "gamma", "abs_zeta", "sign_change", "ok") if args.action == "verify"
               else ("index", "gamma_seed", "gamma_refined", "shift", "abs_zeta"))
    _emit(args, manifest, columns, rows)
    if failures:
        print(f"ramsum: {failures} of {len(seeds)} ordinates failed verification", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_growth(args: argparse.Namespace) -> int:
    params = SumParams(args.n, args.beta)
    exponent = growth_exponent(params, args.xmax)
    manifest = _manifest(args, "growth", n=args.n, beta=args.beta, xmax=args.xmax)
    _emit(args, manifest, ("n", "beta", "xmax", "exponent"), [(args.n, args.beta, args.xmax, exponent)])
    return EXIT_OK


_EXPLICIT_FIGURES = (
    ("fig1", 12, 1, 5.0),
    ("fig2", 24, 2, 1.0),
    ("fig3", 810, 3, 1.0),
)
_SERIES_FIGURES = (
    ("fig4", ((1.0, 1), (1.0, 2))),
    ("fig5", ((2.0, 2), (3.0, 3))),
)


def cmd_figures(args: argparse.Namespace) -> int:
    """Write CSV data and a PNG for each of the five reference figures."""
    from .plotting import plot_explicit, plot_partial_sums

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = _table(args)
    written = []
    for name, n, beta, xmin in _EXPLICIT_FIGURES:
        params = SumParams(n, beta)
        xs = _grid(xmin, 100.0, args.xstep)
        sweeps = {}
        for pairs in (5, 25):
            rows = _explicit_sweep(xs, lambda x: explicit_c(x, params, table, pairs))
            sweeps[pairs] = rows
            manifest = _manifest(args, "figures", table, figure=name, n=n, beta=beta, xmin=xmin,
                                 xmax=100.0, xstep=args.xstep, pairs=pairs,
                                 truncation_height=table.truncation_height(pairs))
            path = out_dir / f"{name}_pairs{pairs}.csv"
            path.write_text(render_csv(manifest, ("x", "actual_sharp", "formula", "residual"), rows),
                            encoding="utf-8")
            written.append(path)
        written.append(plot_explicit(sweeps, out_dir / f"{name}.png", f"n={n}, beta={beta}"))
    cutoffs = list(range(1, 1001))
    for name, configs in _SERIES_FIGURES:
        panels = []
        for s, beta in configs:
            params = SumParams(24, beta)
            rows = _series_rows(s, params, cutoffs)
            manifest = _manifest(args, "figures", figure=name, s=s, n=24, beta=beta, qmax=1000)
            path = out_dir / f"{name}_beta{beta}.csv"
            path.write_text(render_csv(manifest, ("Q", "partial_re", "partial_im", "target_re",
                                                  "target_im", "residual"), rows), encoding="utf-8")
            written.append(path)
            # the target is 0 at s = 1, so both figure types plot partial - target
            panels.append((f"s={s:g}, n=24, beta={beta}: partial - target",
                           [r[0] for r in rows], [r[1] - r[3] for r in rows]))
        written.append(plot_partial_sums(panels, out_dir / f"{name}.png"))
    for path in written:
        print(path)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramsum",
        description="Generalized Ramanujan sums, explicit formulas and Bartz functions.",
    )
    parser.add_argument("--version", action="version", version=f"ramsum {__version__}")

    io_opts = argparse.ArgumentParser(add_help=False)
    io_opts.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    io_opts.add_argument("--table", default=None,
                         help=f"zero-table file ('bundled' or unset: packaged table; env {TABLE_ENV_VAR})")
    io_opts.add_argument("--tol", type=positive_float, default=None, help="series/verification tolerance")

    arith_opts = argparse.ArgumentParser(add_help=False)
    arith_opts.add_argument("--n", type=positive_int, required=True)
    arith_opts.add_argument("--beta", type=positive_int, required=True)

    grid_opts = argparse.ArgumentParser(add_help=False)
    grid_opts.add_argument("--xmin", type=positive_float, required=True)
    grid_opts.add_argument("--xmax", type=positive_float, required=True)
    grid_opts.add_argument("--xstep", type=positive_float, default=0.5)
    grid_opts.add_argument("--pairs", type=int, default=25, help="zero pairs (default 25)")
    grid_opts.add_argument("--plot", default=None, help="also render a PNG to this path")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("csum", parents=[io_opts, arith_opts], help="table of c_q^(beta)(n)")
    p.add_argument("--qmin", type=positive_int, default=1)
    p.add_argument("--qmax", type=positive_int, required=True)
    p.set_defaults(func=cmd_csum)

    p = sub.add_parser("explicit-c", parents=[io_opts, arith_opts, grid_opts],
                       help="explicit formula for the summatory function of c_q")
    p.set_defaults(func=cmd_explicit_c)

    p = sub.add_parser("explicit-psi", parents=[io_opts, arith_opts, grid_opts],
                       help="explicit formula for psi_m^(beta); --n is m")
    p.set_defaults(func=cmd_explicit_psi)

    p = sub.add_parser("series", parents=[io_opts, arith_opts], help="Dirichlet-series partial sums")
    p.add_argument("--s", type=parse_complex, required=True, help='complex point, e.g. "2+1i"')
    group = p.add_mutually_exclusive_group()
    group.add_argument("--cutoffs", type=parse_cutoffs, default=None, help="e.g. 100,1000,10000")
    group.add_argument("--qmax", type=positive_int, default=None, help="every cutoff 1..qmax")
    p.add_argument("--plot", default=None, help="also render a PNG to this path")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("bartz", parents=[io_opts, arith_opts], help="Bartz-function checks")
    p.add_argument("mode", choices=("fe", "decomp", "residue"))
    p.add_argument("--z", type=parse_complex, action="append", default=None,
                   help="evaluation point (repeatable), e.g. 2+1i")
    p.add_argument("--q", type=positive_int, action="append", default=None,
                   help="pole index for 'residue' (repeatable)")
    p.add_argument("--eps", type=positive_float, default=1e-3)
    p.add_argument("--pairs", type=positive_int, default=100)
    p.add_argument("--qcut", type=positive_int, default=10_000)
    p.add_argument("--t-cut", dest="t_cut", type=positive_float, default=None)
    p.add_argument("--quad-step", dest="quad_step", type=positive_float, default=0.25)
    p.set_defaults(func=cmd_bartz)

    p = sub.add_parser("zeros", parents=[io_opts], help="verify, refine or dump a zero table")
    p.add_argument("action", choices=("verify", "refine", "dump"))
    p.add_argument("source", nargs="?", default=None, help="table path or 'bundled'")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("growth", parents=[io_opts, arith_opts], help="growth exponent of the summatory c_q")
    p.add_argument("--xmax", type=positive_int, required=True)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("figures", parents=[io_opts], help="CSV + PNG for the five reference figures")
    p.add_argument("--out-dir", default="figures")
    p.add_argument("--xstep", type=positive_float, default=0.05)
    p.set_defaults(func=cmd_figures)
    return parser


def _check_bartz_args(args: argparse.Namespace) -> None:
    if args.mode == "residue" and not args.q:
        raise UsageError("bartz residue needs at least one --q")
    if args.mode != "residue" and not args.z:
        raise UsageError(f"bartz {args.mode} needs at least one --z")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bartz":
            _check_bartz_args(args)
        return args.func(args)
    except ZeroTableError as exc:
        print(f"ramsum: zero table: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ArithmeticError, ZeroDivisionError) as exc:
        print(f"ramsum: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"ramsum: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
