"""Command line interface.

Usage examples::

    confcap qm --A 7+5i --B -1+2i
    confcap table4 --format json
    confcap sweep-edi --family convex --count 200 --seed 1 --output convex.csv

Tables are written as CSV (header row, 15 significant digits) or JSON to
stdout, or to ``--output``. A relative output path, or the command name
when no path is given, is placed in ``$CONFCAP_OUTPUT_DIR`` if that is set.
Failed rows are reported on stderr as JSON and give exit status 1; usage
errors give exit status 2.

Complex literals are written ``a+bi`` with optional spaces; ``j`` may be
used for the imaginary unit and either part may be omitted (``3``, ``-i``).
"""

import argparse
import json
import math
import os
import sys

from . import tables
from .errors import ConfcapError
from .quadmod import qm, qmt

__all__ = ["build_parser", "main"]


def _complex_arg(text):
    try:
        return tables.parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {n}")
    return n


def _seed(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2^64)")
    return n


def _finite(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return x


def _spacing(text):
    x = _finite(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("grid spacing must be positive")
    return x


def build_parser():
    parser = argparse.ArgumentParser(
        prog="confcap",
        description="Capacities of planar condensers and moduli of quadrilaterals.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help="output file (default stdout)")
        return p

    def add_grid(p):
        p.add_argument("--h", type=_spacing, default=None,
                       help="coarsest grid spacing (default: chosen from the geometry)")
        p.add_argument("--levels", type=int, choices=(1, 2, 3), default=2,
                       help="number of grids in the Richardson extrapolation")

    for name in ("qm", "qmt"):
        p = add(name, f"modulus of the quadrilateral (0, 1, A, B) by {name.upper()}")
        p.add_argument("--A", type=_complex_arg, required=True)
        p.add_argument("--B", type=_complex_arg, required=True)

    add("table1", "moduli of the reference quadrilaterals with reciprocal residuals")
    add("table2", "capacities of rings between regular polygons")
    p = add("table3", "bounds and grid capacities for half disks")
    p.add_argument("--no-oracle", action="store_true", help="skip the grid capacities")
    add_grid(p)
    add("table4", "rectangle minus a slit: exact capacity and decomposition bound")
    add("lbnew", "split lower bound for half disks")

    p = add("sweep-edi", "random plates: perimeter, grid capacity and perimeter bounds")
    p.add_argument("--family", choices=tables.FAMILIES, required=True)
    p.add_argument("--count", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    add_grid(p)

    p = add("et-curve", "tube E(t) about a circular arc against the segment bound")
    p.add_argument("--theta", type=_finite, default=math.pi / 4)
    p.add_argument("--r", type=_finite, required=True)
    p.add_argument("--tmin", type=_finite, required=True)
    p.add_argument("--tmax", type=_finite, required=True)
    p.add_argument("--steps", type=_positive_int, default=10)
    add_grid(p)

    p = add("polygon-in-polygon", "nested C-shaped polygons: grid capacity and lower bound")
    p.add_argument("--t", type=_finite, nargs="+", default=[0.5, 1.0, 1.5, 2.0])
    add_grid(p)
    return parser


def _run(args):
    c = args.command
    if c in ("qm", "qmt"):
        value = (qm if c == "qm" else qmt)(args.A, args.B)
        return tables.Table(["A", "B", "modulus"], [[args.A, args.B, value]])
    if c == "table1":
        return tables.quadrilateral_table()
    if c == "table2":
        return tables.regular_ring_table()
    if c == "table3":
        return tables.half_disk_table(not args.no_oracle, args.h, args.levels)
    if c == "table4":
        return tables.rect_segment_table()
    if c == "lbnew":
        return tables.lbnew_table()
    if c == "sweep-edi":
        return tables.sweep_edi(args.family, args.count, args.seed, args.h, args.levels)
    if c == "et-curve":
        return tables.et_curve(args.theta, args.r, args.tmin, args.tmax, args.steps,
                               args.h, args.levels)
    if c == "polygon-in-polygon":
        return tables.polygon_in_polygon_table(args.t, args.h, args.levels)
    raise AssertionError(c)


def _render(table, fmt, command):
    if fmt == "json":
        return json.dumps({"command": command, "columns": table.columns,
                           "rows": table.to_records()}, indent=1) + "\n"
    if command in ("qm", "qmt"):
        return tables.format_value(table.rows[0][2]) + "\n"
    return table.to_csv()


def _destination(args):
    directory = os.environ.get("CONFCAP_OUTPUT_DIR")
    path = args.output
    if path is None and directory:
        path = f"{args.command}.{args.format}"
    if path is not None and directory and not os.path.isabs(path):
        path = os.path.join(directory, path)
    return path


def _report(errors, stream):
    stream.write(json.dumps({"errors": errors}) + "\n")


def _join_complex_values(argv):
    """Attach values such as ``-2+1i`` to --A/--B so they are not read as options."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--A", "--B") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_complex_values(argv))
    try:
        table = _run(args)
    except (ConfcapError, ValueError) as exc:
        _report([{"row": None, "error": type(exc).__name__, "message": str(exc)}], sys.stderr)
        return 2 if isinstance(exc, ValueError) and not isinstance(exc, ConfcapError) else 1
    text = _render(table, args.format, args.command)
    path = _destination(args)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    if table.errors:
        _report(table.errors, sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
