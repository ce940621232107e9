"""Row builders behind the command line: reference tables, sweeps and curves.

Every builder returns a :class:`Table`. Rows that fail are kept with their
error recorded, so one bad case does not stop a sweep.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .capforms import (
    RectSegmentSpec,
    cap_disk_by_perimeter,
    cap_rect_segment,
    cap_segment,
    et_max_t,
    et_perimeter,
    halfdisk_bounds,
    mod_annulus,
)
from .capsolve import UNIT_DISK, Condenser, estimate_capacity
from .errors import ConfcapError, ConstraintError
from .geomgen import (
    SeededRng,
    build_Et,
    build_halfdisk,
    gen_convex_polygon,
    gen_nonconvex_polygon,
    hyperbolic_polygon,
    polygon_in_polygon,
)
from .hypgeom import PiecewiseCurve, polygon_hyp_perimeter
from .quadmod import qm
from .ringbound import cap_regular_ring, rect_segment_lower_bound, ring_lower_bound
from .specfun import mu

__all__ = [
    "FAMILIES",
    "Table",
    "et_curve",
    "format_value",
    "half_disk_table",
    "load_reference",
    "lbnew_table",
    "parse_complex",
    "polygon_in_polygon_table",
    "quadrilateral_table",
    "rect_segment_table",
    "regular_ring_table",
    "sweep_edi",
]

FAMILIES = ("convex", "hyperbolic", "nonconvex")


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def add_error(self, row, exc):
        self.errors.append({"row": row, "error": type(exc).__name__, "message": str(exc)})

    def to_csv(self):
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(v) for v in row])
        return out.getvalue()

    def to_records(self):
        return [
            {c: _json_value(v) for c, v in zip(self.columns, row)} for row in self.rows
        ]


def format_value(v):
    """Fixed text form: 15 significant digits, complex numbers as a+bi."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, complex):
        sign = "-" if math.copysign(1.0, v.imag) < 0 else "+"
        return f"{v.real:.15g}{sign}{abs(v.imag):.15g}i"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.15g}"
    return "" if v is None else str(v)


def _json_value(v):
    if isinstance(v, complex):
        return format_value(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else format_value(v)
    if isinstance(v, (np.integer, np.bool_)):
        return v.item()
    return v


def parse_complex(text):
    """Parse a complex literal such as ``7+5i``, ``-1 + 2i``, ``3``, ``-i``.

    The imaginary unit is written i or j; spaces are ignored.
    """
    s = str(text).replace(" ", "").replace("i", "j")
    if not s or s.count("j") > 1 or ("j" in s and not s.endswith("j")):
        raise ValueError(f"malformed complex literal {text!r}")
    if s.endswith("j") and (len(s) == 1 or s[-2] in "+-"):
        s = s[:-1] + "1j"
    try:
        z = complex(s)
    except ValueError:
        raise ValueError(f"malformed complex literal {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex literal {text!r}")
    return z


def load_reference(name):
    """Rows of an embedded reference file as dicts of strings."""
    text = resources.files("confcap").joinpath("data", name).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(lines))


def quadrilateral_table():
    table = Table(["A", "B", "modulus", "reference", "abs_deviation", "reciprocal_residual"])
    for i, ref in enumerate(load_reference("quadrilateral_moduli.csv")):
        A, B = parse_complex(ref["A"]), parse_complex(ref["B"])
        try:
            value = qm(A, B)
            dual = qm((B - 1.0) / (A - 1.0), -1.0 / (A - 1.0))
        except ConfcapError as exc:
            table.add_error(i, exc)
            continue
        expected = float(ref["modulus"])
        table.rows.append([A, B, value, expected, abs(value - expected), abs(value * dual - 1.0)])
    return table


def regular_ring_table():
    table = Table(["m", "lambda", "capacity", "reference", "abs_deviation"])
    for i, ref in enumerate(load_reference("regular_rings.csv")):
        lam = float(ref["lambda"])
        try:
            if ref["m"] == "inf":
                value = mod_annulus(lam, 1.0)
                m = "inf"
            else:
                m = int(ref["m"])
                value = cap_regular_ring(m, lam)
        except ConfcapError as exc:
            table.add_error(i, exc)
            continue
        expected = float(ref["capacity"])
        table.rows.append([m, lam, value, expected, abs(value - expected)])
    return table


_BOUND_COLUMNS = ("symmetrization", "perimeter_segment", "split", "perimeter_disk")


def half_disk_table(oracle=True, h=None, levels=2):
    """Bounds for half disks and, with ``oracle``, grid capacities at x = 0.5, 0.75."""
    columns = ["t"]
    for name in _BOUND_COLUMNS:
        columns += [name, name + "_abs_deviation"]
    if oracle:
        for x in ("x05", "x075"):
            columns += [f"cap_{x}", f"cap_{x}_error", f"cap_{x}_rel_deviation"]
    table = Table(columns)
    for i, ref in enumerate(load_reference("half_disks.csv")):
        t = float(ref["t"])
        try:
            bounds = halfdisk_bounds(t)
            row = [t]
            for name in _BOUND_COLUMNS:
                value = bounds.value(name.replace("_", "-"))
                row += [value, abs(value - float(ref[name]))]
            if oracle:
                for x, key in ((0.5, "cap_x05"), (0.75, "cap_x075")):
                    value, err = estimate_capacity(build_halfdisk(x, t), levels, h)
                    expected = float(ref[key])
                    row += [value, err, abs(value - expected) / expected]
        except ConfcapError as exc:
            table.add_error(i, exc)
            continue
        table.rows.append(row)
    return table


def lbnew_table():
    table = Table(["t", "lower_bound", "reference", "abs_deviation", "capacity_reference"])
    for i, ref in enumerate(load_reference("half_disks.csv")):
        t = float(ref["t"])
        value = halfdisk_bounds(t).value("split")
        expected = float(ref["split"])
        table.rows.append([t, value, expected, abs(value - expected), float(ref["cap_x05"])])
    return table


def rect_segment_table():
    table = Table(["a", "b", "c", "d", "capacity", "reference", "rel_deviation",
                   "lower_bound", "lower_reference", "lower_rel_deviation"])
    for i, ref in enumerate(load_reference("rect_segments.csv")):
        spec = RectSegmentSpec(*(float(ref[k]) for k in "abcd"))
        try:
            cap = cap_rect_segment(spec)
            lower = rect_segment_lower_bound(spec)
        except ConfcapError as exc:
            table.add_error(i, exc)
            continue
        cref, lref = float(ref["capacity"]), float(ref["lower_bound"])
        table.rows.append([spec.a, spec.b, spec.c, spec.d, cap, cref, abs(cap - cref) / cref,
                           lower, lref, abs(lower - lref) / lref])
    return table


def _family_plate(family, rng):
    """Plate curve and its hyperbolic perimeter for one draw of a family."""
    if family == "convex":
        v = gen_convex_polygon(rng)
        curve = PiecewiseCurve.polygon(v)
        return len(v), curve, curve.hyperbolic_perimeter()
    if family == "hyperbolic":
        v = gen_convex_polygon(rng)
        return len(v), hyperbolic_polygon(v), polygon_hyp_perimeter(v)
    if family == "nonconvex":
        v = gen_nonconvex_polygon(rng)
        curve = PiecewiseCurve.polygon(v)
        return len(v), curve, curve.hyperbolic_perimeter()
    raise ValueError(f"unknown family {family!r}")


def sweep_edi(family, count, seed, h=None, levels=2):
    """Perimeter and three capacities for ``count`` random plates.

    cap_E is the grid estimate for the plate, cap_D the capacity of the
    hyperbolic disk with the same perimeter and cap_I that of the segment
    with the same perimeter. Row k draws from stream k of the seed.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    table = Table(["index", "m", "perimeter", "cap_E", "cap_E_error", "cap_D", "cap_I"])
    root = SeededRng(seed)
    for k in range(count):
        try:
            m, curve, L = _family_plate(family, root.spawn(k))
            cap_e, err = estimate_capacity(Condenser(UNIT_DISK, curve), levels, h)
            cap_d = cap_disk_by_perimeter(L)
            cap_i = cap_segment(math.tanh(0.25 * L))
        except ConfcapError as exc:
            table.add_error(k, exc)
            continue
        table.rows.append([k, m, L, cap_e, err, cap_d, cap_i])
    return table


def et_curve(theta, r, tmin, tmax, steps, h=None, levels=2):
    """Grid capacity of E(t) against the segment of equal perimeter."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    top = et_max_t(theta, r)
    ts = [tmin] if steps == 1 else [float(t) for t in np.linspace(tmin, tmax, steps)]
    for t in ts:
        if not 0 < t <= top * (1.0 + 1e-12):
            raise ConstraintError(f"t = {t!r} outside the admissible range (0, {top!r}]")
    table = Table(["t", "perimeter", "cap_Et", "cap_Et_error", "cap_It", "difference"])
    for k, t in enumerate(ts):
        try:
            L = et_perimeter(theta, r, t)
            cap_e, err = estimate_capacity(Condenser(UNIT_DISK, build_Et(theta, r, t)), levels, h)
            cap_i = 2.0 * math.pi / mu(math.tanh(0.25 * L))
        except ConfcapError as exc:
            table.add_error(k, exc)
            continue
        table.rows.append([float(t), L, cap_e, err, cap_i, cap_e - cap_i])
    return table


def polygon_in_polygon_table(ts, h=None, levels=2):
    """Grid capacity and decomposition lower bound for the nested C-shapes."""
    table = Table(["t", "capacity", "capacity_error", "lower_bound", "upper_bound"])
    for k, t in enumerate(ts):
        try:
            geom = polygon_in_polygon(t)
            lower = ring_lower_bound(geom.ring())
            cap, err = estimate_capacity(geom.condenser(), levels, h)
        except ConfcapError as exc:
            table.add_error(k, exc)
            continue
        table.rows.append([float(t), cap, err, lower, "unavailable"])
    return table
