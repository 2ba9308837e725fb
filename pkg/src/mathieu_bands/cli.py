"""Command-line front end: sweeps over eta and nu written as CSV or JSON.

Exit codes: 0 success, 2 bad invocation, 3 numerical failure.  Errors are
also written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import asymptotics as asy
from .core import (
    DEFAULT_TOL,
    MathieuParams,
    band_edges,
    characteristic_values,
    effective_voltage_numeric,
    floquet_state,
    max_truncation,
    truncation_for,
)
from .errors import NumericalError
from .hill import DEFAULT_F_COEF, effective_voltage_semianalytic
from .matelems import cos_nm, ho_reference, sin_nm, z2_nm, z_nm


EXIT_USAGE = 2
EXIT_NUMERICAL = 3

COMMANDS = ("bands", "stability", "compare", "matelems", "voltage")


class SpecError(ValueError):
    """Invalid sweep specification (exit code 2)."""


# -- Josephson notation ------------------------------------------------------
# a = E / E_C, eta = E_J / (2 E_C), q = nu / 2, V = (E_C / 2e) da/dnu


def to_mathieu(E_J: float, E_C: float, q: float, E: float) -> tuple[float, float, float]:
    """(E_J, E_C, q, E) -> (eta, nu, a)."""
    return E_J / (2.0 * E_C), 2.0 * q, E / E_C


def from_mathieu(eta: float, nu: float, a: float, E_C: float) -> tuple[float, float, float]:
    """(eta, nu, a) at charging energy E_C -> (E_J, q, E)."""
    return 2.0 * eta * E_C, nu / 2.0, a * E_C


def voltage_physical(dadnu: float, E_C: float) -> float:
    """e * V for a given da/dnu, i.e. E_C da/dnu / 2 in energy units."""
    return 0.5 * E_C * dadnu


# -- sweep specification -----------------------------------------------------


@dataclass
class SweepSpec:
    quantity: str
    etas: list[float]
    nus: list[float]
    bands: list[int]
    truncation: str | int = "auto"
    tol: float = DEFAULT_TOL
    fmt: str = "csv"
    notation: str = "mathieu"
    ec: float | None = None
    f_coef: float = DEFAULT_F_COEF

    def validate(self):
        if self.quantity not in COMMANDS:
            raise SpecError(f"unknown quantity {self.quantity!r}")
        if not self.etas:
            raise SpecError("empty eta grid")
        for eta in self.etas:
            if not (math.isfinite(eta) and eta >= 0):
                raise SpecError(f"eta must be finite and >= 0, got {eta!r}")
        for nu in self.nus:
            if not math.isfinite(nu):
                raise SpecError(f"nu must be finite, got {nu!r}")
        if not self.bands or any(b < 0 for b in self.bands):
            raise SpecError(f"band indices must be >= 0, got {self.bands!r}")
        if not (self.tol > 0):
            raise SpecError(f"tol must be > 0, got {self.tol!r}")
        if self.truncation != "auto":
            n = self.truncation
            if n < 1:
                raise SpecError(f"truncation must be >= 1, got {n}")
            if n > max_truncation():
                raise SpecError(f"truncation {n} exceeds MATHIEU_MAX_N={max_truncation()}")
            if max(self.bands) >= 2 * n + 1:
                raise SpecError(f"band {max(self.bands)} needs truncation > {max(self.bands) // 2}")
        if self.fmt not in ("csv", "json"):
            raise SpecError(f"format must be csv or json, got {self.fmt!r}")
        if self.notation not in ("mathieu", "josephson"):
            raise SpecError(f"notation must be mathieu or josephson, got {self.notation!r}")
        if self.notation == "josephson" and not (self.ec is not None and self.ec > 0):
            raise SpecError("josephson notation requires --ec > 0")
        if self.quantity == "voltage" and any(not 0 <= nu <= 1 for nu in self.nus):
            raise SpecError("voltage sweep needs nu in [0, 1]")
        if self.quantity == "matelems" and 0.0 in self.etas:
            raise SpecError("matelems needs eta > 0 (oscillator references)")
        return self

    def params(self, eta: float) -> MathieuParams:
        if self.truncation == "auto":
            n = truncation_for(eta, self.tol)
            # enough Fourier modes for the highest requested band
            n = max(n, max(self.bands) // 2 + 2)
            return MathieuParams(eta, n, self.tol)
        return MathieuParams(eta, int(self.truncation), self.tol)

    @property
    def josephson(self) -> bool:
        return self.notation == "josephson"


def linspace(start: float, stop: float, count: int, scale: str = "linear") -> list[float]:
    if count < 2:
        raise SpecError(f"range count must be >= 2, got {count}")
    if scale == "log":
        if not (start > 0 and stop > 0):
            raise SpecError("log ranges need start > 0 and stop > 0")
        return np.geomspace(start, stop, count).tolist()
    if scale != "linear":
        raise SpecError(f"scale must be linear or log, got {scale!r}")
    return np.linspace(start, stop, count).tolist()


# -- tables ------------------------------------------------------------------


@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    meta: dict


def _fmt_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {"meta": table.meta, "columns": table.columns, "rows": table.rows}
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_fmt_cell(x) for x in row])
    return buf.getvalue()


def _meta(spec: SweepSpec, truncations: list[int]) -> dict:
    meta = {
        "tool": "mathieu-bands",
        "version": __version__,
        "command": spec.quantity,
        "notation": spec.notation,
        "eta": spec.etas,
        "truncation": truncations,
        "tol": spec.tol,
    }
    if spec.josephson:
        meta["E_C"] = spec.ec
        meta["units"] = "energies in units of E_C's unit; V column is e*V = E_C/2 * da/dnu"
    return meta


# -- commands ----------------------------------------------------------------


def cmd_bands(spec: SweepSpec) -> Table:
    """a_m(nu) for the requested bands plus the ground-band voltage da/dnu."""
    M = max(spec.bands)
    if spec.josephson:
        cols = ["E_J", "E_C", "q"] + [f"E_{m}" for m in spec.bands] + ["V_0"]
    else:
        cols = ["eta", "nu"] + [f"a_{m}" for m in spec.bands] + ["V_0"]
    rows, ns = [], []
    for eta in spec.etas:
        p = spec.params(eta)
        ns.append(p.truncation)
        for nu in spec.nus:
            vals = characteristic_values(p, nu, M + 1)
            a = [float(vals[m]) for m in spec.bands]
            v = effective_voltage_numeric(p, nu, 0)
            if spec.josephson:
                E_J, q, _ = from_mathieu(eta, nu, 0.0, spec.ec)
                rows.append([E_J, spec.ec, q] + [x * spec.ec for x in a]
                            + [voltage_physical(v, spec.ec)])
            else:
                rows.append([eta, nu] + a + [v])
    return Table(cols, rows, _meta(spec, ns))


def _edge_names(m: int) -> tuple[str, str]:
    return f"a_{m}", f"b_{m + 1}"


def cmd_stability(spec: SweepSpec) -> Table:
    """Band edges a_m, b_{m+1} for m = 0..max(bands) at each eta."""
    M = max(spec.bands)
    names = [name for m in range(M + 1) for name in _edge_names(m)]
    if spec.josephson:
        cols = ["E_J", "E_C"] + ["E_" + n for n in names]
    else:
        cols = ["eta"] + names
    rows, ns = [], []
    for eta in spec.etas:
        p = spec.params(eta)
        ns.append(p.truncation)
        edges = []
        for m in range(M + 1):
            e = band_edges(p, m)
            edges += [e.a_lo, e.b_hi]
        if spec.josephson:
            rows.append([2.0 * eta * spec.ec, spec.ec] + [x * spec.ec for x in edges])
        else:
            rows.append([eta] + edges)
    return Table(cols, rows, _meta(spec, ns))


def compare_reports(eta: float, p: MathieuParams) -> list[tuple[str, asy.ApproxReport]]:
    """Every analytic method against its numerical reference at one eta."""
    e0 = band_edges(p, 0)
    e1 = band_edges(p, 1)
    e2 = band_edges(p, 2)
    out = []

    def add(quantity, method, value, reference):
        out.append((quantity, asy.ApproxReport.compare(method, eta, value, reference)))

    add("a_0", "mclachlan_a0", asy.mclachlan_a0(eta), e0.a_lo)
    add("b_1", "mclachlan_b1", asy.mclachlan_b1(eta), e0.b_hi)
    add("a_1", "mclachlan_a1", asy.mclachlan_a1(eta), e1.a_lo)
    add("bandwidth_0", "mclachlan", asy.mclachlan_bandwidth(eta), e0.width)
    add("gap_0", "mclachlan", asy.mclachlan_gap(eta), e1.a_lo - e0.b_hi)
    if eta > 0:
        mean0 = 0.5 * (e0.a_lo + e0.b_hi)
        mean1 = 0.5 * (e1.a_lo + e1.b_hi)
        gap0 = e1.a_lo - e0.b_hi
        gap1 = e2.a_lo - e1.b_hi
        add("mean_0", "fp_an", asy.fp_characteristic(eta, 0), mean0)
        add("mean_0", "ho_energy", asy.ho_energy(eta, 0), mean0)
        add("mean_1", "fp_an", asy.fp_characteristic(eta, 1), mean1)
        add("mean_1", "ho_energy", asy.ho_energy(eta, 1), mean1)
        add("bandwidth_0", "tb", asy.tb_bandwidth(eta), e0.width)
        add("bandwidth_0", "tb_t0", asy.tb_bandwidth_t0(eta), e0.width)
        add("gap_0", "ho_4sqrt", asy.ho_gap(eta), gap0)
        add("gap_0", "ho_4sqrt_minus_1", asy.ho_gap_shifted(eta), gap0)
        add("gap_0", "fp_gap0", asy.fp_gap0(eta), gap0)
        add("gap_1", "fp_gap", asy.fp_gap(eta, 1), gap1)
    return out


def cmd_compare(spec: SweepSpec) -> Table:
    """Every closed form against the numerical reference, with abs/rel errors."""
    cols = ["E_J" if spec.josephson else "eta", "quantity", "method",
            "value", "reference", "abs_err", "rel_err"]
    rows, ns = [], []
    for eta in spec.etas:
        p = spec.params(eta)
        ns.append(p.truncation)
        for quantity, r in compare_reports(eta, p):
            if spec.josephson:
                s = spec.ec
                rows.append([2.0 * eta * s, quantity, r.method, r.value * s,
                             r.reference * s, r.abs_err * s, r.rel_err])
            else:
                rows.append([eta, quantity, r.method, r.value, r.reference,
                             r.abs_err, r.rel_err])
    return Table(cols, rows, _meta(spec, ns))


def cmd_matelems(spec: SweepSpec) -> Table:
    """|phi_nm|, |phi^2_nm|, cos_nm, sin_nm for all pairs n <= m of the bands."""
    cols = ["E_J" if spec.josephson else "eta", "q" if spec.josephson else "nu",
            "n", "m", "z_abs", "z2_abs", "cos_re", "sin_im", "ho_z", "ho_z2"]
    rows, ns = [], []
    bands = sorted(set(spec.bands))
    for eta in spec.etas:
        p = spec.params(eta)
        ns.append(p.truncation)
        for nu in spec.nus:
            states = {m: floquet_state(p, nu, m) for m in bands}
            for i, n in enumerate(bands):
                for m in bands[i:]:
                    bra, ket = states[n], states[m]
                    x = eta * 2.0 * spec.ec if spec.josephson else eta
                    y = states[n].nu / 2.0 if spec.josephson else states[n].nu
                    rows.append([
                        x, y, n, m,
                        abs(z_nm(bra, ket)), abs(z2_nm(bra, ket)),
                        cos_nm(bra, ket).real, sin_nm(bra, ket).imag,
                        ho_reference("z", eta, n, m), ho_reference("z2", eta, n, m),
                    ])
    return Table(cols, rows, _meta(spec, ns))


def cmd_voltage(spec: SweepSpec) -> Table:
    """Ground-band da/dnu, numerical and from the interpolating formula."""
    cols = (["E_J", "q"] if spec.josephson else ["eta", "nu"]) + [
        "V_numeric", "V_semianalytic", "error"]
    rows, ns = [], []
    for eta in spec.etas:
        p = spec.params(eta)
        ns.append(p.truncation)
        for nu in spec.nus:
            vn = effective_voltage_numeric(p, nu, 0)
            vs = effective_voltage_semianalytic(eta, nu, spec.f_coef)
            if spec.josephson:
                s = spec.ec
                rows.append([2.0 * eta * s, nu / 2.0, voltage_physical(vn, s),
                             voltage_physical(vs, s), voltage_physical(abs(vs - vn), s)])
            else:
                rows.append([eta, nu, vn, vs, abs(vs - vn)])
    meta_spec = _meta(spec, ns)
    meta_spec["f_coef"] = spec.f_coef
    return Table(cols, rows, meta_spec)


RUNNERS = {
    "bands": cmd_bands,
    "stability": cmd_stability,
    "compare": cmd_compare,
    "matelems": cmd_matelems,
    "voltage": cmd_voltage,
}

DEFAULTS = {
    "bands": {"eta": [0.0, 0.3], "nu": (0.0, 1.0, 21), "bands": [0, 1, 2]},
    "stability": {"eta_range": (0.0, 10.0, 21), "nu": None, "bands": [0, 1, 2]},
    "compare": {"eta": [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0], "nu": None, "bands": [0]},
    "matelems": {"eta": [4.0, 16.0, 64.0], "nu_values": [0.0], "bands": [0, 1, 2]},
    "voltage": {"eta": [0.0, 0.1, 0.5, 2.0], "nu": (0.0, 1.0, 21), "bands": [0]},
}


# -- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("UsageError", message, EXIT_USAGE)
        self.exit(EXIT_USAGE)


def _emit_error(kind: str, message: str, code: int):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")


def _band_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bands must be comma-separated integers, got {text!r}")


def _truncation(text: str):
    if text == "auto":
        return "auto"
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"truncation must be 'auto' or an integer, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mathieu-bands", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=RUNNERS[name].__doc__.splitlines()[0])
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--eta", type=float, nargs="+", metavar="ETA")
        g.add_argument("--eta-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
        sp.add_argument("--eta-scale", choices=("linear", "log"), default="linear")
        h = sp.add_mutually_exclusive_group()
        h.add_argument("--nu-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
        h.add_argument("--nu", type=float, nargs="+", metavar="NU")
        sp.add_argument("--bands", type=_band_list, help="comma-separated band indices")
        sp.add_argument("--truncation", type=_truncation, default="auto", help="'auto' or N")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--notation", choices=("mathieu", "josephson"), default="mathieu")
        sp.add_argument("--ec", type=float, help="charging energy E_C (josephson notation)")
        sp.add_argument("--out", help="output path (default: stdout)")
        if name == "voltage":
            sp.add_argument("--f-coef", type=float, default=DEFAULT_F_COEF,
                            help="f = F_COEF * eta^2 in the interpolating formula")
    return parser


def _count(x: float) -> int:
    if x != int(x):
        raise SpecError(f"range count must be an integer, got {x}")
    return int(x)


def spec_from_args(args) -> SweepSpec:
    d = DEFAULTS[args.command]
    if args.eta is not None:
        etas = list(args.eta)
    elif args.eta_range is not None:
        s, e, c = args.eta_range
        etas = linspace(s, e, _count(c), args.eta_scale)
    elif "eta" in d:
        etas = list(d["eta"])
    else:
        s, e, c = d["eta_range"]
        etas = linspace(s, e, c)
    if args.nu is not None:
        nus = list(args.nu)
    elif args.nu_range is not None:
        s, e, c = args.nu_range
        nus = linspace(s, e, _count(c))
    elif d.get("nu_values") is not None:
        nus = list(d["nu_values"])
    elif d.get("nu") is not None:
        nus = linspace(*d["nu"])
    else:
        nus = []
    spec = SweepSpec(
        quantity=args.command,
        etas=etas,
        nus=nus,
        bands=args.bands if args.bands is not None else list(d["bands"]),
        truncation=args.truncation,
        tol=args.tol,
        fmt=args.format,
        notation=args.notation,
        ec=args.ec,
        f_coef=getattr(args, "f_coef", DEFAULT_F_COEF),
    )
    return spec.validate()


def run(spec: SweepSpec) -> str:
    return render(RUNNERS[spec.quantity](spec), spec.fmt)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = spec_from_args(args)
        text = run(spec)
    except NumericalError as exc:
        _emit_error(type(exc).__name__, str(exc), EXIT_NUMERICAL)
        return EXIT_NUMERICAL
    except ValueError as exc:
        _emit_error(type(exc).__name__, str(exc), EXIT_USAGE)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
