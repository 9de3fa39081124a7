"""Command-line front end.

    jostlab jost-grid|siegert|tables|phase-shift --potential {1,2,3}
            [--config FILE] [--set key=value]... [--out PATH]

Config files are flat `key = value` lines; `#` starts a comment. Exit codes:
0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import errors, siegert
from .jost import JostCalculator, exact_phase_shift, unwrap_phase
from .potentials import DEFAULT_MESH, make_potential
from .rmatrix import RMatrixSystem

log = logging.getLogger("jostlab")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

POTENTIAL_KEYS = {"kappa0", "kappa1", "alpha", "alpha_r", "alpha_i",
                  "taylor_cutoff", "taylor_terms", "scan_radius"}

TABLE_K = (1 + 5j, 1 + 1j, 1 - 1.5j, 1 - 2.5j, 4 + 5j, 4 + 1j, 4 - 1.5j, 4 - 2.5j)
A_LADDER = ((2.8, 15), (3.2, 20), (3.6, 25), (4.0, 30), (4.4, 37),
            (4.8, 39), (5.2, 44), (5.6, 46), (6.0, 53))
CONVERGENCE_RTOL = 1e-3
# f(1-2i) sits near the pseudostates and is only quoted to a few digits
LADDER_COLUMNS = (("f(1+i)", 1 + 1j, CONVERGENCE_RTOL), ("f(1-2i)", 1 - 2j, 1e-2),
                  ("f(-2i)", -2j, CONVERGENCE_RTOL))

FLAG_OVERFLOW, FLAG_PSEUDOSTATE, FLAG_NONFINITE = 1, 2, 4

CSV_HEADER = ["re_k", "im_k", "re_f", "im_f", "abs_f", "arg_f", "flags"]


class ConfigError(Exception):
    pass


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


def parse_config_text(text: str) -> dict[str, str]:
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {n}: empty key")
        out[key] = value
    return out


@dataclass
class RunConfig:
    potential: str
    params: dict = field(default_factory=dict)
    a: float = 5.0
    N: int = 40
    options: dict = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, tag: str, values: dict[str, str]) -> "RunConfig":
        tag = str(tag)
        if tag not in DEFAULT_MESH:
            raise ConfigError(f"unknown potential {tag!r}")
        a, N = DEFAULT_MESH[tag]
        params, options = {}, {}
        for key, value in values.items():
            if key in POTENTIAL_KEYS:
                params[key] = value
            elif key == "a":
                a = _as_float(key, value)
            elif key == "N":
                N = _as_int(key, value)
            else:
                options[key] = value
        if not a > 0 or N < 2:
            raise ConfigError("need a > 0 and N >= 2")
        return cls(potential=tag, params=params, a=a, N=N, options=options)

    def get_float(self, key, default):
        return _as_float(key, self.options[key]) if key in self.options else default

    def get_int(self, key, default):
        return _as_int(key, self.options[key]) if key in self.options else default

    def get_str(self, key, default):
        return self.options.get(key, default)

    def build_potential(self):
        try:
            return make_potential(self.potential, self.params)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def build_calculator(self, potential=None) -> JostCalculator:
        potential = self.build_potential() if potential is None else potential
        return JostCalculator(RMatrixSystem.build(potential, self.N, self.a))


def _as_float(key, value) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {value!r}") from None


def _as_int(key, value) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: not an integer: {value!r}") from None


# ---------------------------------------------------------------- output


def grid_rows(k, f, flags):
    for kk, ff, fl in zip(k.ravel(), f.ravel(), flags.ravel()):
        yield [fmt(kk.real), fmt(kk.imag), fmt(ff.real), fmt(ff.imag),
               fmt(abs(ff)), fmt(np.angle(ff)), str(int(fl))]


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def domain_coloring(f: np.ndarray) -> np.ndarray:
    """RGB bytes: hue from arg f, lightness rising monotonically with log|f|."""
    f = np.asarray(f, dtype=complex)
    finite = np.isfinite(f)
    with np.errstate(divide="ignore", invalid="ignore"):
        hue = np.where(finite, (np.angle(f) / (2 * np.pi)) % 1.0, 0.0)
        logmag = np.where(finite & (f != 0), np.log(np.abs(f)), -np.inf)
    light = np.where(finite, 0.5 + np.arctan(logmag) / np.pi, 1.0)
    # HSL -> RGB with saturation 1
    c = 1 - np.abs(2 * light - 1)
    h6 = hue * 6
    x = c * (1 - np.abs(h6 % 2 - 1))
    zero = np.zeros_like(c)
    sector = np.floor(h6).astype(int) % 6
    table = [(c, x, zero), (x, c, zero), (zero, c, x), (zero, x, c), (x, zero, c), (c, zero, x)]
    rgb = np.zeros(f.shape + (3,))
    for s, comps in enumerate(table):
        mask = sector == s
        for ch in range(3):
            rgb[..., ch] = np.where(mask, comps[ch], rgb[..., ch])
    rgb += (light - c / 2)[..., None]
    return np.clip(np.round(rgb * 255), 0, 255).astype(np.uint8)


def write_ppm(path, f_grid: np.ndarray):
    """P6 image; rows run from the top (largest Im k) down."""
    img = domain_coloring(f_grid[::-1])
    ny, nx = f_grid.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


# ---------------------------------------------------------------- commands


def _grid(cfg: RunConfig):
    re_min = cfg.get_float("re_min", -5.0)
    re_max = cfg.get_float("re_max", 5.0)
    im_min = cfg.get_float("im_min", -5.0)
    im_max = cfg.get_float("im_max", 5.0)
    nx = cfg.get_int("nx", 101)
    ny = cfg.get_int("ny", 101)
    if nx < 1 or ny < 1 or re_max < re_min or im_max < im_min:
        raise ConfigError("invalid grid bounds or resolution")
    re = np.linspace(re_min, re_max, nx)
    im = np.linspace(im_min, im_max, ny)
    return re[None, :] + 1j * im[:, None]


def grid_values(cfg: RunConfig, mode: str):
    """(k grid, f grid, flags grid) for mode 'exact' or 'calculated'."""
    k = _grid(cfg)
    potential = cfg.build_potential()
    with np.errstate(all="ignore"):
        if mode == "exact":
            f = np.asarray(potential.exact_jost(k), dtype=complex)
            flags = np.zeros(k.shape, dtype=int)
        else:
            calc = cfg.build_calculator(potential)
            calc = calc.with_pseudostates(siegert.locate_pseudostates(calc))
            f = np.asarray(calc.f(k), dtype=complex)
            overflow, near = calc.flags(k)
            flags = FLAG_OVERFLOW * overflow + FLAG_PSEUDOSTATE * near
    flags = flags + FLAG_NONFINITE * ~np.isfinite(f)
    return k, f, flags


def cmd_jost_grid(cfg: RunConfig, out: str | None):
    mode = cfg.get_str("mode", "calculated")
    if mode not in ("exact", "calculated", "both"):
        raise ConfigError(f"mode must be exact, calculated or both, got {mode!r}")
    ppm = cfg.get_str("ppm", None)
    modes = ("exact", "calculated") if mode == "both" else (mode,)
    for m in modes:
        k, f, flags = grid_values(cfg, m)
        if out is None:
            buf = io.StringIO()
            w = csv.writer(buf)
            w.writerow(CSV_HEADER)
            w.writerows(grid_rows(k, f, flags))
            sys.stdout.write(buf.getvalue())
        else:
            write_csv(_suffixed(out, m, len(modes) > 1), CSV_HEADER, grid_rows(k, f, flags))
        if ppm:
            write_ppm(_suffixed(ppm, m, len(modes) > 1), f)


def _suffixed(path: str, tag: str, needed: bool) -> str:
    if not needed:
        return path
    p = Path(path)
    return str(p.with_name(f"{p.stem}.{tag}{p.suffix}"))


def siegert_states(cfg: RunConfig, method: str) -> list[siegert.SiegertState]:
    calc = cfg.build_calculator()
    system = calc.system
    methods = ("jost", "quadratic", "iterative") if method == "all" else (method,)
    re_min = cfg.get_float("re_min", -siegert.AXIS_TOL)
    re_max = cfg.get_float("re_max", 8.0)
    im_min = cfg.get_float("im_min", -3.0)
    im_max = cfg.get_float("im_max", 2.0)
    states: list[siegert.SiegertState] = []
    jost = None
    for m in methods:
        if m == "jost":
            jost = list(siegert.find_jost_zeros(calc))
            states += jost
        elif m == "quadratic":
            if method == "all" and system.cfg.ell != 0:
                log.warning("quadratic method skipped: requires l = 0")
                continue
            states += siegert.quadratic_siegert_l0(system)
        elif m == "iterative":
            # start each iteration from the 0.1-lattice point nearest a Jost root,
            # not from the root itself, which is already a fixed point
            roots = [s.k for s in (jost or siegert.find_jost_zeros(calc))]
            roots = [k for k in roots if re_min <= k.real <= re_max and im_min <= k.imag <= im_max]
            seeds = [complex(round(k.real, 1), round(k.imag, 1)) for k in roots]
            max_iter = cfg.get_int("max_iter", 500)
            for k0 in seeds:
                try:
                    states.append(siegert.iterative_bL(system, k0, max_iter=max_iter))
                except errors.NoConvergence as exc:
                    log.warning("%s", exc)
        else:
            raise ConfigError(f"unknown method {m!r}")
    states = [s for s in states
              if re_min <= s.k.real <= re_max and im_min <= s.k.imag <= im_max]
    order = {"jost_zero": 0, "quadratic_eig": 1, "iterative": 2}
    states.sort(key=lambda s: (round(s.k.real, 6), order[s.method], s.k.imag))
    return states


def cmd_siegert(cfg: RunConfig, out: str | None, method: str):
    states = siegert_states(cfg, method)
    text = json.dumps([s.as_dict() for s in states], indent=1)
    _emit(text + "\n", out)


def _sci(x: float) -> str:
    return f"{x:+.7e}"


def jost_table(cfg: RunConfig) -> str:
    potential = cfg.build_potential()
    calc = cfg.build_calculator(potential)
    calc = calc.with_pseudostates(siegert.locate_pseudostates(calc))
    lines = [f"potential {cfg.potential}: a = {cfg.a:g}, N = {cfg.N}",
             f"{'k':>10}  {'Re f exact':>15} {'Im f exact':>15}  {'Re f calc':>15} {'Im f calc':>15}  flags"]
    for k in TABLE_K:
        fe = complex(potential.exact_jost(k))
        v = calc.evaluate(k)
        flag = FLAG_OVERFLOW * v.overflow + FLAG_PSEUDOSTATE * v.near_pseudostate
        lines.append(f"{k.real:4.1f}{k.imag:+4.1f}i  {_sci(fe.real)} {_sci(fe.imag)}  "
                     f"{_sci(v.f.real)} {_sci(v.f.imag)}  {flag}")
    return "\n".join(lines) + "\n"


def converged_value(potential, a: float, N: int, k: complex, step: int = 10,
                    rtol: float = CONVERGENCE_RTOL):
    """(f(k) or None, f(k)) at N; None when N + step changes f by more than rtol."""
    f1 = JostCalculator(RMatrixSystem.build(potential, N, a)).f(k)
    f2 = JostCalculator(RMatrixSystem.build(potential, N + step, a)).f(k)
    if not (np.isfinite(f1) and np.isfinite(f2)) or abs(f2 - f1) > rtol * abs(f1):
        return None, f1
    return f1, f1


def a_dependence_rows(potential, ladder=A_LADDER):
    rows = []
    for a, N in ladder:
        row = {"a": a, "N": N}
        for label, k, rtol in LADDER_COLUMNS:
            row[label] = converged_value(potential, a, N, k, rtol=rtol)
        rows.append(row)
    return rows


def a_dependence_table(cfg: RunConfig) -> str:
    potential = cfg.build_potential()
    lines = [f"{'a':>4} {'N':>3}  {'f(1+i)':>34}  {'f(1-2i)':>34}  {'|f(-2i)|':>12}"]

    def cell(val, raw, absolute=False):
        if val is None:
            return "does not converge"
        return f"{abs(val):.6g}" if absolute else f"{val.real:+.10f}{val.imag:+.10f}i"

    for row in a_dependence_rows(potential):
        lines.append(
            f"{row['a']:4.1f} {row['N']:3d}  {cell(*row['f(1+i)']):>34}  "
            f"{cell(*row['f(1-2i)']):>34}  {cell(*row['f(-2i)'], absolute=True):>12}"
        )
    return "\n".join(lines) + "\n"


def cmd_tables(cfg: RunConfig, out: str | None, table: str):
    if table == "jost":
        text = jost_table(cfg)
    elif table == "a-dependence":
        text = a_dependence_table(cfg)
    else:
        raise ConfigError(f"unknown table {table!r}")
    _emit(text, out)


def phase_shift_rows(cfg: RunConfig):
    k = np.linspace(cfg.get_float("k_min", 0.1), cfg.get_float("k_max", 5.0), cfg.get_int("nk", 50))
    if k.size < 1 or np.any(k <= 0):
        raise ConfigError("phase shifts need k_min > 0")
    potential = cfg.build_potential()
    calc = cfg.build_calculator(potential)
    d_exact = np.atleast_1d(exact_phase_shift(potential, k))
    d_calc = np.atleast_1d(unwrap_phase(calc.f(k)))
    return k, d_exact, d_calc


def cmd_phase_shift(cfg: RunConfig, out: str | None):
    k, de, dc = phase_shift_rows(cfg)
    rows = ([fmt(a), fmt(b), fmt(c), fmt(abs(b - c))] for a, b, c in zip(k, de, dc))
    header = ["k", "delta_exact", "delta_calc", "abs_diff"]
    if out is None:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(header)
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        write_csv(out, header, rows)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--potential", required=True, choices=sorted(DEFAULT_MESH))
    common.add_argument("--config", help="key=value parameter file")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config value (repeatable)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="jostlab", description="Jost functions from the R-matrix")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("jost-grid", parents=[common], help="Jost function on a complex-k grid")
    p = sub.add_parser("siegert", parents=[common], help="Siegert states and pseudostates")
    p.add_argument("--method", choices=("jost", "quadratic", "iterative", "all"), default="jost")
    p = sub.add_parser("tables", parents=[common], help="comparison tables")
    p.add_argument("--table", choices=("jost", "a-dependence"), default="jost")
    sub.add_parser("phase-shift", parents=[common], help="exact and calculated phase shifts")
    return parser


def load_config(args) -> RunConfig:
    values: dict[str, str] = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        values.update(parse_config_text(text))
    values.update(parse_config_text("\n".join(args.set)))
    return RunConfig.from_mapping(args.potential, values)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args)
        if args.command == "jost-grid":
            cmd_jost_grid(cfg, args.out)
        elif args.command == "siegert":
            cmd_siegert(cfg, args.out, args.method)
        elif args.command == "tables":
            cmd_tables(cfg, args.out, args.table)
        else:
            cmd_phase_shift(cfg, args.out)
    except (ConfigError, errors.InvalidParams, errors.UnsupportedPartialWave) as exc:
        print(f"jostlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (errors.JostlabError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"jostlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"jostlab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
