"""Command-line front end: ``nlwave solve|dispersion|convergence|error-bound``.

Settings come from flags, an optional flat ``key = value`` config file, and
built-in defaults, in that order of precedence.  Exit code 2 flags a bad
configuration, 3 a numerical precondition that does not hold.
"""
from __future__ import annotations

import argparse
import ast
import csv
import math
import re
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diagnostics import (
    RunReport,
    convergence_study,
    current_j,
    current_jB,
    energy,
    fmt,
    jump_tracker,
)
from .kernels import MaterialParams, dispersion, parse_kernel
from .series import (
    ExpJumpData,
    GaussianData,
    UnreachableToleranceError,
    make_plan,
    series_propagate,
    symbol_sup_norm,
    truncation_bounds,
    choose_order,
)
from .spectral import BoundaryWarning, Field, Grid1D, build_symbol, classical_symbol, propagate

DEFAULTS = {
    "kernel": "gaussian(a=1,sigma=1)",
    "rho": "1",
    "E": "1",
    "data": "gaussian(sigma_d=0.5)",
    "carrier": "displacement",
    "grid_n": "4096",
    "grid_l": "80",
    "t": "0:6:0.5",
    "method": "spectral",
    "tol": "1e-10",
    "out": "nlwave_out",
    "strict_boundary": "false",
    "csv": "false",
    "family": "box",
    "nu": "1,2,4,8,16,32",
    "k": "0:10:0.05",
}
METHODS = ("spectral", "series", "both", "classical")


class ConfigError(ValueError):
    pass


class NumericError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    kernel: str
    rho: float
    E: float
    data: str
    carrier: str
    grid_n: int
    grid_l: float
    times: tuple
    method: str
    tol: float
    out: Path
    strict_boundary: bool
    csv: bool
    family: str
    nu: tuple
    k: tuple

    @property
    def params(self) -> MaterialParams:
        return MaterialParams(self.rho, self.E)

    @property
    def grid(self) -> Grid1D:
        return Grid1D(self.grid_n, self.grid_l)


def parse_range(text: str, name: str = "t") -> tuple:
    """``START:STOP:STEP`` (stop included) or a comma list of numbers."""
    text = text.strip()
    if not text:
        return ()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ConfigError(f"{name} range must be START:STOP:STEP")
            start, stop, step = parts
            if not step > 0:
                raise ConfigError(f"{name} step must be positive")
            n = math.floor((stop - start) / step + 1e-9)
            if n < 0:
                return ()
            return tuple(start + i * step for i in range(n + 1))
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse {name} value {text!r}") from exc


def read_config_file(path) -> dict:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in ("in_displacement", "in_velocity"):
            if _truthy(val, key):
                out["carrier"] = key[3:]
            continue
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{num}: unknown key {key!r}")
        out[key] = val
    return out


def _truthy(val, key) -> bool:
    v = str(val).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"{key} must be a boolean, got {val!r}")


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val if isinstance(val, str) else str(val)
    try:
        rho = float(merged["rho"])
        E = float(merged["E"])
        grid_n = int(merged["grid_n"])
        grid_l = float(merged["grid_l"])
        tol = float(merged["tol"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if merged["method"] not in METHODS:
        raise ConfigError(f"method must be one of {', '.join(METHODS)}")
    if merged["carrier"] not in ("displacement", "velocity"):
        raise ConfigError("carrier must be displacement or velocity")
    cfg = ExperimentConfig(
        kernel=merged["kernel"],
        rho=rho,
        E=E,
        data=merged["data"],
        carrier=merged["carrier"],
        grid_n=grid_n,
        grid_l=grid_l,
        times=parse_range(merged["t"]),
        method=merged["method"],
        tol=tol,
        out=Path(merged["out"]),
        strict_boundary=_truthy(merged["strict_boundary"], "strict_boundary"),
        csv=_truthy(merged["csv"], "csv"),
        family=merged["family"],
        nu=parse_range(merged["nu"], "nu"),
        k=parse_range(merged["k"], "k"),
    )
    try:
        cfg.params, cfg.grid
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


_CALL = re.compile(r"^\s*([A-Za-z_]\w*)\s*\((.*)\)\s*$", re.S)


def parse_data(spec: str, grid: Grid1D):
    """Closed-form data object or a :class:`Field` read from CSV."""
    m = _CALL.match(spec)
    if m:
        name, body = m.group(1).lower(), m.group(2)
        try:
            call = ast.parse(f"f({body})", mode="eval").body
            kwargs = {kw.arg: float(ast.literal_eval(kw.value)) for kw in call.keywords}
            if call.args:
                raise ValueError("keyword arguments only")
            if name == "gaussian":
                return GaussianData(**kwargs)
            if name == "expjump":
                return ExpJumpData(**kwargs)
        except (SyntaxError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad data spec {spec!r}: {exc}") from exc
        raise ConfigError(f"unknown data type {name!r}")
    path = Path(spec)
    if not path.is_file():
        raise ConfigError(f"data spec {spec!r} is neither a known form nor a file")
    xs, vs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                xs.append(float(row[0]))
                vs.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                if xs:
                    raise ConfigError(f"bad row in {spec}: {row}") from exc
    if len(xs) < 2 or np.any(np.diff(xs) <= 0):
        raise ConfigError(f"{spec}: need ascending x,u rows")
    return Field(grid, np.interp(grid.x, xs, vs, left=0.0, right=0.0))


def _as_field(data, grid: Grid1D) -> Field:
    return data if isinstance(data, Field) else grid.sample(data)


def _write_solution(path: Path, grid: Grid1D, rows) -> None:
    x = grid.x
    xs = [fmt(v) for v in x]
    with open(path, "w") as fh:
        fh.write("t,x,u\n")
        for t, u in rows:
            ts = fmt(t)
            fh.writelines(f"{ts},{xv},{fmt(uv)}\n" for xv, uv in zip(xs, u.values))


def _plot_script(title: str) -> str:
    return (
        "# gnuplot script: waterfall and heatmap of u(x, t)\n"
        "set datafile separator ','\n"
        f"set title '{title}'\n"
        "set xlabel 'x'\nset ylabel 't'\nset zlabel 'u'\n"
        "set terminal pngcairo size 1200,500\n"
        "set output 'solution.png'\n"
        "set multiplot layout 1,2\n"
        "set view 60,30\n"
        "splot 'solution.csv' every ::1 using 2:1:3 with lines lc 'black' notitle\n"
        "set view map\n"
        "splot 'solution.csv' every ::1 using 2:1:3 with points pt 5 ps 0.3 palette notitle\n"
        "unset multiplot\n"
    )


def _convergence_plot(family: str) -> str:
    return (
        "set datafile separator ','\n"
        "set logscale xy\n"
        f"set title 'L2 distance to the classical solution ({family})'\n"
        "set xlabel 'nu'\nset ylabel 'L2 error'\n"
        "set terminal pngcairo size 700,500\n"
        "set output 'convergence.png'\n"
        "plot 'convergence.csv' every ::1 using 1:2 with linespoints pt 7 notitle\n"
    )


def cmd_solve(cfg: ExperimentConfig) -> int:
    if not cfg.times:
        raise ConfigError("empty time list")
    try:
        C = parse_kernel(cfg.kernel)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    grid = cfg.grid
    data = parse_data(cfg.data, grid)
    f = _as_field(data, grid)
    zero = grid.zeros()
    in_disp = cfg.carrier == "displacement"
    xi, eta = (f, zero) if in_disp else (zero, f)
    sym = classical_symbol(cfg.params, grid) if cfg.method == "classical" else build_symbol(C, cfg.rho, grid)

    cfg.out.mkdir(parents=True, exist_ok=True)
    rows, series_rows, checks = [], [], []
    energies, juv, juB, norms, jumps = [], [], [], [], []
    norm_c = None
    if cfg.method in ("series", "both"):
        if not C.mass() > 0:
            raise NumericError("the Bessel series needs a kernel with positive mass")
        norm_c = symbol_sup_norm(C, cfg.rho, grid)

    for t in cfg.times:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", BoundaryWarning)
            u, ud = propagate(sym, xi, eta, t)
        for w in caught:
            if cfg.strict_boundary:
                raise NumericError(str(w.message))
            print(f"warning: {w.message}", file=sys.stderr)
        # the companion solution carries the same profile in the other slot
        v, vd = propagate(sym, eta, xi, t, warn_boundary=None)
        energies.append(energy(u, ud, sym))
        juv.append(current_j(u, ud, v, vd))
        juB.append(current_jB(u, ud, C))
        norms.append(u.norm())
        loc = jump_tracker(u)
        jumps.append(math.nan if loc is None else loc)

        if cfg.method in ("series", "both"):
            try:
                plan = make_plan(C, cfg.rho, t, tol=cfg.tol, norm_c_op=norm_c)
            except UnreachableToleranceError as exc:
                raise NumericError(str(exc)) from exc
            sx, se = (data, None) if in_disp else (None, data)
            us, bound = series_propagate(plan, C, sx, se, grid=grid)
            series_rows.append((t, us))
            diff = grid.norm(us.values - u.values)
            checks.append((t, plan.order, diff, bound, diff <= bound + 1e-7))
        rows.append((t, u))

    if cfg.method == "series":
        _write_solution(cfg.out / "solution.csv", grid, series_rows)
    else:
        _write_solution(cfg.out / "solution.csv", grid, rows)
    if cfg.method == "both":
        _write_solution(cfg.out / "solution_series.csv", grid, series_rows)
        with open(cfg.out / "crosscheck.csv", "w") as fh:
            fh.write("t,order,l2_diff,err_bound,ok\n")
            for t, n, d, b, ok in checks:
                fh.write(f"{fmt(t)},{n},{fmt(d)},{fmt(b)},{int(ok)}\n")
    RunReport(
        np.array(cfg.times), np.array(energies), np.array(juv), np.array(juB),
        np.array(norms), np.array(jumps),
    ).write_csv(cfg.out / "report.csv")
    (cfg.out / "plot.gp").write_text(_plot_script(f"{cfg.method}: {cfg.kernel}, data {cfg.data}"))
    if checks and not all(c[-1] for c in checks):
        print("warning: series and spectral solutions differ by more than the bound", file=sys.stderr)
    return 0


def cmd_dispersion(cfg: ExperimentConfig) -> int:
    if not cfg.k:
        raise ConfigError("empty k range")
    try:
        C = parse_kernel(cfg.kernel)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    k = np.array(cfg.k)
    lam = np.asarray(dispersion(C, cfg.rho, k), dtype=float)
    lam[k == 0] = 0.0
    lam_cl = cfg.E / cfg.rho * k**2
    cfg.out.mkdir(parents=True, exist_ok=True)
    with open(cfg.out / "dispersion.csv", "w") as fh:
        fh.write("k,lambda,lambda_classical\n")
        for row in zip(k, lam, lam_cl):
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return 0


def cmd_convergence(cfg: ExperimentConfig) -> int:
    if not cfg.nu:
        raise ConfigError("empty nu list")
    if len(cfg.times) != 1:
        raise ConfigError("convergence needs exactly one time (--t T)")
    if cfg.family not in ("box", "scaled_gaussian"):
        raise ConfigError("family must be box or scaled_gaussian")
    if any(b <= a for a, b in zip(cfg.nu, cfg.nu[1:])) or cfg.nu[0] <= 0:
        raise ConfigError("nu values must be positive and increasing")
    grid = cfg.grid
    f = _as_field(parse_data(cfg.data, grid), grid)
    zero = grid.zeros()
    xi, eta = (f, zero) if cfg.carrier == "displacement" else (zero, f)
    rec = convergence_study(cfg.family, cfg.nu, cfg.params, xi, eta, cfg.times[0])
    cfg.out.mkdir(parents=True, exist_ok=True)
    rec.write_csv(cfg.out / "convergence.csv")
    (cfg.out / "plot.gp").write_text(_convergence_plot(cfg.family))
    print(f"strictly decreasing: {rec.strictly_decreasing}")
    print(f"symbol bound violation: {rec.symbol_bound_violation:.3e}")
    return 0


def cmd_errorbound(cfg: ExperimentConfig) -> int:
    if len(cfg.times) != 1:
        raise ConfigError("error-bound needs exactly one time (--t T)")
    t = cfg.times[0]
    try:
        C = parse_kernel(cfg.kernel)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not cfg.tol > 0:
        raise ConfigError("tol must be positive")
    norm = symbol_sup_norm(C, cfg.rho)
    try:
        n_final = choose_order(t, norm, cfg.tol)
    except UnreachableToleranceError as exc:
        raise NumericError(str(exc)) from exc
    rows = [(n, *truncation_bounds(n, t, norm)) for n in range(n_final + 1)]
    if cfg.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(("N", "bound_cos", "bound_sin"))
        for n, bc, bs in rows:
            w.writerow((n, fmt(bc), fmt(bs)))
    else:
        print(f"{'N':>4}  {'bound_cos':>24}  {'bound_sin':>24}")
        for n, bc, bs in rows:
            print(f"{n:>4}  {bc:>24.17g}  {bs:>24.17g}")
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "dispersion": cmd_dispersion,
    "convergence": cmd_convergence,
    "error-bound": cmd_errorbound,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nlwave", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="flat 'key = value' file")
    p.add_argument("--kernel", help="e.g. gaussian(a=1,sigma=1), box(E=1,nu=8), mixture((1.2,0.5),(-1,1))")
    p.add_argument("--rho")
    p.add_argument("--E")
    p.add_argument("--data", help="gaussian(sigma_d=0.5), expjump(b=1,eps=1) or an x,u CSV file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--in-displacement", dest="carrier", action="store_const", const="displacement")
    g.add_argument("--in-velocity", dest="carrier", action="store_const", const="velocity")
    p.add_argument("--grid-n", dest="grid_n")
    p.add_argument("--grid-l", dest="grid_l")
    p.add_argument("--t", help="START:STOP:STEP or a comma list")
    p.add_argument("--method", help="|".join(METHODS))
    p.add_argument("--tol")
    p.add_argument("--out")
    p.add_argument("--strict-boundary", dest="strict_boundary", action="store_const", const="true")
    p.add_argument("--csv", action="store_const", const="true")
    p.add_argument("--family", help="box or scaled_gaussian (convergence)")
    p.add_argument("--nu", help="comma list or range of nu values (convergence)")
    p.add_argument("--k", help="wavenumber range START:STOP:STEP (dispersion)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"nlwave: error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, ValueError) as exc:
        print(f"nlwave: numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
