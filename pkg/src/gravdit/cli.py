"""Command line front end.

    gravdit scenario-a --particle ucn --z -1 --t-start 0.4 --t-end 0.5 --points 2001
    gravdit scenario-b --particle ucn --n 1 --z -0.1 --t-start 0.1427 --t-end 0.1429
    gravdit widths
    gravdit delays --format json --out delays.json
    gravdit sweep --particle ucn --n 1

Exit codes: 0 ok, 2 usage error, 3 numerical failure.  Settings come from
built-in defaults, then ``--config`` (flat JSON keys mirroring the flags),
then explicit flags.  Output files are written atomically and are
byte-identical for identical settings.
"""
import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import propagate, scenario_a, scenario_b
from .constants import (UnknownParticleError, catalog_from_config, constants_from_config,
                        get_particle, load_config)
from .exceptions import DomainError, NumericalError, PreconditionError
from .validation import check_depth, check_level, check_time_range

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3

#: Widths quoted for |z| = 1 m, seconds.
QUOTED_WIDTHS = {"thermal_neutron": 0.37e-8, "ucn": 6e-5, "cesium": 0.5e-5, "c60": 0.4e-6, "c176": 0.18e-6}
#: Relative mismatch above which a quoted value is flagged.
FLAG_THRESHOLD = 0.10

DEFAULTS = {
    "particle": "ucn", "n": None, "z": -1.0, "t_start": None, "t_end": None, "points": 1001,
    "g": None, "hbar": None, "rel_tol": 1e-6, "out": None, "format": "csv",
    "factors": "1,10,100,1000", "evolution": False,
}


class UsageError(Exception):
    pass


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def render(columns, rows, fmt, meta=None):
    """Serialise a table to CSV or JSON text."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()
    records = [{c: _json_value(v) for c, v in zip(columns, r)} for r in rows]
    meta = {k: _json_value(v) for k, v in (meta or {}).items()}
    return json.dumps({"meta": meta, "columns": list(columns), "rows": records}, indent=2) + "\n"


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(settings, columns, rows, meta, default_name):
    text = render(columns, rows, settings["format"], meta)
    out = settings["out"] or f"{default_name}.{settings['format']}"
    write_atomic(out, text)
    print(f"wrote {len(rows)} rows to {out}")


def _resolve(args):
    """Merge defaults, config file and explicit flags."""
    file_cfg = load_config(args.config) if args.config else {}
    settings = dict(DEFAULTS)
    settings.update({k: v for k, v in file_cfg.items() if k in DEFAULTS})
    settings.update({k: v for k, v in vars(args).items() if k in DEFAULTS and v is not None})
    if settings["format"] not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {settings['format']!r}")
    consts = constants_from_config({"g": settings["g"], "hbar": settings["hbar"]})
    particles = catalog_from_config(file_cfg)
    return settings, consts, particles


def _particle(settings, particles):
    try:
        return get_particle(settings["particle"], particles)
    except UnknownParticleError as exc:
        raise UsageError(exc.args[0]) from None


def _time_grid(settings, default_lo, default_hi):
    lo = default_lo if settings["t_start"] is None else float(settings["t_start"])
    hi = default_hi if settings["t_end"] is None else float(settings["t_end"])
    if not lo >= 0:
        raise DomainError(f"t_start must be >= 0, got {lo}")
    _, _, points = check_time_range(max(lo, 1e-300), hi, settings["points"])
    return np.linspace(lo, hi, points)


def cmd_scenario_a(settings, consts, particles):
    p = _particle(settings, particles)
    z = check_depth(settings["z"])
    beam = scenario_a.ShutterBeam.from_particle(p, consts)
    T = scenario_a.classical_tof(beam, z)
    t = _time_grid(settings, 0.0, 3.0 * T)
    pos = t > 0
    xi = np.full(t.shape, -np.inf)
    rho = np.zeros(t.shape)
    xi[pos] = scenario_a.xi(beam, z, t[pos])
    rho[pos] = scenario_a.density_a(beam, z, t[pos])
    rho_cl = scenario_a.classical_density_a(beam, z, t)
    try:
        width = scenario_a.diffraction_width(beam, z).delta_t
    except PreconditionError as exc:
        width = None
        print(f"note: {exc}")
    rows = list(zip(t, rho, rho_cl, xi))
    print(f"{p.name}: z = {z:g} m, T = {T:.10g} s, delta_t = "
          + ("n/a" if width is None else f"{width:.6g} s"))
    _emit(settings, ["t", "quantum_density", "classical_density", "xi"], rows,
          {"particle": p.name, "z": z, "T": T, "delta_t": width}, "scenario_a")


def cmd_scenario_b(settings, consts, particles):
    if settings["n"] is None:
        raise UsageError("scenario-b requires --n")
    p = _particle(settings, particles)
    z = check_depth(settings["z"])
    state = scenario_b.grav_state(check_level(settings["n"]), p, consts)
    ts = scenario_b.time_scales(state, z)
    lo, hi = propagate.arrival_window(state, z)
    t = _time_grid(settings, lo, hi)
    cfg = propagate.QuadratureConfig(rel_tol=float(settings["rel_tol"]))
    pos = t > 0
    exact = np.zeros(t.shape)
    sd = np.zeros(t.shape)
    exact[pos] = propagate.evolve_exact(state, z, t[pos], cfg).density
    sd[pos] = propagate.evolve_sd(state, z, t[pos]).density
    c = np.asarray(propagate.chi0(state, z, t).chi0, dtype=float)
    delay = scenario_b.time_delay(state, z)
    print(f"{p.name} n={state.n}: z = {z:g} m, tau = {ts.tau:.12g} s, t_mean = {ts.t_mean:.12g} s, "
          f"t_class = {ts.t_class:.12g} s, time_delay = {delay:.6g}")
    _emit(settings, ["t", "exact_density", "sd_density", "chi0"], list(zip(t, exact, sd, c)),
          {"particle": p.name, "n": state.n, "z": z, "tau": ts.tau, "t_mean": ts.t_mean,
           "t_class": ts.t_class, "time_delay": delay}, "scenario_b")


def _discrepancy(computed, quoted):
    if quoted is None:
        return None, None
    rel = abs(computed - quoted) / quoted
    return rel, rel > FLAG_THRESHOLD


def cmd_widths(settings, consts, particles):
    z = check_depth(settings["z"])
    rows = []
    for p in particles:
        if p.default_speed is None:
            continue
        beam = scenario_a.ShutterBeam.from_particle(p, consts)
        try:
            w = scenario_a.diffraction_width(beam, z).delta_t
        except PreconditionError:
            w = float("nan")
        quoted = QUOTED_WIDTHS.get(p.name) if z == -1.0 else None
        rel, flag = _discrepancy(w, quoted)
        rows.append((p.name, p.mass, p.default_speed, scenario_a.classical_tof(beam, z), w, quoted, rel, flag))
        print(f"{p.name:16s} delta_t = {w:.4g} s" + ("" if quoted is None else f"  quoted {quoted:.3g}"
                                                     + ("  FLAG" if flag else "")))
    _emit(settings, ["particle", "mass", "speed", "tof", "delta_t", "quoted_delta_t", "rel_discrepancy", "flag"],
          rows, {"z": z}, "widths")


def cmd_delays(settings, consts, particles):
    z = check_depth(settings["z"])
    names = {p.name: p for p in particles}
    table = [(label, names[name]) for label, name in scenario_b.TABLE_PARTICLES.items() if name in names]
    rows = []
    for r in scenario_b.delay_table(table, (1, 2), z, consts):
        flag = None if r.rel_discrepancy is None else r.rel_discrepancy > FLAG_THRESHOLD
        rows.append((r.particle, r.n, r.computed_delay, r.quoted_delay, r.rel_discrepancy, flag))
        print(f"{r.particle:8s} n={r.n}  {r.computed_delay:.4g}" + (
            "" if r.quoted_delay is None else f"  quoted {r.quoted_delay:.3g}" + ("  FLAG" if flag else "")))
    _emit(settings, ["particle", "n", "computed_delay", "quoted_delay", "rel_discrepancy", "flag"],
          rows, {"z": z}, "delays")


def _factors(text):
    try:
        f = [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--factors must be comma-separated numbers, got {text!r}") from None
    if not f or any(not (x > 0 and math.isfinite(x)) for x in f):
        raise UsageError("--factors must be positive")
    return f


def cmd_sweep(settings, consts, particles):
    """Mass sweep of the scaling-law observables."""
    p = _particle(settings, particles)
    z = check_depth(settings["z"])
    n = check_level(1 if settings["n"] is None else settings["n"])
    cfg = propagate.QuadratureConfig(rel_tol=float(settings["rel_tol"]))
    evolution = bool(settings["evolution"])
    columns = ["factor", "mass", "l_g", "delta_t", "time_delay"]
    if evolution:
        columns += ["peak_time", "sd_discrepancy", "strong_ep_deviation"]
    rows = []
    for f in _factors(settings["factors"]):
        q = p.scaled(f)
        state = scenario_b.grav_state(n, q, consts)
        width = None
        if q.default_speed:
            try:
                width = scenario_a.diffraction_width(scenario_a.ShutterBeam.from_particle(q, consts), z).delta_t
            except PreconditionError:
                pass
        row = [f, q.mass, state.l_g, width, scenario_b.time_delay(state, z)]
        if evolution:
            t = scenario_b.time_scales(state, z).t_mean
            row += [propagate.peak_arrival_time(state, z), propagate.sd_discrepancy(state, t, cfg),
                    propagate.strong_ep_deviation(state, t, cfg)]
        rows.append(tuple(row))
        print("  ".join(f"{c}={_fmt(v)}" for c, v in zip(columns, row)))
    _emit(settings, columns, rows, {"particle": p.name, "n": n, "z": z}, "sweep")


COMMANDS = {
    "scenario-a": cmd_scenario_a, "scenario-b": cmd_scenario_b,
    "widths": cmd_widths, "delays": cmd_delays, "sweep": cmd_sweep,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--particle", help="catalog name (default ucn)")
    common.add_argument("--n", type=int, help="bound-state index (scenario-b, sweep)")
    common.add_argument("--z", type=float, help="detector depth in m, negative (default -1)")
    common.add_argument("--t-start", dest="t_start", type=float)
    common.add_argument("--t-end", dest="t_end", type=float)
    common.add_argument("--points", type=int)
    common.add_argument("--g", type=float, help="gravitational acceleration, m/s^2")
    common.add_argument("--hbar", type=float, help="reduced Planck constant, J s")
    common.add_argument("--rel-tol", dest="rel_tol", type=float, help="quadrature tolerance")
    common.add_argument("--out", help="output file (default <command>.<format>)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--config", help="JSON file with flat keys mirroring the flags")
    common.add_argument("--factors", help="sweep: comma-separated mass factors")
    common.add_argument("--evolution", action="store_const", const=True,
                        help="sweep: also evaluate the released-state observables (slow)")

    parser = argparse.ArgumentParser(prog="gravdit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=func.__doc__ and func.__doc__.split("\n")[0])
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        settings, consts, particles = _resolve(args)
        COMMANDS[args.command](settings, consts, particles)
    except (UsageError, DomainError, ValueError, OSError) as exc:
        print(f"gravdit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"gravdit {args.command}: numerical failure: {exc}", file=sys.stderr)
        for k, v in sorted(exc.diagnostics.items()):
            print(f"  {k} = {v}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
