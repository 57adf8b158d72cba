"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 configuration, 3 numerical failure,
4 `report` row outside tolerance. Data goes to stdout or to files under
``--out``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .acoustics import AcousticModeIndex, enumerate_modes, make_mode, modes_to_csv, modes_to_rows
from .config import ConfigError, apply_overrides, emit_config, load_config
from .coupling import couple
from .dissipation import curve_to_csv, q_vs_temperature, temperature_grid
from .electromagnetics import EmModeIndex, em_modes_to_csv, enumerate_em_modes, te0np_intensity
from .errors import DomainError, FitError, OptimizationError, QuadratureError, UnsupportedModeError, ValidationError
from .explorer import SweepCapError, optimize_1d, sweep_from_config
from .materials import helium_mass
from .measurement import PumpConfig, sensitivity_report
from .pipeline import budget_for, cavity_params, he3_model, phase_noise, wall_params
from .report import build_report, format_table, rows_to_csv, rows_to_json
from .ringdown import RingdownSeries, fit_ringdown, synthesize_ringdown

log = logging.getLogger("superfluid_om")

EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERIC, EXIT_REPORT = 1, 2, 3, 4

CSV_HELP = """\
CSV columns:
  modes     m, n, k, frequency_hz, v_eff_m3, has_radial_node, degeneracy
  em        family, m, n, p, frequency_hz
  losses    temperature_k, q_<channel>..., q_total
  sweep     <axis parameters>, acoustic_index, em_index, acoustic_frequency_hz, ...,
            fom, error  (header names every column)
  ringdown  time_s, amplitude
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _json_default(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    raise TypeError(repr(value))


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


class Output:
    """Routes named data products to stdout or files under a directory."""

    def __init__(self, directory):
        self.directory = Path(directory) if directory else None

    def write(self, name, text):
        if self.directory is None:
            sys.stdout.write(text)
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / name
        path.write_text(text, encoding="utf-8")
        log.info("wrote %s", path)


def _fmt(args, config):
    return args.format or config.output.format


def cmd_defaults(args, config, out):
    out.write("config.toml", emit_config(config))
    return 0


def cmd_modes(args, config, out):
    fmax = args.fmax or config.modes.fmax_hz
    modes = enumerate_modes(config.geometry, config.helium.c4, fmax)
    if _fmt(args, config) == "json":
        out.write("modes.json", _dumps(modes_to_rows(modes)))
    else:
        out.write("modes.csv", modes_to_csv(modes))
    return 0


def cmd_em(args, config, out):
    fmax = args.fmax or config.modes.em_fmax_hz
    rows = enumerate_em_modes(config.geometry, config.helium.eps_R, fmax)
    if _fmt(args, config) == "json":
        data = [{"family": i.family, "m": i.m, "n": i.n, "p": i.p, "frequency_hz": f} for f, i in rows]
        out.write("em_modes.json", _dumps(data))
    else:
        out.write("em_modes.csv", em_modes_to_csv(rows))
    return 0


def _pair(args, config):
    if args.pair:
        return AcousticModeIndex.parse(args.pair[0]), EmModeIndex.parse(args.pair[1])
    return AcousticModeIndex.parse(config.modes.acoustic), EmModeIndex.parse(config.modes.em)


def cmd_couple(args, config, out):
    a_idx, e_idx = _pair(args, config)
    geom, he = config.geometry, config.helium
    acoustic = make_mode(geom, he.c4, a_idx)
    em = te0np_intensity(geom, e_idx, he.eps_R)
    result = couple(acoustic, em, he, cavity_params(config, e_idx), spec=config.quadrature.spec())
    row = result.to_row(a_idx, e_idx)
    row["acoustic_frequency_hz"] = acoustic.frequency
    row["v_eff_m3"] = acoustic.v_eff
    if _fmt(args, config) == "json":
        out.write("coupling.json", _dumps(row))
    else:
        keys = sorted(row)
        out.write("coupling.csv", ",".join(keys) + "\n" + ",".join(_csv_cell(row[k]) for k in keys) + "\n")
    return 0


def _csv_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return f'"{value}"' if "," in str(value) else str(value)


def cmd_losses(args, config, out):
    lc = config.losses
    tmin = args.tmin or lc.t_min
    tmax = args.tmax or lc.t_max
    points = args.points or lc.points
    a_idx = AcousticModeIndex.parse(config.modes.acoustic)
    omega_m = make_mode(config.geometry, config.helium.c4, a_idx).omega
    temps = temperature_grid(tmin, tmax, points, log=lc.log_grid)
    budgets = q_vs_temperature(
        temps, omega_m, config.helium, wall=wall_params(config), he3=he3_model(config), three_phonon=lc.three_phonon
    )
    if _fmt(args, config) == "json":
        data = {
            "omega_m_rad_s": omega_m,
            "convention": "three-phonon alpha read as energy attenuation: Q = omega / (alpha c4)",
            "rows": [{"temperature_k": b.temperature, **{f"q_{n}": q for n, q in b.channels},
                      "q_total": b.q_total, "tau_n_s": b.tau_n} for b in budgets],
        }
        out.write("losses.json", _dumps(data))
    else:
        out.write("losses.csv", curve_to_csv(budgets))
    return 0


def cmd_sense(args, config, out):
    meas = config.measurement
    if meas.bandwidth_hz is None:
        raise ConfigError("measurement.bandwidth_hz", "required by `sense` (no default; 0.042 Hz reproduces 3e-3 Pa)")
    a_idx, e_idx = _pair(args, config)
    geom, he = config.geometry, config.helium
    acoustic = make_mode(geom, he.c4, a_idx)
    em = te0np_intensity(geom, e_idx, he.eps_R)
    cavity = cavity_params(config, e_idx)
    result = couple(acoustic, em, he, cavity, spec=config.quadrature.spec())
    q = meas.q_acoustic or budget_for(config, acoustic.omega).q_total
    report = sensitivity_report(
        pump=PumpConfig(meas.n_photons, 2 * math.pi * meas.detuning_hz),
        cavity=cavity,
        he=he,
        mass=helium_mass(geom, he),
        omega_m=acoustic.omega,
        temperature=meas.temperature,
        q_acoustic=q,
        baseline=meas.strain_baseline or geom.length,
        v_eff=acoustic.v_eff,
        dwc_dp=result.dwc_dP,
        noise=phase_noise(config, acoustic.frequency),
    )
    if _fmt(args, config) == "json":
        out.write("sensitivity.json", report.to_json() + "\n")
    else:
        out.write("sensitivity.txt", report.to_text())
    return 0


def cmd_sweep(args, config, out):
    if not config.sweep.axes:
        raise ConfigError("sweep.axes", "at least one [[sweep.axes]] table is required")
    result = sweep_from_config(config)
    out.write("sweep.csv", result.to_csv())
    out.write("sweep_best.json", result.best_json() + "\n")
    return 0


def cmd_optimize(args, config, out):
    oc = config.optimize
    x, value = optimize_1d(oc.parameter, (oc.lower, oc.upper), config, oc.fom, grid=oc.grid)
    out.write("optimize.json", _dumps({"parameter": oc.parameter, "argmax": x, "fom": oc.fom, "value": value,
                                       "acoustic_index": config.modes.acoustic}))
    return 0


def cmd_ringdown(args, config, out):
    if args.fit:
        series = RingdownSeries.from_csv(Path(args.fit).read_text(encoding="utf-8"))
        fit = fit_ringdown(series, 2 * math.pi * args.freq, floor=args.floor)
        out.write("ringdown_fit.json", _dumps({"q": fit.q, "q_stderr": fit.q_stderr, "decay_time_s": fit.decay_time,
                                               "amplitude0": fit.amplitude0, "samples_used": fit.samples_used}))
        return 0
    omega = 2 * math.pi * args.freq
    duration = args.duration or 2 * 2 * args.q / omega
    series = synthesize_ringdown(args.q, omega, 1.0, args.rate, duration, args.noise, args.seed)
    out.write("ringdown.csv", series.to_csv())
    return 0


def cmd_report(args, config, out):
    rows = build_report(config)
    fmt = args.format
    if fmt == "json":
        out.write("report.json", rows_to_json(rows) + "\n")
    elif fmt == "csv":
        out.write("report.csv", rows_to_csv(rows))
    else:
        out.write("report.txt", format_table(rows))
    failed = [r for r in rows if not r.passed]
    for row in failed:
        print(f"report: {row.quantity} outside tolerance (deviation {row.deviation})", file=sys.stderr)
    return EXIT_REPORT if failed else 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", "-c", help="TOML run configuration (defaults if omitted)")
    common.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override one config scalar; repeatable")
    common.add_argument("--out", help="write outputs into this directory instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), help="machine-readable output format")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="sfom", description="Superfluid-helium optomechanics design toolkit",
                     epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, epilog=CSV_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    add("defaults", cmd_defaults, "emit the full default configuration")
    add("modes", cmd_modes, "acoustic mode table").add_argument("--fmax", type=float, help="upper frequency, Hz")
    add("em", cmd_em, "microwave mode table").add_argument("--fmax", type=float, help="upper frequency, Hz")
    p = add("couple", cmd_couple, "coupling for one acoustic/microwave pair")
    p.add_argument("--pair", nargs=2, metavar=("M,N,K", "TE,M,N,P"))
    p = add("losses", cmd_losses, "Q(T) curves per loss channel")
    p.add_argument("--tmin", type=float)
    p.add_argument("--tmax", type=float)
    p.add_argument("--points", type=int)
    p = add("sense", cmd_sense, "measurement-chain sensitivity report")
    p.add_argument("--pair", nargs=2, metavar=("M,N,K", "TE,M,N,P"))
    add("sweep", cmd_sweep, "Cartesian parameter sweep from [sweep]")
    add("optimize", cmd_optimize, "1-D figure-of-merit optimisation from [optimize]")
    p = add("ringdown", cmd_ringdown, "synthesise a free-decay trace or fit one (--fit FILE)")
    p.add_argument("--q", type=float, default=7e6)
    p.add_argument("--freq", type=float, default=12201.0, help="acoustic frequency, Hz")
    p.add_argument("--rate", type=float, default=10.0, help="sample rate, Hz")
    p.add_argument("--duration", type=float, help="seconds (default two decay times)")
    p.add_argument("--noise", type=float, default=0.01, help="rms noise as a fraction of the initial amplitude")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fit", metavar="CSV")
    p.add_argument("--floor", type=float, default=0.0)
    add("report", cmd_report, "reproduce the published numbers; exit 4 on any failure")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        config = apply_overrides(load_config(args.config), args.set)
        out = Output(args.out or config.output.directory)
        return args.func(args, config, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValidationError, UnsupportedModeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SweepCapError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, FitError, OptimizationError, DomainError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
