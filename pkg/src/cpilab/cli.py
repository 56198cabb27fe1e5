"""Command-line front end: run configs, emit presets, analyze and compare CSVs.

Exit codes: 0 ok, 2 invalid config or CSV, 3 numerical guard, 4 metric
precondition unmet, 5 comparison failed.
"""
from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import analysis
from .config import dump_config, load_config
from .correlator import PRESETS, Interferogram, preset_spec, scan
from .errors import ConfigurationError, MetricError, NumericalGuardError

CSV_MAGIC = "# cpi-lab v1"
COMPARE_TOLERANCE = 0.05

EXIT_OK, EXIT_CONFIG, EXIT_GUARD, EXIT_METRIC, EXIT_COMPARE = 0, 2, 3, 4, 5


class CSVFormatError(ConfigurationError):
    """CSV does not follow the interferogram schema."""


# -- CSV --------------------------------------------------------------------

def format_csv(curve: Interferogram, preset: str | None = None) -> str:
    preset = preset or curve.metadata.get("preset", "custom")
    buf = io.StringIO(newline="")
    buf.write(f"{CSV_MAGIC}, preset={preset}\n")
    cols = [curve.delays_um, curve.signal]
    if curve.is_envelope:
        buf.write("delay_um,signal,envelope_low,envelope_high\n")
        cols += [curve.envelope_low, curve.envelope_high]
    else:
        buf.write("delay_um,signal\n")
    for row in zip(*cols):
        buf.write(",".join(format(float(v), ".17g") for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, curve: Interferogram, preset: str | None = None):
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(curve, preset))


def parse_csv(text: str) -> Interferogram:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2 or not lines[0].startswith(CSV_MAGIC):
        raise CSVFormatError(f"missing '{CSV_MAGIC}' header line")
    preset = None
    for part in lines[0][len(CSV_MAGIC):].split(","):
        key, _, val = part.strip().partition("=")
        if key == "preset":
            preset = val
    header = lines[1].strip().split(",")
    if header not in (["delay_um", "signal"], ["delay_um", "signal", "envelope_low", "envelope_high"]):
        raise CSVFormatError(f"unexpected column header {lines[1]!r}")
    rows = []
    for i, line in enumerate(lines[2:], start=3):
        fields = line.split(",")
        if len(fields) != len(header):
            raise CSVFormatError(f"line {i}: expected {len(header)} fields, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise CSVFormatError(f"line {i}: {exc}") from exc
    if not rows:
        raise CSVFormatError("no data rows")
    data = np.array(rows)
    if not np.all(np.isfinite(data)):
        raise CSVFormatError("non-finite values")
    env = (data[:, 2], data[:, 3]) if len(header) == 4 else (None, None)
    try:
        return Interferogram(data[:, 0], data[:, 1], *env, metadata={"preset": preset})
    except ValueError as exc:
        raise CSVFormatError(str(exc)) from exc


def read_csv(path) -> Interferogram:
    try:
        with open(path, newline="") as fh:
            return parse_csv(fh.read())
    except OSError as exc:
        raise CSVFormatError(f"cannot read {path}: {exc}") from exc


def write_svg(path, curve: Interferogram):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed hash salt and no date keep the file reproducible
    matplotlib.rcParams["svg.hashsalt"] = "cpi-lab"
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(curve.delays_um, curve.signal, lw=1.0, label="signal")
    if curve.is_envelope:
        ax.fill_between(curve.delays_um, curve.envelope_low, curve.envelope_high, alpha=0.3, label="fringe envelope")
        ax.legend()
    ax.set_xlabel("delay (µm)")
    ax.set_ylabel("signal (arb. units)")
    ax.set_title(curve.metadata.get("preset", ""))
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# -- commands ---------------------------------------------------------------

def _load_spec(arg: str):
    if arg.startswith("preset:"):
        name = arg.split(":", 1)[1]
        if name not in PRESETS:
            raise ConfigurationError(f"preset: unknown preset {name!r}")
        return preset_spec(name)
    try:
        return load_config(arg)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {arg}: {exc}") from exc


def cmd_run(config: str, out_csv: str, out_svg: str | None = None) -> int:
    spec = _load_spec(config)
    curve = scan(spec)
    write_csv(out_csv, curve, spec.preset)
    if out_svg:
        write_svg(out_svg, curve)
    return EXIT_OK


def cmd_preset(name: str, beat_delta: float = 17.0, out=None) -> int:
    out = out or sys.stdout
    out.write(dump_config(preset_spec(name, beat_delta_rad_per_ps=beat_delta)))
    return EXIT_OK


def _parse_window(text: str | None):
    if text is None:
        return None
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise ConfigurationError(f"window: expected 'a,b', got {text!r}") from None
    if not a < b:
        raise ConfigurationError("window: lower bound must be below upper bound")
    return a, b


METRICS = {
    "visibility": analysis.visibility,
    "period": analysis.fringe_period,
    "fwhm": analysis.envelope_fwhm,
}


def cmd_analyze(csv_path: str, metric: str, window: str | None = None, out=None) -> int:
    out = out or sys.stdout
    curve = read_csv(csv_path)
    result = METRICS[metric](curve, _parse_window(window))
    out.write(json.dumps(result.to_dict()) + "\n")
    return EXIT_OK


def cmd_compare(classical_csv: str, quantum_csv: str, out=None) -> int:
    out = out or sys.stdout
    a, b = read_csv(classical_csv), read_csv(quantum_csv)
    dist = analysis.curve_distance(a, b)
    ok = dist.l_inf <= COMPARE_TOLERANCE
    out.write(json.dumps({"l_inf": dist.l_inf, "l2": dist.l2, "pass": ok}) + "\n")
    return EXIT_OK if ok else EXIT_COMPARE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpi-lab", description="Chirped-pulse interferometry simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a config (or preset:<name>) and write a CSV interferogram")
    p.add_argument("config")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--svg")

    p = sub.add_parser("preset", help="print a preset's JSON config")
    p.add_argument("name", choices=PRESETS)
    p.add_argument("--beat-delta", type=float, default=17.0, help="beat spectral-peak difference, rad/ps")

    p = sub.add_parser("analyze", help="print a metric of a CSV interferogram as JSON")
    p.add_argument("csv")
    p.add_argument("--metric", required=True, choices=sorted(METRICS))
    p.add_argument("--window", help="delay window 'a,b' in um")

    p = sub.add_parser("compare", help="affine-normalized distance between two CSV curves")
    p.add_argument("classical")
    p.add_argument("quantum")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args.config, args.output, args.svg)
        if args.command == "preset":
            return cmd_preset(args.name, args.beat_delta)
        if args.command == "analyze":
            return cmd_analyze(args.csv, args.metric, args.window)
        return cmd_compare(args.classical, args.quantum)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalGuardError as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except MetricError as exc:
        print(f"metric error: {exc}", file=sys.stderr)
        return EXIT_METRIC


if __name__ == "__main__":
    sys.exit(main())
