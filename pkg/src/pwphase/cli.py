"""Command-line front end.

Subcommands: ambiguity (window ambiguity grid -> CSV), measure (signal +
window -> magnitude CSV), reconstruct (magnitude CSV -> report JSON), verify
(invariant suite -> report JSON, nonzero exit on failure), counterexample
(emit the explicit non-uniqueness pairs plus an equality-of-data report).

Exit codes: 0 success, 1 pipeline/verification failure (stderr names the
error variant), 2 malformed configuration or I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import PwPhaseError
from .grids import UniformGrid
from .recon import (
    report_to_json,
    reconstruct_complex_strip,
    reconstruct_complex_two_slices,
    reconstruct_real_full,
    reconstruct_real_sampled,
)
from .signals import (
    PWSignal,
    counterexample_pair,
    default_grid,
    distance_up_to_phase,
    eval_time,
    random_pw_signal,
    signal_from_json,
    signal_to_json,
)
from .transforms import (
    ambiguity_relation_residual,
    band_support_residual,
    magnitude_measurement,
    read_magnitude_grid_csv,
    read_samples_csv,
    recon_axes,
    write_complex_grid_csv,
    write_magnitude_grid_csv,
    write_samples_csv,
)
from .windows import (
    WindowSpec,
    ambiguity_quadrature,
    window_ambiguity,
    window_from_dict,
)
from .grids import ComplexField2D


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pwphase")
    sub = p.add_subparsers(dest="command", required=True)

    def add_window_args(sp):
        sp.add_argument("--window", choices=("gaussian", "hermite", "rect", "hanning"))
        sp.add_argument("--hermite-n", type=int, default=0)
        sp.add_argument("--window-file", help="JSON window spec (supports pw windows)")

    amb = sub.add_parser("ambiguity", help="dump a window ambiguity grid as CSV")
    add_window_args(amb)
    amb.add_argument("--x-min", type=float, default=-2.0)
    amb.add_argument("--x-max", type=float, default=2.0)
    amb.add_argument("--x-step", type=float, default=1.0 / 32.0)
    amb.add_argument("--omega-min", type=float, default=-2.0)
    amb.add_argument("--omega-max", type=float, default=2.0)
    amb.add_argument("--omega-step", type=float, default=1.0 / 32.0)
    amb.add_argument("--out", required=True)

    mea = sub.add_parser("measure", help="simulate magnitude measurements")
    add_window_args(mea)
    mea.add_argument("--signal", required=True, help="signal spec JSON file")
    mea.add_argument("--geometry", choices=("grid", "sampled"), default="grid")
    mea.add_argument("--n-samples", type=int, default=256)
    mea.add_argument("--noise-sigma", type=float, default=0.0)
    mea.add_argument("--seed", type=int, default=0)
    mea.add_argument("--out", required=True)

    rec = sub.add_parser("reconstruct", help="run a reconstruction pipeline")
    add_window_args(rec)
    rec.add_argument(
        "--method",
        required=True,
        choices=("real-full", "real-sampled", "complex-two", "complex-strip"),
    )
    rec.add_argument("--input", required=True, help="magnitude CSV from `measure`")
    rec.add_argument("--B", type=float, required=True)
    rec.add_argument("--c", type=float, default=None)
    rec.add_argument("--floor", type=float, default=1e-6)
    rec.add_argument("--out", required=True)

    ver = sub.add_parser("verify", help="run the invariant suite")
    add_window_args(ver)
    ver.add_argument("--signal", help="signal spec JSON file")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--real", action="store_true")
    ver.add_argument("--pieces", type=int, default=2)
    ver.add_argument("--B", type=float, default=1.0)
    ver.add_argument("--out", required=True)

    ce = sub.add_parser("counterexample", help="emit a non-uniqueness pair")
    ce.add_argument("--kind", required=True, choices=("real", "complex"))
    ce.add_argument("--B", type=float, default=1.0)
    ce.add_argument("--eps", type=float, default=None)
    ce.add_argument("--out-prefix", required=True)
    return p


def _build_window(args) -> WindowSpec:
    if getattr(args, "window_file", None):
        with open(args.window_file) as fh:
            return window_from_dict(json.load(fh))
    if getattr(args, "window", None) is None:
        raise ValueError("one of --window or --window-file is required")
    return WindowSpec(family=args.window, n=args.hermite_n)


def _load_signal(path: str) -> PWSignal:
    with open(path) as fh:
        return signal_from_json(fh.read())


def _cmd_ambiguity(args) -> int:
    w = _build_window(args)
    x_axis = UniformGrid.from_span(args.x_min, args.x_max, args.x_step)
    om_axis = UniformGrid.from_span(args.omega_min, args.omega_max, args.omega_step)
    xs = x_axis.points()
    oms = om_axis.points()
    values = np.empty((xs.size, oms.size), dtype=complex)
    for i, x in enumerate(xs):
        values[i, :] = np.atleast_1d(window_ambiguity(w, float(x), oms))
    write_complex_grid_csv(args.out, ComplexField2D(x_axis, om_axis, values))
    return 0


def _cmd_measure(args) -> int:
    w = _build_window(args)
    f = _load_signal(args.signal)
    if args.geometry == "grid":
        x_axis, om_axis = recon_axes(f.band)
        m = magnitude_measurement(
            f, w, geometry="grid", x_axis=x_axis, omega_axis=om_axis,
            noise_sigma=args.noise_sigma, seed=args.seed,
        )
        write_magnitude_grid_csv(args.out, m)
    else:
        m = magnitude_measurement(
            f, w, geometry="sampled", n_samples=args.n_samples,
            noise_sigma=args.noise_sigma, seed=args.seed,
        )
        write_samples_csv(args.out, m)
    return 0


def _cmd_reconstruct(args) -> int:
    w = _build_window(args)
    band = args.B
    if args.method == "real-sampled":
        s = read_samples_csv(args.input, band)
        rep = reconstruct_real_sampled(s, w, band, floor=args.floor)
    else:
        m = read_magnitude_grid_csv(args.input)
        if args.method == "real-full":
            rep = reconstruct_real_full(m, w, band)
        elif args.method == "complex-two":
            if args.c is None:
                raise ValueError("--c is required for complex-two")
            rep = reconstruct_complex_two_slices(m, w, band, args.c)
        else:
            rep = reconstruct_complex_strip(m, w, band)
    with open(args.out, "w") as fh:
        fh.write(report_to_json(rep))
        fh.write("\n")
    return 0


def _cmd_verify(args) -> int:
    w = _build_window(args)
    band = args.B
    if args.signal:
        f = _load_signal(args.signal)
        band = f.band
    else:
        f = random_pw_signal(band, args.pieces, args.real, args.seed)

    checks = []

    span = min(2.0, 2.0 / band)
    ax = UniformGrid.from_span(-span, span, 1.0 / 8.0)
    rel = ambiguity_relation_residual(f, w, ax, ax)
    checks.append(("ambiguity_relation_residual", rel, 1e-5))

    om_probe = UniformGrid(2.0 * band, band, 2)
    x_probe = UniformGrid(0.0, 0.5 / band, 2)
    bandres = band_support_residual(f, om_probe, x_probe)
    checks.append(("band_support_residual", bandres, 1e-6))

    if w.family in ("gaussian", "hermite", "rect"):
        pts = [(0.0, 0.0), (0.5, -0.25), (-1.0, 0.75)]
        worst = 0.0
        for x, om in pts:
            quad = ambiguity_quadrature(w, x, om)
            closed = window_ambiguity(w, x, om)
            worst = max(worst, abs(quad - closed))
        checks.append(("window_ambiguity_closed_form", worst, 1e-6))

    fr, gr = counterexample_pair("real", band)
    grid = default_grid(band)
    t = grid.points()
    mag_gap = float(np.max(np.abs(np.abs(eval_time(fr, t)) - np.abs(eval_time(gr, t)))))
    checks.append(("counterexample_equal_magnitudes", mag_gap, 1e-10))

    results = []
    ok = True
    for name, value, tol in checks:
        passed = bool(value <= tol)
        ok = ok and passed
        results.append({"name": name, "value": value, "tolerance": tol, "pass": passed})
    sep = distance_up_to_phase(fr, gr, grid).value
    sep_floor = 0.1 * fr.spectrum_norm2()
    sep_pass = bool(sep >= sep_floor)
    ok = ok and sep_pass
    results.append(
        {"name": "counterexample_separation", "value": sep,
         "minimum": sep_floor, "pass": sep_pass}
    )
    doc = {
        "schema": 1,
        "ambiguity_relation_residual": rel,
        "checks": results,
        "pass": ok,
    }
    with open(args.out, "w") as fh:
        fh.write(json.dumps(doc, sort_keys=True))
        fh.write("\n")
    return 0 if ok else 1


def _cmd_counterexample(args) -> int:
    f, g = counterexample_pair(args.kind, args.B, args.eps)
    grid = default_grid(args.B)
    t = grid.points()
    fv = np.asarray(eval_time(f, t))
    gv = np.asarray(eval_time(g, t))
    doc = {
        "schema": 1,
        "kind": args.kind,
        "B": args.B,
        "max_magnitude_gap": float(np.max(np.abs(np.abs(fv) - np.abs(gv)))),
        "distance_up_to_phase": distance_up_to_phase(f, g, grid).value,
    }
    if args.kind == "complex":
        c = 1.0 / (2.0 * args.B - args.eps)
        rf = fv * np.conj(eval_time(f, t - c))
        rg = gv * np.conj(eval_time(g, t - c))
        doc["c"] = c
        doc["max_crosscorrelation_gap"] = float(np.max(np.abs(rf - rg)))
    with open(f"{args.out_prefix}_f.json", "w") as fh:
        fh.write(signal_to_json(f))
        fh.write("\n")
    with open(f"{args.out_prefix}_g.json", "w") as fh:
        fh.write(signal_to_json(g))
        fh.write("\n")
    with open(f"{args.out_prefix}_report.json", "w") as fh:
        fh.write(json.dumps(doc, sort_keys=True))
        fh.write("\n")
    return 0


_COMMANDS = {
    "ambiguity": _cmd_ambiguity,
    "measure": _cmd_measure,
    "reconstruct": _cmd_reconstruct,
    "verify": _cmd_verify,
    "counterexample": _cmd_counterexample,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PwPhaseError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
