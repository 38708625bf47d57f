"""Command-line front end.

Subcommands
-----------
synthesize   build the forward data for a scenario and write a dataset dir
image        invert a dataset directory into an indicator map
metrics      score a map file against a scenario's true curves
reproduce    synthesize + image + metrics + report for a named preset
presets      list the preset catalog

Exit codes: 0 on success, 1 on runtime failure (corrupt data, singular
systems, empty signal subspace), 2 on usage or validation problems.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .errors import ScenarioError, ThinscatError
from .imaging import SteeringConfig, default_steering, image_multi, make_grid
from .io import (dataset_load, dataset_save, load_map_csv, save_map_csv,
                 save_map_pgm, save_map_png)
from .media import frequency_context
from .metrics import peak_metrics
from .scenario import (canonical_json, frequency_list, load_scenario, preset,
                       preset_names, save_scenario, scenario_hash,
                       scenario_steering, synthesize, validate)

__all__ = ["main", "cmd_synthesize", "cmd_image", "cmd_metrics",
           "cmd_reproduce", "cmd_presets"]

_FORWARD_NAMES = {"fine": "AsymptoticFine", "coarse": "CoarseFactored",
                  "foldylax": "FoldyLax"}

DEFAULT_DOMAIN = ((-1.0, 1.0), (-3.0, -1.0))


def _steering_triple(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            "steering must be three comma-separated numbers a,b1,b2")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _resolve_scenario(arg):
    """Accept either a scenario JSON path or a preset name."""
    if os.path.exists(arg) or arg.endswith(".json"):
        return load_scenario(arg)
    return preset(arg)


def _apply_overrides(scenario, args):
    if getattr(args, "seed", None) is not None:
        scenario.seed = args.seed
    if getattr(args, "forward", None) is not None:
        scenario.forward_model = _FORWARD_NAMES[args.forward]
    if getattr(args, "threshold", None) is not None:
        scenario.svd_threshold = args.threshold
    if getattr(args, "grid_step", None) is not None:
        scenario.grid_step = args.grid_step
    if getattr(args, "steering", None) is not None:
        scenario.steering = args.steering
    return scenario


def _emit_diagnostics(diags, stream):
    for d in diags:
        print(f"{d.severity}: {d.path}: {d.message}", file=stream)


def _infer_steering(dataset):
    medium = dataset.medium
    if medium is None or not dataset.inclusions:
        return default_steering("Permittivity")
    has_eps = any(inc.eps_T != medium.eps_minus for inc in dataset.inclusions)
    has_mu = any(inc.mu_T != medium.mu_minus for inc in dataset.inclusions)
    first = dataset.inclusions[0]
    if has_eps and has_mu:
        return default_steering("Both", medium, first)
    if has_mu:
        kind = ("PermeabilityGreater" if first.mu_T > medium.mu_minus
                else "PermeabilityLess")
        return default_steering(kind)
    return default_steering("Permittivity")


def _max_location(image_map):
    ny, nx = image_map.values.shape
    (x0, x1), (y0, y1) = image_map.domain
    iy, ix = np.unravel_index(int(np.argmax(image_map.values)), (ny, nx))
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    return [float(xs[ix]), float(ys[iy])], float(image_map.values[iy, ix])


def _write_map_products(image_map, out_dir):
    paths = {}
    csv_path = os.path.join(out_dir, "map.csv")
    save_map_csv(image_map, csv_path)
    paths["map_csv"] = csv_path
    pgm_path = os.path.join(out_dir, "map.pgm")
    save_map_pgm(image_map, pgm_path)
    paths["map_pgm"] = pgm_path
    paths["map_pgm_range"] = pgm_path + ".range.txt"
    png_path = os.path.join(out_dir, "map.png")
    if save_map_png(image_map, png_path):
        paths["map_png"] = png_path
    return paths


# --------------------------------------------------------------------------
# subcommands

def cmd_synthesize(args):
    try:
        scenario = _resolve_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _apply_overrides(scenario, args)
    # Noise is opt-in on the command line: without --snr-db the dataset is
    # noiseless and the metadata records that.
    scenario.snr_db = args.snr_db

    diags = validate(scenario)
    _emit_diagnostics([d for d in diags if d.severity == "warning"],
                      sys.stderr)
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        _emit_diagnostics(errors, sys.stderr)
        return 2

    os.makedirs(args.out, exist_ok=True)
    dataset = synthesize(scenario)
    save_scenario(scenario, os.path.join(args.out, "scenario.json"))
    written = dataset_save(dataset, args.out)
    n_plus = dataset.direction_set.N_plus
    print(f"wrote {len(dataset.matrices)} matrices "
          f"({n_plus}x{n_plus}) to {args.out}")
    print(f"files: {len(written) + 1}")
    return 0


def cmd_image(args):
    dataset = dataset_load(args.dataset)
    if dataset.medium is None:
        print("error: dataset metadata does not record the background "
              "medium", file=sys.stderr)
        return 1
    cfg = (SteeringConfig(args.steering) if args.steering is not None
           else _infer_steering(dataset))
    step = args.grid_step if args.grid_step is not None else 0.02
    threshold = args.threshold if args.threshold is not None else 0.01
    grid = make_grid(DEFAULT_DOMAIN, step)
    image_map = image_multi(dataset, dataset.medium, dataset.direction_set,
                            cfg, grid, threshold=threshold)
    m_f = list(image_map.meta["M_f"])
    if all(m == 0 for m in m_f):
        print("error: no signal subspace: every frequency truncated to "
              f"zero singular values at threshold {threshold}",
              file=sys.stderr)
        return 1

    os.makedirs(args.out, exist_ok=True)
    paths = _write_map_products(image_map, args.out)
    loc, peak = _max_location(image_map)
    report = {
        "M_f": m_f,
        "frequencies": [float(w) for w in dataset.frequencies],
        "threshold": threshold,
        "steering": list(cfg.c),
        "max_location": loc,
        "max_value": peak,
        "outputs": paths,
    }
    report_path = os.path.join(args.out, "image_report.json")
    with open(report_path, "w", encoding="ascii") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"imaged {len(m_f)} frequencies, signal dimensions {m_f}")
    print(f"peak {peak:.4f} at ({loc[0]:.3f}, {loc[1]:.3f}); "
          f"report: {report_path}")
    return 0


def cmd_metrics(args):
    if not (0.0 < args.level < 1.0):
        print("error: --level must lie strictly between 0 and 1",
              file=sys.stderr)
        return 2
    try:
        scenario = _resolve_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    image_map = load_map_csv(args.map)
    truth = [curve for curve, _ in scenario.curves]
    lam = frequency_context(scenario.medium,
                            min(frequency_list(scenario))).lambda_minus
    result = peak_metrics(image_map, truth, level=args.level,
                          tube_radius=lam)
    doc = result.as_dict()
    doc["level"] = args.level
    doc["tube_radius"] = lam
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def cmd_reproduce(args):
    try:
        scenario = preset(args.preset)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _apply_overrides(scenario, args)
    if args.snr_db is not None:
        scenario.snr_db = args.snr_db

    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    timings = {}
    outputs = {}

    stage = "synthesize"
    try:
        t0 = time.perf_counter()
        dataset = synthesize(scenario)
        dataset_dir = os.path.join(out_dir, "dataset")
        dataset_save(dataset, dataset_dir)
        scenario_path = os.path.join(out_dir, "scenario.json")
        save_scenario(scenario, scenario_path)
        outputs["scenario"] = scenario_path
        outputs["dataset"] = dataset_dir
        timings[stage] = time.perf_counter() - t0

        stage = "image"
        t0 = time.perf_counter()
        cfg = scenario_steering(scenario)
        grid = make_grid(scenario.search_domain, scenario.grid_step)
        image_map = image_multi(dataset, scenario.medium,
                                dataset.direction_set, cfg, grid,
                                threshold=scenario.svd_threshold)
        m_f = list(image_map.meta["M_f"])
        if all(m == 0 for m in m_f):
            raise ThinscatError(
                "no signal subspace: every frequency truncated to zero "
                f"singular values at threshold {scenario.svd_threshold}")
        outputs.update(_write_map_products(image_map, out_dir))
        timings[stage] = time.perf_counter() - t0

        stage = "metrics"
        t0 = time.perf_counter()
        truth = [curve for curve, _ in scenario.curves]
        lam = frequency_context(scenario.medium,
                                min(dataset.frequencies)).lambda_minus
        result = peak_metrics(image_map, truth, level=args.level,
                              tube_radius=lam)
        metric_doc = result.as_dict()
        metric_doc["level"] = args.level
        metric_doc["tube_radius"] = lam
        metrics_path = os.path.join(out_dir, "metrics.json")
        with open(metrics_path, "w", encoding="ascii") as fh:
            json.dump(metric_doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        outputs["metrics"] = metrics_path
        timings[stage] = time.perf_counter() - t0

        stage = "report"
        loc, peak = _max_location(image_map)
        report = {
            "preset": scenario.label,
            "scenario_hash": scenario_hash(scenario),
            "M_f": m_f,
            "frequencies": [float(w) for w in dataset.frequencies],
            "max_location": loc,
            "max_value": peak,
            "metrics": metric_doc,
            "timings": timings,
            "outputs": outputs,
        }
        report_path = os.path.join(out_dir, "report.json")
        with open(report_path, "w", encoding="ascii") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except Exception as exc:
        print(f"[{stage}] {exc}", file=sys.stderr)
        return 1

    print(f"report: {report_path}")
    print(f"false alarm {metric_doc['false_alarm']:.4f}, "
          f"coverage {metric_doc['coverage']:.4f}, peak {peak:.4f}")
    return 0


def cmd_presets(args):
    for name in preset_names():
        s = preset(name)
        kinds = "+".join(c.label or c.kind for c, _ in s.curves)
        print(f"{name:36s} N={s.N:<3d} F={s.F:<3d} curves={kinds}")
    return 0


# --------------------------------------------------------------------------
# parser

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="thinscat",
        description="Subspace imaging of thin buried scattering layers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize",
                       help="run a forward model, write a dataset directory")
    p.add_argument("scenario", help="preset name or scenario JSON path")
    p.add_argument("--out", required=True, help="output dataset directory")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--snr-db", type=float, default=None,
                   help="add noise at this SNR; omit for noiseless data")
    p.add_argument("--forward", choices=sorted(_FORWARD_NAMES), default=None)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("image", help="invert a dataset into an indicator map")
    p.add_argument("dataset", help="dataset directory")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--threshold", type=float, default=None,
                   help="relative singular-value cutoff (default 0.01)")
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("--steering", type=_steering_triple, default=None,
                   metavar="a,b1,b2")
    p.set_defaults(func=cmd_image)

    p = sub.add_parser("metrics", help="score a map against true curves")
    p.add_argument("map", help="map CSV file")
    p.add_argument("scenario", help="preset name or scenario JSON path")
    p.add_argument("--level", type=float, default=0.7)
    p.add_argument("--out", default=None, help="write JSON here")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("reproduce",
                       help="synthesize, image and score a preset end to end")
    p.add_argument("preset", help="preset name")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--snr-db", type=float, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("--steering", type=_steering_triple, default=None,
                   metavar="a,b1,b2")
    p.add_argument("--forward", choices=sorted(_FORWARD_NAMES), default=None)
    p.add_argument("--level", type=float, default=0.7)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("presets", help="list the preset catalog")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ThinscatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
