"""Experiment descriptions: scenario files, presets, synthesis pipeline.

A scenario bundles everything one run needs: curves with their layer
materials, the half-space medium, the angular grid, the frequency sweep,
imaging parameters, noise, and the forward model choice.  Scenarios
serialize to a canonical JSON document (sorted keys, repr-exact floats)
so that serialize -> parse -> serialize is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ScenarioError
from .forward import (add_noise, assemble_msr_factored, assemble_msr_fine,
                      assemble_msr_foldylax, build_directions, MSRDataset)
from .geometry import ParametricCurve, eval_curve
from .imaging import SteeringConfig, default_steering
from .media import HalfSpaceMedium, InclusionMaterial, frequency_context

__all__ = [
    "Scenario",
    "Diagnostic",
    "preset",
    "preset_names",
    "validate",
    "frequency_list",
    "scenario_steering",
    "synthesize",
    "to_dict",
    "from_dict",
    "canonical_json",
    "scenario_hash",
    "save_scenario",
    "load_scenario",
]

FORWARD_MODELS = ("AsymptoticFine", "CoarseFactored", "FoldyLax")

# Fine-model quadrature: lambda_minus / FINE_QUAD_FACTOR node spacing.
FINE_QUAD_FACTOR = 20.0

# Angular aperture used by all presets (see the repository notes on the
# direction-count targets): near-half-plane illumination.
PRESET_ALPHA = 0.08
PRESET_BETA = math.pi - 0.08


@dataclass
class Scenario:
    """Full description of one synthesis + imaging experiment."""

    curves: list                      # [(ParametricCurve, InclusionMaterial)]
    medium: HalfSpaceMedium
    N: int
    alpha: float
    beta: float
    F: int
    omega_range: tuple
    search_domain: tuple = ((-1.0, 1.0), (-3.0, -1.0))
    grid_step: float = 0.02
    snr_db: float | None = None
    seed: int = 0
    forward_model: str = "AsymptoticFine"
    svd_threshold: float = 0.01
    steering: tuple | None = None
    label: str = ""


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding: severity ("error"/"warning"), field path, text."""

    severity: str
    path: str
    message: str


def frequency_list(scenario):
    """Equi-distributed angular frequencies over the scenario's range.

    Linear in omega with both endpoints included; a single frequency
    (``F = 1``) sits at the interval midpoint.  The interval orientation
    does not matter.
    """
    if scenario.F < 1:
        raise ScenarioError("F must be at least 1")
    lo, hi = sorted(float(w) for w in scenario.omega_range)
    if scenario.F == 1:
        return [0.5 * (lo + hi)]
    return [float(w) for w in np.linspace(lo, hi, scenario.F)]


def validate(scenario):
    """Check scenario invariants; returns diagnostics, never raises.

    Errors flag configurations synthesis would reject (bad counts,
    ranges, domains above the interface); warnings flag questionable but
    runnable setups (curve leaving the search domain, a layer thickness
    too close to the probing wavelength).
    """
    out = []

    def err(path, msg):
        out.append(Diagnostic("error", path, msg))

    def warn(path, msg):
        out.append(Diagnostic("warning", path, msg))

    if not scenario.curves:
        err("curves", "at least one curve is required")
    if scenario.N < 2:
        err("directions.N", "need at least two directions")
    if not (0.0 < scenario.alpha < scenario.beta < math.pi):
        err("directions", "need 0 < alpha < beta < pi")
    if scenario.F < 1:
        err("frequencies.F", "need at least one frequency")
    lo, hi = (min(scenario.omega_range), max(scenario.omega_range))
    if lo <= 0:
        err("frequencies.omega_range", "frequencies must be positive")
    if scenario.grid_step <= 0:
        err("imaging.grid_step", "grid step must be positive")
    if not (0.0 < scenario.svd_threshold <= 1.0):
        err("imaging.svd_threshold", "threshold must lie in (0, 1]")
    if scenario.forward_model not in FORWARD_MODELS:
        err("output.forward_model",
            f"unknown forward model {scenario.forward_model!r}")
    if scenario.steering is not None and len(scenario.steering) != 3:
        err("imaging.steering", "steering needs three coefficients")

    (x0, x1), (y0, y1) = scenario.search_domain
    if not (x1 > x0 and y1 > y0):
        err("imaging.search_domain", "domain bounds must be increasing")
    elif y1 > 0:
        err("imaging.search_domain",
            "search domain must lie in the lower half-plane (x2 <= 0)")

    for i, (curve, _material) in enumerate(scenario.curves):
        pts = _curve_cloud(curve)
        path = f"curves[{i}]"
        if np.any(pts[:, 1] >= 0):
            err(path, f"curve {curve.label or curve.kind!r} reaches the "
                "upper half-plane")
        elif not (np.all(pts[:, 0] >= x0) and np.all(pts[:, 0] <= x1)
                  and np.all(pts[:, 1] >= y0) and np.all(pts[:, 1] <= y1)):
            warn(path, f"curve {curve.label or curve.kind!r} leaves the "
                 "search domain")
        if lo > 0 and scenario.F >= 1:
            ctx_top = frequency_context(scenario.medium, hi)
            if curve.thickness_h >= ctx_top.lambda_minus / 5.0:
                warn(path + ".thickness_h",
                     "layer half-thickness is not small against the "
                     f"shortest probing wavelength ({ctx_top.lambda_minus:.4g})")
    return out


def _curve_cloud(curve, n=201):
    if curve.kind == "Points":
        return np.asarray(curve.params["points"], dtype=float)
    z = np.linspace(curve.z_range[0], curve.z_range[1], n)
    pos, _, _ = eval_curve(curve, z)
    return pos


def scenario_steering(scenario):
    """The steering configuration a scenario implies.

    Explicit coefficients win; otherwise the contrast type is inferred
    from the first curve's material against the lower medium.
    """
    if scenario.steering is not None:
        return SteeringConfig(tuple(scenario.steering))
    medium = scenario.medium
    _, material = scenario.curves[0]
    has_eps = any(mat.eps_T != medium.eps_minus for _, mat in scenario.curves)
    has_mu = any(mat.mu_T != medium.mu_minus for _, mat in scenario.curves)
    if has_eps and has_mu:
        return default_steering("Both", medium, material)
    if has_mu:
        if material.mu_T > medium.mu_minus:
            return default_steering("PermeabilityGreater")
        return default_steering("PermeabilityLess")
    return default_steering("Permittivity")


def synthesize(scenario):
    """Run the scenario's forward model at every frequency.

    Produces one MSR matrix per frequency, restricted to the propagating
    directions; optional white noise at ``snr_db`` is drawn independently
    per frequency from counter-based streams keyed by ``(seed, f)``.
    """
    problems = [d for d in validate(scenario) if d.severity == "error"]
    if problems:
        raise ScenarioError("; ".join(f"{d.path}: {d.message}"
                                      for d in problems))
    freqs = frequency_list(scenario)
    ctx0 = frequency_context(scenario.medium, freqs[0])
    dirs = build_directions(scenario.N, scenario.alpha, scenario.beta, ctx0)

    matrices = []
    for fi, omega in enumerate(freqs):
        ctx = frequency_context(scenario.medium, omega)
        total = None
        for curve, material in scenario.curves:
            k = _one_curve_matrix(scenario, curve, material, ctx, dirs)
            total = k if total is None else total + k
        if scenario.snr_db is not None:
            total = add_noise(total, scenario.snr_db, scenario.seed, stream=fi)
        matrices.append(total)

    return MSRDataset(frequencies=freqs, matrices=matrices,
                      direction_set=dirs, model=scenario.forward_model,
                      medium=scenario.medium,
                      inclusions=[mat for _, mat in scenario.curves],
                      noise={"snr_db": scenario.snr_db,
                             "seed": scenario.seed if scenario.snr_db is not None
                             else None})


def _one_curve_matrix(scenario, curve, material, ctx, dirs):
    if scenario.forward_model == "CoarseFactored":
        return assemble_msr_factored(curve, scenario.medium, material,
                                     ctx, dirs).matrix()
    spacing = ctx.lambda_minus / FINE_QUAD_FACTOR
    if scenario.forward_model == "FoldyLax":
        # Multi-curve scenarios couple nodes within each inclusion only;
        # presets keep inclusions several wavelengths apart.
        return assemble_msr_foldylax(curve, scenario.medium, material,
                                     ctx, dirs, spacing)
    return assemble_msr_fine(curve, scenario.medium, material, ctx, dirs,
                             spacing)


# --------------------------------------------------------------------------
# serialization

def to_dict(scenario):
    """Plain-dict form with the documented top-level grouping."""
    curves = []
    for curve, material in scenario.curves:
        entry = {
            "kind": curve.kind,
            "params": curve.params,
            "z_range": list(curve.z_range) if curve.z_range else None,
            "thickness_h": curve.thickness_h,
            "label": curve.label,
            "material": {"eps_T": material.eps_T, "mu_T": material.mu_T},
        }
        curves.append(entry)
    return {
        "curves": curves,
        "medium": {
            "eps_plus": scenario.medium.eps_plus,
            "mu_plus": scenario.medium.mu_plus,
            "eps_minus": scenario.medium.eps_minus,
            "mu_minus": scenario.medium.mu_minus,
        },
        "directions": {"N": scenario.N, "alpha": scenario.alpha,
                       "beta": scenario.beta},
        "frequencies": {"F": scenario.F,
                        "omega_min": min(scenario.omega_range),
                        "omega_max": max(scenario.omega_range)},
        "imaging": {"search_domain": [list(scenario.search_domain[0]),
                                      list(scenario.search_domain[1])],
                    "grid_step": scenario.grid_step,
                    "svd_threshold": scenario.svd_threshold,
                    "steering": (list(scenario.steering)
                                 if scenario.steering is not None else None)},
        "noise": {"snr_db": scenario.snr_db, "seed": scenario.seed},
        "output": {"forward_model": scenario.forward_model,
                   "label": scenario.label},
    }


def from_dict(doc):
    """Inverse of :func:`to_dict`; raises ScenarioError on shape problems."""
    try:
        curves = []
        for entry in doc["curves"]:
            material = InclusionMaterial(**entry["material"])
            z_range = entry.get("z_range")
            curve = ParametricCurve(
                kind=entry["kind"], params=entry.get("params", {}),
                z_range=tuple(z_range) if z_range else None,
                thickness_h=entry.get("thickness_h", 0.015),
                label=entry.get("label", ""))
            curves.append((curve, material))
        medium = HalfSpaceMedium(**doc["medium"])
        directions = doc["directions"]
        freq = doc["frequencies"]
        imaging = doc["imaging"]
        noise = doc.get("noise", {})
        output = doc.get("output", {})
        domain = imaging["search_domain"]
        steering = imaging.get("steering")
        return Scenario(
            curves=curves, medium=medium,
            N=int(directions["N"]), alpha=float(directions["alpha"]),
            beta=float(directions["beta"]),
            F=int(freq["F"]),
            omega_range=(float(freq["omega_min"]), float(freq["omega_max"])),
            search_domain=(tuple(domain[0]), tuple(domain[1])),
            grid_step=float(imaging["grid_step"]),
            snr_db=(None if noise.get("snr_db") is None
                    else float(noise["snr_db"])),
            seed=int(noise.get("seed", 0)),
            forward_model=output.get("forward_model", "AsymptoticFine"),
            svd_threshold=float(imaging.get("svd_threshold", 0.01)),
            steering=tuple(steering) if steering is not None else None,
            label=output.get("label", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed scenario document: {exc}") from exc


def canonical_json(scenario):
    """Canonical text form: sorted keys, minimal separators, repr floats."""
    return json.dumps(to_dict(scenario), sort_keys=True,
                      separators=(",", ":"), allow_nan=False)


def scenario_hash(scenario):
    """Hex digest identifying the scenario's canonical form."""
    return hashlib.sha256(canonical_json(scenario).encode("ascii")).hexdigest()


def save_scenario(scenario, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(canonical_json(scenario))
        fh.write("\n")


def load_scenario(path):
    with open(path, "r", encoding="ascii") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: not valid JSON: {exc}") from exc
    return from_dict(doc)


# --------------------------------------------------------------------------
# preset catalog

def _sigma1():
    return ParametricCurve(kind="Sigma1", label="sigma1")


def _sigma2():
    return ParametricCurve(kind="Sigma2", label="sigma2")


# (N, F, omega_range) per table row; omega ranges written as 2*pi/lambda.
_ROWS = {
    "table1": {"gamma1": (32, 30, (0.4, 0.2), "sigma1"),
               "gamma2": (40, 36, (0.3, 0.1), "sigma2"),
               "gammam": (48, 40, (0.2, 0.1), "both")},
    "table2": {"gamma1": (36, 32, (0.4, 0.2), "sigma1"),
               "gamma2": (42, 36, (0.3, 0.2), "sigma2"),
               "gammam": (50, 42, (0.2, 0.1), "both")},
    "table3": {"gamma1": (40, 36, (0.4, 0.2), "sigma1"),
               "gamma2": (48, 40, (0.3, 0.2), "sigma2"),
               "gammam": (60, 48, (0.2, 0.1), "both")},
}

# (medium, strong/weak inclusion values) per table and upper-medium case.
_MEDIA = {
    ("table1", False): HalfSpaceMedium(5.0, 1.0, 4.0, 1.0),
    ("table1", True): HalfSpaceMedium(1.0, 1.0, 3.0, 1.0),
    ("table2", False): HalfSpaceMedium(1.0, 5.0, 1.0, 4.0),
    ("table2", True): HalfSpaceMedium(1.0, 1.0, 1.0, 3.0),
    ("table3", False): HalfSpaceMedium(5.0, 5.0, 4.0, 4.0),
    ("table3", True): HalfSpaceMedium(1.0, 1.0, 3.0, 3.0),
}


def _material(table, medium, value):
    if table == "table1":
        return InclusionMaterial(eps_T=value, mu_T=medium.mu_minus)
    if table == "table2":
        return InclusionMaterial(eps_T=medium.eps_minus, mu_T=value)
    return InclusionMaterial(eps_T=value, mu_T=value)


def _build_preset(table, row, contrast_105, air):
    n, f, (lam_lo, lam_hi), shape = _ROWS[table][row]
    medium = _MEDIA[(table, air)]
    if shape == "both":
        first = _material(table, medium, 10.0 if contrast_105 else 5.0)
        second = _material(table, medium, 5.0)
        curves = [(_sigma1(), first), (_sigma2(), second)]
    else:
        curve = _sigma1() if shape == "sigma1" else _sigma2()
        curves = [(curve, _material(table, medium, 5.0))]
    name = f"{table}-{row}" + ("-contrast-10-5" if contrast_105 else "") \
        + ("-air" if air else "")
    return Scenario(
        curves=curves, medium=medium, N=n,
        alpha=PRESET_ALPHA, beta=PRESET_BETA,
        F=f, omega_range=(2.0 * math.pi / lam_lo, 2.0 * math.pi / lam_hi),
        search_domain=((-1.0, 1.0), (-3.0, -1.0)),
        grid_step=0.02, snr_db=20.0, seed=0,
        forward_model="AsymptoticFine", svd_threshold=0.01,
        steering=None, label=name)


def _catalog():
    names = {}
    for table in _ROWS:
        for row in _ROWS[table]:
            for air in (False, True):
                names[f"{table}-{row}" + ("-air" if air else "")] = \
                    (table, row, False, air)
                if row == "gammam":
                    names[f"{table}-{row}-contrast-10-5"
                          + ("-air" if air else "")] = (table, row, True, air)
    return names


_CATALOG = _catalog()


def preset_names():
    """Sorted catalog of preset names."""
    return sorted(_CATALOG)


def preset(name):
    """Build the named preset scenario (case-insensitive).

    Unknown names raise ``ScenarioError`` whose message lists the catalog.
    """
    key = name.strip().lower()
    if key not in _CATALOG:
        raise ScenarioError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return _build_preset(*_CATALOG[key])
