"""On-disk formats: dataset directories, matrix CSV, map CSV/PGM/PNG.

A dataset is a directory holding one raw little-endian complex-double
(``<c16``, row-major) binary per frequency, a matching human-readable CSV
per frequency, and a ``metadata.json`` describing the angular grid,
frequencies, materials, noise, and generator.  All writers are
deterministic: same inputs, same bytes.
"""

from __future__ import annotations

import importlib.util
import json
import os

import numpy as np

from .errors import DatasetError
from .forward import DirectionSet, MSRDataset
from .media import HalfSpaceMedium, InclusionMaterial

__all__ = [
    "dataset_save",
    "dataset_load",
    "export_matrix_csv",
    "save_map_csv",
    "load_map_csv",
    "save_map_pgm",
    "save_map_png",
]

_FORMAT_TAG = "thinscat-dataset-1"
_GENERATOR_TAG = "philox-counter-2x64"


def _matrix_name(index, ext):
    return f"matrix_{index:03d}.{ext}"


def export_matrix_csv(matrix, path):
    """Write one complex matrix as ``j,l,re,im`` rows (0-based indices)."""
    matrix = np.asarray(matrix)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("j,l,re,im\n")
        for j in range(matrix.shape[0]):
            for l in range(matrix.shape[1]):
                z = complex(matrix[j, l])
                fh.write(f"{j},{l},{z.real!r},{z.imag!r}\n")


def dataset_save(dataset, dirpath):
    """Write an :class:`MSRDataset` to ``dirpath`` (created if needed).

    Emits ``matrix_<f>.bin`` (raw ``<c16`` row-major), ``matrix_<f>.csv``,
    and ``metadata.json``; returns the list of written paths.
    """
    os.makedirs(dirpath, exist_ok=True)
    written = []
    for i, matrix in enumerate(dataset.matrices):
        raw = np.ascontiguousarray(matrix).astype("<c16")
        bin_path = os.path.join(dirpath, _matrix_name(i, "bin"))
        with open(bin_path, "wb") as fh:
            fh.write(raw.tobytes(order="C"))
        csv_path = os.path.join(dirpath, _matrix_name(i, "csv"))
        export_matrix_csv(matrix, csv_path)
        written += [bin_path, csv_path]

    dirs = dataset.direction_set
    meta = {
        "format": _FORMAT_TAG,
        "generator": _GENERATOR_TAG,
        "model": dataset.model,
        "dtype": "<c16",
        "order": "C",
        "N": dirs.N,
        "N_plus": dirs.N_plus,
        "alpha": dirs.alpha,
        "beta": dirs.beta,
        "zeta": [float(z) for z in dirs.zeta],
        "propagating_mask": [int(b) for b in dirs.propagating_mask],
        "frequencies": [float(w) for w in dataset.frequencies],
        "noise": {"snr_db": dataset.noise.get("snr_db"),
                  "seed": dataset.noise.get("seed")},
        "matrix_files": [_matrix_name(i, "bin")
                         for i in range(len(dataset.matrices))],
    }
    if dataset.medium is not None:
        m = dataset.medium
        meta["medium"] = {"eps_plus": m.eps_plus, "mu_plus": m.mu_plus,
                          "eps_minus": m.eps_minus, "mu_minus": m.mu_minus}
    if dataset.inclusions:
        meta["inclusions"] = [{"eps_T": inc.eps_T, "mu_T": inc.mu_T}
                              for inc in dataset.inclusions]
    meta_path = os.path.join(dirpath, "metadata.json")
    with open(meta_path, "w", encoding="ascii") as fh:
        json.dump(meta, fh, sort_keys=True, indent=1)
        fh.write("\n")
    written.append(meta_path)
    return written


def dataset_load(dirpath):
    """Read a dataset directory back into an :class:`MSRDataset`."""
    meta_path = os.path.join(dirpath, "metadata.json")
    if not os.path.isfile(meta_path):
        raise DatasetError(f"no metadata.json under {dirpath!r}")
    try:
        with open(meta_path, "r", encoding="ascii") as fh:
            meta = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"metadata.json is not valid JSON: {exc}") from exc
    if meta.get("format") != _FORMAT_TAG:
        raise DatasetError(f"unknown dataset format {meta.get('format')!r}")

    zeta = np.asarray(meta["zeta"], dtype=float)
    mask = np.asarray(meta["propagating_mask"], dtype=bool)
    obs = np.stack([np.cos(zeta), np.sin(zeta)], axis=-1)
    dirs = DirectionSet(N=int(meta["N"]), alpha=float(meta["alpha"]),
                        beta=float(meta["beta"]), zeta=zeta,
                        observations=obs, incidences=-obs,
                        propagating_mask=mask, N_plus=int(mask.sum()))
    if dirs.N_plus != int(meta["N_plus"]):
        raise DatasetError("propagating_mask disagrees with stored N_plus")

    n_plus = dirs.N_plus
    expected = n_plus * n_plus * 16
    matrices = []
    for name in meta["matrix_files"]:
        path = os.path.join(dirpath, name)
        if not os.path.isfile(path):
            raise DatasetError(f"dataset file missing: {name}")
        raw = open(path, "rb").read()
        if len(raw) != expected:
            raise DatasetError(
                f"{name}: expected {expected} bytes for a {n_plus}x{n_plus} "
                f"<c16 matrix, found {len(raw)} (parse stops at offset "
                f"{min(len(raw), expected)})")
        matrices.append(np.frombuffer(raw, dtype="<c16").reshape(n_plus, n_plus)
                        .astype(complex))

    medium = None
    if "medium" in meta:
        medium = HalfSpaceMedium(**meta["medium"])
    inclusions = [InclusionMaterial(**inc) for inc in meta.get("inclusions", [])]
    return MSRDataset(frequencies=[float(w) for w in meta["frequencies"]],
                      matrices=matrices, direction_set=dirs,
                      model=meta["model"], medium=medium,
                      inclusions=inclusions, noise=meta.get("noise", {}))


def save_map_csv(image_map, path):
    """Write a map as ``x1,x2,w`` rows, x-fastest, bottom row first."""
    (x0, x1), (y0, y1) = image_map.domain
    ny, nx = image_map.values.shape
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("x1,x2,w\n")
        for iy in range(ny):
            for ix in range(nx):
                fh.write(f"{float(xs[ix])!r},{float(ys[iy])!r},"
                         f"{float(image_map.values[iy, ix])!r}\n")


def load_map_csv(path):
    """Read a ``x1,x2,w`` CSV back into an :class:`ImageMap`."""
    from .imaging import ImageMap

    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    if data.ndim != 2 or data.shape[1] != 3 or data.shape[0] == 0:
        raise DatasetError(f"{path}: expected x1,x2,w rows")
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    if len(xs) * len(ys) != data.shape[0]:
        raise DatasetError(f"{path}: rows do not form a full grid")
    values = np.full((len(ys), len(xs)), np.nan)
    ix = np.searchsorted(xs, data[:, 0])
    iy = np.searchsorted(ys, data[:, 1])
    values[iy, ix] = data[:, 2]
    step = float(xs[1] - xs[0]) if len(xs) > 1 else 0.0
    return ImageMap(domain=((float(xs[0]), float(xs[-1])),
                            (float(ys[0]), float(ys[-1]))),
                    step=step, values=values, meta={"source": str(path)})


def _quantize(image_map):
    w = np.asarray(image_map.values, dtype=float)
    lo, hi = float(w.min()), float(w.max())
    if hi > lo:
        scaled = (w - lo) / (hi - lo) * 65535.0
    else:
        scaled = np.zeros_like(w)
    # top image row = largest x2 (visual orientation)
    return np.rint(scaled[::-1]).astype(">u2"), lo, hi


def save_map_pgm(image_map, path):
    """Write a 16-bit binary PGM (P5) plus a ``.range.txt`` sidecar.

    Pixels are per-map min-max normalized to 0..65535; the sidecar
    records the original value range so the scale is recoverable.
    """
    pixels, lo, hi = _quantize(image_map)
    ny, nx = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n65535\n".encode("ascii"))
        fh.write(pixels.tobytes(order="C"))
    with open(str(path) + ".range.txt", "w", encoding="ascii") as fh:
        fh.write(f"{lo!r}\n{hi!r}\n")


def save_map_png(image_map, path):
    """Write the same pixels as :func:`save_map_pgm` to a 16-bit PNG.

    Requires an importable PIL; returns True when written, False when the
    encoder is unavailable.
    """
    if importlib.util.find_spec("PIL") is None:
        return False
    from PIL import Image

    pixels, _, _ = _quantize(image_map)
    img = Image.fromarray(pixels.astype("<u2"))
    img.save(path, format="PNG")
    return True
