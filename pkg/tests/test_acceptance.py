"""Acceptance suite: ten pass/fail criteria for the imaging pipeline.

Each test prints a single bracketed verdict line (visible with ``-s``)
and asserts it.  Tolerances are fixed; configurations are frozen so the
numbers are reproducible run to run.
"""

import json
import math
import time

import numpy as np
import pytest
from scipy.spatial import cKDTree

from thinscat import (HalfSpaceMedium, InclusionMaterial, ParametricCurve,
                      add_noise, assemble_msr_factored, build_directions,
                      frequency_context, image_multi, image_single,
                      is_propagating, make_grid, peak_metrics,
                      polarization_tensor, preset, scenario_steering,
                      split_into_segments, synthesize,
                      transmission_coefficient, transmitted_direction,
                      truncate_svd, truth_points, SteeringConfig)
from thinscat.cli import main as cli_main

TABLE1 = HalfSpaceMedium(5.0, 1.0, 4.0, 1.0)
LAMBDA_MIN = 0.2          # longest probing wavelength in the soil


def _verdict(ok, label, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


# --------------------------------------------------------------------------
# AC-1: factored form against a directly accumulated segment sum

def _direct_segment_sum(curve, medium, inclusion, ctx, dirs):
    segs = split_into_segments(curve, ctx.lambda_minus)
    theta = dirs.propagating_incidences()
    t = transmission_coefficient(ctx, medium, theta)
    v = transmitted_direction(ctx, theta)
    c0 = (curve.thickness_h * ctx.k_minus ** 2 * medium.mu_plus * (1 + 1j)
          / (4 * medium.mu_minus * math.sqrt(ctx.k_plus * math.pi)))
    c_eps = inclusion.eps_T / medium.eps_minus - 1.0
    pt = polarization_tensor(medium, inclusion)
    n = theta.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for s in segs:
            a = pt.lambda_tau * np.outer(s.tangent, s.tangent) \
                + pt.lambda_n * np.outer(s.normal, s.normal)
            kern = c_eps + (v[j] @ a) @ v.T
            phase = np.exp(1j * ctx.k_minus * ((v[j] + v) @ s.point))
            out[j, :] += s.weight * kern * phase
        out[j, :] *= c0 * t[j] * t
    return out


def test_ac1_factorization_oracle():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(10):
        nv = int(rng.integers(3, 6))
        verts = np.column_stack([rng.uniform(-0.8, 0.8, nv),
                                 rng.uniform(-2.8, -1.2, nv)])
        curve = ParametricCurve(kind="Polyline",
                                params={"vertices": verts.tolist()})
        medium = HalfSpaceMedium(*rng.uniform(1.0, 6.0, 4))
        inclusion = InclusionMaterial(*rng.uniform(0.5, 8.0, 2))
        ctx = frequency_context(medium, rng.uniform(12.0, 25.0))
        dirs = build_directions(16, 0.08, math.pi - 0.08, ctx)
        fac = assemble_msr_factored(curve, medium, inclusion, ctx, dirs)
        direct = _direct_segment_sum(curve, medium, inclusion, ctx, dirs)
        err = np.linalg.norm(fac.matrix() - direct) / np.linalg.norm(direct)
        worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    _verdict(worst <= 1e-12 and elapsed < 5.0, "AC-1",
             f"worst relative factorization error {worst:.2e} over 10 "
             f"random polyline scenarios in {elapsed:.2f} s")


# --------------------------------------------------------------------------
# AC-2: four isolated points, single frequency

AC2_POINTS = np.array([[-0.6, -1.4], [0.4, -1.5], [-0.2, -2.3], [0.6, -2.6]])


def test_ac2_point_target_recovery():
    t0 = time.perf_counter()
    ctx = frequency_context(TABLE1, 2 * math.pi / 0.3)   # lambda_- = 0.15
    lam = ctx.lambda_minus
    assert np.min([np.linalg.norm(a - b) for i, a in enumerate(AC2_POINTS)
                   for b in AC2_POINTS[i + 1:]]) >= lam
    dirs = build_directions(64, 0.08, math.pi - 0.08, ctx)
    curve = ParametricCurve(
        kind="Points", params={"points": AC2_POINTS.tolist(),
                               "weights": [1.0, 0.65, 0.4, 0.22]})
    k = assemble_msr_factored(curve, TABLE1,
                              InclusionMaterial(eps_T=5.0, mu_T=1.0),
                              ctx, dirs).matrix()
    grid = make_grid(((-1.0, 1.0), (-3.0, -1.0)), 0.02)
    m = image_single(k, ctx, TABLE1, dirs, SteeringConfig((1.0, 0.0, 0.0)),
                     grid, threshold=0.01)
    w = m.values

    peaks_ok = True
    peak_vals = []
    for px, py in AC2_POINTS:
        ix = int(np.argmin(np.abs(grid.xs - px)))
        iy = int(np.argmin(np.abs(grid.ys - py)))
        patch = w[max(iy - 1, 0):iy + 2, max(ix - 1, 0):ix + 2]
        jy, jx = np.unravel_index(np.argmax(patch), patch.shape)
        cy, cx = max(iy - 1, 0) + jy, max(ix - 1, 0) + jx
        val = w[cy, cx]
        peak_vals.append(val)
        neigh = w[max(cy - 1, 0):cy + 2, max(cx - 1, 0):cx + 2]
        peaks_ok &= (val >= 0.9) and (val >= neigh.max())

    dist = np.min(np.linalg.norm(grid.points[:, None, :]
                                 - AC2_POINTS[None, :, :], axis=-1), axis=1)
    far_max = float(w.ravel()[dist > lam].max())
    elapsed = time.perf_counter() - t0
    _verdict(peaks_ok and far_max <= 0.3 and elapsed < 30.0, "AC-2",
             f"peaks {[f'{v:.3f}' for v in peak_vals]} at the 4 points, "
             f"max {far_max:.3f} beyond lambda, {elapsed:.1f} s")


# --------------------------------------------------------------------------
# AC-3 / AC-9: sigma1 retrieval from fine and multiple-scattering data

def _run_gamma1(forward_model, seed=None, snr_db=None):
    s = preset("table1-gamma1")
    s.forward_model = forward_model
    s.snr_db = snr_db
    if seed is not None:
        s.seed = seed
    dataset = synthesize(s)
    grid = make_grid(s.search_domain, s.grid_step)
    m = image_multi(dataset, s.medium, dataset.direction_set,
                    scenario_steering(s), grid, threshold=s.svd_threshold)
    return s, dataset, m


def _score_gamma1(s, m, tube=None):
    truth = [c for c, _ in s.curves]
    return peak_metrics(m, truth, level=0.7, tube_radius=tube)


def test_ac3_sigma1_noiseless_fine():
    t0 = time.perf_counter()
    s, _, m = _run_gamma1("AsymptoticFine")
    pm = _score_gamma1(s, m)
    elapsed = time.perf_counter() - t0
    ok = (pm.false_alarm <= LAMBDA_MIN / 2 and pm.coverage <= LAMBDA_MIN
          and elapsed < 300.0)
    _verdict(ok, "AC-3",
             f"false alarm {pm.false_alarm:.4f} (<= 0.1), coverage "
             f"{pm.coverage:.4f} (<= 0.2), {elapsed:.1f} s")


def test_ac9_sigma1_foldylax_data():
    t0 = time.perf_counter()
    s, _, m = _run_gamma1("FoldyLax")
    pm = _score_gamma1(s, m)
    elapsed = time.perf_counter() - t0
    ok = pm.false_alarm <= LAMBDA_MIN / 2 and pm.coverage <= LAMBDA_MIN
    _verdict(ok, "AC-9",
             f"multiple-scattering data: false alarm {pm.false_alarm:.4f} "
             f"(<= 0.1), coverage {pm.coverage:.4f} (<= 0.2), "
             f"{elapsed:.1f} s")


# --------------------------------------------------------------------------
# AC-4 / AC-5: noisy multi-frequency runs (shared across both criteria)

@pytest.fixture(scope="module")
def noisy_gamma1_runs():
    runs = []
    for seed in range(5):
        s, dataset, m = _run_gamma1("AsymptoticFine", seed=seed, snr_db=20.0)
        runs.append((s, dataset, m))
    return runs


def test_ac4_noise_robustness(noisy_gamma1_runs):
    passed = 0
    details = []
    for seed, (s, _, m) in enumerate(noisy_gamma1_runs):
        pm = _score_gamma1(s, m)
        ok = (pm.false_alarm <= LAMBDA_MIN
              and pm.coverage <= 1.5 * LAMBDA_MIN)
        passed += int(ok)
        details.append(f"s{seed}:fa={pm.false_alarm:.3f},"
                       f"cov={pm.coverage:.3f}")
    _verdict(passed >= 4, "AC-4",
             f"{passed}/5 seeds within relaxed bounds (fa <= 0.2, "
             f"cov <= 0.3): {' '.join(details)}")


def test_ac5_multi_frequency_background_gain(noisy_gamma1_runs):
    truth = truth_points(ParametricCurve(kind="Sigma1"))
    tree = cKDTree(truth)
    all_ok = True
    details = []
    for seed, (s, dataset, m) in enumerate(noisy_gamma1_runs):
        grid = make_grid(s.search_domain, s.grid_step)
        outside = tree.query(grid.points)[0] > LAMBDA_MIN
        bg_multi = float(m.values.ravel()[outside].mean())
        cfg = scenario_steering(s)
        singles = []
        for matrix, omega in zip(dataset.matrices, dataset.frequencies):
            ctx = frequency_context(s.medium, omega)
            w = image_single(matrix, ctx, s.medium, dataset.direction_set,
                             cfg, grid, threshold=s.svd_threshold)
            singles.append(float(w.values.ravel()[outside].mean()))
        med = float(np.median(singles))
        all_ok &= bg_multi < med
        details.append(f"s{seed}:{bg_multi:.4f}<{med:.4f}")
    _verdict(all_ok, "AC-5",
             "multi-frequency background below single-frequency median on "
             "every seed: " + " ".join(details))


# --------------------------------------------------------------------------
# AC-6: retained subspace dimension counts the segment contrasts

def test_ac6_rank_counting():
    base_pts = np.array([[-0.75, -1.35], [0.55, -1.45], [-0.25, -2.3],
                         [0.7, -2.45], [-0.8, -2.0], [0.1, -1.8]])
    base_ang = [0.3, 1.1, 2.0, 0.7, 2.6, 1.6]
    medium = HalfSpaceMedium(4.0, 1.0, 4.0, 1.0)
    ctx = frequency_context(medium, 2 * math.pi / 0.3)
    dirs = build_directions(32, 0.08, math.pi - 0.08, ctx)
    seg_w = ctx.lambda_minus / 2.0

    cases = {
        "eps": (InclusionMaterial(eps_T=8.0, mu_T=1.0), 1),
        "mu": (InclusionMaterial(eps_T=4.0, mu_T=2.0), 2),
        "both": (InclusionMaterial(eps_T=8.0, mu_T=2.0), 3),
    }
    ok = True
    lines = []
    for name, (inclusion, factor) in cases.items():
        got = []
        for m_segments in range(1, 7):
            curve = ParametricCurve(
                kind="Points",
                params={"points": base_pts[:m_segments].tolist(),
                        "weights": [seg_w] * m_segments,
                        "angles": base_ang[:m_segments]})
            k = assemble_msr_factored(curve, medium, inclusion,
                                      ctx, dirs).matrix()
            got.append(truncate_svd(k, 0.01).M_f)
        want = [factor * m for m in range(1, 7)]
        ok &= got == want
        lines.append(f"{name}:{got}")
    _verdict(ok, "AC-6",
             "retained dimensions " + " ".join(lines)
             + " match [M, 2M, 3M] exactly (no M=6 slack needed)")


# --------------------------------------------------------------------------
# AC-7: media identities, ten thousand cases each

def test_ac7_media_invariants():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    n = 10_000

    # Snell trace continuity + unit transmitted direction
    pars = rng.uniform(0.5, 10.0, size=(n, 4))
    ang = rng.uniform(0.05, math.pi - 0.05, size=n)
    worst_snell = 0.0
    worst_unit = 0.0
    worst_t = 0.0
    for i in range(0, n, 500):
        medium = HalfSpaceMedium(*pars[i])
        ctx = frequency_context(medium, 5.0)
        block = ang[i:i + 500]
        xhat = np.stack([np.cos(block), -np.sin(block)], axis=-1)
        keep = np.atleast_1d(is_propagating(ctx, xhat))
        if not keep.any():
            continue
        v = transmitted_direction(ctx, xhat[keep])
        worst_snell = max(worst_snell,
                          float(np.abs(ctx.k_minus * v[:, 0]
                                       - ctx.k_plus * xhat[keep, 0]).max()
                                / ctx.k_plus))
        worst_unit = max(worst_unit,
                         float(np.abs(np.linalg.norm(v, axis=-1) - 1).max()))
        # matched-media transmission on the same angles
        matched = HalfSpaceMedium(pars[i][0], pars[i][1],
                                  pars[i][0], pars[i][1])
        mctx = frequency_context(matched, 5.0)
        t = transmission_coefficient(mctx, matched, xhat)
        worst_t = max(worst_t, float(np.abs(t - 1.0).max()))

    # polarization tensor expansion identity
    worst_tensor = 0.0
    mus = rng.uniform(0.2, 9.0, size=(n, 2))
    phis = rng.uniform(0, 2 * math.pi, size=n)
    vecs = rng.standard_normal((n, 4))
    for i in range(0, n, 1000):
        sl = slice(i, i + 1000)
        lam_tau = 2.0 * (mus[sl, 0] / mus[sl, 1] - 1.0)
        lam_n = 2.0 * (1.0 - mus[sl, 1] / mus[sl, 0])
        pt_check = [polarization_tensor(
            HalfSpaceMedium(1.0, 1.0, 1.0, mm), InclusionMaterial(1.0, mt))
            for mm, mt in mus[sl][:3]]
        assert np.allclose([p.lambda_tau for p in pt_check], lam_tau[:3])
        tau = np.stack([np.cos(phis[sl]), np.sin(phis[sl])], axis=-1)
        nor = np.stack([-np.sin(phis[sl]), np.cos(phis[sl])], axis=-1)
        a, b = vecs[sl, :2], vecs[sl, 2:]
        mats = (lam_tau[:, None, None] * tau[:, :, None] * tau[:, None, :]
                + lam_n[:, None, None] * nor[:, :, None] * nor[:, None, :])
        direct = np.einsum("ni,nij,nj->n", a, mats, b)
        expanded = (lam_tau * np.sum(a * tau, -1) * np.sum(tau * b, -1)
                    + lam_n * np.sum(a * nor, -1) * np.sum(nor * b, -1))
        scale = np.maximum(1.0, np.abs(direct))
        worst_tensor = max(worst_tensor,
                           float((np.abs(direct - expanded) / scale).max()))

    elapsed = time.perf_counter() - t0
    worst = max(worst_snell, worst_unit, worst_t, worst_tensor)
    _verdict(worst <= 1e-12 and elapsed < 5.0, "AC-7",
             f"snell {worst_snell:.1e}, unit {worst_unit:.1e}, "
             f"matched-T {worst_t:.1e}, tensor {worst_tensor:.1e} over "
             f"10^4 cases each in {elapsed:.2f} s")


# --------------------------------------------------------------------------
# AC-8: noise level calibration

def test_ac8_noise_calibration():
    ctx = frequency_context(TABLE1, 2 * math.pi / 0.4)
    dirs = build_directions(32, 0.08, math.pi - 0.08, ctx)
    k = assemble_msr_factored(ParametricCurve(kind="Sigma1"), TABLE1,
                              InclusionMaterial(eps_T=5.0, mu_T=1.0),
                              ctx, dirs).matrix()
    assert k.shape == (24, 24)
    measured = []
    for seed in range(100):
        noisy = add_noise(k, 20.0, seed=seed)
        ratio = np.linalg.norm(k) / np.linalg.norm(noisy - k)
        measured.append(20.0 * math.log10(ratio))
    err = abs(float(np.mean(measured)) - 20.0)
    _verdict(err <= 0.5, "AC-8",
             f"measured SNR {np.mean(measured):.3f} dB vs requested 20 dB "
             f"(|diff| = {err:.3f} <= 0.5) over 100 seeds on 24x24")


# --------------------------------------------------------------------------
# AC-10: end-to-end determinism

def test_ac10_reproduce_is_deterministic(tmp_path):
    outs = []
    for tag in ("one", "two"):
        out = tmp_path / tag
        code = cli_main(["reproduce", "table1-gamma1", "--out", str(out),
                         "--seed", "42"])
        assert code == 0
        outs.append(out)
    same = True
    compared = []
    for name in ("map.csv", "map.pgm", "map.pgm.range.txt", "map.png"):
        a, b = outs[0] / name, outs[1] / name
        if not (a.exists() and b.exists()):
            continue
        compared.append(name)
        same &= a.read_bytes() == b.read_bytes()
    _verdict(same and len(compared) >= 2, "AC-10",
             f"byte-identical map files across two seed-42 runs: "
             f"{', '.join(compared)}")
