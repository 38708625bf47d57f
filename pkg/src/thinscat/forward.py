"""Multi-static response (MSR) matrix synthesis.

Entry (j, l) of an MSR matrix is the leading far-field amplitude observed
in direction ``yhat_j`` when the buried thin inclusion is illuminated by a
downgoing plane wave of incidence ``theta_l``; observation and incidence
grids are paired back-to-back (``yhat_j = -theta_j``), which makes every
synthesized matrix complex symmetric.

Three data models are provided:

* ``AsymptoticFine`` -- the leading-order layer integral evaluated with a
  fine composite-midpoint quadrature along the supporting curve;
* ``CoarseFactored`` -- the same integrand collapsed onto half-wavelength
  segment midpoints, exposed in factored form ``K = D E D^T``;
* ``FoldyLax`` -- point scatterers at the fine quadrature nodes with full
  multiple-scattering coupling, used to generate inversion test data that
  the imaging model does not assume.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import hankel1

from .errors import ResonanceError
from .geometry import sample_curve, split_into_segments
from .media import (is_propagating, polarization_tensor,
                    transmission_coefficient, transmitted_direction)

__all__ = [
    "DirectionSet",
    "FactoredMSR",
    "MSRDataset",
    "build_directions",
    "amplitude_prefactor",
    "assemble_msr_fine",
    "assemble_msr_factored",
    "assemble_msr_foldylax",
    "add_noise",
]

# Quadrature spacings coarser than lambda_minus / FINE_SPACING_FACTOR are
# accepted but draw a warning: the fine model is then under-resolved.
FINE_SPACING_FACTOR = 10.0

# Condition-number ceiling for the multiple-scattering linear system.
RESONANCE_CONDITION_LIMIT = 1e12


@dataclass
class DirectionSet:
    """Paired observation/incidence directions on an angular grid.

    ``zeta[j]`` runs linearly from ``alpha`` to ``beta``; the incidence is
    the downgoing unit vector ``-(cos zeta_j, sin zeta_j)`` and the
    observation direction the upgoing ``+(cos zeta_j, sin zeta_j)``.
    ``propagating_mask`` flags directions whose refracted wave propagates
    in the lower medium; ``N_plus`` counts them.
    """

    N: int
    alpha: float
    beta: float
    zeta: np.ndarray
    observations: np.ndarray
    incidences: np.ndarray
    propagating_mask: np.ndarray
    N_plus: int

    def propagating_incidences(self):
        """The (N_plus, 2) stack of incidences kept by the Snell filter."""
        return self.incidences[self.propagating_mask]


@dataclass
class FactoredMSR:
    """Factored coarse MSR matrix ``K = D diag(E) D^T``.

    ``D`` has one permittivity column per segment followed by
    (tangential, normal) permeability column pairs, ``3 M`` columns in
    total for ``M`` segments; ``E`` holds the matching diagonal weights.
    """

    D: np.ndarray
    E: np.ndarray
    M: int

    def matrix(self):
        """Dense ``(N_plus, N_plus)`` MSR matrix of the factorization."""
        return (self.D * self.E) @ self.D.T


@dataclass
class MSRDataset:
    """A multi-frequency stack of synthesized MSR matrices.

    ``matrices[f]`` is the ``(N_plus, N_plus)`` complex matrix at
    ``frequencies[f]``.  The direction set is shared across frequencies
    (the refraction ratio ``xi`` does not depend on ``omega``, so the
    Snell filter keeps the same directions at every frequency).  ``noise``
    records ``{"snr_db": ..., "seed": ...}`` with ``snr_db = None`` for
    noiseless data.
    """

    frequencies: list
    matrices: list
    direction_set: DirectionSet
    model: str
    medium: object = None
    inclusions: list = field(default_factory=list)
    noise: dict = field(default_factory=lambda: {"snr_db": None, "seed": None})


def build_directions(N, alpha, beta, ctx):
    """Angular grid of ``N`` paired directions over ``[alpha, beta]``.

    Requires ``N >= 2`` and ``0 < alpha < beta < pi``.  The propagating
    mask applies the critical-angle (Snell) filter of
    :func:`thinscat.media.is_propagating` to the incidences.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if not (0.0 < alpha < beta < math.pi):
        raise ValueError("need 0 < alpha < beta < pi")
    zeta = alpha + (beta - alpha) * np.arange(N) / (N - 1)
    obs = np.stack([np.cos(zeta), np.sin(zeta)], axis=-1)
    inc = -obs
    mask = is_propagating(ctx, inc)
    return DirectionSet(N=N, alpha=float(alpha), beta=float(beta), zeta=zeta,
                        observations=obs, incidences=inc,
                        propagating_mask=mask, N_plus=int(mask.sum()))


def amplitude_prefactor(ctx, medium, thickness_h):
    """Scalar prefactor of the leading-order scattering amplitude.

    ``C = h k_-^2 mu_+ (1 + i) / (4 mu_- sqrt(k_+ pi))``.
    """
    return (thickness_h * ctx.k_minus ** 2 * medium.mu_plus * (1.0 + 1.0j)
            / (4.0 * medium.mu_minus * math.sqrt(ctx.k_plus * math.pi)))


def _transmitted_fields(ctx, medium, dirs):
    inc = dirs.propagating_incidences()
    if inc.shape[0] == 0:
        raise ValueError("no propagating directions; widen the aperture "
                         "or lower the refraction ratio")
    v = transmitted_direction(ctx, inc)
    t = transmission_coefficient(ctx, medium, inc)
    return v, t


def _contrasts(medium, inclusion):
    pol = polarization_tensor(medium, inclusion)
    c_eps = inclusion.eps_T / medium.eps_minus - 1.0
    return c_eps, pol.lambda_tau, pol.lambda_n


def _gather(samples):
    pts = np.array([s.point for s in samples])
    tang = np.array([s.tangent for s in samples])
    norm = np.array([s.normal for s in samples])
    w = np.array([s.weight for s in samples])
    return pts, tang, norm, w


def assemble_msr_fine(curve, medium, inclusion, ctx, dirs, quad_spacing):
    """Leading-order MSR matrix by fine quadrature along the curve.

    ``K[j, l] = C sum_p w_p [c_eps + v_j . A(x_p) . v_l]
    T_j T_l exp(i k_- (v_j + v_l) . x_p)`` over the quadrature nodes
    ``x_p`` of :func:`thinscat.geometry.sample_curve` at ``quad_spacing``.
    A spacing coarser than a tenth of the lower-medium wavelength is
    accepted with a warning.

    Returns the ``(N_plus, N_plus)`` complex-symmetric matrix.
    """
    if quad_spacing > ctx.lambda_minus / FINE_SPACING_FACTOR:
        warnings.warn("quadrature spacing exceeds lambda_minus/10; the "
                      "fine model may be under-resolved", stacklevel=2)
    samples = sample_curve(curve, quad_spacing)
    pts, tang, norm, w = _gather(samples)
    v, t = _transmitted_fields(ctx, medium, dirs)
    c_eps, lam_tau, lam_n = _contrasts(medium, inclusion)
    c0 = amplitude_prefactor(ctx, medium, curve.thickness_h)

    phase = np.exp(1j * ctx.k_minus * (v @ pts.T))       # (N+, n)
    a = t[:, None] * phase
    g_tau = v @ tang.T
    g_norm = v @ norm.T
    k = c_eps * ((a * w) @ a.T)
    k += lam_tau * ((a * g_tau * w) @ (a * g_tau).T)
    k += lam_n * ((a * g_norm * w) @ (a * g_norm).T)
    return c0 * k


def assemble_msr_factored(curve, medium, inclusion, ctx, dirs):
    """Coarse factored MSR model on half-wavelength segment midpoints.

    Splits the curve at ``lambda_minus / 2``, then builds ``D`` with one
    permittivity steering column per segment followed by per-segment
    (tangential, normal) permeability pairs, and the matching diagonal
    ``E`` of contrast-times-weight entries.

    Returns a :class:`FactoredMSR`; call ``.matrix()`` for the dense form.
    """
    segments = split_into_segments(curve, ctx.lambda_minus)
    pts, tang, norm, w = _gather(segments)
    m = pts.shape[0]
    v, t = _transmitted_fields(ctx, medium, dirs)
    c_eps, lam_tau, lam_n = _contrasts(medium, inclusion)
    c0 = amplitude_prefactor(ctx, medium, curve.thickness_h)

    phase = t[:, None] * np.exp(1j * ctx.k_minus * (v @ pts.T))   # (N+, M)
    d = np.empty((phase.shape[0], 3 * m), dtype=complex)
    d[:, :m] = phase
    d[:, m::2] = (v @ tang.T) * phase
    d[:, m + 1::2] = (v @ norm.T) * phase
    e = np.empty(3 * m, dtype=complex)
    e[:m] = c_eps * w
    e[m::2] = lam_tau * w
    e[m + 1::2] = lam_n * w
    e *= c0
    return FactoredMSR(D=d, E=e, M=m)


def assemble_msr_foldylax(curve, medium, inclusion, ctx, dirs, quad_spacing):
    """MSR matrix with full multiple scattering between quadrature nodes.

    Point scatterers sit at the fine quadrature nodes with scalar
    strengths ``S_p = C w_p (c_eps + (lambda_tau + lambda_n) / 2)``; the
    self-consistent node amplitudes solve ``(I - G diag(S)) F = U`` with
    the homogeneous lower-medium kernel ``G_pq = (i/4) H0^(1)(k_- |x_p -
    x_q|)`` (zero diagonal), and the far-field assembly reuses the
    leading-order transmitted-wave factors, symmetrized over the
    incidence/observation exchange.

    Raises
    ------
    ResonanceError
        If the coupling system's condition number exceeds ``1e12``.
    """
    samples = sample_curve(curve, quad_spacing)
    pts, tang, norm, w = _gather(samples)
    n = pts.shape[0]
    v, t = _transmitted_fields(ctx, medium, dirs)
    c_eps, lam_tau, lam_n = _contrasts(medium, inclusion)
    c0 = amplitude_prefactor(ctx, medium, curve.thickness_h)

    u = np.exp(1j * ctx.k_minus * (pts @ v.T)) * t[None, :]     # (n, N+)
    if n > 1:
        dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
        np.fill_diagonal(dist, 1.0)
        g = 0.25j * hankel1(0, ctx.k_minus * dist)
        np.fill_diagonal(g, 0.0)
        strengths = c0 * w * (c_eps + 0.5 * (lam_tau + lam_n))
        system = np.eye(n) - g * strengths[None, :]
        cond = np.linalg.cond(system)
        if not np.isfinite(cond) or cond > RESONANCE_CONDITION_LIMIT:
            raise ResonanceError(
                "multiple-scattering system is near-singular "
                f"(condition number {cond:.3e})", condition_number=cond)
        f = np.linalg.solve(system, u)
    else:
        f = u

    g_tau = v @ tang.T       # (N+, n)
    g_norm = v @ norm.T
    half = c_eps * ((u.T * w) @ f)
    half += lam_tau * ((u.T * g_tau * w) @ (g_tau.T * f))
    half += lam_n * ((u.T * g_norm * w) @ (g_norm.T * f))
    return c0 * 0.5 * (half + half.T)


def add_noise(matrix, snr_db, seed, stream=0):
    """Additive complex white Gaussian noise at a prescribed SNR.

    The per-component standard deviation is calibrated so that the
    expected noise energy satisfies ``10 log10(||K||_F^2 / E||eta||_F^2)
    = snr_db``.  Draws come from a counter-based generator keyed by
    ``(seed, stream)``, so results never depend on call order or any
    shared random state; pass a distinct ``stream`` per frequency to
    noise a dataset's matrices independently.

    ``snr_db = inf`` returns an unmodified copy.  An all-zero matrix has
    no signal level to calibrate against and raises ``ValueError``.
    """
    matrix = np.asarray(matrix)
    if math.isinf(snr_db) and snr_db > 0:
        return matrix.copy()
    scale = np.linalg.norm(matrix)
    if scale == 0.0:
        raise ValueError("cannot calibrate noise for an all-zero matrix")
    rng = np.random.Generator(np.random.Philox(key=[int(seed), int(stream)]))
    sigma = scale * 10.0 ** (-snr_db / 20.0) / math.sqrt(2.0 * matrix.size)
    eta = rng.standard_normal(matrix.shape) + 1j * rng.standard_normal(matrix.shape)
    return matrix + sigma * eta
