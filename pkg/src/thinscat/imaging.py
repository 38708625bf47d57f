"""Subspace imaging of thin buried inclusions from MSR matrices.

The singular vectors of an MSR matrix whose singular values pass a ratio
threshold span the signal subspace.  Correlating a normalized steering
vector of transmitted plane-wave phases against the retained left and
right singular vectors yields an image functional that peaks on the
supporting curve:

``W_S(x) = | sum_m <d(x), u_m> <d(x), conj(v_m)> |``

with ``<a, b> = sum conj(a_j) b_j``.  The modulus is taken after the sum
over retained modes, so off-curve contributions with unaligned phases
cancel instead of accumulating.  Multi-frequency maps average ``W_S``
over frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .media import transmission_coefficient, transmitted_direction

__all__ = [
    "TruncatedSVD",
    "SteeringConfig",
    "ImageGrid",
    "ImageMap",
    "truncate_svd",
    "steering_vector",
    "default_steering",
    "make_grid",
    "image_single",
    "image_multi",
]

# A steering vector whose un-normalized norm falls below
# DEGENERATE_NORM_FACTOR * N_plus is treated as degenerate (the amplitude
# profile c . (1, v) vanishes on the whole aperture).
DEGENERATE_NORM_FACTOR = 1e-12

CONTRAST_KINDS = ("Permittivity", "PermeabilityLess", "PermeabilityGreater",
                  "Both")


@dataclass
class TruncatedSVD:
    """Signal-subspace factors of one MSR matrix.

    ``left_vectors``/``right_vectors`` hold the retained singular vectors
    as columns (``right_vectors`` are the columns of V, i.e. already
    conjugate-transposed back from LAPACK's Vh rows).  ``M_f`` is the
    retained count.
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    M_f: int
    threshold: float


@dataclass(frozen=True)
class SteeringConfig:
    """Amplitude profile coefficients ``c = (c0, c1, c2)``.

    The steering amplitude at transmitted direction ``v`` is
    ``c0 + c1 v1 + c2 v2``; permittivity contrasts use ``(1, 0, 0)``,
    permeability contrasts weight the transmitted components.
    """

    c: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        if len(c) != 3:
            raise ValueError("steering needs exactly three coefficients")
        object.__setattr__(self, "c", c)


@dataclass
class ImageGrid:
    """Rectangular search grid: axis vectors plus flattened points."""

    xs: np.ndarray
    ys: np.ndarray
    points: np.ndarray

    @property
    def shape(self):
        return (len(self.ys), len(self.xs))


@dataclass
class ImageMap:
    """An imaging functional sampled on a grid.

    ``values[iy, ix]`` is the functional at ``(xs[ix], ys[iy])``.
    ``meta`` records how the map was formed: retained subspace sizes,
    threshold, frequencies, steering coefficients.
    """

    domain: tuple
    step: float
    values: np.ndarray
    meta: dict = field(default_factory=dict)


def truncate_svd(matrix, threshold):
    """SVD truncated at the singular-value ratio ``threshold``.

    Retains the modes ``{j : s_j / s_1 >= threshold}`` (at most the full
    matrix dimension).  An all-zero matrix yields an empty subspace.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    matrix = np.asarray(matrix)
    u, s, vh = np.linalg.svd(matrix)
    if s.size == 0 or s[0] == 0.0:
        m = 0
    else:
        m = int(np.sum(s / s[0] >= threshold))
    return TruncatedSVD(singular_values=s[:m], left_vectors=u[:, :m],
                        right_vectors=vh[:m].conj().T, M_f=m,
                        threshold=float(threshold))


def _steering_block(points, ctx, medium, dirs, cfg):
    """Normalized steering columns for a stack of test points.

    Returns ``(block, ok)`` where ``block`` is ``(N_plus, P)`` with
    unit-norm columns (zero where degenerate) and ``ok`` flags the
    non-degenerate columns.
    """
    inc = dirs.propagating_incidences()
    v = transmitted_direction(ctx, inc)
    t = transmission_coefficient(ctx, medium, inc)
    c0, c1, c2 = cfg.c
    amp = (c0 + c1 * v[:, 0] + c2 * v[:, 1]) * t
    block = amp[:, None] * np.exp(1j * ctx.k_minus * (v @ points.T))
    norms = np.linalg.norm(block, axis=0)
    ok = norms >= DEGENERATE_NORM_FACTOR * dirs.N_plus
    safe = np.where(ok, norms, 1.0)
    block = np.where(ok[None, :], block / safe[None, :], 0.0)
    return block, ok


def steering_vector(x, ctx, medium, dirs, cfg):
    """Unit-norm steering vector at a single test point ``x``.

    Component ``j`` (over propagating directions) is
    ``(c0 + c1 v_j1 + c2 v_j2) T_j exp(i k_- v_j . x)`` normalized to unit
    Euclidean norm.  Raises ``ValueError`` when the amplitude profile is
    degenerate (pre-normalization norm below ``1e-12 N_plus``).
    """
    pts = np.asarray(x, dtype=float)[None, :]
    block, ok = _steering_block(pts, ctx, medium, dirs, cfg)
    if not ok[0]:
        raise ValueError("degenerate steering profile: c . (1, v) vanishes "
                         "over the aperture")
    return block[:, 0]


def default_steering(contrast, medium=None, inclusion=None):
    """Recommended steering coefficients per contrast type.

    ``contrast`` is one of ``"Permittivity"`` -> (1, 0, 0),
    ``"PermeabilityLess"`` -> (0, 1, 0), ``"PermeabilityGreater"`` ->
    (0, 0, 1), or ``"Both"``, which needs ``medium`` and ``inclusion`` to
    pick (1, 0, 1) when ``mu_T > mu_-`` and (1, 1, 0) otherwise.
    """
    if contrast not in CONTRAST_KINDS:
        raise ValueError(f"contrast must be one of {CONTRAST_KINDS}")
    if contrast == "Permittivity":
        return SteeringConfig((1.0, 0.0, 0.0))
    if contrast == "PermeabilityLess":
        return SteeringConfig((0.0, 1.0, 0.0))
    if contrast == "PermeabilityGreater":
        return SteeringConfig((0.0, 0.0, 1.0))
    if medium is None or inclusion is None:
        raise ValueError("'Both' needs medium and inclusion to pick a profile")
    if inclusion.mu_T > medium.mu_minus:
        return SteeringConfig((1.0, 0.0, 1.0))
    return SteeringConfig((1.0, 1.0, 0.0))


def make_grid(domain, step):
    """Inclusive rectangular grid over ``domain = ((x0, x1), (y0, y1))``.

    Axes run from the lower to the upper bound with ``ceil(span / step)``
    intervals, endpoints always included (a 2 x 2 domain at step 0.02
    gives 101 x 101 nodes).
    """
    (x0, x1), (y0, y1) = domain
    if not step > 0:
        raise ValueError("grid step must be positive")
    if not (x1 > x0 and y1 > y0):
        raise ValueError("domain bounds must be increasing")
    nx = max(1, math.ceil((x1 - x0) / step - 1e-9))
    ny = max(1, math.ceil((y1 - y0) / step - 1e-9))
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    xx, yy = np.meshgrid(xs, ys)
    return ImageGrid(xs=xs, ys=ys,
                     points=np.stack([xx.ravel(), yy.ravel()], axis=-1))


def _functional(matrix, ctx, medium, dirs, cfg, grid, threshold):
    tsvd = truncate_svd(matrix, threshold)
    if tsvd.M_f == 0:
        return np.zeros(grid.points.shape[0]), 0
    block, _ = _steering_block(grid.points, ctx, medium, dirs, cfg)
    left = tsvd.left_vectors.T @ block.conj()          # <d, u_m> per point
    right = tsvd.right_vectors.conj().T @ block.conj()  # <d, conj(v_m)>
    return np.abs((left * right).sum(axis=0)), tsvd.M_f


def image_single(matrix, ctx, medium, dirs, cfg, grid, threshold=0.01):
    """Single-frequency imaging functional on ``grid``.

    Correlates the normalized steering vector with the retained singular
    pairs of ``matrix`` (ratio ``threshold``); see the module docstring
    for the functional.  Degenerate grid points get value 0.  An empty
    signal subspace (``M_f = 0``) yields an all-zero map, recorded in
    ``meta``.
    """
    w, m_f = _functional(matrix, ctx, medium, dirs, cfg, grid, threshold)
    domain = ((grid.xs[0], grid.xs[-1]), (grid.ys[0], grid.ys[-1]))
    step = float(grid.xs[1] - grid.xs[0]) if len(grid.xs) > 1 else 0.0
    return ImageMap(domain=domain, step=step,
                    values=w.reshape(grid.shape),
                    meta={"M_f": [m_f], "threshold": threshold,
                          "frequencies": [ctx.omega], "steering": cfg.c})


def image_multi(dataset, medium, dirs_per_freq, cfg, grid, threshold=0.01):
    """Multi-frequency map: the average of per-frequency functionals.

    ``dirs_per_freq`` may be a single :class:`DirectionSet` (shared by all
    frequencies, the common case) or one per frequency.  With a single
    frequency the result equals :func:`image_single` exactly.  ``meta``
    lists the retained subspace size per frequency.
    """
    from .media import frequency_context   # local import to avoid cycle noise

    freqs = list(dataset.frequencies)
    if not freqs:
        raise ValueError("dataset has no frequencies")
    if isinstance(dirs_per_freq, (list, tuple)):
        dirs_list = list(dirs_per_freq)
    else:
        dirs_list = [dirs_per_freq] * len(freqs)
    if len(dirs_list) != len(freqs):
        raise ValueError("need one direction set per frequency")

    total = np.zeros(grid.points.shape[0])
    m_per_freq = []
    for matrix, omega, dirs in zip(dataset.matrices, freqs, dirs_list):
        ctx = frequency_context(medium, omega)
        w, m_f = _functional(matrix, ctx, medium, dirs, cfg, grid, threshold)
        total += w
        m_per_freq.append(m_f)
    total /= len(freqs)
    domain = ((grid.xs[0], grid.xs[-1]), (grid.ys[0], grid.ys[-1]))
    step = float(grid.xs[1] - grid.xs[0]) if len(grid.xs) > 1 else 0.0
    return ImageMap(domain=domain, step=step,
                    values=total.reshape(grid.shape),
                    meta={"M_f": m_per_freq, "threshold": threshold,
                          "frequencies": freqs, "steering": cfg.c})
