"""Two half-space media, refraction of incident directions, and the
polarization tensor of a thin penetrable layer.

The upper half-plane (x2 > 0) carries material constants (eps_plus,
mu_plus), the lower one (eps_minus, mu_minus).  A time-harmonic plane
wave arriving from above refracts at the flat interface; the lower-medium
propagation direction and Fresnel-type transmission amplitude of that
refracted wave are what the forward model and the imaging steering
vectors are built from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MediumError

__all__ = [
    "HalfSpaceMedium",
    "InclusionMaterial",
    "FrequencyContext",
    "PolarizationTensor",
    "frequency_context",
    "transmitted_direction",
    "transmission_coefficient",
    "is_propagating",
    "polarization_tensor",
]

# Margin for the propagating-direction test: directions refracting within
# this distance of the critical angle, or grazing the interface, are
# treated as evanescent.
EVANESCENCE_MARGIN = 1e-9


@dataclass(frozen=True)
class HalfSpaceMedium:
    """Material constants of the upper (+) and lower (-) half-planes."""

    eps_plus: float
    mu_plus: float
    eps_minus: float
    mu_minus: float

    def __post_init__(self):
        for name in ("eps_plus", "mu_plus", "eps_minus", "mu_minus"):
            if not getattr(self, name) > 0:
                raise MediumError(f"{name} must be positive")


@dataclass(frozen=True)
class InclusionMaterial:
    """Permittivity and permeability inside the thin layer."""

    eps_T: float
    mu_T: float

    def __post_init__(self):
        if not self.eps_T > 0 or not self.mu_T > 0:
            raise MediumError("inclusion eps_T and mu_T must be positive")


@dataclass(frozen=True)
class FrequencyContext:
    """Wavenumbers and derived constants at one angular frequency.

    Attributes
    ----------
    omega : float
        Angular frequency.
    k_plus, k_minus : float
        Upper/lower-medium wavenumbers ``omega * sqrt(eps * mu)``.
    xi : float
        Wavenumber ratio ``k_plus / k_minus`` governing refraction.
    lambda_minus : float
        Lower-medium wavelength ``2 pi / k_minus``.
    """

    omega: float
    k_plus: float
    k_minus: float
    xi: float
    lambda_minus: float


@dataclass(frozen=True)
class PolarizationTensor:
    """Tangential/normal eigenvalues of the thin-layer permeability tensor."""

    lambda_tau: float
    lambda_n: float


def frequency_context(medium, omega):
    """Build the :class:`FrequencyContext` for ``medium`` at ``omega``."""
    if not omega > 0:
        raise MediumError("omega must be positive")
    k_plus = omega * math.sqrt(medium.eps_plus * medium.mu_plus)
    k_minus = omega * math.sqrt(medium.eps_minus * medium.mu_minus)
    return FrequencyContext(
        omega=float(omega),
        k_plus=k_plus,
        k_minus=k_minus,
        xi=k_plus / k_minus,
        lambda_minus=2.0 * math.pi / k_minus,
    )


def _as_directions(xhat):
    xhat = np.asarray(xhat, dtype=float)
    scalar = xhat.ndim == 1
    return np.atleast_2d(xhat), scalar


def transmitted_direction(ctx, xhat):
    """Refracted lower-medium unit direction for upper-medium direction ``xhat``.

    The horizontal slowness is preserved, ``v1 = xi * x1``, and the
    vertical component keeps the sign of ``x2``:
    ``v = (xi x1, sign(x2) sqrt(1 - xi^2 x1^2))``.

    ``xhat`` may be a single unit vector or an ``(n, 2)`` stack.  Only
    meaningful for propagating directions (see :func:`is_propagating`);
    beyond the critical angle the square root is clipped to zero.
    """
    x, scalar = _as_directions(xhat)
    v1 = ctx.xi * x[:, 0]
    vert = np.sqrt(np.clip(1.0 - v1 ** 2, 0.0, None))
    v = np.stack([v1, np.sign(x[:, 1]) * vert], axis=-1)
    return v[0] if scalar else v


def transmission_coefficient(ctx, medium, xhat):
    """Fresnel-type transmission amplitude across the interface.

    ``T = 2 mu_- xi x2 / (mu_- xi x2 + mu_+ sign(x2) sqrt(1 - xi^2 x1^2))``.
    Equals 1 when the two media coincide.
    """
    x, scalar = _as_directions(xhat)
    v1 = ctx.xi * x[:, 0]
    vert = np.sign(x[:, 1]) * np.sqrt(np.clip(1.0 - v1 ** 2, 0.0, None))
    num = 2.0 * medium.mu_minus * ctx.xi * x[:, 1]
    den = medium.mu_minus * ctx.xi * x[:, 1] + medium.mu_plus * vert
    t = num / den
    return float(t[0]) if scalar else t


def is_propagating(ctx, xhat):
    """Whether the refracted wave for ``xhat`` propagates in the lower medium.

    True when ``|xi * x1| < 1 - margin`` (inside the critical cone) and
    ``|x2| > margin`` (not grazing), with ``margin = 1e-9``.
    """
    x, scalar = _as_directions(xhat)
    ok = (np.abs(ctx.xi * x[:, 0]) < 1.0 - EVANESCENCE_MARGIN) \
        & (np.abs(x[:, 1]) > EVANESCENCE_MARGIN)
    return bool(ok[0]) if scalar else ok


def polarization_tensor(medium, inclusion):
    """Eigenvalues of the thin-layer permeability polarization tensor.

    The tensor is symmetric with eigenvector pair (tangent, normal) along
    the supporting curve and eigenvalues

    ``lambda_tau = 2 (mu_- / mu_T - 1)``,
    ``lambda_n   = 2 (1 - mu_T / mu_-)``.

    Both vanish iff ``mu_T == mu_-``, and ``sign(lambda_tau) ==
    sign(lambda_n) == sign(mu_- - mu_T)``.
    """
    lam_tau = 2.0 * (medium.mu_minus / inclusion.mu_T - 1.0)
    lam_n = 2.0 * (1.0 - inclusion.mu_T / medium.mu_minus)
    return PolarizationTensor(lambda_tau=lam_tau, lambda_n=lam_n)
