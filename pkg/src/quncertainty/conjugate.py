"""Leading joint probability for binned position and momentum measurements.

For centred bins of widths ``delta_x`` and ``delta_p`` the largest product
``P_x * P_p`` equals ``(1 + mu_max)^2 / 4``, where ``mu_max^2`` is the top
eigenvalue of the sinc kernel ``sin(s pi (xi - xi')) / (pi (xi - xi'))`` on
``[-1/2, 1/2]`` with ``s = delta_x * delta_p / (2 pi hbar)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

EPS_PSD = 1e-9
MIN_QUAD_ORDER = 16
DEFAULT_QUAD_ORDER = 128


@dataclass(frozen=True)
class PhaseSpaceParams:
    delta_x: float
    delta_p: float
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.delta_x > 0 and self.delta_p > 0 and self.hbar > 0):
            raise ValueError("bin widths and hbar must be positive")

    @property
    def s(self) -> float:
        return self.delta_x * self.delta_p / (2 * np.pi * self.hbar)

    @classmethod
    def from_s(cls, s: float, hbar: float = 1.0) -> "PhaseSpaceParams":
        """Square bins (in units where delta_x = delta_p) with the given ``s``."""
        if not s > 0:
            raise ValueError("s must be positive")
        width = np.sqrt(2 * np.pi * hbar * s)
        return cls(width, width, hbar)


@dataclass(frozen=True)
class KernelSpectrum:
    s: float
    quad_order: int
    eigenvalues: np.ndarray
    nodes: np.ndarray
    leading_eigenfunction: np.ndarray

    @property
    def mu2_max(self) -> float:
        return float(self.eigenvalues[0])


def sinc_kernel(s: float, xi, xi_prime):
    """``sin(s pi (xi - xi')) / (pi (xi - xi'))``, equal to ``s`` on the diagonal."""
    diff = np.subtract(xi, xi_prime)
    # np.sinc(x) = sin(pi x)/(pi x)
    return s * np.sinc(s * diff)


@lru_cache(maxsize=16)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x / 2, w / 2


def solve_spectrum(params: PhaseSpaceParams | float, quad_order: int = DEFAULT_QUAD_ORDER) -> KernelSpectrum:
    """Nyström eigen-decomposition of the sinc kernel on Gauss-Legendre nodes.

    The kernel is scaled symmetrically by ``sqrt(w_i w_j)`` so the discrete
    operator is real symmetric. Eigenvalues are clipped to ``[0, 1]`` and
    returned in descending order; the leading eigenfunction is sampled at the
    nodes with unit L2 norm and positive mean.
    """
    s = params.s if isinstance(params, PhaseSpaceParams) else float(params)
    if not s > 0:
        raise ValueError("s must be positive")
    if quad_order < MIN_QUAD_ORDER:
        raise ValueError(f"quad_order must be at least {MIN_QUAD_ORDER}")
    x, w = _gauss_legendre(int(quad_order))
    root_w = np.sqrt(w)
    a = root_w[:, None] * sinc_kernel(s, x[:, None], x[None, :]) * root_w[None, :]
    vals, vecs = np.linalg.eigh(a)
    if vals[0] < -EPS_PSD or vals[-1] > 1 + EPS_PSD:
        # beyond rounding: the quadrature is too coarse for this s
        raise np.linalg.LinAlgError(
            f"discrete spectrum left [0, 1] (range {vals[0]:.3g}..{vals[-1]:.3g}); raise quad_order"
        )
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, 1.0)
    f = vecs[:, order[0]] / root_w
    f = f / np.sqrt(np.sum(w * f * f))
    if np.sum(w * f) < 0:
        f = -f
    return KernelSpectrum(s, int(quad_order), vals, x, f)


def leading_joint_probability(params: PhaseSpaceParams | float, quad_order: int = DEFAULT_QUAD_ORDER) -> float:
    """Largest attainable ``P_x(bin) * P_p(bin)``: ``(1 + mu_max)^2 / 4``."""
    mu = np.sqrt(solve_spectrum(params, quad_order).mu2_max)
    return 0.25 * (1 + mu) ** 2


def small_s_asymptote(s: float) -> float:
    """``(1 + 2 sqrt(s)) / 4``, the small-bin limit of the leading joint probability."""
    if not s > 0:
        raise ValueError("s must be positive")
    return (1 + 2 * np.sqrt(s)) / 4


def _limit_wavefunction(u, width_u, width_v, hbar):
    u = np.asarray(u, dtype=float)
    box = np.heaviside(width_u**2 - 4 * u**2, 0.5) / np.sqrt(2 * width_u)
    tail = np.sqrt(width_v / (4 * np.pi * hbar)) * np.sinc(u * width_v / (2 * np.pi * hbar))
    return box + tail


def limit_wavefunction_position(x, params: PhaseSpaceParams):
    """Small-``s`` optimal wavefunction in position space (unnormalized).

    The step function takes the value 1/2 on the bin edges. Intended for
    ``s <= 0.05``.
    """
    return _limit_wavefunction(x, params.delta_x, params.delta_p, params.hbar)


def limit_wavefunction_momentum(p, params: PhaseSpaceParams):
    """Momentum-space counterpart of :func:`limit_wavefunction_position`."""
    return _limit_wavefunction(p, params.delta_p, params.delta_x, params.hbar)
