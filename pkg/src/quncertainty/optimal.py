"""Least uncertain rank-1 measurement of a state."""

from __future__ import annotations

import numpy as np

from .errors import InvalidMeasurement
from .majorization import EPS_SUM, MajorizationOrder, compare
from .measures import shannon_entropy
from .quantum import Measurement, as_density_matrix, born_probabilities

DEGENERACY_TOL = 1e-10


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = np.flatnonzero(np.abs(v) > 1e-12)[0]
    return v * (abs(v[k]) / v[k])


def _lexicographic_key(v: np.ndarray) -> tuple[float, ...]:
    # rounded so that solver noise cannot reorder equal components
    return tuple(-np.round(v.real, 9))


def eigen_decomposition(rho):
    """Eigenvalues (descending) and phase-fixed eigenvectors of a density matrix.

    Each eigenvector is scaled so its first nonzero component is real and
    positive. Within a degenerate block the vectors are ordered
    lexicographically on their real parts, largest first.
    """
    rho = as_density_matrix(rho)
    w, v = np.linalg.eigh(rho)
    w, v = w[::-1], v[:, ::-1]
    vecs = [_fix_phase(v[:, k]) for k in range(w.size)]
    order: list[int] = []
    start = 0
    for k in range(1, w.size + 1):
        if k == w.size or w[start] - w[k] > DEGENERACY_TOL:
            block = sorted(range(start, k), key=lambda i: _lexicographic_key(vecs[i]))
            order.extend(block)
            start = k
    return w[order], np.column_stack([vecs[k] for k in order])


def spectrum_descending(rho) -> np.ndarray:
    """Eigenvalues clipped to [0, 1], sorted descending and renormalized."""
    w = np.clip(np.sort(np.linalg.eigvalsh(as_density_matrix(rho)))[::-1], 0.0, 1.0)
    total = w.sum()
    if abs(total - 1) > EPS_SUM:
        w = w / total
    return w


def least_uncertain_measurement(rho) -> Measurement:
    """Projective measurement onto the eigenbasis of ``rho``, largest eigenvalue first.

    Its outcome vector equals the spectrum of ``rho``.
    """
    _, vecs = eigen_decomposition(rho)
    projectors = tuple(np.outer(vecs[:, k], vecs[:, k].conj()) for k in range(vecs.shape[1]))
    return Measurement(projectors, label="least-uncertain", operators=projectors)


def verify_spectral_bound(rho, m: Measurement) -> MajorizationOrder:
    """Compare the outcome vector of a rank-1 measurement with the spectrum of ``rho``.

    For rank-1 measurements the result is always ``StrictlyBelow`` or
    ``Equivalent``.

    Raises
    ------
    InvalidMeasurement
        If some element of ``m`` does not have rank one.
    """
    if not m.is_rank_one():
        raise InvalidMeasurement("measurement is not rank-1; the spectral bound does not apply")
    return compare(born_probabilities(m, rho), spectrum_descending(rho))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in nats."""
    return shannon_entropy(spectrum_descending(rho))
