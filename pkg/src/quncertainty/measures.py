"""Quasi-entropic (symmetric, concave) functions of probability vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import entr


@dataclass(frozen=True)
class ConcaveMeasure:
    """A measure of the form ``F[v] = sum_i f(v_i)`` with ``f`` concave.

    ``f`` must accept numpy arrays.
    """

    name: str
    f: Callable[[np.ndarray], np.ndarray]

    def __call__(self, v) -> float:
        return float(np.sum(self.f(np.asarray(v, dtype=float))))

    def normalized(self, v) -> float:
        """``F[v] - F[(1, 0, ..., 0)]``, which vanishes for a certain outcome."""
        return self(v) - self(np.array([1.0]))

    def concavity_defect(self, rng: np.random.Generator, n: int = 200) -> float:
        """Largest violation of midpoint concavity over random chords in [0, 1]."""
        x, y = rng.random(n), rng.random(n)
        t = rng.random(n)
        lhs = self.f(t * x + (1 - t) * y)
        rhs = t * self.f(x) + (1 - t) * self.f(y)
        return float(np.max(rhs - lhs, initial=0.0))


def shannon_entropy(v) -> float:
    """Shannon entropy in nats."""
    return float(np.sum(entr(np.asarray(v, dtype=float))))


def tsallis_entropy(v, q: float) -> float:
    v = np.asarray(v, dtype=float)
    if q == 1:
        return shannon_entropy(v)
    return float(np.sum(_tsallis_terms(v, q)))


def _tsallis_terms(x, q):
    x = np.clip(x, 0.0, None)
    return (np.power(x, q) - x) / (1.0 - q)


SHANNON = ConcaveMeasure("shannon", entr)


def tsallis(q: float) -> ConcaveMeasure:
    if q <= 0:
        raise ValueError("Tsallis index must be positive")
    if q == 1:
        return SHANNON
    return ConcaveMeasure(f"tsallis-{q:g}", lambda x: _tsallis_terms(x, q))


def measure_by_name(name: str, q: float | None = None) -> ConcaveMeasure:
    if name == "shannon":
        return SHANNON
    if name == "tsallis":
        return tsallis(2.0 if q is None else q)
    raise ValueError(f"unknown measure {name!r}")
