"""State-independent majorization bounds for sets of measurements."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidMeasurement
from .majorization import supremum_from_envelope
from .measures import ConcaveMeasure
from .quantum import Measurement, joint_distribution, pure_state
from .search import ComponentResult, SearchConfig, extremal_top_sums


@dataclass
class BoundResult:
    """Envelope (prefix sums with a leading 0), the bound vector and per-component witnesses."""

    kind: str
    envelope: np.ndarray
    bound: np.ndarray
    witnesses: list[ComponentResult]
    common_eigenstate: "CommonEigenstate | None" = None


@dataclass
class CommonEigenstate:
    vector: np.ndarray
    outcomes: tuple[int, ...] = field(default=())

    @property
    def state(self) -> np.ndarray:
        return pure_state(self.vector)


def _check_set(ms: Sequence[Measurement]):
    if not ms:
        raise InvalidMeasurement("empty measurement set")
    if len({m.dim for m in ms}) != 1:
        raise InvalidMeasurement("measurements act on different dimensions")


def _envelope(components: list[ComponentResult]) -> np.ndarray:
    env = np.concatenate([[0.0], [c.value for c in components]])
    env = np.clip(env, 0.0, 1.0)
    env = np.maximum.accumulate(env)
    env[-1] = 1.0
    return env


def mu_sup_component(ms: Sequence[Measurement], j: int, cfg: SearchConfig = SearchConfig()):
    """Largest sum of ``j`` joint probabilities over all states.

    Returns ``(value, witness_density_matrix)``.
    """
    _check_set(ms)
    n_total = int(np.prod([m.n_outcomes for m in ms]))
    if not 1 <= j <= n_total:
        raise ValueError(f"component index must lie in 1..{n_total}")
    comp = extremal_top_sums(ms, cfg, maximize=True, components=[j])[0]
    return comp.value, comp.state


def supremum_bound(ms: Sequence[Measurement], cfg: SearchConfig = SearchConfig()) -> BoundResult:
    """Least vector majorizing the joint distribution of every state."""
    _check_set(ms)
    comps = extremal_top_sums(ms, cfg, maximize=True)
    env = _envelope(comps)
    return BoundResult(
        "sup", env, supremum_from_envelope(env), comps, has_common_eigenstate(ms)
    )


def infimum_bound(ms: Sequence[Measurement], cfg: SearchConfig = SearchConfig()) -> BoundResult:
    """Greatest vector majorized by the joint distribution of every (or every pure) state."""
    _check_set(ms)
    comps = extremal_top_sums(ms, cfg, maximize=False)
    env = _envelope(comps)
    return BoundResult("inf", env, np.clip(np.diff(env), 0.0, None), comps, has_common_eigenstate(ms))


def quasi_entropic_uncertainty(measure: ConcaveMeasure, ms: Sequence[Measurement], rho) -> float:
    """Normalized quasi-entropic uncertainty of the joint outcome vector of ``rho``."""
    _check_set(ms)
    return measure.normalized(joint_distribution(ms, rho))


def entropic_lower_bound(
    measure: ConcaveMeasure,
    ms: Sequence[Measurement],
    cfg: SearchConfig = SearchConfig(),
    bound: BoundResult | None = None,
) -> float:
    """State-independent lower bound on :func:`quasi_entropic_uncertainty`.

    Pass a precomputed supremum ``bound`` to skip the search.
    """
    if bound is None:
        bound = supremum_bound(ms, cfg)
    return measure.normalized(bound.bound)


def _unit_eigenspace(e: np.ndarray, tol: float) -> np.ndarray:
    w, v = np.linalg.eigh(e)
    return v[:, w >= 1 - tol]


def _intersect(u: np.ndarray, v: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of span(u) ∩ span(v) for orthonormal column sets."""
    resid = u - v @ (v.conj().T @ u)
    _, s, vh = np.linalg.svd(resid)
    s = np.concatenate([s, np.zeros(u.shape[1] - s.size)])
    null = vh.conj().T[:, s <= tol]
    if null.shape[1] == 0:
        return null
    q, _ = np.linalg.qr(u @ null)
    return q


def has_common_eigenstate(ms: Sequence[Measurement], tol: float = 1e-8) -> CommonEigenstate | None:
    """Find a unit vector left invariant by one element of every measurement.

    Such a vector gives a certain outcome for each measurement. Returns the
    first witness found (depth-first over element choices) or ``None``.
    """
    _check_set(ms)
    d = ms[0].dim
    spaces = [
        [(a, _unit_eigenspace(e, tol)) for a, e in enumerate(m.elements)] for m in ms
    ]
    spaces = [[(a, s) for a, s in opts if s.shape[1]] for opts in spaces]
    if any(not opts for opts in spaces):
        return None
    for combo in itertools.product(*spaces):
        basis = np.eye(d, dtype=complex)
        for _, s in combo:
            basis = _intersect(basis, s, np.sqrt(tol))
            if basis.shape[1] == 0:
                break
        else:
            psi = basis[:, 0]
            k = np.flatnonzero(np.abs(psi) > 1e-12)[0]
            psi = psi * (abs(psi[k]) / psi[k])
            outcomes = tuple(a for a, _ in combo)
            ok = all(
                np.linalg.norm(m.elements[a] @ psi - psi) <= np.sqrt(tol)
                for m, a in zip(ms, outcomes)
            )
            if ok:
                return CommonEigenstate(psi, outcomes)
    return None
