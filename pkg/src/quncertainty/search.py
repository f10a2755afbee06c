"""Multistart search over quantum states for extremal top-j sums.

Every state family is parametrized by points on a unit sphere in R^n, so a
single projected-gradient routine serves all of them:

* qubit, pure   -- Bloch sphere S^2, ``p = x``
* qubit, mixed  -- S^3, ``p = x[:3]`` covers the Bloch ball
* d > 2, pure   -- S^(2d-1), ``psi = x[:d] + i x[d:]``
* d > 2, mixed  -- S^(2d^2-1), ``rho = A A^†`` with ``A`` read from ``x``
  (unit Frobenius norm makes ``tr rho = 1``)

All objective evaluations are batched over rows of a 2-D array.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import SearchError
from .quantum import PAULI, Measurement, bloch_to_density, hermitian_part

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 64
    max_iterations: int = 200
    step_tolerance: float = 1e-10
    seed: int = 42
    pure_only: bool = False
    grid_step_deg: float = 2.0
    polish: int = 4

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.step_tolerance <= 0:
            raise ValueError("step_tolerance must be positive")
        if not 0 < self.grid_step_deg <= 90:
            raise ValueError("grid_step_deg must lie in (0, 90]")


def _normalize(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


class StateChart:
    """Map sphere points to joint outcome distributions for a measurement set."""

    def __init__(self, ms: Sequence[Measurement], mixed: bool):
        dims = {m.dim for m in ms}
        if len(dims) != 1:
            raise ValueError("measurements act on different dimensions")
        self.d = dims.pop()
        self.mixed = mixed
        self.qubit = self.d == 2
        self.outcomes = [m.n_outcomes for m in ms]
        if self.qubit:
            # tr(E rho) = c0 + c·p with E = c0 I + c·sigma
            self._c0 = [np.array([np.trace(e).real / 2 for e in m.elements]) for m in ms]
            self._c = [
                np.array([[np.trace(e @ PAULI[k]).real / 2 for k in "xyz"] for e in m.elements])
                for m in ms
            ]
            self.n = 4 if mixed else 3
        else:
            self._elements = [np.stack(m.elements) for m in ms]
            self.n = 2 * self.d * self.d if mixed else 2 * self.d

    @property
    def kind(self) -> str:
        return "mixed" if self.mixed else "pure"

    def marginals(self, x: np.ndarray) -> list[np.ndarray]:
        x = _normalize(np.atleast_2d(x))
        if self.qubit:
            p = x[:, :3]
            return [c0 + p @ c.T for c0, c in zip(self._c0, self._c)]
        d = self.d
        if self.mixed:
            a = (x[:, : d * d] + 1j * x[:, d * d :]).reshape(-1, d, d)
            rho = a @ a.conj().transpose(0, 2, 1)
            return [np.einsum("kij,bji->bk", e, rho).real for e in self._elements]
        psi = x[:, :d] + 1j * x[:, d:]
        return [np.einsum("bi,kij,bj->bk", psi.conj(), e, psi).real for e in self._elements]

    def joint(self, x: np.ndarray) -> np.ndarray:
        margs = self.marginals(x)
        b = margs[0].shape[0]
        return reduce(lambda u, v: (u[:, :, None] * v[:, None, :]).reshape(b, -1), margs)

    def density(self, x: np.ndarray) -> np.ndarray:
        x = _normalize(np.asarray(x, dtype=float))
        if self.qubit:
            p = x[:3]
            r = np.linalg.norm(p)
            return bloch_to_density(p / r if r > 1 else p)
        d = self.d
        if self.mixed:
            a = (x[: d * d] + 1j * x[d * d :]).reshape(d, d)
            return hermitian_part(a @ a.conj().T)
        psi = x[:d] + 1j * x[d:]
        return np.outer(psi, psi.conj())

    def random_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return _normalize(rng.standard_normal((count, self.n)))

    def grid(self, step_deg: float) -> np.ndarray | None:
        """Bloch-sphere grid (and its radial extension for mixed states); qubits only."""
        if not self.qubit:
            return None
        theta = np.deg2rad(np.arange(0.0, 180.0 + 1e-9, step_deg))
        phi = np.deg2rad(np.arange(0.0, 360.0 - 1e-9, step_deg))
        t, f = np.meshgrid(theta, phi, indexing="ij")
        sphere = np.stack([np.sin(t) * np.cos(f), np.sin(t) * np.sin(f), np.cos(t)], -1).reshape(-1, 3)
        if not self.mixed:
            return sphere
        radii = np.linspace(0.0, 1.0, 11)
        p = (radii[:, None, None] * sphere[None]).reshape(-1, 3)
        p = np.unique(np.round(p, 12), axis=0)
        w = np.sqrt(np.clip(1.0 - np.sum(p * p, axis=1), 0.0, None))
        return np.column_stack([p, w])


def top_sums(joint: np.ndarray, j: int) -> np.ndarray:
    """Sum of the ``j`` largest entries in each row."""
    n = joint.shape[1]
    return np.partition(joint, n - j, axis=1)[:, n - j :].sum(axis=1)


def _fd_gradient(g: Callable, x: np.ndarray, h: float) -> np.ndarray:
    b, n = x.shape
    eye = np.eye(n) * h
    plus = (x[:, None, :] + eye[None]).reshape(-1, n)
    minus = (x[:, None, :] - eye[None]).reshape(-1, n)
    return ((g(plus) - g(minus)).reshape(b, n)) / (2 * h)


def projected_ascent(
    g: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    max_iterations: int = 200,
    step_tolerance: float = 1e-10,
    h: float = 1e-7,
):
    """Batched gradient ascent of ``g`` on the unit sphere with step halving.

    ``g`` maps an array of points (rows) to values and must be invariant under
    positive rescaling of each row. Returns ``(x, values, converged)``.
    """
    x = _normalize(np.array(x0, dtype=float))
    f = g(x)
    step = np.full(len(x), 0.25)
    active = np.ones(len(x), dtype=bool)
    for _ in range(max_iterations):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        xi = x[idx]
        grad = _fd_gradient(g, xi, h)
        grad -= np.sum(grad * xi, axis=1, keepdims=True) * xi
        gnorm = np.linalg.norm(grad, axis=1)
        flat = gnorm < 1e-14
        active[idx[flat]] = False
        idx, xi, grad, gnorm = idx[~flat], xi[~flat], grad[~flat], gnorm[~flat]
        direction = grad / gnorm[:, None]
        pending = np.ones(idx.size, dtype=bool)
        while pending.any():
            k = np.flatnonzero(pending)
            trial = _normalize(xi[k] + step[idx[k], None] * direction[k])
            ft = g(trial)
            better = ft > f[idx[k]]
            acc = k[better]
            x[idx[acc]] = trial[better]
            f[idx[acc]] = ft[better]
            pending[acc] = False
            rej = k[~better]
            step[idx[rej]] /= 2
            tiny = rej[step[idx[rej]] < step_tolerance]
            active[idx[tiny]] = False
            pending[tiny] = False
        step[idx] = np.minimum(step[idx] * 2, 0.5)
    return x, f, ~active


def _polish(g: Callable, x0: np.ndarray, f0: float):
    """Nelder-Mead refinement in the tangent plane; handles kinks of top-j sums."""
    n = x0.size
    # orthonormal basis of the tangent space at x0
    q, _ = np.linalg.qr(np.column_stack([x0, np.eye(n)]))
    basis = q[:, 1:n]

    def neg(t):
        return -g((x0 + basis @ t)[None])[0]

    res = minimize(
        neg,
        np.zeros(n - 1),
        method="Nelder-Mead",
        options={
            "xatol": 1e-10,
            "fatol": 1e-14,
            "maxiter": 400 * n,
            "initial_simplex": np.vstack([np.zeros(n - 1), 1e-3 * np.eye(n - 1)]),
        },
    )
    if -res.fun > f0:
        return _normalize(x0 + basis @ res.x), -res.fun
    return x0, f0


@dataclass
class ComponentResult:
    j: int
    value: float
    state: np.ndarray
    search: str
    converged: bool


def extremal_top_sums(
    ms: Sequence[Measurement],
    cfg: SearchConfig,
    maximize: bool = True,
    components: Sequence[int] | None = None,
) -> list[ComponentResult]:
    """Max (or min) over states of the sum of the ``j`` largest joint probabilities.

    Runs for every ``j`` unless ``components`` lists a subset. Pure states are
    always searched; mixed states too unless ``cfg.pure_only``. The more
    extreme of the two searches is kept for each ``j``.
    """
    sign = 1.0 if maximize else -1.0
    charts = [StateChart(ms, mixed=False)]
    if not cfg.pure_only:
        charts.append(StateChart(ms, mixed=True))
    n_total = int(np.prod(charts[0].outcomes))
    js = list(range(1, n_total + 1)) if components is None else [int(j) for j in components]
    best: list[ComponentResult | None] = [None] * len(js)
    for c_idx, chart in enumerate(charts):
        rng = np.random.default_rng([cfg.seed, c_idx])
        pool = chart.grid(cfg.grid_step_deg)
        if pool is None:
            pool = chart.random_points(rng, max(32 * cfg.restarts, 256))
        pool_sums = np.cumsum(-np.sort(-chart.joint(pool), axis=1), axis=1)
        found = []
        for j in js:
            def g(x, j=j):
                return sign * top_sums(chart.joint(x), j)

            n_top = (cfg.restarts + 1) // 2
            order = np.argsort(-sign * pool_sums[:, j - 1], kind="stable")[:n_top]
            seeds = np.vstack([pool[order], chart.random_points(rng, cfg.restarts - n_top)])
            x, f, conv = projected_ascent(g, seeds, cfg.max_iterations, cfg.step_tolerance)
            if not np.all(np.isfinite(f)):
                raise SearchError(f"non-finite objective for j={j}", best=np.nanmax(f))
            ranked = np.argsort(-f, kind="stable")
            bx, bf, bconv = x[ranked[0]], f[ranked[0]], bool(conv[ranked[0]])
            for r in ranked[: cfg.polish]:
                px, pf = _polish(g, x[r], f[r])
                if pf > bf + 1e-15:
                    bx, bf, bconv = px, pf, True
            found.append((bx, bf, bconv))
        # any state is a valid candidate for every j
        xs = np.stack([fx for fx, _, _ in found])
        cross = np.cumsum(-np.sort(-chart.joint(xs), axis=1), axis=1) * sign
        for i, j in enumerate(js):
            bx, bf, bconv = found[i]
            k = int(np.argmax(cross[:, j - 1]))
            if cross[k, j - 1] > bf + 1e-15:
                bx, bf = xs[k], cross[k, j - 1]
            cand = ComponentResult(j, sign * bf, chart.density(bx), chart.kind, bconv)
            cur = best[i]
            if cur is None or sign * cand.value > sign * cur.value + 1e-12:
                best[i] = cand
    for r in best:
        if not r.converged:
            log.warning("search for component %d stopped at the iteration limit", r.j)
    return best
