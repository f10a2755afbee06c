"""Finite-dimensional states, generalized measurements and Born-rule statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidMeasurement, InvalidState
from .majorization import outer_product

EPS_HERM = 1e-10
EPS_PSD = 1e-9
EPS_TRACE = 1e-9
EPS_COMPLETE = 1e-9

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _square_matrix(a, error=InvalidState) -> np.ndarray:
    try:
        m = np.array(a, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise error("not a numeric matrix") from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise error(f"expected a nonempty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise error("non-finite matrix entry")
    return m


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Positive square root of a Hermitian PSD matrix."""
    w, v = np.linalg.eigh(hermitian_part(a))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


@dataclass(frozen=True)
class StateDiagnostics:
    hermiticity_defect: float
    min_eigenvalue: float
    trace_defect: float

    @property
    def accepted(self) -> bool:
        return (
            self.hermiticity_defect <= EPS_HERM
            and self.min_eigenvalue >= -EPS_PSD
            and self.trace_defect <= EPS_TRACE
        )

    def problems(self) -> list[str]:
        out = []
        if self.hermiticity_defect > EPS_HERM:
            out.append(f"not Hermitian (defect {self.hermiticity_defect:.3g})")
        if self.min_eigenvalue < -EPS_PSD:
            out.append(f"negative eigenvalue {self.min_eigenvalue:.3g}")
        if self.trace_defect > EPS_TRACE:
            out.append(f"trace differs from 1 by {self.trace_defect:.3g}")
        return out


def validate_state(rho) -> StateDiagnostics:
    """Report how far ``rho`` is from being a density matrix. Never raises for square input."""
    m = _square_matrix(rho)
    w = np.linalg.eigvalsh(hermitian_part(m))
    return StateDiagnostics(
        hermiticity_defect=hermiticity_defect(m),
        min_eigenvalue=float(w[0]),
        trace_defect=float(abs(np.trace(m) - 1.0)),
    )


def as_density_matrix(rho) -> np.ndarray:
    """Validate and return ``rho`` as an exactly Hermitian complex array."""
    m = _square_matrix(rho)
    diag = validate_state(m)
    if not diag.accepted:
        raise InvalidState("invalid density matrix: " + "; ".join(diag.problems()))
    return hermitian_part(m)


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InvalidState("zero vector is not a state")
    psi = psi / norm
    return np.outer(psi, psi.conj())


def bloch_to_density(p) -> np.ndarray:
    """Qubit state ``(I + p·σ)/2`` for a polarization vector with ``|p| <= 1``."""
    p = np.asarray(p, dtype=float)
    if p.shape != (3,):
        raise InvalidState("polarization vector must have three components")
    if np.linalg.norm(p) > 1 + EPS_PSD:
        raise InvalidState(f"|p| = {np.linalg.norm(p):.6g} exceeds 1")
    return 0.5 * (np.eye(2) + p[0] * PAULI["x"] + p[1] * PAULI["y"] + p[2] * PAULI["z"])


def density_to_bloch(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise InvalidState("Bloch vectors exist for qubits only")
    return np.array([np.trace(rho @ PAULI[k]).real for k in "xyz"])


@dataclass(frozen=True)
class Measurement:
    """A generalized measurement given by its elements (and optionally its operators).

    Elements must be Hermitian, positive semidefinite and sum to the identity.
    When ``operators`` is given, ``operators[a]^† operators[a]`` must reproduce
    ``elements[a]``.
    """

    elements: tuple
    label: str = ""
    operators: tuple | None = field(default=None)

    def __post_init__(self):
        elems = tuple(_square_matrix(e, InvalidMeasurement) for e in self.elements)
        if not elems:
            raise InvalidMeasurement("a measurement needs at least one element")
        d = elems[0].shape[0]
        if any(e.shape != (d, d) for e in elems):
            raise InvalidMeasurement("elements have different dimensions")
        for i, e in enumerate(elems):
            if hermiticity_defect(e) > EPS_HERM:
                raise InvalidMeasurement(f"element {i} is not Hermitian")
            if np.linalg.eigvalsh(hermitian_part(e))[0] < -EPS_PSD:
                raise InvalidMeasurement(f"element {i} is not positive semidefinite")
        defect = np.max(np.abs(sum(elems) - np.eye(d)))
        if defect > EPS_COMPLETE:
            raise InvalidMeasurement(f"elements do not sum to identity (defect {defect:.3g})")
        object.__setattr__(self, "elements", tuple(hermitian_part(e) for e in elems))
        if self.operators is not None:
            ops = tuple(_square_matrix(o, InvalidMeasurement) for o in self.operators)
            if len(ops) != len(elems):
                raise InvalidMeasurement("operator count differs from element count")
            for i, (o, e) in enumerate(zip(ops, self.elements)):
                if o.shape != e.shape or np.max(np.abs(o.conj().T @ o - e)) > EPS_COMPLETE:
                    raise InvalidMeasurement(f"operator {i} does not reproduce its element")
            object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)

    def operator(self, alpha: int) -> np.ndarray:
        """Measurement operator for outcome ``alpha``; the PSD root of the element if none was given."""
        if self.operators is not None:
            return self.operators[alpha]
        return psd_sqrt(self.elements[alpha])

    def is_rank_one(self, tol: float = EPS_PSD) -> bool:
        for e in self.elements:
            w = np.linalg.eigvalsh(e)
            if np.count_nonzero(w > tol) != 1:
                return False
        return True


def spin_component_measurement(axis: str) -> Measurement:
    """Projective measurement of a Pauli operator: elements ``(I ± σ_axis)/2``."""
    try:
        sigma = PAULI[axis]
    except KeyError:
        raise InvalidMeasurement(f"unknown axis {axis!r}; use x, y or z") from None
    eye = np.eye(2)
    return Measurement(((eye + sigma) / 2, (eye - sigma) / 2), label=f"sigma_{axis}")


def projective_measurement(vectors, label: str = "") -> Measurement:
    """Rank-1 projective measurement onto the columns of a unitary."""
    u = np.asarray(vectors, dtype=complex)
    return Measurement(tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(u.shape[1])), label)


def born_probabilities(m: Measurement, rho) -> np.ndarray:
    """Outcome probabilities ``tr(E_a ρ)``; round-off negatives are clamped to zero."""
    rho = as_density_matrix(rho)
    if rho.shape[0] != m.dim:
        raise InvalidMeasurement(f"state dimension {rho.shape[0]} != measurement dimension {m.dim}")
    p = np.array([np.trace(e @ rho).real for e in m.elements])
    p[(p < 0) & (p > -EPS_PSD)] = 0.0
    return p


def joint_distribution(ms: Sequence[Measurement], rho) -> np.ndarray:
    """Outer product of the individual outcome vectors (first measurement slowest)."""
    if not ms:
        raise InvalidMeasurement("empty measurement set")
    return outer_product(born_probabilities(m, rho) for m in ms)


def post_measurement_state(op, rho) -> np.ndarray:
    """Conditional state ``M ρ M^† / tr(M ρ M^†)`` after the outcome of operator ``M``."""
    rho = as_density_matrix(rho)
    op = _square_matrix(op, InvalidMeasurement)
    if op.shape != rho.shape:
        raise InvalidMeasurement("operator and state dimensions differ")
    out = op @ rho @ op.conj().T
    prob = np.trace(out).real
    if prob <= 1e-12:
        raise InvalidState(f"outcome probability {prob:.3g} is too small to condition on")
    return hermitian_part(out / prob)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_pure_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Mixed state with Haar-random eigenvectors and flat-Dirichlet eigenvalues."""
    rank = d if rank is None else rank
    w = np.zeros(d)
    w[:rank] = rng.dirichlet(np.ones(rank))
    u = random_unitary(d, rng)
    return hermitian_part((u * w) @ u.conj().T)


def random_rank_one_povm(d: int, k: int, rng: np.random.Generator) -> Measurement:
    """Rank-1 POVM with ``k >= d`` elements built from Haar-random vectors.

    The outer products are conjugated by the inverse square root of their sum
    so that the elements add up to the identity.
    """
    if k < d:
        raise ValueError("a rank-1 POVM needs at least d elements")
    vs = [random_pure_vector(d, rng) for _ in range(k)]
    total = sum(np.outer(v, v.conj()) for v in vs)
    w, u = np.linalg.eigh(total)
    inv_root = (u / np.sqrt(w)) @ u.conj().T
    elems = []
    for v in vs:
        g = inv_root @ v
        elems.append(np.outer(g, g.conj()))
    # absorb the residual rounding into the last element
    elems[-1] = elems[-1] + (np.eye(d) - sum(elems))
    return Measurement(tuple(elems), label=f"random-rank1-{k}")
