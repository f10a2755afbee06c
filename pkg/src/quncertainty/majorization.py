"""Majorization order on probability vectors.

Vectors are plain 1-D numpy arrays. Every public function validates its inputs
with :func:`as_probvec`, and vectors of unequal length are compared after
padding the shorter ones with trailing zeros.
"""

from __future__ import annotations

import enum
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidProbVec

EPS_PROB = 1e-12
EPS_SUM = 1e-9
EPS_PREFIX = 1e-9


class MajorizationOrder(str, enum.Enum):
    """Outcome of comparing ``a`` against ``b``."""

    STRICTLY_BELOW = "StrictlyBelow"
    STRICTLY_ABOVE = "StrictlyAbove"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"

    def __str__(self):
        return self.value

    def is_below(self):
        """True for ``a ≺ b`` including equivalence."""
        return self in (MajorizationOrder.STRICTLY_BELOW, MajorizationOrder.EQUIVALENT)

    def is_above(self):
        return self in (MajorizationOrder.STRICTLY_ABOVE, MajorizationOrder.EQUIVALENT)


def as_probvec(v, *, name="vector") -> np.ndarray:
    """Validate ``v`` and return it as a float array with tiny entries zeroed.

    Raises
    ------
    InvalidProbVec
        If ``v`` is empty, not one-dimensional, has non-finite or negative
        entries (beyond ``EPS_PROB``), or does not sum to one within ``EPS_SUM``.
    """
    try:
        arr = np.array(v, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidProbVec(f"{name}: not a numeric vector") from exc
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidProbVec(f"{name}: expected a nonempty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidProbVec(f"{name}: non-finite entry")
    if arr.min() < -EPS_PROB:
        raise InvalidProbVec(f"{name}: negative entry {float(arr.min()):.3g}")
    arr[np.abs(arr) < EPS_PROB] = 0.0
    total = arr.sum()
    if abs(total - 1.0) > EPS_SUM:
        raise InvalidProbVec(f"{name}: entries sum to {float(total):.12g}, not 1")
    return arr


def pad(v: np.ndarray, length: int) -> np.ndarray:
    if v.size > length:
        raise ValueError("cannot pad to a shorter length")
    out = np.zeros(length)
    out[: v.size] = v
    return out


def _padded_sorted(vs: Sequence[np.ndarray]) -> np.ndarray:
    d = max(v.size for v in vs)
    return np.stack([-np.sort(-pad(v, d)) for v in vs])


def sort_descending(v) -> np.ndarray:
    """Return the nonincreasing rearrangement of ``v``."""
    return -np.sort(-as_probvec(v))


def prefix_sums(v) -> np.ndarray:
    """Cumulative sums of the sorted vector, with a leading zero."""
    return np.concatenate([[0.0], np.cumsum(sort_descending(v))])


def compare(a, b) -> MajorizationOrder:
    """Compare ``a`` with ``b`` under majorization.

    ``StrictlyBelow`` means ``a ≺ b`` (``a`` is the more disordered vector).
    Prefix sums equal within ``EPS_PREFIX`` count as ties in both directions.
    """
    a = as_probvec(a, name="a")
    b = as_probvec(b, name="b")
    sa, sb = _padded_sorted([a, b])
    diff = np.cumsum(sa) - np.cumsum(sb)
    below = bool(np.all(diff <= EPS_PREFIX))
    above = bool(np.all(diff >= -EPS_PREFIX))
    if below and above:
        return MajorizationOrder.EQUIVALENT
    if below:
        return MajorizationOrder.STRICTLY_BELOW
    if above:
        return MajorizationOrder.STRICTLY_ABOVE
    return MajorizationOrder.INCOMPARABLE


def certain_vector(d: int = 1) -> np.ndarray:
    """The zero-uncertainty vector (1, 0, ..., 0) of length ``d``."""
    out = np.zeros(d)
    out[0] = 1.0
    return out


def is_uncertain(v) -> bool:
    """True iff ``v`` is strictly majorized by (1, 0, ..., 0)."""
    return compare(v, certain_vector()) is MajorizationOrder.STRICTLY_BELOW


def outer_product(vs: Iterable) -> np.ndarray:
    """Flattened outer product of probability vectors, first factor slowest."""
    vs = [as_probvec(v, name=f"factor {i}") for i, v in enumerate(vs)]
    if not vs:
        raise InvalidProbVec("outer product of an empty list")
    return reduce(np.multiply.outer, vs).ravel()


def prefix_envelope(vs: Iterable, kind: str = "min") -> np.ndarray:
    """Pointwise min (or max) of the prefix sums of the sorted vectors.

    The result has length ``d_max + 1`` and starts with 0.
    """
    vs = [as_probvec(v, name=f"vector {i}") for i, v in enumerate(vs)]
    if not vs:
        raise InvalidProbVec("empty set of vectors")
    sums = np.cumsum(_padded_sorted(vs), axis=1)
    env = sums.min(axis=0) if kind == "min" else sums.max(axis=0)
    return np.concatenate([[0.0], env])


def infimum(vs: Iterable) -> np.ndarray:
    """Greatest vector majorized by every element of ``vs``."""
    return np.diff(prefix_envelope(vs, "min"))


def flatten(increments) -> np.ndarray:
    """Make a sequence nonincreasing by averaging ascending runs.

    Pool-adjacent-violators: adjacent blocks whose means increase are merged
    and replaced by their common mean. The total is preserved and the prefix
    sums of the result never fall below those of the input.
    """
    x = np.asarray(increments, dtype=float)
    if x.ndim != 1:
        raise ValueError("flatten expects a 1-D sequence")
    if x.size and x.min() < -EPS_PROB:
        raise InvalidProbVec(f"negative increment {x.min():.3g}")
    sums: list[float] = []
    counts: list[int] = []
    for value in x:
        sums.append(float(value))
        counts.append(1)
        while len(sums) > 1 and sums[-2] / counts[-2] < sums[-1] / counts[-1]:
            s, c = sums.pop(), counts.pop()
            sums[-1] += s
            counts[-1] += c
    return np.repeat([s / c for s, c in zip(sums, counts)], counts)


def supremum_from_envelope(envelope) -> np.ndarray:
    """Difference a prefix-max envelope (leading 0 included) and flatten it."""
    env = np.asarray(envelope, dtype=float)
    return flatten(np.clip(np.diff(env), 0.0, None))


def supremum(vs: Iterable) -> np.ndarray:
    """Least vector majorizing every element of ``vs``."""
    return supremum_from_envelope(prefix_envelope(vs, "max"))
