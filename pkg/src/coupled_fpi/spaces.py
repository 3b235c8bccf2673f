"""Points and metric spaces.

Points are one-dimensional ``float64`` numpy arrays of fixed length
(``dimension``).  Scalars are accepted anywhere a point is expected and
are promoted to length-1 arrays, so the real line works without
ceremony.  All objects here are immutable after construction and safe
to share across threads.

Builtin spaces cover R^n with the Euclidean metric (absolute value when
n = 1) and the Chebyshev (max) metric; arbitrary metrics plug in via
:class:`CallbackSpace`.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence, Union

import numpy as np

from .errors import InvalidInputError, InvalidParameterError

PointLike = Union[float, int, Sequence[float], np.ndarray]


def as_point(value: PointLike, dimension: int | None = None) -> np.ndarray:
    """Normalize *value* to a float64 point array.

    Scalars become length-1 arrays.  When *dimension* is given the
    result's length must match it.

    Raises:
        InvalidInputError: non-numeric data, wrong shape, or a
            dimension mismatch.
    """
    if isinstance(value, np.ndarray) and value.dtype == np.float64 and value.ndim == 1:
        pt = value.copy()
    else:
        try:
            arr = np.asarray(value, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"not a point: {value!r}") from exc
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if arr.ndim != 1:
            raise InvalidInputError(f"a point must be a flat vector, got shape {arr.shape}")
        pt = arr.astype(np.float64, copy=True)
    if pt.size == 0:
        raise InvalidInputError("a point must have at least one coordinate")
    if dimension is not None and pt.size != dimension:
        raise InvalidInputError(f"dimension mismatch: expected {dimension}, got {pt.size}")
    return pt


def _check_dimension(dimension: int) -> int:
    if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 1:
        raise InvalidParameterError(f"dimension must be a positive integer, got {dimension!r}")
    return dimension


class MetricSpace:
    """Base metric space over R^d points.

    Subclasses implement :meth:`_dist` on validated arrays.  ``distance``
    validates inputs; the batch helpers (``distance_batch``, ``pairwise``)
    fall back to row loops and are overridden with vectorized versions
    where the metric allows it.
    """

    def __init__(self, dimension: int):
        self._dimension = _check_dimension(dimension)

    @property
    def dimension(self) -> int:
        return self._dimension

    def distance(self, p: PointLike, q: PointLike) -> float:
        p = as_point(p, self._dimension)
        q = as_point(q, self._dimension)
        return self._dist(p, q)

    def _dist(self, p: np.ndarray, q: np.ndarray) -> float:
        raise NotImplementedError

    def distance_batch(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        """Rowwise distances between (n,d) arrays P and Q."""
        return np.fromiter(
            (self._dist(p, q) for p, q in zip(P, Q)), np.float64, count=len(P)
        )

    def pairwise(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        """Full (len(P), len(Q)) distance matrix."""
        out = np.empty((len(P), len(Q)))
        for i, p in enumerate(P):
            for j, q in enumerate(Q):
                out[i, j] = self._dist(p, q)
        return out


class EuclideanSpace(MetricSpace):
    """R^d with the Euclidean metric; plain absolute value when d = 1."""

    def _dist(self, p: np.ndarray, q: np.ndarray) -> float:
        if p.size == 1:
            return abs(p[0] - q[0])
        diff = p - q
        return math.sqrt(float((diff * diff).sum()))

    def distance_batch(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        diff = np.asarray(P, dtype=np.float64) - np.asarray(Q, dtype=np.float64)
        if diff.ndim == 1:
            return np.abs(diff)
        if diff.shape[1] == 1:
            return np.abs(diff[:, 0])
        return np.sqrt((diff * diff).sum(axis=1))

    def pairwise(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        diff = P[:, None, :] - Q[None, :, :]
        if diff.shape[2] == 1:
            return np.abs(diff[:, :, 0])
        return np.sqrt((diff * diff).sum(axis=2))


class ChebyshevSpace(MetricSpace):
    """R^d with the max metric d(p,q) = max_i |p_i - q_i|."""

    def _dist(self, p: np.ndarray, q: np.ndarray) -> float:
        return float(np.abs(p - q).max())

    def distance_batch(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        diff = np.abs(np.asarray(P, dtype=np.float64) - np.asarray(Q, dtype=np.float64))
        if diff.ndim == 1:
            return diff
        return diff.max(axis=1)

    def pairwise(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        return np.abs(P[:, None, :] - Q[None, :, :]).max(axis=2)


class CallbackSpace(MetricSpace):
    """Metric defined by a user callback ``fn(p, q) -> float``.

    The callback receives validated point arrays.  No metric axioms are
    enforced here; the sampled checkers are the place to falsify them.
    """

    def __init__(self, dimension: int, fn: Callable[[np.ndarray, np.ndarray], float]):
        super().__init__(dimension)
        if not callable(fn):
            raise InvalidInputError("distance callback must be callable")
        self._fn = fn

    def _dist(self, p: np.ndarray, q: np.ndarray) -> float:
        return float(self._fn(p, q))


def real_line() -> EuclideanSpace:
    """R with the absolute-value metric."""
    return EuclideanSpace(1)
