"""Seeded rejection sampling of points, edge pairs and product-edge pairs.

All checkers draw through this module so that a recorded integer seed
reproduces a run exactly.  Draws happen in fixed-size rounds in a fixed
column order (deterministic for a given seed), get filtered by the
relevant edge constraint, and accumulate until the requested count is
reached or the draw budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InsufficientSamplesError, InvalidInputError, InvalidParameterError
from .graphs import Digraph
from .spaces import as_point

# Per-round batch size and the cap on total draws, as multiples of the
# requested count.  The cap is what turns an (almost) empty edge set into
# InsufficientSamplesError instead of a hang.
_ROUND = 4096
_BUDGET_FACTOR = 400


@dataclass(frozen=True)
class SampleSpec:
    """Where and how much to sample.

    Either a coordinate box (``low``/``high``, scalars or per-coordinate
    vectors) or an explicit finite pool of ``points`` to draw from with
    replacement.  ``count`` is the number of *accepted* samples a
    checker aims for; ``seed`` feeds numpy's Generator.
    """

    count: int = 10_000
    seed: int = 0
    low: float | Sequence[float] = -1.0
    high: float | Sequence[float] = 1.0
    points: tuple = ()

    def __post_init__(self):
        if not isinstance(self.count, int) or isinstance(self.count, bool) or self.count < 1:
            raise InvalidParameterError(f"sample count must be a positive integer, got {self.count!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise InvalidParameterError(f"rng seed must be an integer, got {self.seed!r}")


class Sampler:
    """Draws points of a given dimension according to a :class:`SampleSpec`."""

    def __init__(self, spec: SampleSpec, dimension: int):
        self.spec = spec
        self.dimension = dimension
        self._rng = np.random.default_rng(spec.seed)
        if spec.points:
            rows = [as_point(p, dimension) for p in spec.points]
            self._pool = np.vstack(rows)
            self._low = self._high = None
        else:
            self._pool = None
            low = np.broadcast_to(np.asarray(spec.low, dtype=np.float64), (dimension,))
            high = np.broadcast_to(np.asarray(spec.high, dtype=np.float64), (dimension,))
            if not (low <= high).all():
                raise InvalidInputError("sampling box has low > high")
            self._low = low
            self._high = high

    def draw(self, n: int) -> np.ndarray:
        """(n, d) array of fresh points."""
        if self._pool is not None:
            idx = self._rng.integers(0, len(self._pool), size=n)
            return self._pool[idx]
        return self._rng.uniform(self._low, self._high, size=(n, self.dimension))

    def _filtered(self, columns: int, accept: Callable[[list[np.ndarray]], np.ndarray]):
        """Draw rounds of `columns` point arrays, keep rows where accept() is true."""
        want = self.spec.count
        kept: list[list[np.ndarray]] = []
        got = 0
        budget = _BUDGET_FACTOR * want + _ROUND
        drawn = 0
        while got < want and drawn < budget:
            n = min(_ROUND, budget - drawn)
            cols = [self.draw(n) for _ in range(columns)]
            drawn += n
            mask = accept(cols)
            if mask.any():
                kept.append([c[mask] for c in cols])
                got += int(mask.sum())
        if got == 0:
            raise InsufficientSamplesError(
                "no admissible samples found within the draw budget"
            )
        out = [np.concatenate([part[i] for part in kept])[:want] for i in range(columns)]
        return out

    def edge_pairs(self, graph: Digraph) -> tuple[np.ndarray, np.ndarray]:
        """Pairs (p, q) with has_edge(p, q)."""
        P, Q = self._filtered(2, lambda c: graph.edge_mask(c[0], c[1]))
        return P, Q

    def edge_triples(self, graph: Digraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Triples (p, q, w) with has_edge(p, q); w unconstrained."""
        P, Q, W = self._filtered(3, lambda c: graph.edge_mask(c[0], c[1]))
        return P, Q, W

    def product_edge_pairs(
        self, graph: Digraph
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Pair-of-pairs (x, y), (u, v) joined by a product edge.

        The product edge is has_edge(x, u) and has_edge(v, y); both masks
        are evaluated on the whole round and combined.
        """
        X, Y, U, V = self._filtered(
            4, lambda c: graph.edge_mask(c[0], c[2]) & graph.edge_mask(c[3], c[1])
        )
        return X, Y, U, V
