"""Sampled hypothesis checkers.

Every checker here is a falsifier: it hunts for a counterexample on a
seeded sample and reports a :class:`Certificate`.  ``passed=True`` means
"not falsified on this sample", never "verified"; a failed certificate
carries concrete witnesses.  Inequalities get an absolute slack of
``SLACK`` so that float roundoff at an exact boundary is not reported
as a violation.

The two contraction conditions checked here live on product edges of
the graph (see :func:`coupled_fpi.graphs.product_edge`):

* single-valued bound (property id ``BL``):
      d(F(x,y), F(u,v)) <= (k/2) (d(x,u) + d(y,v))
* multivalued bound (property id ``MBL``): every point of F(x,y) has a
  point of F(u,v) within the same right-hand side.

Mixed monotonicity is the edge-propagation property: edges in the first
argument push forward through F, edges in the second argument push
forward *reversed*.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InsufficientSamplesError, InvalidParameterError
from .finite_sets import as_finite_set, dist_to_set
from .graphs import Digraph
from .sampling import Sampler, SampleSpec
from .spaces import MetricSpace, as_point

SLACK = 1e-12

# Witness lists stored on certificates are capped; violation_count keeps
# the exact total so passed <=> violation_count == 0 stays machine-checkable.
VIOLATION_CAP = 25

PROPERTY_NAMES = (
    "BL",
    "MBL",
    "mixed_monotone",
    "mixed_monotone_multi",
    "property_star",
    "diagonal_decay",
)


@dataclass(frozen=True)
class Certificate:
    """Outcome of one sampled (or exhaustive) property check.

    ``estimated_constant`` is only populated by estimation runs (see
    :func:`estimate_k`); ``seed`` records the RNG seed that reproduces
    the sample.  ``detail`` is a short human-readable note such as the
    clause breakdown or a premise-violation flag.
    """

    property_name: str
    samples_tested: int
    passed: bool
    estimated_constant: float | None = None
    violations: tuple = ()
    violation_count: int = 0
    seed: int | None = None
    detail: str = ""

    def __post_init__(self):
        if self.property_name not in PROPERTY_NAMES:
            raise InvalidParameterError(
                f"unknown property name {self.property_name!r}"
            )
        if self.passed != (self.violation_count == 0):
            raise InvalidParameterError(
                "certificate passed flag inconsistent with violation count"
            )
        if self.estimated_constant is not None and not self.estimated_constant >= 0.0:
            raise InvalidParameterError("estimated constant must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "property_name": self.property_name,
            "samples_tested": self.samples_tested,
            "passed": self.passed,
            "estimated_constant": self.estimated_constant,
            "violation_count": self.violation_count,
            "violations": [dict(v) for v in self.violations],
            "seed": self.seed,
            "detail": self.detail,
        }


def validate_k(k: float) -> float:
    k = float(k)
    if not (0.0 < k < 1.0):
        raise InvalidParameterError("k must lie in (0,1)")
    return k


def _point_json(p: np.ndarray):
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if p.size == 1:
        return float(p[0])
    return [float(c) for c in p]


def _map_rows(fn: Callable, X: np.ndarray, Y: np.ndarray, dimension: int) -> np.ndarray:
    """Evaluate a single-valued coupled map on (n,d) rows, batched if it can."""
    batch = getattr(fn, "eval_batch", None)
    if batch is not None:
        out = np.asarray(batch(X, Y), dtype=np.float64)
        if out.ndim == 1:
            out = out.reshape(-1, 1)
        return out
    rows = [as_point(fn(x, y), dimension) for x, y in zip(X, Y)]
    return np.vstack(rows)


def _finalize(name, total, violations, count, seed, detail="", estimated=None):
    return Certificate(
        property_name=name,
        samples_tested=total,
        passed=count == 0,
        estimated_constant=estimated,
        violations=tuple(violations[:VIOLATION_CAP]),
        violation_count=count,
        seed=seed,
        detail=detail,
    )


def check_mixed_monotone(fn: Callable, graph: Digraph, sample: SampleSpec) -> Certificate:
    """Falsify the mixed monotone property of a single-valued map.

    Samples triples (x1, x2, y) with an edge x1 -> x2 and checks the
    image edge F(x1,y) -> F(x2,y); then triples (y1, y2, x) with an edge
    y1 -> y2 and checks the *reversed* image edge F(x,y2) -> F(x,y1).
    """
    d = graph.dimension
    violations: list[dict] = []
    count = 0
    total = 0

    sampler = Sampler(sample, d)
    X1, X2, Ys = sampler.edge_triples(graph)
    A = _map_rows(fn, X1, Ys, d)
    B = _map_rows(fn, X2, Ys, d)
    ok = graph.edge_mask(A, B)
    total += len(ok)
    for i in np.flatnonzero(~ok):
        count += 1
        if len(violations) < VIOLATION_CAP:
            violations.append({
                "clause": "x",
                "sample": int(i),
                "x1": _point_json(X1[i]),
                "x2": _point_json(X2[i]),
                "y": _point_json(Ys[i]),
                "image_from": _point_json(A[i]),
                "image_to": _point_json(B[i]),
            })

    Y1, Y2, Xs = sampler.edge_triples(graph)
    A = _map_rows(fn, Xs, Y2, d)
    B = _map_rows(fn, Xs, Y1, d)
    ok = graph.edge_mask(A, B)
    total += len(ok)
    for i in np.flatnonzero(~ok):
        count += 1
        if len(violations) < VIOLATION_CAP:
            violations.append({
                "clause": "y",
                "sample": int(i),
                "y1": _point_json(Y1[i]),
                "y2": _point_json(Y2[i]),
                "x": _point_json(Xs[i]),
                "image_from": _point_json(A[i]),
                "image_to": _point_json(B[i]),
            })

    return _finalize("mixed_monotone", total, violations, count, sample.seed)


def check_mixed_monotone_multi(fn: Callable, graph: Digraph, sample: SampleSpec) -> Certificate:
    """Falsify the multivalued mixed monotone property.

    The image-edge requirement is pointwise-existential: every u in the
    "from" image needs some v in the "to" image with an edge u -> v.
    """
    d = graph.dimension
    violations: list[dict] = []
    count = 0
    total = 0
    sampler = Sampler(sample, d)

    def clause(P1, P2, W, tag):
        nonlocal count, total
        for i in range(len(P1)):
            if tag == "x":
                from_set = as_finite_set(fn(P1[i], W[i]), d)
                to_set = as_finite_set(fn(P2[i], W[i]), d)
            else:
                from_set = as_finite_set(fn(W[i], P2[i]), d)
                to_set = as_finite_set(fn(W[i], P1[i]), d)
            total += 1
            for u in from_set:
                if not any(graph.has_edge(u, v) for v in to_set):
                    count += 1
                    if len(violations) < VIOLATION_CAP:
                        violations.append({
                            "clause": tag,
                            "sample": int(i),
                            "edge_from": _point_json(P1[i]),
                            "edge_to": _point_json(P2[i]),
                            "other": _point_json(W[i]),
                            "unmatched": _point_json(u),
                        })
                    break

    X1, X2, Ys = sampler.edge_triples(graph)
    clause(X1, X2, Ys, "x")
    Y1, Y2, Xs = sampler.edge_triples(graph)
    clause(Y1, Y2, Xs, "y")

    return _finalize("mixed_monotone_multi", total, violations, count, sample.seed)


def check_bl(
    fn: Callable,
    space: MetricSpace,
    graph: Digraph,
    k: float,
    sample: SampleSpec,
) -> Certificate:
    """Falsify the single-valued contraction bound at constant *k*.

    Samples product-edge pairs ((x,y),(u,v)) and tests
    d(F(x,y), F(u,v)) <= (k/2)(d(x,u) + d(y,v)) + SLACK.
    """
    k = validate_k(k)
    d = space.dimension
    sampler = Sampler(sample, d)
    X, Y, U, V = sampler.product_edge_pairs(graph)
    FXY = _map_rows(fn, X, Y, d)
    FUV = _map_rows(fn, U, V, d)
    lhs = space.distance_batch(FXY, FUV)
    rhs = 0.5 * k * (space.distance_batch(X, U) + space.distance_batch(Y, V))
    bad = lhs > rhs + SLACK
    violations = []
    for i in np.flatnonzero(bad)[:VIOLATION_CAP]:
        violations.append({
            "sample": int(i),
            "x": _point_json(X[i]),
            "y": _point_json(Y[i]),
            "u": _point_json(U[i]),
            "v": _point_json(V[i]),
            "lhs": float(lhs[i]),
            "rhs": float(rhs[i]),
        })
    return _finalize("BL", len(lhs), violations, int(bad.sum()), sample.seed,
                     detail=f"k={k!r}")


def check_mbl(
    fn: Callable,
    space: MetricSpace,
    graph: Digraph,
    k: float,
    sample: SampleSpec,
) -> Certificate:
    """Falsify the multivalued contraction bound at constant *k*.

    For each sampled product-edge pair, every point of F(x,y) must be
    within (k/2)(d(x,u)+d(y,v)) + SLACK of the set F(u,v).
    """
    k = validate_k(k)
    d = space.dimension
    sampler = Sampler(sample, d)
    X, Y, U, V = sampler.product_edge_pairs(graph)
    rhs_all = 0.5 * k * (space.distance_batch(X, U) + space.distance_batch(Y, V))
    violations = []
    count = 0
    for i in range(len(X)):
        A = as_finite_set(fn(X[i], Y[i]), d)
        B = as_finite_set(fn(U[i], V[i]), d)
        rhs = float(rhs_all[i])
        for a in A:
            gap = dist_to_set(space, a, B)
            if gap > rhs + SLACK:
                count += 1
                if len(violations) < VIOLATION_CAP:
                    violations.append({
                        "sample": int(i),
                        "x": _point_json(X[i]),
                        "y": _point_json(Y[i]),
                        "u": _point_json(U[i]),
                        "v": _point_json(V[i]),
                        "point": _point_json(a),
                        "lhs": float(gap),
                        "rhs": rhs,
                    })
                break
    return _finalize("MBL", len(X), violations, count, sample.seed, detail=f"k={k!r}")


def estimate_k(
    fn: Callable,
    space: MetricSpace,
    graph: Digraph,
    sample: SampleSpec,
) -> float:
    """Smallest constant satisfying the contraction bound on the sample.

    Returns sup over sampled product-edge pairs of
    2 d(F(x,y), F(u,v)) / (d(x,u) + d(y,v)), skipping degenerate pairs
    (zero denominator).  The value is a lower bound for any admissible
    global k; it may well exceed 1, which is informative in itself.

    Raises:
        InsufficientSamplesError: no product-edge pairs found, or all
            sampled pairs were degenerate.
    """
    d = space.dimension
    sampler = Sampler(sample, d)
    X, Y, U, V = sampler.product_edge_pairs(graph)
    den = space.distance_batch(X, U) + space.distance_batch(Y, V)
    keep = den > 0.0
    if not keep.any():
        raise InsufficientSamplesError("all sampled product-edge pairs were degenerate")
    FXY = _map_rows(fn, X[keep], Y[keep], d)
    FUV = _map_rows(fn, U[keep], V[keep], d)
    num = space.distance_batch(FXY, FUV)
    return float((2.0 * num / den[keep]).max())
