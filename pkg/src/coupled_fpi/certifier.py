"""Hypothesis preflight: aggregate the sampled checks for one instance.

The solver's convergence guarantees rest on a bundle of hypotheses
(mixed monotonicity, the contraction bound, the seed edge, and either
continuity of the map or the limit-edge persistence property of the
graph).  ``preflight`` runs every checker it can, collects their
certificates, and labels the instance with the strongest certification
level whose sampled hypotheses all survived:

    thm_3_1  single-valued map, continuity asserted
    thm_3_2  single-valued map, limit-edge persistence instead
    thm_4_1  multivalued map, continuity asserted
    thm_4_2  multivalued map, limit-edge persistence instead
    none     some hypothesis was falsified (or could not be exercised)

Continuity cannot be falsified by finitely many samples; it stays a
user assertion, spot-checked along a few convergent sequences.  The
limit-edge property ("property_star") is quantified over all convergent
sequences, so the certifier checks it only on the sequences actually
produced; its certificates mean "not falsified", never "verified".
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .checks import (
    Certificate,
    VIOLATION_CAP,
    check_bl,
    check_mbl,
    check_mixed_monotone,
    check_mixed_monotone_multi,
    estimate_k,
)
from .errors import CoupledFpiError, InvalidInputError, InvalidParameterError
from .finite_sets import as_finite_set, dist_to_set
from .graphs import Digraph, product_edge
from .sampling import SampleSpec, Sampler
from .solver import SolveConfig, solve_coupled, solve_coupled_multi
from .spaces import MetricSpace, PointLike, as_point

THEOREM_LEVELS = ("thm_3_1", "thm_3_2", "thm_4_1", "thm_4_2", "none")

# Trial-trace length for the property_star path and the continuity spot
# check; long enough to exercise the edge chain, short enough to stay
# cheap even for slow user maps.
_TRIAL_STEPS = 25
_CONTINUITY_TOL = 1e-8


@dataclass(frozen=True)
class ProblemInstance:
    """Everything preflight needs to know about one problem.

    ``kind`` is "single" or "multi"; for multivalued instances the seed
    iterates x1, y1 are part of the instance (the theorems' existential
    seed).  ``continuous`` is the user's continuity assertion.
    """

    kind: str
    space: MetricSpace
    graph: Digraph
    map: Callable
    k: float
    x0: np.ndarray
    y0: np.ndarray
    x1: np.ndarray | None = None
    y1: np.ndarray | None = None
    continuous: bool = True
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("single", "multi"):
            raise InvalidParameterError(f"kind must be 'single' or 'multi', got {self.kind!r}")
        d = self.space.dimension
        object.__setattr__(self, "x0", as_point(self.x0, d))
        object.__setattr__(self, "y0", as_point(self.y0, d))
        if self.kind == "multi":
            if self.x1 is None or self.y1 is None:
                raise InvalidInputError("multivalued instances must declare x1 and y1")
            object.__setattr__(self, "x1", as_point(self.x1, d))
            object.__setattr__(self, "y1", as_point(self.y1, d))


@dataclass(frozen=True)
class HypothesisReport:
    """Consolidated preflight outcome for one instance."""

    instance_id: str
    certificates: tuple[Certificate, ...]
    theorem_applicable: str
    seed_edge_ok: bool
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.theorem_applicable != "none"

    def certificate(self, property_name: str) -> Certificate | None:
        for cert in self.certificates:
            if cert.property_name == property_name:
                return cert
        return None

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "theorem_applicable": self.theorem_applicable,
            "seed_edge_ok": self.seed_edge_ok,
            "certificates": [c.to_dict() for c in self.certificates],
            "notes": list(self.notes),
        }


def instance_id_for(instance: ProblemInstance) -> str:
    """Stable short id from the instance's declared data."""
    h = hashlib.sha256()
    parts = [
        instance.kind,
        type(instance.space).__name__,
        str(instance.space.dimension),
        type(instance.graph).__name__,
        repr(float(instance.k)),
        repr([float(c) for c in instance.x0]),
        repr([float(c) for c in instance.y0]),
        repr(None if instance.x1 is None else [float(c) for c in instance.x1]),
        repr(None if instance.y1 is None else [float(c) for c in instance.y1]),
        str(bool(instance.continuous)),
        instance.label,
    ]
    h.update("|".join(parts).encode())
    return h.hexdigest()[:12]


def check_property_star(
    graph: Digraph,
    sequence: Sequence[PointLike],
    limit: PointLike,
    direction: str = "ascending",
) -> Certificate:
    """Check limit-edge persistence along one convergent sequence.

    ascending: if every consecutive pair (s_n, s_{n+1}) is an edge, then
    every (s_n, limit) must be an edge.  descending: premise edges run
    (s_{n+1}, s_n) and the conclusion edges run (limit, s_n).

    If the premise fails at some index the property says nothing about
    this sequence: the certificate reports premise-violated (failed with
    the offending index in ``detail``) rather than a conclusion witness.

    Raises:
        InvalidInputError: empty sequence or unknown direction.
    """
    if direction not in ("ascending", "descending"):
        raise InvalidInputError(
            f"direction must be 'ascending' or 'descending', got {direction!r}"
        )
    pts = [as_point(p, graph.dimension) for p in sequence]
    if not pts:
        raise InvalidInputError("sequence must be nonempty")
    lim = as_point(limit, graph.dimension)

    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        ok = graph.has_edge(a, b) if direction == "ascending" else graph.has_edge(b, a)
        if not ok:
            return Certificate(
                property_name="property_star",
                samples_tested=len(pts),
                passed=False,
                violations=(
                    {"term": i, "kind": "premise",
                     "from": _as_jsonable(a), "to": _as_jsonable(b)},
                ),
                violation_count=1,
                detail=f"premise-violated at term {i}: consecutive pair is not an edge",
            )

    violations = []
    count = 0
    for i, p in enumerate(pts):
        ok = graph.has_edge(p, lim) if direction == "ascending" else graph.has_edge(lim, p)
        if not ok:
            count += 1
            if len(violations) < VIOLATION_CAP:
                violations.append({
                    "term": i,
                    "kind": "conclusion",
                    "point": _as_jsonable(p),
                    "limit": _as_jsonable(lim),
                })
    return Certificate(
        property_name="property_star",
        samples_tested=len(pts),
        passed=count == 0,
        violations=tuple(violations),
        violation_count=count,
        detail=direction,
    )


def _as_jsonable(p: np.ndarray):
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if p.size == 1:
        return float(p[0])
    return [float(c) for c in p]


def _seed_edge_ok(instance: ProblemInstance, notes: list[str]) -> bool:
    d = instance.space.dimension
    try:
        if instance.kind == "single":
            x1 = as_point(instance.map(instance.x0, instance.y0), d)
            y1 = as_point(instance.map(instance.y0, instance.x0), d)
        else:
            x1, y1 = instance.x1, instance.y1
            gap_x = dist_to_set(instance.space, x1, as_finite_set(instance.map(instance.x0, instance.y0), d))
            gap_y = dist_to_set(instance.space, y1, as_finite_set(instance.map(instance.y0, instance.x0), d))
            if gap_x > 1e-12 or gap_y > 1e-12:
                notes.append("declared seed iterates are not members of the seed images")
                return False
        return product_edge(instance.graph, (instance.x0, instance.y0), (x1, y1))
    except CoupledFpiError as exc:
        notes.append(f"seed evaluation failed: {exc}")
        return False


def _trial_trace(instance: ProblemInstance):
    cfg = SolveConfig(
        k=instance.k,
        tol=1e-300,  # never satisfied: the trial wants a full-length edge chain
        max_iter=_TRIAL_STEPS,
        mode="property_star",
    )
    if instance.kind == "single":
        fp, trace = solve_coupled(
            instance.map, instance.space, instance.graph, instance.x0, instance.y0, cfg
        )
    else:
        fp, trace = solve_coupled_multi(
            instance.map, instance.space, instance.graph,
            instance.x0, instance.y0, instance.x1, instance.y1, cfg,
        )
    return fp, trace


def _spot_check_continuity(instance: ProblemInstance, sample: SampleSpec, notes: list[str]) -> bool:
    """Evaluate the map along a few convergent sequences against its limit value.

    Single-valued maps only; multivalued continuity (in Hausdorff
    distance) is noted as asserted without a spot check.  Returns False
    only when a violation was actually observed.
    """
    if instance.kind != "single":
        notes.append("continuity asserted for multivalued map; accepted without spot check")
        return True
    d = instance.space.dimension
    sampler = Sampler(SampleSpec(count=3, seed=sample.seed + 1,
                                 low=sample.low, high=sample.high,
                                 points=sample.points), d)
    anchors = sampler.draw(3)
    partners = sampler.draw(3)
    offsets = sampler.draw(3)
    # Approach each anchor along p_m = p + u * 2^-m and compare the deep
    # tail against the limit value: a continuous map closes the gap, a
    # jump at the anchor cannot.
    scale = 2.0 ** -48
    try:
        for a, b, u in zip(anchors, partners, offsets):
            base = as_point(instance.map(a, b), d)
            probe = as_point(instance.map(a + u * scale, b + u * scale), d)
            gap = instance.space.distance(base, probe)
            if gap > _CONTINUITY_TOL:
                notes.append(
                    "continuity spot check FAILED near "
                    f"{_as_jsonable(a)!r}: jump {float(gap)!r}"
                )
                return False
    except CoupledFpiError as exc:
        notes.append(f"continuity spot check skipped: {exc}")
        return True
    notes.append("continuity asserted; spot check found no violation")
    return True


def preflight(instance: ProblemInstance, sample: SampleSpec) -> HypothesisReport:
    """Run all applicable hypothesis checks and consolidate the outcome.

    Never raises on a failed hypothesis: failures are certificates and
    notes.  ``theorem_applicable`` is "none" unless monotonicity, the
    contraction bound, the seed edge and (per the continuity assertion)
    either the spot check or the trial-trace limit-edge certificates all
    survived.
    """
    notes: list[str] = []
    certs: list[Certificate] = []
    iid = instance_id_for(instance)

    seed_ok = _seed_edge_ok(instance, notes)
    if not seed_ok:
        notes.append("seed edge condition FAILED")

    try:
        if instance.kind == "single":
            mono = check_mixed_monotone(instance.map, instance.graph, sample)
        else:
            mono = check_mixed_monotone_multi(instance.map, instance.graph, sample)
        certs.append(mono)
        mono_ok = mono.passed
    except CoupledFpiError as exc:
        notes.append(f"monotonicity check aborted: {exc}")
        mono_ok = False

    est = None
    if instance.kind == "single":
        try:
            est = estimate_k(instance.map, instance.space, instance.graph, sample)
        except CoupledFpiError:
            est = None

    try:
        if instance.kind == "single":
            bound_cert = check_bl(instance.map, instance.space, instance.graph, instance.k, sample)
        else:
            bound_cert = check_mbl(instance.map, instance.space, instance.graph, instance.k, sample)
        if est is not None:
            bound_cert = replace(bound_cert, estimated_constant=est)
        certs.append(bound_cert)
        bound_ok = bound_cert.passed
    except CoupledFpiError as exc:
        notes.append(f"contraction check aborted: {exc}")
        bound_ok = False

    limit_mode_ok = True
    if instance.continuous:
        limit_mode_ok = _spot_check_continuity(instance, sample, notes)
    else:
        try:
            fp, trace = _trial_trace(instance)
            xs = [s.x for s in trace.steps] + [fp.x]
            ys = [s.y for s in trace.steps] + [fp.y]
            star_x = check_property_star(instance.graph, xs, fp.x, "ascending")
            star_y = check_property_star(instance.graph, ys, fp.y, "descending")
            certs.extend([star_x, star_y])
            limit_mode_ok = star_x.passed and star_y.passed
            if limit_mode_ok:
                notes.append(
                    f"limit-edge persistence checked on a {len(trace.steps)}-step "
                    "trial trace (not falsified)"
                )
            else:
                notes.append("limit-edge persistence FALSIFIED on the trial trace")
        except CoupledFpiError as exc:
            notes.append(f"trial trace for limit-edge check failed: {exc}")
            limit_mode_ok = False

    if seed_ok and mono_ok and bound_ok and limit_mode_ok:
        if instance.kind == "single":
            level = "thm_3_1" if instance.continuous else "thm_3_2"
        else:
            level = "thm_4_1" if instance.continuous else "thm_4_2"
    else:
        level = "none"

    return HypothesisReport(
        instance_id=iid,
        certificates=tuple(certs),
        theorem_applicable=level,
        seed_edge_ok=seed_ok,
        notes=tuple(notes),
    )
