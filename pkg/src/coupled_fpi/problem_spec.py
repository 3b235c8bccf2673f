"""Problem-specification documents: parse, validate, serialize, build.

A spec is a JSON object with six sections::

    {
      "space":   {"kind": "euclidean" | "chebyshev", "dimension": 1},
      "graph":   {"kind": "order" | "full" | "edge_list",
                  "vertices": [...], "edges": [[p, q], ...]},   # edge_list only
      "map":     {"kind": "single" | "multi", "definition": ...},
      "k":       0.6666666666666666,
      "seed":    {"x0": 0.0, "y0": 1.0, "x1": ..., "y1": ...},  # x1,y1 multi only
      "solve":   {"tol": 1e-10, "max_iter": 1000, "mode": "continuous",
                  "check_bounds": false, "record_edges": false},
      "sampler": {"low": -10.0, "high": 10.0, "count": 10000, "rng_seed": 0}
    }

Map definitions: a single-valued map is one arithmetic expression per
output component (a bare string in dimension 1, a list of d strings
otherwise) or the builtin ``{"name": "linear", "a": ..., "b": ...}``;
a multivalued map is a list of image points, each an expression (or
list of component expressions).  Points are numbers in dimension 1,
length-d lists otherwise.

``parse_spec`` rejects malformed documents with the offending field
named; ``serialize_spec`` writes the canonical form that round-trips:
``parse_spec(serialize_spec(s)) == s``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .certifier import ProblemInstance
from .errors import ExpressionError, SpecError
from .expressions import ExpressionCoupledMap, ExpressionMultiMap, compile_expression
from .graphs import Digraph, FiniteGraph, FullGraph, OrderGraph
from .maps import LinearCoupledMap
from .sampling import SampleSpec
from .solver import SolveConfig
from .spaces import ChebyshevSpace, EuclideanSpace, MetricSpace

SPACE_KINDS = ("euclidean", "chebyshev")
GRAPH_KINDS = ("order", "full", "edge_list")
MAP_KINDS = ("single", "multi")
BUILTIN_MAPS = ("linear",)


@dataclass(frozen=True)
class SpaceSpec:
    kind: str
    dimension: int


@dataclass(frozen=True)
class GraphSpec:
    kind: str
    vertices: tuple = ()
    edges: tuple = ()


@dataclass(frozen=True)
class MapSpec:
    kind: str
    expressions: tuple = ()          # single: d strings; multi: image points x d strings
    builtin: str | None = None
    params: tuple = ()               # sorted (name, value) pairs for builtins


@dataclass(frozen=True)
class SeedSpec:
    x0: tuple
    y0: tuple
    x1: tuple | None = None
    y1: tuple | None = None


@dataclass(frozen=True)
class SolveSpec:
    tol: float = 1e-10
    max_iter: int = 1000
    mode: str = "continuous"
    check_bounds: bool = False
    record_edges: bool = False


@dataclass(frozen=True)
class SamplerSpec:
    low: float | tuple = -10.0
    high: float | tuple = 10.0
    count: int = 10_000
    rng_seed: int | None = None


@dataclass(frozen=True)
class ProblemSpec:
    space: SpaceSpec
    graph: GraphSpec
    map: MapSpec
    k: float
    seed: SeedSpec
    solve: SolveSpec = field(default_factory=SolveSpec)
    sampler: SamplerSpec = field(default_factory=SamplerSpec)


def _require(doc: dict, key: str, where: str) -> Any:
    if key not in doc:
        raise SpecError(f"{where}.{key} is required" if where else f"{key} is required")
    return doc[key]


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{where} must be a number, got {value!r}")
    return float(value)


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(f"{where} must be an integer, got {value!r}")
    return value


def _as_bool(value, where: str) -> bool:
    if not isinstance(value, bool):
        raise SpecError(f"{where} must be a boolean, got {value!r}")
    return value


def _as_point_tuple(value, dimension: int, where: str) -> tuple:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value:
        raise SpecError(f"{where} must be a number or a list of numbers")
    pt = tuple(_as_number(c, where) for c in value)
    if len(pt) != dimension:
        raise SpecError(f"{where} must have {dimension} coordinate(s), got {len(pt)}")
    return pt


def _parse_space(doc, where="space") -> SpaceSpec:
    if not isinstance(doc, dict):
        raise SpecError(f"{where} must be an object")
    kind = _require(doc, "kind", where)
    if kind not in SPACE_KINDS:
        raise SpecError(f"{where}.kind must be one of {SPACE_KINDS}, got {kind!r}")
    dim = _as_int(_require(doc, "dimension", where), f"{where}.dimension")
    if dim < 1:
        raise SpecError(f"{where}.dimension must be a positive integer, got {dim}")
    return SpaceSpec(kind=kind, dimension=dim)


def _parse_graph(doc, dimension: int, where="graph") -> GraphSpec:
    if not isinstance(doc, dict):
        raise SpecError(f"{where} must be an object")
    kind = _require(doc, "kind", where)
    if kind not in GRAPH_KINDS:
        raise SpecError(f"{where}.kind must be one of {GRAPH_KINDS}, got {kind!r}")
    if kind != "edge_list":
        return GraphSpec(kind=kind)
    verts = _require(doc, "vertices", where)
    if not isinstance(verts, list) or not verts:
        raise SpecError(f"{where}.vertices must be a nonempty list")
    vertices = tuple(
        _as_point_tuple(v, dimension, f"{where}.vertices[{i}]") for i, v in enumerate(verts)
    )
    edges_doc = doc.get("edges", [])
    if not isinstance(edges_doc, list):
        raise SpecError(f"{where}.edges must be a list")
    edges = []
    known = set(vertices)
    for i, e in enumerate(edges_doc):
        if not isinstance(e, list) or len(e) != 2:
            raise SpecError(f"{where}.edges[{i}] must be a [from, to] pair")
        a = _as_point_tuple(e[0], dimension, f"{where}.edges[{i}][0]")
        b = _as_point_tuple(e[1], dimension, f"{where}.edges[{i}][1]")
        if a not in known or b not in known:
            raise SpecError(f"{where}.edges[{i}] references a point not in vertices")
        edges.append((a, b))
    return GraphSpec(kind=kind, vertices=vertices, edges=tuple(edges))


def _component_expressions(defn, dimension: int, where: str) -> tuple[str, ...]:
    if isinstance(defn, str):
        defn = [defn]
    if not isinstance(defn, list) or not all(isinstance(s, str) for s in defn):
        raise SpecError(f"{where} must be an expression string or list of them")
    if len(defn) != dimension:
        raise SpecError(f"{where} needs {dimension} component expression(s), got {len(defn)}")
    for src in defn:
        try:
            compile_expression(src, dimension)
        except ExpressionError as exc:
            raise SpecError(f"{where}: {exc}") from exc
    return tuple(defn)


def _parse_map(doc, dimension: int, where="map") -> MapSpec:
    if not isinstance(doc, dict):
        raise SpecError(f"{where} must be an object")
    kind = _require(doc, "kind", where)
    if kind not in MAP_KINDS:
        raise SpecError(f"{where}.kind must be one of {MAP_KINDS}, got {kind!r}")
    defn = _require(doc, "definition", where)
    if kind == "single":
        if isinstance(defn, dict):
            name = _require(defn, "name", f"{where}.definition")
            if name not in BUILTIN_MAPS:
                raise SpecError(
                    f"{where}.definition.name must be one of {BUILTIN_MAPS}, got {name!r}"
                )
            params = tuple(
                sorted(
                    (key, _as_number(val, f"{where}.definition.{key}"))
                    for key, val in defn.items()
                    if key != "name"
                )
            )
            if name == "linear":
                given = {k for k, _ in params}
                if given != {"a", "b"}:
                    raise SpecError(f"{where}.definition (linear) needs exactly 'a' and 'b'")
            return MapSpec(kind=kind, builtin=name, params=params)
        return MapSpec(kind=kind, expressions=_component_expressions(defn, dimension, f"{where}.definition"))
    # multi: list of image points
    if not isinstance(defn, list) or not defn:
        raise SpecError(f"{where}.definition must be a nonempty list of image expressions")
    images = tuple(
        _component_expressions(item, dimension, f"{where}.definition[{i}]")
        for i, item in enumerate(defn)
    )
    return MapSpec(kind=kind, expressions=images)


def _parse_seed(doc, dimension: int, multi: bool, where="seed") -> SeedSpec:
    if not isinstance(doc, dict):
        raise SpecError(f"{where} must be an object")
    x0 = _as_point_tuple(_require(doc, "x0", where), dimension, f"{where}.x0")
    y0 = _as_point_tuple(_require(doc, "y0", where), dimension, f"{where}.y0")
    if not multi:
        for extra in ("x1", "y1"):
            if extra in doc:
                raise SpecError(f"{where}.{extra} is only meaningful for multivalued maps")
        return SeedSpec(x0=x0, y0=y0)
    x1 = _as_point_tuple(_require(doc, "x1", where), dimension, f"{where}.x1")
    y1 = _as_point_tuple(_require(doc, "y1", where), dimension, f"{where}.y1")
    return SeedSpec(x0=x0, y0=y0, x1=x1, y1=y1)


def _parse_solve(doc, where="solve") -> SolveSpec:
    if doc is None:
        return SolveSpec()
    if not isinstance(doc, dict):
        raise SpecError(f"{where} must be an object")
    out = SolveSpec(
        tol=_as_number(doc.get("tol", SolveSpec.tol), f"{where}.tol"),
        max_iter=_as_int(doc.get("max_iter", SolveSpec.max_iter), f"{where}.max_iter"),
        mode=doc.get("mode", SolveSpec.mode),
        check_bounds=_as_bool(doc.get("check_bounds", SolveSpec.check_bounds), f"{where}.check_bounds"),
        record_edges=_as_bool(doc.get("record_edges", SolveSpec.record_edges), f"{where}.record_edges"),
    )
    if out.mode not in ("continuous", "property_star"):
        raise SpecError(f"{where}.mode must be 'continuous' or 'property_star', got {out.mode!r}")
    if not out.tol > 0.0:
        raise SpecError(f"{where}.tol must be positive, got {out.tol!r}")
    if out.max_iter < 1:
        raise SpecError(f"{where}.max_iter must be a positive integer, got {out.max_iter}")
    return out


def _parse_sampler(doc, where="sampler") -> SamplerSpec:
    if doc is None:
        return SamplerSpec()
    if not isinstance(doc, dict):
        raise SpecError(f"{where} must be an object")

    def bound(key, default):
        val = doc.get(key, default)
        if isinstance(val, list):
            return tuple(_as_number(c, f"{where}.{key}") for c in val)
        return _as_number(val, f"{where}.{key}")

    count = _as_int(doc.get("count", SamplerSpec.count), f"{where}.count")
    if count < 1:
        raise SpecError(f"{where}.count must be a positive integer, got {count}")
    seed = doc.get("rng_seed", None)
    if seed is not None:
        seed = _as_int(seed, f"{where}.rng_seed")
    return SamplerSpec(low=bound("low", SamplerSpec.low), high=bound("high", SamplerSpec.high),
                       count=count, rng_seed=seed)


def parse_spec(text: str) -> ProblemSpec:
    """Parse and validate a JSON problem spec.

    Raises:
        SpecError: JSON syntax errors (with line/column) and semantic
            errors (naming the offending field).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SpecError("spec must be a JSON object")
    known = {"space", "graph", "map", "k", "seed", "solve", "sampler"}
    for key in doc:
        if key not in known:
            raise SpecError(f"unknown top-level field {key!r}")
    space = _parse_space(_require(doc, "space", ""))
    graph = _parse_graph(_require(doc, "graph", ""), space.dimension)
    map_spec = _parse_map(_require(doc, "map", ""), space.dimension)
    k = _as_number(_require(doc, "k", ""), "k")
    if not (0.0 < k < 1.0):
        raise SpecError("k must lie in (0,1)")
    seed = _parse_seed(_require(doc, "seed", ""), space.dimension, map_spec.kind == "multi")
    solve = _parse_solve(doc.get("solve"))
    sampler = _parse_sampler(doc.get("sampler"))
    return ProblemSpec(space, graph, map_spec, k, seed, solve, sampler)


def _point_doc(pt: tuple):
    return pt[0] if len(pt) == 1 else list(pt)


def serialize_spec(spec: ProblemSpec) -> str:
    """Canonical JSON for *spec*; round-trips through :func:`parse_spec`."""
    doc: dict[str, Any] = {
        "space": {"kind": spec.space.kind, "dimension": spec.space.dimension},
    }
    graph: dict[str, Any] = {"kind": spec.graph.kind}
    if spec.graph.kind == "edge_list":
        graph["vertices"] = [_point_doc(v) for v in spec.graph.vertices]
        graph["edges"] = [[_point_doc(a), _point_doc(b)] for a, b in spec.graph.edges]
    doc["graph"] = graph
    if spec.map.builtin is not None:
        definition: Any = {"name": spec.map.builtin, **dict(spec.map.params)}
    elif spec.map.kind == "single":
        exprs = spec.map.expressions
        definition = exprs[0] if len(exprs) == 1 else list(exprs)
    else:
        definition = [
            (point[0] if len(point) == 1 else list(point))
            for point in spec.map.expressions
        ]
    doc["map"] = {"kind": spec.map.kind, "definition": definition}
    doc["k"] = spec.k
    seed: dict[str, Any] = {
        "x0": _point_doc(spec.seed.x0),
        "y0": _point_doc(spec.seed.y0),
    }
    if spec.seed.x1 is not None:
        seed["x1"] = _point_doc(spec.seed.x1)
        seed["y1"] = _point_doc(spec.seed.y1)
    doc["seed"] = seed
    doc["solve"] = {
        "tol": spec.solve.tol,
        "max_iter": spec.solve.max_iter,
        "mode": spec.solve.mode,
        "check_bounds": spec.solve.check_bounds,
        "record_edges": spec.solve.record_edges,
    }
    sampler: dict[str, Any] = {
        "low": list(spec.sampler.low) if isinstance(spec.sampler.low, tuple) else spec.sampler.low,
        "high": list(spec.sampler.high) if isinstance(spec.sampler.high, tuple) else spec.sampler.high,
        "count": spec.sampler.count,
    }
    if spec.sampler.rng_seed is not None:
        sampler["rng_seed"] = spec.sampler.rng_seed
    doc["sampler"] = sampler
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def build_space(spec: ProblemSpec) -> MetricSpace:
    cls = EuclideanSpace if spec.space.kind == "euclidean" else ChebyshevSpace
    return cls(spec.space.dimension)


def build_graph(spec: ProblemSpec) -> Digraph:
    d = spec.space.dimension
    if spec.graph.kind == "order":
        return OrderGraph(d)
    if spec.graph.kind == "full":
        return FullGraph(d)
    return FiniteGraph(spec.graph.vertices, spec.graph.edges, dimension=d)


def build_map(spec: ProblemSpec):
    d = spec.space.dimension
    if spec.map.builtin == "linear":
        params = dict(spec.map.params)
        return LinearCoupledMap(params["a"], params["b"])
    if spec.map.kind == "single":
        return ExpressionCoupledMap(list(spec.map.expressions), d)
    return ExpressionMultiMap([list(pt) for pt in spec.map.expressions], d)


def build_solve_config(spec: ProblemSpec, max_iter: int | None = None) -> SolveConfig:
    return SolveConfig(
        k=spec.k,
        tol=spec.solve.tol,
        max_iter=spec.solve.max_iter if max_iter is None else max_iter,
        mode=spec.solve.mode,
        check_bounds=spec.solve.check_bounds,
        record_edges=spec.solve.record_edges,
    )


def build_sample_spec(spec: ProblemSpec, seed: int | None = None) -> SampleSpec:
    if seed is None:
        seed = spec.sampler.rng_seed if spec.sampler.rng_seed is not None else 0
    return SampleSpec(
        count=spec.sampler.count,
        seed=seed,
        low=spec.sampler.low,
        high=spec.sampler.high,
    )


def build_instance(spec: ProblemSpec) -> ProblemInstance:
    """Assemble the runtime instance preflight and the solvers consume.

    The solve mode doubles as the continuity assertion: "continuous"
    asserts the map is continuous, "property_star" does not and relies
    on the graph's limit-edge persistence instead.
    """
    space = build_space(spec)
    return ProblemInstance(
        kind=spec.map.kind,
        space=space,
        graph=build_graph(spec),
        map=build_map(spec),
        k=spec.k,
        x0=spec.seed.x0,
        y0=spec.seed.y0,
        x1=spec.seed.x1,
        y1=spec.seed.y1,
        continuous=spec.solve.mode == "continuous",
        label=json.dumps(
            {"map": spec.map.expressions or spec.map.builtin, "graph": spec.graph.kind},
            sort_keys=True,
        ),
    )
