"""Game instances: directed graph, priced edges, commodities, and strategy sets.

A strategy set is the full list of simple source-to-sink paths of a commodity,
stored as edge-id sequences and sorted lexicographically so that path indices
are stable across runs and platforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping, Sequence

from .pricing import PriceSpec, ZERO_PRICE

NORMALIZATION_TOL = 1e-9
DEFAULT_PATH_CAP = 10_000

Path = tuple[str, ...]  # ordered edge-id sequence


class ScenarioError(ValueError):
    """A scenario document cannot be turned into a game instance."""


class PathEnumerationError(RuntimeError):
    """Path enumeration cannot produce a usable strategy set."""


@dataclass(frozen=True)
class EdgeSpec:
    """Directed edge with affine congestion a*x + b, a price function, and
    mixing weights c1 (congestion) and c2 (price), c1 + c2 = 1."""

    id: str
    tail: str
    head: str
    a: float
    b: float
    c1: float = 1.0
    c2: float = 0.0
    price: PriceSpec = ZERO_PRICE


@dataclass(frozen=True)
class Commodity:
    """One player: a source/sink pair and an unsplittable demand."""

    id: str
    source: str
    sink: str
    demand: float


@dataclass(frozen=True)
class GameInstance:
    nodes: tuple[str, ...]
    edges: tuple[EdgeSpec, ...]
    commodities: tuple[Commodity, ...]
    #: Per-commodity strategy sets; empty until populated via prepare().
    paths: tuple[tuple[Path, ...], ...] = ()
    #: Builder provenance (not serialized, ignored by equality).
    meta: Mapping[str, object] = field(default_factory=dict, compare=False)

    def edge(self, edge_id: str) -> EdgeSpec:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    @property
    def prepared(self) -> bool:
        return len(self.paths) == len(self.commodities) > 0 or (
            len(self.commodities) == 0
        )


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


# ---------------------------------------------------------------------------
# path enumeration


def _adjacency(instance: GameInstance) -> dict[str, list[EdgeSpec]]:
    adj: dict[str, list[EdgeSpec]] = {n: [] for n in instance.nodes}
    for e in instance.edges:
        adj.setdefault(e.tail, []).append(e)
    return adj


def enumerate_paths(
    instance: GameInstance, commodity: Commodity, cap: int = DEFAULT_PATH_CAP
) -> list[Path]:
    """All simple source->sink paths of a commodity, lexicographic by edge ids.

    Raises PathEnumerationError when no path exists or more than `cap` paths do.
    """
    adj = _adjacency(instance)
    found: list[Path] = []
    trail: list[str] = []
    visited = {commodity.source}

    def dfs(node: str) -> None:
        if node == commodity.sink:
            found.append(tuple(trail))
            if len(found) > cap:
                raise PathEnumerationError(
                    f"commodity {commodity.id!r} has more than {cap} simple paths"
                )
            return
        for e in adj.get(node, ()):
            if e.head in visited:
                continue
            visited.add(e.head)
            trail.append(e.id)
            dfs(e.head)
            trail.pop()
            visited.remove(e.head)

    dfs(commodity.source)
    if not found:
        raise PathEnumerationError(
            f"no path from {commodity.source!r} to {commodity.sink!r}"
            f" for commodity {commodity.id!r}"
        )
    found.sort()
    return found


def prepare(instance: GameInstance, cap: int = DEFAULT_PATH_CAP) -> GameInstance:
    """Return a copy of the instance with every commodity's strategy set populated."""
    all_paths = tuple(
        tuple(enumerate_paths(instance, c, cap)) for c in instance.commodities
    )
    return replace(instance, paths=all_paths)


# ---------------------------------------------------------------------------
# validation


def _reachable(instance: GameInstance, source: str, sink: str) -> bool:
    adj = _adjacency(instance)
    seen = {source}
    stack = [source]
    while stack:
        node = stack.pop()
        if node == sink:
            return True
        for e in adj.get(node, ()):
            if e.head not in seen:
                seen.add(e.head)
                stack.append(e.head)
    return False


def validate_instance(instance: GameInstance) -> ValidationReport:
    """Collect every invariant violation; an empty report means the instance is valid."""
    out: list[str] = []
    nodes = set()
    for n in instance.nodes:
        if not n:
            out.append("empty node label")
        elif n in nodes:
            out.append(f"duplicate node {n!r}")
        nodes.add(n)

    edge_ids = set()
    for e in instance.edges:
        where = f"edge {e.id!r}"
        if not e.id:
            out.append("empty edge id")
        elif e.id in edge_ids:
            out.append(f"duplicate edge id {e.id!r}")
        edge_ids.add(e.id)
        if e.tail not in nodes:
            out.append(f"{where}: unknown tail node {e.tail!r}")
        if e.head not in nodes:
            out.append(f"{where}: unknown head node {e.head!r}")
        if e.tail == e.head:
            out.append(f"{where}: self-loop forbidden")
        if e.a < 0:
            out.append(f"{where}: negative congestion slope")
        if e.b < 0:
            out.append(f"{where}: negative congestion intercept")
        if not (0.0 <= e.c1 <= 1.0 and 0.0 <= e.c2 <= 1.0):
            out.append(f"{where}: mixing coefficients outside [0, 1]")
        if abs(e.c1 + e.c2 - 1.0) > NORMALIZATION_TOL:
            out.append(f"{where}: mixing coefficients not normalized")

    commodity_ids = set()
    for c in instance.commodities:
        where = f"commodity {c.id!r}"
        if not c.id:
            out.append("empty commodity id")
        elif c.id in commodity_ids:
            out.append(f"duplicate commodity id {c.id!r}")
        commodity_ids.add(c.id)
        if c.source not in nodes:
            out.append(f"{where}: unknown source node {c.source!r}")
        if c.sink not in nodes:
            out.append(f"{where}: unknown sink node {c.sink!r}")
        if c.source == c.sink:
            out.append(f"{where}: source equals sink")
        if not c.demand > 0:
            out.append(f"{where}: demand must be positive")
        elif (
            c.source in nodes
            and c.sink in nodes
            and not _reachable(instance, c.source, c.sink)
        ):
            out.append(f"{where}: no s-t path")

    if instance.paths:
        if len(instance.paths) != len(instance.commodities):
            out.append("paths populated for wrong number of commodities")
        else:
            known = {e.id: e for e in instance.edges}
            for c, plist in zip(instance.commodities, instance.paths):
                where = f"commodity {c.id!r}"
                if not plist:
                    out.append(f"{where}: empty strategy set")
                if list(plist) != sorted(plist):
                    out.append(f"{where}: paths not in lexicographic order")
                for p in plist:
                    if not _is_simple_path(p, known, c.source, c.sink):
                        out.append(f"{where}: invalid path {p}")
    return ValidationReport(tuple(out))


def _is_simple_path(
    path: Path, edges: Mapping[str, EdgeSpec], source: str, sink: str
) -> bool:
    node = source
    seen = {source}
    for eid in path:
        e = edges.get(eid)
        if e is None or e.tail != node:
            return False
        node = e.head
        if node in seen:
            return False
        seen.add(node)
    return node == sink


# ---------------------------------------------------------------------------
# scenario documents (JSON)


def _require_keys(obj: dict, allowed: set[str], required: set[str], what: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ScenarioError(f"{what}: unknown fields {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ScenarioError(f"{what}: missing fields {sorted(missing)}")


def _number(obj: dict, key: str, what: str) -> float:
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{what}: field {key!r} must be a number")
    return float(v)


def _string(obj: dict, key: str, what: str) -> str:
    v = obj.get(key)
    if not isinstance(v, str) or not v:
        raise ScenarioError(f"{what}: field {key!r} must be a nonempty string")
    return v


def _parse_price(obj: object, what: str) -> PriceSpec:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{what}: 'price' must be an object")
    _require_keys(obj, {"fn", "params"}, {"fn"}, f"{what} price")
    fn = _string(obj, "fn", f"{what} price")
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise ScenarioError(f"{what}: price 'params' must be an object")
    for k, v in params.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ScenarioError(f"{what}: price parameter {k!r} must be a number")
    try:
        return PriceSpec(fn, {k: float(v) for k, v in params.items()})
    except ValueError as exc:
        raise ScenarioError(f"{what}: {exc}") from exc


def parse_scenario(text: str, strict: bool = True) -> GameInstance:
    """Parse a scenario JSON document into a validated (pathless) game instance.

    With strict=False, value-range violations (normalization, sign constraints,
    self-loops, nonpositive demand) are left for validate_instance to report
    instead of raising; schema, type, and reference errors always raise."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    _require_keys(
        doc, {"nodes", "edges", "commodities"}, {"nodes", "edges", "commodities"},
        "scenario",
    )

    raw_nodes = doc["nodes"]
    if not isinstance(raw_nodes, list) or not all(
        isinstance(n, str) and n for n in raw_nodes
    ):
        raise ScenarioError("'nodes' must be an array of nonempty strings")
    if len(set(raw_nodes)) != len(raw_nodes):
        raise ScenarioError("duplicate node label")
    nodes = tuple(raw_nodes)
    node_set = set(nodes)

    if not isinstance(doc["edges"], list):
        raise ScenarioError("'edges' must be an array")
    edges = []
    edge_ids: set[str] = set()
    for item in doc["edges"]:
        if not isinstance(item, dict):
            raise ScenarioError("edge entries must be objects")
        what = f"edge {item.get('id', '?')!r}"
        _require_keys(
            item,
            {"id", "from", "to", "a", "b", "c1", "c2", "price"},
            {"id", "from", "to", "a", "b", "c1", "c2", "price"},
            what,
        )
        eid = _string(item, "id", what)
        if eid in edge_ids:
            raise ScenarioError(f"duplicate edge id {eid!r}")
        edge_ids.add(eid)
        tail = _string(item, "from", what)
        head = _string(item, "to", what)
        if tail not in node_set or head not in node_set:
            raise ScenarioError(f"{what}: unknown node reference")
        a = _number(item, "a", what)
        b = _number(item, "b", what)
        c1 = _number(item, "c1", what)
        c2 = _number(item, "c2", what)
        if strict:
            if tail == head:
                raise ScenarioError(f"{what}: self-loop forbidden")
            if a < 0 or b < 0:
                raise ScenarioError(
                    f"{what}: congestion coefficients must be nonnegative"
                )
            if abs(c1 + c2 - 1.0) > NORMALIZATION_TOL:
                raise ScenarioError(f"{what}: mixing coefficients not normalized")
            if not (0.0 <= c1 <= 1.0 and 0.0 <= c2 <= 1.0):
                raise ScenarioError(f"{what}: mixing coefficients outside [0, 1]")
        price = _parse_price(item["price"], what)
        edges.append(EdgeSpec(eid, tail, head, a, b, c1, c2, price))

    if not isinstance(doc["commodities"], list):
        raise ScenarioError("'commodities' must be an array")
    commodities = []
    commodity_ids: set[str] = set()
    for item in doc["commodities"]:
        if not isinstance(item, dict):
            raise ScenarioError("commodity entries must be objects")
        what = f"commodity {item.get('id', '?')!r}"
        _require_keys(
            item,
            {"id", "source", "sink", "demand"},
            {"id", "source", "sink", "demand"},
            what,
        )
        cid = _string(item, "id", what)
        if cid in commodity_ids:
            raise ScenarioError(f"duplicate commodity id {cid!r}")
        commodity_ids.add(cid)
        source = _string(item, "source", what)
        sink = _string(item, "sink", what)
        if source not in node_set or sink not in node_set:
            raise ScenarioError(f"{what}: unknown node reference")
        demand = _number(item, "demand", what)
        if strict:
            if source == sink:
                raise ScenarioError(f"{what}: source equals sink")
            if not demand > 0:
                raise ScenarioError(f"{what}: demand must be positive")
        commodities.append(Commodity(cid, source, sink, demand))

    return GameInstance(nodes, tuple(edges), tuple(commodities))


def serialize_scenario(instance: GameInstance) -> str:
    """Render an instance back to scenario JSON (paths and meta are not serialized)."""
    doc = {
        "nodes": list(instance.nodes),
        "edges": [
            {
                "id": e.id,
                "from": e.tail,
                "to": e.head,
                "a": e.a,
                "b": e.b,
                "c1": e.c1,
                "c2": e.c2,
                "price": {"fn": e.price.fn, "params": dict(e.price.params)},
            }
            for e in instance.edges
        ],
        "commodities": [
            {"id": c.id, "source": c.source, "sink": c.sink, "demand": c.demand}
            for c in instance.commodities
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
