"""Node-granularity mesh topologies: grid generation, density, adjacency, validation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidArgumentError, NotFoundError, ParseError

DEFAULT_TX_RANGE_M = 250.0


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float
    radios: int


@dataclass(frozen=True)
class Link:
    """Undirected node pair; ``index`` is the stable handle into ``Topology.links``."""

    a: int
    b: int
    index: int

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.a, self.b


class Topology:
    """Immutable node-granularity mesh graph.

    Construction normalizes link orientation but does not reject malformed
    data; ``validate`` reports structural violations so broken input files
    can be diagnosed instead of failing opaquely.
    """

    def __init__(
        self,
        nodes: Iterable[Node],
        links: Iterable[tuple[int, int]],
        channels: Iterable[int],
        tx_range: float = DEFAULT_TX_RANGE_M,
    ):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self.links: tuple[Link, ...] = tuple(
            Link(min(int(a), int(b)), max(int(a), int(b)), idx)
            for idx, (a, b) in enumerate(links)
        )
        self.channels: tuple[int, ...] = tuple(sorted({int(c) for c in channels}))
        self.tx_range = float(tx_range)
        self._by_id = {node.id: node for node in self.nodes}
        self._incident: dict[int, tuple[int, ...]] | None = None

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> Node:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise NotFoundError(f"unknown node {node_id}") from None

    def has_node(self, node_id: int) -> bool:
        return node_id in self._by_id

    def position(self, node_id: int) -> tuple[float, float]:
        node = self.node(node_id)
        return node.x, node.y

    def incident_links(self, node_id: int) -> tuple[int, ...]:
        """Indices of links touching ``node_id`` (invalid links are skipped)."""
        if self._incident is None:
            incident: dict[int, list[int]] = {node.id: [] for node in self.nodes}
            for ln in self.links:
                if ln.a in incident and ln.b in incident and ln.a != ln.b:
                    incident[ln.a].append(ln.index)
                    incident[ln.b].append(ln.index)
            self._incident = {nid: tuple(ixs) for nid, ixs in incident.items()}
        try:
            return self._incident[node_id]
        except KeyError:
            raise NotFoundError(f"unknown node {node_id}") from None

    def neighbors(self, node_id: int) -> tuple[int, ...]:
        out = []
        for idx in self.incident_links(node_id):
            ln = self.links[idx]
            out.append(ln.b if ln.a == node_id else ln.a)
        return tuple(sorted(set(out)))

    def __repr__(self) -> str:
        return (
            f"Topology(nodes={len(self.nodes)}, links={len(self.links)}, "
            f"channels={self.channels}, tx_range={self.tx_range})"
        )


def gen_grid(
    rows: int,
    cols: int,
    radios_per_node: int = 2,
    spacing: float | None = None,
    channels: Iterable[int] = (1, 2, 3),
    tx_range: float = DEFAULT_TX_RANGE_M,
) -> Topology:
    """Lattice deployment: ``rows x cols`` nodes, links between orthogonal neighbors.

    ``spacing`` defaults to ``tx_range`` so that only lattice neighbors sit
    within transmission range of each other.
    """
    if rows < 1 or cols < 1:
        raise InvalidArgumentError(f"grid dimensions must be positive, got {rows}x{cols}")
    if radios_per_node < 1:
        raise InvalidArgumentError(f"radios per node must be positive, got {radios_per_node}")
    if tx_range <= 0:
        raise InvalidArgumentError(f"transmission range must be positive, got {tx_range}")
    if spacing is None:
        spacing = tx_range
    if spacing <= 0:
        raise InvalidArgumentError(f"grid spacing must be positive, got {spacing}")

    nodes = [
        Node(r * cols + c, c * spacing, r * spacing, radios_per_node)
        for r in range(rows)
        for c in range(cols)
    ]
    links: list[tuple[int, int]] = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                links.append((i, i + 1))
            if r + 1 < rows:
                links.append((i, i + cols))
    return Topology(nodes, links, channels, tx_range)


def network_density(topo: Topology) -> float:
    """Ratio of actual links to all possible node pairs."""
    n = topo.num_nodes
    if n < 2:
        raise InvalidArgumentError("network density needs at least two nodes")
    return len(topo.links) / math.comb(n, 2)


def adjacent_links(topo: Topology, ln: Link) -> set[Link]:
    """Links sharing exactly one endpoint with ``ln`` (``ln`` itself excluded)."""
    if not (0 <= ln.index < len(topo.links)) or topo.links[ln.index] != ln:
        raise NotFoundError(f"link {ln} does not belong to this topology")
    out: set[Link] = set()
    for other in topo.links:
        if other.index == ln.index:
            continue
        shared = len({other.a, other.b} & {ln.a, ln.b})
        if shared == 1:
            out.add(other)
    return out


def validate(topo: Topology, alpha_min: int, alpha_max: int) -> list[str]:
    """Structural and radio-count checks; an empty list means the topology is ok."""
    problems: list[str] = []
    ids = [node.id for node in topo.nodes]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        problems.append(f"duplicate node ids {dupes}")
    elif sorted(ids) != list(range(len(ids))):
        problems.append("node ids are not contiguous from 0")
    for node in topo.nodes:
        if not alpha_min <= node.radios <= alpha_max:
            problems.append(
                f"node {node.id}: radio count {node.radios} outside [{alpha_min}, {alpha_max}]"
            )
    for ch in topo.channels:
        if ch < 1:
            problems.append(f"channel {ch} is not a positive integer")
    known = set(ids)
    seen: dict[tuple[int, int], int] = {}
    for ln in topo.links:
        if ln.a == ln.b:
            problems.append(f"link {ln.index}: self-loop at node {ln.a}")
            continue
        missing = [e for e in ln.endpoints if e not in known]
        if missing:
            problems.append(f"link {ln.index} ({ln.a},{ln.b}): unknown node(s) {missing}")
            continue
        key = (ln.a, ln.b)
        if key in seen:
            problems.append(f"link {ln.index}: duplicate of link {seen[key]} ({ln.a},{ln.b})")
        else:
            seen[key] = ln.index
    return problems


def infer_grid_dims(topo: Topology) -> tuple[int, int]:
    """Recover (rows, cols) of a lattice deployment; raises if the layout is not one."""
    if not topo.nodes:
        raise InvalidArgumentError("empty topology is not a grid")
    xs = sorted({node.x for node in topo.nodes})
    ys = sorted({node.y for node in topo.nodes})
    rows, cols = len(ys), len(xs)
    if rows * cols != topo.num_nodes:
        raise InvalidArgumentError("topology is not a grid deployment")
    col_of = {x: c for c, x in enumerate(xs)}
    row_of = {y: r for r, y in enumerate(ys)}
    for node in topo.nodes:
        if node.id != row_of[node.y] * cols + col_of[node.x]:
            raise InvalidArgumentError("topology is not a row-major grid deployment")
    return rows, cols


def topology_to_dict(topo: Topology) -> dict:
    return {
        "nodes": [
            {"id": n.id, "x": n.x, "y": n.y, "radios": n.radios} for n in topo.nodes
        ],
        "links": [[ln.a, ln.b] for ln in topo.links],
        "channels": list(topo.channels),
        "tx_range": topo.tx_range,
    }


def topology_from_dict(doc: object) -> Topology:
    if not isinstance(doc, dict):
        raise ParseError("topology: expected a JSON object")
    for field in ("nodes", "links", "channels", "tx_range"):
        if field not in doc:
            raise ParseError(f"topology: missing field '{field}'")
    try:
        nodes = [
            Node(int(n["id"]), float(n["x"]), float(n["y"]), int(n["radios"]))
            for n in doc["nodes"]
        ]
    except (TypeError, KeyError, ValueError) as exc:
        raise ParseError(f"topology: bad 'nodes' entry ({exc})") from exc
    try:
        links = [(int(a), int(b)) for a, b in doc["links"]]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"topology: bad 'links' entry ({exc})") from exc
    try:
        channels = [int(c) for c in doc["channels"]]
        tx_range = float(doc["tx_range"])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"topology: bad 'channels' or 'tx_range' ({exc})") from exc
    return Topology(nodes, links, channels, tx_range)
