"""Radio-level conflict graphs (MMCG / E-MMCG) and interference-degree counts."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from .assignment import ChannelAssignment, check_assignment
from .errors import InvalidArgumentError, NotFoundError
from .topology import Topology

MMCG = "mmcg"
EMMCG = "emmcg"
DEFAULT_IR_RATIO = 2

# Full pairwise range matrices are cached up to this many links; beyond it
# they are recomputed blockwise per TID query.
_CACHE_LINK_LIMIT = 2048
_BLOCK = 256


@dataclass(frozen=True)
class RadioLink:
    """A usable radio pairing across a topology link, keyed by its shared channel."""

    link_index: int
    node_a: int
    radio_a: int
    node_b: int
    radio_b: int
    channel: int


@dataclass(frozen=True)
class ConflictGraph:
    vertices: tuple[RadioLink, ...]
    edges: frozenset[tuple[int, int]]
    mode: str
    ir_ratio: int

    def degree(self, vertex_index: int) -> int:
        return sum(1 for u, v in self.edges if vertex_index in (u, v))


def _radio_link_vertices(topo: Topology, ca: ChannelAssignment) -> list[RadioLink]:
    out: list[RadioLink] = []
    for ln in topo.links:
        row_a = ca.channels_at(ln.a)
        row_b = ca.channels_at(ln.b)
        for ra, ch_a in enumerate(row_a):
            for rb, ch_b in enumerate(row_b):
                if ch_a == ch_b:
                    out.append(RadioLink(ln.index, ln.a, ra, ln.b, rb, ch_a))
    out.sort(key=lambda v: (v.link_index, v.channel, v.radio_a, v.radio_b))
    return out


def _in_conflict_range(
    u: RadioLink,
    v: RadioLink,
    pos: dict[int, tuple[float, float]],
    limit_sq: float,
    mode: str,
) -> bool:
    if mode == EMMCG and ({u.node_a, u.node_b} & {v.node_a, v.node_b}):
        return True  # co-located radios conflict on a shared channel
    for p in (u.node_a, u.node_b):
        px, py = pos[p]
        for q in (v.node_a, v.node_b):
            qx, qy = pos[q]
            dx, dy = px - qx, py - qy
            if dx * dx + dy * dy <= limit_sq:
                return True
    return False


def build_conflict_graph(
    topo: Topology,
    ca: ChannelAssignment,
    mode: str = EMMCG,
    ir_ratio: int = DEFAULT_IR_RATIO,
) -> ConflictGraph:
    """Materialize the conflict graph by testing every same-channel vertex pair.

    Two radio links conflict when they share a channel and any endpoint of one
    lies within ``ir_ratio * tx_range`` of any endpoint of the other.
    """
    check_assignment(topo, ca)
    if mode not in (MMCG, EMMCG):
        raise InvalidArgumentError(f"unknown conflict-graph mode '{mode}'")
    if ir_ratio < 1:
        raise InvalidArgumentError(f"interference-range ratio must be >= 1, got {ir_ratio}")

    vertices = _radio_link_vertices(topo, ca)
    pos = {n.id: (n.x, n.y) for n in topo.nodes}
    limit_sq = (ir_ratio * topo.tx_range) ** 2

    by_channel: dict[int, list[int]] = defaultdict(list)
    for idx, v in enumerate(vertices):
        by_channel[v.channel].append(idx)

    edges: set[tuple[int, int]] = set()
    for channel in sorted(by_channel):
        bucket = by_channel[channel]
        for i, ui in enumerate(bucket):
            u = vertices[ui]
            for vi in bucket[i + 1 :]:
                if _in_conflict_range(u, vertices[vi], pos, limit_sq, mode):
                    edges.add((ui, vi))
    return ConflictGraph(tuple(vertices), frozenset(edges), mode, ir_ratio)


def interference_degree(cg: ConflictGraph, vertex: RadioLink | int) -> int:
    """Number of conflict edges incident to the given vertex."""
    if isinstance(vertex, RadioLink):
        try:
            index = cg.vertices.index(vertex)
        except ValueError:
            raise NotFoundError(f"vertex {vertex} is not in this conflict graph") from None
    else:
        index = vertex
        if not 0 <= index < len(cg.vertices):
            raise NotFoundError(f"vertex index {index} is not in this conflict graph")
    return cg.degree(index)


def total_interference_degree(cg: ConflictGraph) -> int:
    """Half the sum of all interference degrees, i.e. the edge count."""
    return len(cg.edges)


def conflict_graph_to_dict(cg: ConflictGraph) -> dict:
    return {
        "vertices": [
            {
                "link": [v.node_a, v.node_b],
                "radios": [v.radio_a, v.radio_b],
                "channel": v.channel,
            }
            for v in cg.vertices
        ],
        "edges": sorted([u, v] for u, v in cg.edges),
        "tid": total_interference_degree(cg),
        "mode": cg.mode,
        "ir_ratio": cg.ir_ratio,
    }


class TidCalculator:
    """Counts conflict edges without materializing the graph.

    Same-channel vertices conflict exactly when their links' endpoints fall
    within the interference radius, so the edge count decomposes into
    products of per-link same-channel radio-pair counts over in-range link
    pairs, plus same-channel pairs on each single link.
    """

    def __init__(self, topo: Topology, ir_ratio: int = DEFAULT_IR_RATIO):
        if ir_ratio < 1:
            raise InvalidArgumentError(f"interference-range ratio must be >= 1, got {ir_ratio}")
        self.topo = topo
        self.ir_ratio = ir_ratio
        self._limit_sq = (ir_ratio * topo.tx_range) ** 2
        self._chan_index = {ch: k for k, ch in enumerate(topo.channels)}
        pos = {n.id: (n.x, n.y) for n in topo.nodes}
        coords = np.array(
            [[*pos[ln.a], *pos[ln.b]] for ln in topo.links], dtype=np.float64
        ).reshape(len(topo.links), 4)
        self._ax, self._ay = coords[:, 0], coords[:, 1]
        self._bx, self._by = coords[:, 2], coords[:, 3]
        self._cached_range: np.ndarray | None = None
        if 0 < len(topo.links) <= _CACHE_LINK_LIMIT:
            self._cached_range = self._range_rows(0, len(topo.links))

    def _range_rows(self, start: int, stop: int) -> np.ndarray:
        """Boolean (stop-start, L) block of in-range link pairs, diagonal cleared."""
        best = None
        for px, py in ((self._ax, self._ay), (self._bx, self._by)):
            for qx, qy in ((self._ax, self._ay), (self._bx, self._by)):
                dx = px[start:stop, None] - qx[None, :]
                dy = py[start:stop, None] - qy[None, :]
                d2 = dx * dx + dy * dy
                best = d2 if best is None else np.minimum(best, d2)
        block = best <= self._limit_sq
        for k in range(start, stop):
            block[k - start, k] = False
        return block

    def _pair_counts(self, ca: ChannelAssignment) -> np.ndarray:
        """(L, C) matrix: same-channel radio-pair count per link and channel."""
        links = self.topo.links
        counts = np.zeros((len(links), len(self._chan_index)), dtype=np.int64)
        for ln in links:
            row_b = ca.channels_at(ln.b)
            for ch, na in Counter(ca.channels_at(ln.a)).items():
                nb = row_b.count(ch)
                if nb:
                    counts[ln.index, self._chan_index[ch]] = na * nb
        return counts

    def tid(self, ca: ChannelAssignment) -> int:
        """Total interference degree of the conflict graph for ``ca``.

        Assumes ``ca`` is valid for the topology (hot path; callers validate).
        """
        n_links = len(self.topo.links)
        if n_links == 0:
            return 0
        counts = self._pair_counts(ca)
        cross = 0
        if self._cached_range is not None:
            inter = self._cached_range.astype(np.int64) @ counts
            cross = int((counts * inter).sum())
        else:
            for start in range(0, n_links, _BLOCK):
                stop = min(start + _BLOCK, n_links)
                block = self._range_rows(start, stop).astype(np.int64)
                cross += int((counts[start:stop] * (block @ counts)).sum())
        intra = int((counts * (counts - 1) // 2).sum())
        return cross // 2 + intra
