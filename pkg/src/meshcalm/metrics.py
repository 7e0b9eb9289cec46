"""Prediction metrics: channel-distribution dispersion, X-link-set weights, CALM link weights."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .assignment import ChannelAssignment, check_assignment, link_channel_sets
from .errors import InvalidArgumentError
from .topology import Link, Topology

LinkChannels = Mapping[tuple[int, int], Iterable[int]] | Sequence[Iterable[int]]


@dataclass(frozen=True)
class LinkRecord:
    """Per-link state under an assignment, as consumed by the CALM computation."""

    link: Link
    enode1: int
    enode2: int
    link_ch_set: frozenset[int]
    g_adj_cnt: int
    ca_adj_cnt: int
    link_adj_set: frozenset[int]
    operational: bool


@dataclass(frozen=True)
class LinkQuality:
    link: Link
    operational: bool
    num_prob_conf: float
    link_cost: float
    link_weight: float


@dataclass(frozen=True)
class CalmReport:
    """Per-link costs/weights plus the aggregate link-weight metric."""

    links: tuple[LinkQuality, ...]
    max_adj_count: int
    avg_adj_link: float
    calm: float

    def link_weights(self) -> dict[tuple[int, int], float]:
        return {(q.link.a, q.link.b): q.link_weight for q in self.links}


def _channel_sets(topo: Topology, link_channels: LinkChannels) -> list[frozenset[int]]:
    """Normalize a per-link channel mapping into a list aligned with ``topo.links``."""
    allowed = set(topo.channels)
    if isinstance(link_channels, Mapping):
        sets = []
        for ln in topo.links:
            key = (ln.a, ln.b)
            if key not in link_channels:
                raise InvalidArgumentError(f"missing channel set for link {key}")
            sets.append(frozenset(int(c) for c in link_channels[key]))
    else:
        raw = list(link_channels)
        if len(raw) != len(topo.links):
            raise InvalidArgumentError(
                f"got {len(raw)} channel sets for {len(topo.links)} links"
            )
        sets = [frozenset(int(c) for c in s) for s in raw]
    for ln, s in zip(topo.links, sets):
        bad = sorted(s - allowed)
        if bad:
            raise InvalidArgumentError(
                f"link ({ln.a},{ln.b}): channels {bad} not in the available set"
            )
    return sets


def _adjacent_indices(topo: Topology) -> list[list[int]]:
    """For each link, indices of links sharing exactly one endpoint."""
    incident: dict[int, list[int]] = {n.id: [] for n in topo.nodes}
    for ln in topo.links:
        if ln.a in incident and ln.b in incident and ln.a != ln.b:
            incident[ln.a].append(ln.index)
            incident[ln.b].append(ln.index)
    out: list[list[int]] = []
    for ln in topo.links:
        seen: set[int] = set()
        for end in (ln.a, ln.b):
            for k in incident.get(end, ()):
                if k == ln.index:
                    continue
                other = topo.links[k]
                if len({other.a, other.b} & {ln.a, ln.b}) == 1:
                    seen.add(k)
        out.append(sorted(seen))
    return out


def _records_from_sets(topo: Topology, chsets: Sequence[frozenset[int]]) -> list[LinkRecord]:
    adjacency = _adjacent_indices(topo)
    records: list[LinkRecord] = []
    for ln, own in zip(topo.links, chsets):
        adj = adjacency[ln.index]
        g_adj = len(adj)
        alive = [k for k in adj if chsets[k]]
        ca_adj = len(alive)
        adj_set = frozenset(k for k in alive if chsets[k] & own)
        # A link is dead if it has no common channel, or if it had neighbors
        # and every one of them lost its common channel. A neighborless link
        # with a common channel stays operational.
        operational = bool(own) and not (g_adj >= 1 and ca_adj == 0)
        records.append(
            LinkRecord(ln, ln.a, ln.b, own, g_adj, ca_adj, adj_set, operational)
        )
    return records


def build_link_records(topo: Topology, ca: ChannelAssignment) -> list[LinkRecord]:
    """Per-link records derived from a node-granularity assignment."""
    check_assignment(topo, ca)
    return _records_from_sets(topo, [frozenset(s) for s in link_channel_sets(topo, ca)])


def build_link_records_from_channels(
    topo: Topology, link_channels: LinkChannels
) -> list[LinkRecord]:
    """Per-link records from explicit per-link channel sets (link-granularity CAs)."""
    return _records_from_sets(topo, _channel_sets(topo, link_channels))


def prob_conflicts(rec: LinkRecord, records: Sequence[LinkRecord]) -> float:
    """Expected number of adjacent links able to operate on this link's drawn channel.

    For each channel-sharing neighbor the contribution is |common| / X where X
    is the size of this link's channel set.
    """
    if not rec.operational:
        raise InvalidArgumentError(
            f"link ({rec.enode1},{rec.enode2}) is not operational"
        )
    by_index = {r.link.index: r for r in records}
    x = len(rec.link_ch_set)
    total = 0.0
    for k in sorted(rec.link_adj_set):
        total += len(rec.link_ch_set & by_index[k].link_ch_set) / x
    return total


def _calm_from_records(topo: Topology, records: Sequence[LinkRecord]) -> CalmReport:
    total_links = len(records)
    if total_links == 0:
        return CalmReport((), 0, 0.0, 0.0)
    operational = [r for r in records if r.operational]
    avg_adj = sum(r.ca_adj_cnt for r in operational) / total_links
    max_adj = max((r.g_adj_cnt for r in operational), default=0)

    entries: list[LinkQuality] = []
    total = 0.0
    for rec in records:
        if not rec.operational:
            conf = 0.0
            cost = 1.0 if avg_adj == 0 else min(1.0, rec.g_adj_cnt / avg_adj)
        else:
            conf = prob_conflicts(rec, records) + (rec.g_adj_cnt - rec.ca_adj_cnt)
            cost = conf / (max_adj + 1)
        weight = 1.0 - cost
        entries.append(LinkQuality(rec.link, rec.operational, conf, cost, weight))
        total += weight
    return CalmReport(tuple(entries), max_adj, avg_adj, total)


def calm(topo: Topology, ca: ChannelAssignment) -> CalmReport:
    """Aggregate link-weight metric: sum over links of (1 - link cost)."""
    return _calm_from_records(topo, build_link_records(topo, ca))


def calm_from_channels(topo: Topology, link_channels: LinkChannels) -> CalmReport:
    return _calm_from_records(topo, build_link_records_from_channels(topo, link_channels))


def _cdal_from_sets(topo: Topology, chsets: Sequence[frozenset[int]]) -> float:
    if not topo.channels:
        raise InvalidArgumentError("topology has no channels")
    counts = dict.fromkeys(topo.channels, 0.0)
    for s in chsets:
        if not s:
            continue
        share = 1.0 / len(s)
        for ch in s:
            counts[ch] += share
    values = list(counts.values())
    mean = sum(values) / len(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def cdal_cost(topo: Topology, ca: ChannelAssignment) -> float:
    """Population standard deviation of probabilistic per-channel link counts."""
    check_assignment(topo, ca)
    return _cdal_from_sets(topo, [frozenset(s) for s in link_channel_sets(topo, ca)])


def cdal_cost_from_channels(topo: Topology, link_channels: LinkChannels) -> float:
    return _cdal_from_sets(topo, _channel_sets(topo, link_channels))


def _consecutive_link_sets(topo: Topology, length: int) -> list[tuple[int, ...]]:
    """All simple paths of ``length`` links, each unordered path listed once."""
    neighbors: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for ln in topo.links:
        if ln.a != ln.b:
            neighbors[ln.a].append((ln.b, ln.index))
            neighbors[ln.b].append((ln.a, ln.index))
    found: set[tuple[int, ...]] = set()

    def walk(nodes: list[int], links: list[int]) -> None:
        if len(links) == length:
            seq = tuple(links)
            found.add(min(seq, tuple(reversed(seq))))
            return
        for peer, idx in neighbors[nodes[-1]]:
            if peer in nodes:
                continue
            nodes.append(peer)
            links.append(idx)
            walk(nodes, links)
            nodes.pop()
            links.pop()

    for node in topo.nodes:
        walk([node.id], [])
    return sorted(found)


def _window_weight(chsets: Sequence[Sequence[int]]) -> float:
    """Expected count of links whose uniform channel draw differs from all others.

    Equals the mean clash-free-link count over every tuple of independent
    per-link channel picks.
    """
    weight = 0.0
    for i, own in enumerate(chsets):
        p = 0.0
        for ch in own:
            q = 1.0
            for j, other in enumerate(chsets):
                if j == i:
                    continue
                if ch in other:
                    q *= 1.0 - 1.0 / len(other)
            p += q
        weight += p / len(own)
    return weight


def _cxls_from_sets(topo: Topology, chsets: Sequence[frozenset[int]], x: int) -> float:
    if x < 2:
        raise InvalidArgumentError(f"consecutive-link window must be at least 2, got {x}")
    total = 0.0
    for path in _consecutive_link_sets(topo, x):
        sets = [chsets[k] for k in path]
        if any(not s for s in sets):
            continue
        total += _window_weight([sorted(s) for s in sets])
    return total


def cxls_wt(topo: Topology, ca: ChannelAssignment, x: int = 2) -> float:
    """Sum of expected clash-free-link counts over all X-consecutive-link sets."""
    check_assignment(topo, ca)
    return _cxls_from_sets(topo, [frozenset(s) for s in link_channel_sets(topo, ca)], x)


def cxls_wt_from_channels(topo: Topology, link_channels: LinkChannels, x: int = 2) -> float:
    return _cxls_from_sets(topo, _channel_sets(topo, link_channels), x)


def calm_report_to_dict(report: CalmReport) -> dict:
    return {
        "calm": report.calm,
        "max_adj_count": report.max_adj_count,
        "avg_adj_link": report.avg_adj_link,
        "links": [
            {
                "link": [q.link.a, q.link.b],
                "operational": q.operational,
                "link_cost": q.link_cost,
                "link_weight": q.link_weight,
                "num_prob_conf": q.num_prob_conf,
            }
            for q in report.links
        ],
    }
