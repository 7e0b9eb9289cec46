"""CA classification, greedy TID-descent generation, forward correction, brute-force search."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import metrics as _metrics
from .assignment import (
    ChannelAssignment,
    check_assignment,
    link_channel_set,
    link_channel_sets,
    uniform_assignment,
)
from .conflict import DEFAULT_IR_RATIO, TidCalculator
from .errors import CorrectionFailureError, InvalidArgumentError, TooLargeError
from .topology import Link, Topology

TPCA = "tpca"
GPCA = "gpca"
GDCA = "gdca"

DEFAULT_SEARCH_CAP = 10_000_000

_METRIC_DIRECTIONS = {"tid": "min", "cdal": "min", "cxls": "max", "calm": "max"}


@dataclass(frozen=True)
class CaClass:
    """Classification of an assignment's effect on the topology."""

    kind: str
    disrupted: tuple[Link, ...]
    connected: bool


def _operational_flags(topo: Topology, ca: ChannelAssignment) -> list[bool]:
    return [bool(s) for s in link_channel_sets(topo, ca)]


def _spans_connected(topo: Topology, operational: Sequence[bool]) -> bool:
    """True when the operational-link subgraph reaches every node."""
    if topo.num_nodes <= 1:
        return True
    neighbors: dict[int, list[int]] = {n.id: [] for n in topo.nodes}
    for ln, ok in zip(topo.links, operational):
        if ok:
            neighbors[ln.a].append(ln.b)
            neighbors[ln.b].append(ln.a)
    start = topo.nodes[0].id
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nbr in neighbors[node]:
            if nbr not in seen:
                seen.add(nbr)
                queue.append(nbr)
    return len(seen) == topo.num_nodes


def _pair_reachable(topo: Topology, operational: Sequence[bool], src: int, dst: int) -> bool:
    neighbors: dict[int, list[int]] = {n.id: [] for n in topo.nodes}
    for ln, ok in zip(topo.links, operational):
        if ok:
            neighbors[ln.a].append(ln.b)
            neighbors[ln.b].append(ln.a)
    seen = {src}
    queue = deque([src])
    while queue:
        node = queue.popleft()
        if node == dst:
            return True
        for nbr in neighbors[node]:
            if nbr not in seen:
                seen.add(nbr)
                queue.append(nbr)
    return dst in seen


def classify(topo: Topology, ca: ChannelAssignment) -> CaClass:
    """Topology preserving, graph preserving, or graph disrupting."""
    check_assignment(topo, ca)
    operational = _operational_flags(topo, ca)
    disrupted = tuple(ln for ln, ok in zip(topo.links, operational) if not ok)
    connected = _spans_connected(topo, operational)
    if not disrupted:
        return CaClass(TPCA, (), connected)
    if connected:
        return CaClass(GPCA, disrupted, True)
    return CaClass(GDCA, disrupted, False)


def forward_correct(
    topo: Topology,
    ca: ChannelAssignment,
    node_numbering: Mapping[int, int] | None = None,
    ir_ratio: int = DEFAULT_IR_RATIO,
) -> ChannelAssignment:
    """Repair disrupted links by swapping channels on the higher-numbered endpoint.

    For every edge (i, j) with Num_i < Num_j whose endpoints share no channel,
    one of j's channels is replaced by a channel of i. Among feasible swaps
    (those that keep already-repaired edges of j alive) the one minimizing the
    resulting TID wins; ties go to the lowest incoming channel id.
    """
    check_assignment(topo, ca)
    calc = TidCalculator(topo, ir_ratio)
    return _forward_correct(topo, ca, node_numbering, calc)


def _forward_correct(
    topo: Topology,
    ca: ChannelAssignment,
    node_numbering: Mapping[int, int] | None,
    calc: TidCalculator,
) -> ChannelAssignment:
    if node_numbering is None:
        numbering = {n.id: n.id for n in topo.nodes}
    else:
        numbering = dict(node_numbering)
        ids = {n.id for n in topo.nodes}
        if set(numbering) != ids or len(set(numbering.values())) != len(ids):
            raise InvalidArgumentError("node numbering must be a bijection over the nodes")

    link_by_pair = {(ln.a, ln.b): ln for ln in topo.links}
    ordered_pairs: list[tuple[int, int]] = []
    for i in sorted(numbering, key=lambda n: numbering[n]):
        for j in topo.neighbors(i):
            if numbering[i] < numbering[j]:
                ordered_pairs.append((i, j))

    current = ca
    settled: list[tuple[int, int]] = []
    for i, j in ordered_pairs:
        ch_i = current.channel_set(i)
        ch_j = current.channel_set(j)
        if ch_i & ch_j:
            settled.append((i, j))
            continue
        candidates: list[tuple[int, int, int, ChannelAssignment]] = []
        for radio, out_ch in enumerate(current.channels_at(j)):
            if out_ch in ch_i:
                continue  # only channels exclusive to j may be swapped out
            for in_ch in sorted(ch_i):
                cand = current.with_radio(j, radio, in_ch)
                if _breaks_settled_edge(topo, cand, j, settled, link_by_pair):
                    continue
                candidates.append((calc.tid(cand), in_ch, radio, cand))
        if not candidates:
            raise CorrectionFailureError((i, j))
        candidates.sort(key=lambda item: item[:3])
        current = candidates[0][3]
        settled.append((i, j))
    return current


def _breaks_settled_edge(
    topo: Topology,
    ca: ChannelAssignment,
    changed: int,
    settled: Iterable[tuple[int, int]],
    link_by_pair: Mapping[tuple[int, int], Link],
) -> bool:
    for a, b in settled:
        if changed not in (a, b):
            continue
        ln = link_by_pair[(min(a, b), max(a, b))]
        if not link_channel_set(topo, ca, ln):
            return True
    return False


def gcaa(
    topo: Topology,
    mode: str,
    emit_every: int = 1,
    node_order: Sequence[int] | None = None,
    ir_ratio: int = DEFAULT_IR_RATIO,
    require_pairs: Sequence[tuple[int, int]] | None = None,
) -> list[ChannelAssignment]:
    """Greedy channel assignment by TID descent from the all-one-channel start.

    Sweeps radios in node order; a tentative reassignment is committed only if
    it strictly lowers TID and satisfies the mode's connectivity requirement.
    In TPCA mode forward correction is folded into each tentative move, so the
    TID test applies to the repaired assignment. A snapshot is emitted after
    every ``emit_every`` commits; the final assignment is always emitted.

    ``require_pairs`` relaxes GPCA connectivity to reachability between the
    given source-sink pairs, allowing graph-disrupting outputs.
    """
    if emit_every < 1:
        raise InvalidArgumentError(f"emit_every must be positive, got {emit_every}")
    if mode not in (TPCA, GPCA):
        raise InvalidArgumentError(f"gcaa mode must be '{TPCA}' or '{GPCA}', got '{mode}'")
    if len(topo.channels) < 2:
        raise InvalidArgumentError("gcaa needs at least two channels")
    if require_pairs is not None and mode == TPCA:
        raise InvalidArgumentError("require_pairs only applies to gpca mode")

    ids = [n.id for n in topo.nodes]
    if node_order is None:
        order = sorted(ids)
    else:
        order = list(node_order)
        if sorted(order) != sorted(ids):
            raise InvalidArgumentError("node_order must be a permutation of the node ids")

    calc = TidCalculator(topo, ir_ratio)
    current = uniform_assignment(topo)
    tid_prev = calc.tid(current)
    emitted: list[ChannelAssignment] = []
    committed = 0

    for node in order:
        for radio in range(topo.node(node).radios):
            for channel in topo.channels:
                if channel == current.channels_at(node)[radio]:
                    continue
                candidate = current.with_radio(node, radio, channel)
                if mode == TPCA:
                    try:
                        candidate = _forward_correct(topo, candidate, None, calc)
                    except CorrectionFailureError:
                        continue
                tid = calc.tid(candidate)
                if tid >= tid_prev:
                    continue
                if not _gcaa_acceptable(topo, candidate, mode, require_pairs):
                    continue
                current, tid_prev = candidate, tid
                committed += 1
                if committed % emit_every == 0:
                    emitted.append(current)

    if not emitted or emitted[-1] != current:
        emitted.append(current)
    return emitted


def _gcaa_acceptable(
    topo: Topology,
    ca: ChannelAssignment,
    mode: str,
    require_pairs: Sequence[tuple[int, int]] | None,
) -> bool:
    operational = _operational_flags(topo, ca)
    if mode == TPCA:
        return all(operational)
    if require_pairs is not None:
        return all(_pair_reachable(topo, operational, s, t) for s, t in require_pairs)
    return _spans_connected(topo, operational)


def brute_force_best(
    topo: Topology,
    metric: str,
    direction: str | None = None,
    ir_ratio: int = DEFAULT_IR_RATIO,
    xls_size: int = 2,
    cap: int = DEFAULT_SEARCH_CAP,
) -> ChannelAssignment:
    """Exhaustive search over topology-preserving assignments.

    Enumerates every radio-to-channel map in lexicographic order, keeps only
    maps under which all links stay operational, and returns the first one
    achieving the optimal metric value (so ties resolve to the smallest
    assignment vector).
    """
    if metric not in _METRIC_DIRECTIONS:
        raise InvalidArgumentError(f"unknown metric '{metric}'")
    if direction is None:
        direction = _METRIC_DIRECTIONS[metric]
    if direction not in ("min", "max"):
        raise InvalidArgumentError(f"direction must be 'min' or 'max', got '{direction}'")
    if not topo.channels:
        raise InvalidArgumentError("topology has no channels")

    total_radios = sum(n.radios for n in topo.nodes)
    space = len(topo.channels) ** total_radios
    if space > cap:
        raise TooLargeError(f"search space {space} exceeds cap {cap}")

    calc = TidCalculator(topo, ir_ratio) if metric == "tid" else None
    radio_counts = [topo.node(i).radios for i in range(topo.num_nodes)]
    offsets = list(itertools.accumulate([0] + radio_counts))

    def evaluate(ca: ChannelAssignment) -> float:
        if metric == "tid":
            return float(calc.tid(ca))
        if metric == "cdal":
            return _metrics.cdal_cost(topo, ca)
        if metric == "cxls":
            return _metrics.cxls_wt(topo, ca, xls_size)
        return _metrics.calm(topo, ca).calm

    best_ca: ChannelAssignment | None = None
    best_value = 0.0
    for vec in itertools.product(topo.channels, repeat=total_radios):
        rows = [vec[offsets[i] : offsets[i + 1]] for i in range(topo.num_nodes)]
        node_sets = [set(row) for row in rows]
        if any(not (node_sets[ln.a] & node_sets[ln.b]) for ln in topo.links):
            continue  # only topology-preserving maps are eligible
        ca = ChannelAssignment(rows)
        value = evaluate(ca)
        if (
            best_ca is None
            or (direction == "min" and value < best_value)
            or (direction == "max" and value > best_value)
        ):
            best_ca, best_value = ca, value
    if best_ca is None:
        raise InvalidArgumentError("no topology-preserving assignment exists")
    return best_ca
