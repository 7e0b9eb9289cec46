"""Shared test fixtures and independent oracles (kept apart from the implementation)."""

from __future__ import annotations

import itertools
import random
from collections import defaultdict, deque

from meshcalm import ChannelAssignment, Node, Topology


def chain_topology(n: int, radios: int = 1, channels=(1, 2), spacing: float = 250.0) -> Topology:
    return Topology(
        [Node(i, i * spacing, 0.0, radios) for i in range(n)],
        [(i, i + 1) for i in range(n - 1)],
        channels,
        tx_range=250.0,
    )


def five_node_chain() -> Topology:
    """Five-node chain used by the CA_X / CA_Y discrimination example."""
    return chain_topology(5, radios=1, channels=(1, 2))


CA_X_LINK_CHANNELS = [{1}, {2}, {1}, {2}]
CA_Y_LINK_CHANNELS = [{1}, {1}, {2}, {2}]


def random_topology(
    rng: random.Random,
    max_nodes: int = 12,
    max_channels: int = 3,
    radio_range: tuple[int, int] = (1, 3),
    span: float = 600.0,
) -> Topology:
    """Connected random graph: a random spanning tree plus a few extra links."""
    n = rng.randint(2, max_nodes)
    nodes = [
        Node(i, rng.uniform(0.0, span), rng.uniform(0.0, span), rng.randint(*radio_range))
        for i in range(n)
    ]
    links = set()
    for i in range(1, n):
        j = rng.randrange(i)
        links.add((j, i))
    for _ in range(rng.randint(0, n)):
        a, b = rng.sample(range(n), 2)
        links.add((min(a, b), max(a, b)))
    channels = list(range(1, rng.randint(2, max_channels) + 1))
    return Topology(nodes, sorted(links), channels, tx_range=400.0)


def random_assignment(rng: random.Random, topo: Topology) -> ChannelAssignment:
    return ChannelAssignment(
        [
            [rng.choice(topo.channels) for _ in range(topo.node(i).radios)]
            for i in range(topo.num_nodes)
        ]
    )


def all_assignments(topo: Topology):
    """Every radio-to-channel map, in lexicographic order."""
    counts = [topo.node(i).radios for i in range(topo.num_nodes)]
    total = sum(counts)
    for vec in itertools.product(topo.channels, repeat=total):
        rows = []
        at = 0
        for c in counts:
            rows.append(vec[at : at + c])
            at += c
        yield ChannelAssignment(rows)


def max_flow_undirected(
    num_nodes: int,
    links: list[tuple[int, int]],
    capacities: list[float],
    src: int,
    dst: int,
) -> float:
    """Edmonds-Karp max flow; each undirected link becomes two arcs at capacity."""
    residual: dict[tuple[int, int], float] = defaultdict(float)
    neighbors: dict[int, set[int]] = defaultdict(set)
    for (a, b), cap in zip(links, capacities):
        residual[(a, b)] += cap
        residual[(b, a)] += cap
        neighbors[a].add(b)
        neighbors[b].add(a)

    total = 0.0
    while True:
        parent: dict[int, int | None] = {src: None}
        queue = deque([src])
        while queue and dst not in parent:
            u = queue.popleft()
            for v in sorted(neighbors[u]):
                if v not in parent and residual[(u, v)] > 1e-12:
                    parent[v] = u
                    queue.append(v)
        if dst not in parent:
            return total
        path = []
        v = dst
        while parent[v] is not None:
            u = parent[v]
            path.append((u, v))
            v = u
        push = min(residual[e] for e in path)
        for u, v in path:
            residual[(u, v)] -= push
            residual[(v, u)] += push
        total += push


def check_flow_feasible(problem, estimate, tol: float = 1e-6) -> None:
    """Re-verify conservation and shared link capacity straight from the flow map."""
    for z, (src, dst) in enumerate(problem.commodities):
        balance: dict[int, float] = defaultdict(float)
        for ((u, v), zz), f in estimate.per_arc_flow.items():
            if zz != z:
                continue
            assert f >= -tol, f"negative flow {f} on {(u, v)}"
            balance[v] += f
            balance[u] -= f
        for node in range(problem.num_nodes):
            if node in (src, dst):
                continue
            assert abs(balance[node]) <= tol, f"conservation violated at node {node}"
        assert abs(balance[dst] - estimate.per_commodity[z]) <= tol
    for (a, b), cap in zip(problem.links, problem.capacities):
        used = 0.0
        for z in range(len(problem.commodities)):
            used += estimate.flow((a, b), z) + estimate.flow((b, a), z)
        assert used <= cap + tol, f"capacity exceeded on ({a},{b}): {used} > {cap}"


def enumerate_cut_bound(
    num_nodes: int,
    links: list[tuple[int, int]],
    capacities: list[float],
    src: int,
    dst: int,
) -> float:
    """Minimum source/sink-separating cut capacity over all node bipartitions."""
    best = float("inf")
    others = [n for n in range(num_nodes) if n not in (src, dst)]
    for size in range(len(others) + 1):
        for side in itertools.combinations(others, size):
            s_side = {src, *side}
            cut = sum(
                cap
                for (a, b), cap in zip(links, capacities)
                if (a in s_side) != (b in s_side)
            )
            best = min(best, cut)
    return best


def cxls_by_global_enumeration(topo: Topology, chsets: list[frozenset[int]], x: int) -> float:
    """Mean over every joint channel tuple of the summed per-window clash-free counts.

    Linearity of expectation makes this equal the per-window expression, but
    it is computed along an entirely different path.
    """
    from meshcalm.metrics import _consecutive_link_sets

    windows = [w for w in _consecutive_link_sets(topo, x) if all(chsets[k] for k in w)]
    if not windows:
        return 0.0
    alive = sorted({k for w in windows for k in w})
    choices = [sorted(chsets[k]) for k in alive]
    position = {k: i for i, k in enumerate(alive)}
    total = 0.0
    count = 0
    for joint in itertools.product(*choices):
        count += 1
        for window in windows:
            picks = [joint[position[k]] for k in window]
            total += sum(1 for i, p in enumerate(picks) if picks.count(p) == 1)
    return total / count
