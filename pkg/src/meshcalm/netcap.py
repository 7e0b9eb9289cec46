"""Capacity estimation: link-weight-scaled multicommodity flow optimization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .simplex import solve_min
from .topology import Topology, infer_grid_dims

DEFAULT_CAPACITY_MBPS = 54.0

_FLOW_EPS = 1e-9

R5 = "r5"
C5 = "c5"
R5C5 = "r5c5"


@dataclass(frozen=True)
class FlowProblem:
    """Concurrent source-sink flows over bidirectional links.

    Each undirected link has one capacity (nominal rate times link weight)
    shared by both orientations and all commodities.
    """

    num_nodes: int
    links: tuple[tuple[int, int], ...]
    capacities: tuple[float, ...]
    commodities: tuple[tuple[int, int], ...]
    capacity_mbps: float


@dataclass(frozen=True)
class CapacityEstimate:
    total: float
    per_commodity: tuple[float, ...]
    per_arc_flow: dict[tuple[tuple[int, int], int], float] = field(default_factory=dict)

    def flow(self, arc: tuple[int, int], commodity: int) -> float:
        return self.per_arc_flow.get((arc, commodity), 0.0)


def build_problem(
    topo: Topology,
    link_weights: Mapping[tuple[int, int], float],
    scenario: Sequence[tuple[int, int]],
    capacity_mbps: float = DEFAULT_CAPACITY_MBPS,
    scale: float = 1.0,
) -> FlowProblem:
    """Assemble the flow problem; every topology link is included, weighted or dead."""
    if capacity_mbps <= 0:
        raise InvalidArgumentError(f"link capacity must be positive, got {capacity_mbps}")
    if scale <= 0:
        raise InvalidArgumentError(f"capacity scale must be positive, got {scale}")
    normalized = {
        (min(a, b), max(a, b)): w for (a, b), w in link_weights.items()
    }
    capacities: list[float] = []
    links: list[tuple[int, int]] = []
    for ln in topo.links:
        key = (ln.a, ln.b)
        if key not in normalized:
            raise InvalidArgumentError(f"missing link weight for {key}")
        w = float(normalized[key])
        if not 0.0 <= w <= 1.0:
            raise InvalidArgumentError(f"link weight for {key} is {w}, outside [0, 1]")
        links.append(key)
        capacities.append(capacity_mbps * scale * w)
    commodities: list[tuple[int, int]] = []
    for src, dst in scenario:
        if not (topo.has_node(src) and topo.has_node(dst)):
            raise InvalidArgumentError(f"commodity ({src},{dst}) references unknown nodes")
        if src == dst:
            raise InvalidArgumentError(f"commodity ({src},{dst}) has identical endpoints")
        commodities.append((src, dst))
    return FlowProblem(
        topo.num_nodes, tuple(links), tuple(capacities), tuple(commodities), capacity_mbps
    )


def scenario_grid(topo: Topology, which: str) -> list[tuple[int, int]]:
    """Row flows, column flows, or both, across a grid deployment."""
    kind = which.lower()
    if kind not in (R5, C5, R5C5):
        raise InvalidArgumentError(f"unknown grid scenario '{which}'")
    rows, cols = infer_grid_dims(topo)
    pairs: list[tuple[int, int]] = []
    if kind in (R5, R5C5):
        if cols < 2:
            raise InvalidArgumentError("row flows need at least two columns")
        for r in range(rows):
            pairs.append((r * cols, r * cols + cols - 1))
    if kind in (C5, R5C5):
        if rows < 2:
            raise InvalidArgumentError("column flows need at least two rows")
        for c in range(cols):
            pairs.append((c, (rows - 1) * cols + c))
    return pairs


def solve(problem: FlowProblem) -> CapacityEstimate:
    """Exact optimum of the capacity LP: maximize total net inflow at the sinks.

    Per-commodity conservation holds at every non-terminal node; each link's
    capacity is shared by both directions and all commodities.
    """
    n_links = len(problem.links)
    n_comm = len(problem.commodities)
    if n_links == 0 or n_comm == 0:
        return CapacityEstimate(0.0, (0.0,) * n_comm, {})

    n_arcs = 2 * n_links
    arcs: list[tuple[int, int]] = []
    for a, b in problem.links:
        arcs.append((a, b))
        arcs.append((b, a))

    def var(z: int, arc: int) -> int:
        return z * n_arcs + arc

    n_vars = n_comm * n_arcs
    objective = np.zeros(n_vars)
    for z, (_, sink) in enumerate(problem.commodities):
        for k, (u, v) in enumerate(arcs):
            if v == sink:
                objective[var(z, k)] -= 1.0  # minimize negative inflow
            elif u == sink:
                objective[var(z, k)] += 1.0

    eq_rows: list[np.ndarray] = []
    for z, (src, sink) in enumerate(problem.commodities):
        for node in range(problem.num_nodes):
            if node in (src, sink):
                continue
            row = np.zeros(n_vars)
            touched = False
            for k, (u, v) in enumerate(arcs):
                if v == node:
                    row[var(z, k)] = 1.0
                    touched = True
                elif u == node:
                    row[var(z, k)] = -1.0
                    touched = True
            if touched:
                eq_rows.append(row)
    a_eq = np.vstack(eq_rows) if eq_rows else None

    a_ub = np.zeros((n_links, n_vars))
    for l in range(n_links):
        for z in range(n_comm):
            a_ub[l, var(z, 2 * l)] = 1.0
            a_ub[l, var(z, 2 * l + 1)] = 1.0
    b_ub = np.array(problem.capacities)

    result = solve_min(objective, a_ub, b_ub, a_eq)
    x = result.x

    flows: dict[tuple[tuple[int, int], int], float] = {}
    for z in range(n_comm):
        for k, arc in enumerate(arcs):
            value = float(x[var(z, k)])
            if value > _FLOW_EPS:
                flows[(arc, z)] = value

    per_commodity: list[float] = []
    for z, (_, sink) in enumerate(problem.commodities):
        net = 0.0
        for k, (u, v) in enumerate(arcs):
            if v == sink:
                net += float(x[var(z, k)])
            elif u == sink:
                net -= float(x[var(z, k)])
        per_commodity.append(net if abs(net) > _FLOW_EPS else 0.0)
    total = sum(per_commodity)
    return CapacityEstimate(total, tuple(per_commodity), flows)


def estimate_to_dict(problem: FlowProblem, estimate: CapacityEstimate) -> dict:
    flows = []
    for ((u, v), z), mbps in sorted(
        estimate.per_arc_flow.items(), key=lambda item: (item[0][1], item[0][0])
    ):
        a, b = min(u, v), max(u, v)
        flows.append(
            {
                "link": [a, b],
                "commodity": z,
                "mbps": mbps,
                "direction": "forward" if (u, v) == (a, b) else "reverse",
            }
        )
    return {
        "total_mbps": estimate.total,
        "per_commodity": [
            {"src": src, "dst": dst, "mbps": mbps}
            for (src, dst), mbps in zip(problem.commodities, estimate.per_commodity)
        ],
        "flows": flows,
    }
