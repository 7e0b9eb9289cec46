"""Channel-assignment values: one ordered channel list per node, one entry per radio."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import InvalidArgumentError, ParseError
from .topology import Link, Topology


class ChannelAssignment:
    """Immutable per-node channel lists; node ``i``'s usable set is ``channel_set(i)``."""

    __slots__ = ("_radios",)

    def __init__(self, channels_by_node: Sequence[Sequence[int]]):
        self._radios: tuple[tuple[int, ...], ...] = tuple(
            tuple(int(c) for c in row) for row in channels_by_node
        )

    @property
    def radios(self) -> tuple[tuple[int, ...], ...]:
        return self._radios

    def channels_at(self, node_id: int) -> tuple[int, ...]:
        return self._radios[node_id]

    def channel_set(self, node_id: int) -> frozenset[int]:
        return frozenset(self._radios[node_id])

    def with_radio(self, node_id: int, radio: int, channel: int) -> "ChannelAssignment":
        row = list(self._radios[node_id])
        row[radio] = int(channel)
        rows = list(self._radios)
        rows[node_id] = tuple(row)
        return ChannelAssignment(rows)

    def total_radios(self) -> int:
        return sum(len(row) for row in self._radios)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ChannelAssignment) and self._radios == other._radios

    def __hash__(self) -> int:
        return hash(self._radios)

    def __repr__(self) -> str:
        return f"ChannelAssignment({list(map(list, self._radios))})"

    def to_dict(self) -> dict[str, list[int]]:
        return {str(i): list(row) for i, row in enumerate(self._radios)}

    @classmethod
    def from_dict(cls, doc: Mapping[object, object], num_nodes: int | None = None) -> "ChannelAssignment":
        try:
            parsed = {int(k): [int(c) for c in v] for k, v in doc.items()}
        except (TypeError, ValueError) as exc:
            raise ParseError(f"channel assignment: bad entry ({exc})") from exc
        size = num_nodes if num_nodes is not None else (max(parsed, default=-1) + 1)
        rows = [tuple(parsed.get(i, ())) for i in range(size)]
        return cls(rows)


def assignment_violations(topo: Topology, ca: ChannelAssignment) -> list[str]:
    """Mismatches between an assignment and a topology, one message per offence."""
    problems: list[str] = []
    if len(ca.radios) != topo.num_nodes:
        problems.append(
            f"assignment covers {len(ca.radios)} nodes, topology has {topo.num_nodes}"
        )
    allowed = set(topo.channels)
    for i in range(min(len(ca.radios), topo.num_nodes)):
        row = ca.channels_at(i)
        expected = topo.node(i).radios
        if len(row) != expected:
            problems.append(f"node {i}: {len(row)} channels listed for {expected} radios")
        bad = sorted({c for c in row if c not in allowed})
        if bad:
            problems.append(f"node {i}: channels {bad} not in the available set")
    return problems


def check_assignment(topo: Topology, ca: ChannelAssignment) -> None:
    problems = assignment_violations(topo, ca)
    if problems:
        raise InvalidArgumentError("invalid channel assignment: " + "; ".join(problems))


def uniform_assignment(topo: Topology, channel: int | None = None) -> ChannelAssignment:
    """Every radio on one channel (the lowest available one by default)."""
    if channel is None:
        if not topo.channels:
            raise InvalidArgumentError("topology has no channels")
        channel = topo.channels[0]
    if channel not in topo.channels:
        raise InvalidArgumentError(f"channel {channel} not in the available set")
    return ChannelAssignment([(channel,) * topo.node(i).radios for i in range(topo.num_nodes)])


def link_channel_set(topo: Topology, ca: ChannelAssignment, ln: Link) -> frozenset[int]:
    """Channels the link can operate on: the endpoints' common channels."""
    return ca.channel_set(ln.a) & ca.channel_set(ln.b)


def link_channel_sets(topo: Topology, ca: ChannelAssignment) -> list[frozenset[int]]:
    """Per-link common-channel sets, aligned with ``topo.links``."""
    node_sets = [ca.channel_set(i) for i in range(topo.num_nodes)]
    return [node_sets[ln.a] & node_sets[ln.b] for ln in topo.links]


def named_assignments_from_doc(
    doc: object, topo: Topology
) -> list[tuple[str, ChannelAssignment]]:
    """Parse a CA-set document: a JSON array of ``{name, assignment}`` objects."""
    if not isinstance(doc, list):
        raise ParseError("ca-set: expected a JSON array of {name, assignment} objects")
    out: list[tuple[str, ChannelAssignment]] = []
    seen: set[str] = set()
    for pos, entry in enumerate(doc):
        if not isinstance(entry, dict) or "name" not in entry or "assignment" not in entry:
            raise ParseError(f"ca-set[{pos}]: expected an object with 'name' and 'assignment'")
        name = str(entry["name"])
        if name in seen:
            raise ParseError(f"ca-set[{pos}]: duplicate name '{name}'")
        seen.add(name)
        if not isinstance(entry["assignment"], Mapping):
            raise ParseError(f"ca-set[{pos}] '{name}': assignment must be an object")
        ca = ChannelAssignment.from_dict(entry["assignment"], num_nodes=topo.num_nodes)
        out.append((name, ca))
    return out


def named_assignments_to_doc(cas: Iterable[tuple[str, ChannelAssignment]]) -> list[dict]:
    return [{"name": name, "assignment": ca.to_dict()} for name, ca in cas]
