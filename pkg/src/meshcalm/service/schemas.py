"""Pydantic request/response models mirroring the toolkit's file schemas."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..assignment import ChannelAssignment
from ..topology import Node, Topology, topology_to_dict


class NodeModel(BaseModel):
    id: int
    x: float
    y: float
    radios: int = Field(ge=1)


class TopologyModel(BaseModel):
    nodes: list[NodeModel]
    links: list[tuple[int, int]]
    channels: list[int]
    tx_range: float

    def to_topology(self) -> Topology:
        return Topology(
            [Node(n.id, n.x, n.y, n.radios) for n in self.nodes],
            [(a, b) for a, b in self.links],
            self.channels,
            self.tx_range,
        )

    @classmethod
    def from_topology(cls, topo: Topology) -> "TopologyModel":
        return cls.model_validate(topology_to_dict(topo))


CaMap = dict[int, list[int]]


def ca_from_map(mapping: CaMap, num_nodes: int) -> ChannelAssignment:
    rows = [tuple(mapping.get(i, ())) for i in range(num_nodes)]
    return ChannelAssignment(rows)


class NamedAssignmentModel(BaseModel):
    name: str
    assignment: CaMap


class GridRequest(BaseModel):
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    radios_per_node: int = Field(default=2, ge=1)
    spacing: float | None = None
    channels: list[int] = [1, 2, 3]
    tx_range: float = 250.0


class DensityRequest(BaseModel):
    topology: TopologyModel


class DensityResponse(BaseModel):
    density: float


class ValidateRequest(BaseModel):
    topology: TopologyModel
    alpha_min: int = 1
    alpha_max: int = 16


class ValidateResponse(BaseModel):
    ok: bool
    violations: list[str]


class ClassifyRequest(BaseModel):
    topology: TopologyModel
    assignment: CaMap


class ClassifyResponse(BaseModel):
    ca_class: str
    disrupted_links: list[tuple[int, int]]
    connected: bool


class GcaaRequest(BaseModel):
    topology: TopologyModel
    mode: str = "tpca"
    emit_every: int = Field(default=1, ge=1)
    ir_ratio: int = Field(default=2, ge=1)
    node_order: list[int] | None = None
    require_pairs: list[tuple[int, int]] | None = None


class GcaaResponse(BaseModel):
    assignments: list[NamedAssignmentModel]
    tids: list[int]


class BruteForceRequest(BaseModel):
    topology: TopologyModel
    metric: str
    direction: str | None = None
    ir_ratio: int = Field(default=2, ge=1)
    xls_size: int = Field(default=2, ge=2)
    cap: int = Field(default=10_000_000, ge=1)


class BruteForceResponse(BaseModel):
    assignment: CaMap
    metric: str
    direction: str
    value: float


class LinkChannelsModel(BaseModel):
    link: tuple[int, int]
    channels: list[int]


class MetricReportRequest(BaseModel):
    topology: TopologyModel
    assignment: CaMap | None = None
    link_channels: list[LinkChannelsModel] | None = None
    name: str = ""
    ir_ratio: int = Field(default=2, ge=1)
    xls_size: int = Field(default=2, ge=2)


class LinkQualityModel(BaseModel):
    link: tuple[int, int]
    operational: bool
    link_cost: float
    link_weight: float
    num_prob_conf: float


class MetricReportResponse(BaseModel):
    ca_name: str
    ca_class: str | None = None
    tid: int
    tid_mmcg: int
    cdal_cost: float
    cxls_wt: float
    calm: float
    max_adj_count: int
    avg_adj_link: float
    links: list[LinkQualityModel]


class MetricValueRequest(BaseModel):
    topology: TopologyModel
    assignment: CaMap
    metric: str
    ir_ratio: int = Field(default=2, ge=1)
    xls_size: int = Field(default=2, ge=2)


class MetricValueResponse(BaseModel):
    metric: str
    value: float


class LinkWeightModel(BaseModel):
    link: tuple[int, int]
    weight: float = Field(ge=0.0, le=1.0)


class ScenarioPairModel(BaseModel):
    src: int
    dst: int


class NetcapRequest(BaseModel):
    topology: TopologyModel
    link_weights: list[LinkWeightModel]
    scenario: str | list[ScenarioPairModel] = "r5c5"
    capacity_mbps: float = Field(default=54.0, gt=0)
    scale: float = Field(default=1.0, gt=0)


class CommodityFlowModel(BaseModel):
    src: int
    dst: int
    mbps: float


class ArcFlowModel(BaseModel):
    link: tuple[int, int]
    commodity: int
    mbps: float
    direction: str


class NetcapResponse(BaseModel):
    total_mbps: float
    per_commodity: list[CommodityFlowModel]
    flows: list[ArcFlowModel]


class EisRequest(BaseModel):
    predicted: list[str]
    reference: list[str]


class EisResponse(BaseModel):
    eis: int
    n: int
    moa: float
    moa_rounded: int


class MoaRequest(BaseModel):
    eis: int
    n: int = Field(ge=2)


class MoaResponse(BaseModel):
    moa: float
    rounded: int


class SpreadRequest(BaseModel):
    estimate: float
    observed: float


class SpreadResponse(BaseModel):
    spread_pct: float
    moe_pct: float


class PipelineRequest(BaseModel):
    topology: str
    ca_set: str
    out: str
    scenario: str = "r5c5"
    capacity_mbps: float = Field(default=54.0, gt=0)
    scale: float = Field(default=1.0, gt=0)
    ir_ratio: int = Field(default=2, ge=1)
    metrics: list[str] = ["tid", "cdal", "cxls", "calm"]
    observed: str | None = None
    seed: int = 0
    strict_nonoperational: bool = False


class PipelineResponse(BaseModel):
    out: str
    num_cas: int
    ok: list[str]
    failures: dict[str, str]
    flags: dict[str, str]
    rankings: dict[str, object]
