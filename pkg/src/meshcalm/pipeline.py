"""End-to-end orchestration: files in, metric/capacity/evaluation reports out."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from . import metrics as metrics_mod
from . import netcap as netcap_mod
from .assignment import (
    ChannelAssignment,
    assignment_violations,
    named_assignments_from_doc,
)
from .ca import TPCA, classify
from .conflict import EMMCG, MMCG, build_conflict_graph, total_interference_degree
from .errors import InvalidArgumentError, MeshcalmError, ParseError
from .evaluation import eis, moa, rank_by_metric, round_moa, spread
from .fileio import dump_csv, dump_json, load_json
from .topology import Topology, topology_from_dict, validate

ALL_METRICS = ("tid", "cdal", "cxls", "calm")

TID_DISRUPTION_NOTE = (
    "TID benefits from link disconnections; its ranking is unreliable for "
    "non-topology-preserving assignments"
)

_NAME_SAFE = re.compile(r"[^-._a-zA-Z0-9]")


@dataclass(frozen=True)
class RunManifest:
    """Everything a pipeline run needs; all randomness is seeded through here."""

    topology: Path
    ca_set: Path
    out: Path
    scenario: str = "r5c5"
    capacity_mbps: float = netcap_mod.DEFAULT_CAPACITY_MBPS
    scale: float = 1.0
    ir_ratio: int = 2
    metrics: tuple[str, ...] = ALL_METRICS
    observed: Path | None = None
    seed: int = 0
    strict_nonoperational: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "topology", Path(self.topology))
        object.__setattr__(self, "ca_set", Path(self.ca_set))
        object.__setattr__(self, "out", Path(self.out))
        if self.observed is not None:
            object.__setattr__(self, "observed", Path(self.observed))
        object.__setattr__(self, "metrics", tuple(self.metrics))

    def to_dict(self) -> dict:
        return {
            "topology": str(self.topology),
            "ca_set": str(self.ca_set),
            "out": str(self.out),
            "scenario": self.scenario,
            "capacity_mbps": self.capacity_mbps,
            "scale": self.scale,
            "ir_ratio": self.ir_ratio,
            "metrics": list(self.metrics),
            "observed": str(self.observed) if self.observed else None,
            "seed": self.seed,
            "strict_nonoperational": self.strict_nonoperational,
        }


@dataclass
class CaOutcome:
    name: str
    ca_class: str
    disrupted: list[tuple[int, int]]
    tid_mmcg: int | None = None
    tid_emmcg: int | None = None
    cdal_cost: float | None = None
    cxls_wt: float | None = None
    calm_report: metrics_mod.CalmReport | None = None
    netcap_problem: netcap_mod.FlowProblem | None = None
    netcap: netcap_mod.CapacityEstimate | None = None


@dataclass
class PipelineResult:
    manifest: RunManifest
    outcomes: list[CaOutcome] = field(default_factory=list)
    failures: dict[str, str] = field(default_factory=dict)
    rankings: dict[str, object] = field(default_factory=dict)
    eval_rows: list[dict] = field(default_factory=list)
    spread_rows: list[dict] = field(default_factory=list)
    flags: dict[str, str] = field(default_factory=dict)
    observed: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def parse_inputs(
    manifest: RunManifest,
) -> tuple[Topology, list[tuple[str, ChannelAssignment]], list[tuple[int, int]]]:
    """Load and validate the topology, CA set and traffic scenario."""
    unknown = [m for m in manifest.metrics if m not in ALL_METRICS]
    if unknown:
        raise InvalidArgumentError(f"unknown metrics requested: {unknown}")

    topo = topology_from_dict(load_json(manifest.topology))
    problems = validate(topo, 1, 1 << 16)
    if problems:
        raise ParseError(f"{manifest.topology}: invalid topology: " + "; ".join(problems))

    cas = named_assignments_from_doc(load_json(manifest.ca_set), topo)
    for name, ca in cas:
        violations = assignment_violations(topo, ca)
        if violations:
            raise ParseError(
                f"{manifest.ca_set}: assignment '{name}': " + "; ".join(violations)
            )

    commodities = _resolve_scenario(topo, manifest.scenario)
    return topo, cas, commodities


def _resolve_scenario(topo: Topology, scenario: str) -> list[tuple[int, int]]:
    kind = scenario.lower()
    if kind in (netcap_mod.R5, netcap_mod.C5, netcap_mod.R5C5):
        return netcap_mod.scenario_grid(topo, kind)
    if kind.startswith("file:"):
        doc = load_json(scenario[len("file:") :])
        if not isinstance(doc, list):
            raise ParseError("scenario file: expected a JSON array of {src, dst}")
        pairs = []
        for pos, entry in enumerate(doc):
            if not isinstance(entry, dict) or "src" not in entry or "dst" not in entry:
                raise ParseError(f"scenario file[{pos}]: expected an object with src and dst")
            pairs.append((int(entry["src"]), int(entry["dst"])))
        return pairs
    raise InvalidArgumentError(
        f"scenario must be r5, c5, r5c5 or file:PATH, got '{scenario}'"
    )


def _evaluate_ca(
    topo: Topology,
    name: str,
    ca: ChannelAssignment,
    commodities: list[tuple[int, int]],
    manifest: RunManifest,
) -> CaOutcome:
    kind = classify(topo, ca)
    outcome = CaOutcome(
        name, kind.kind, [(ln.a, ln.b) for ln in kind.disrupted]
    )
    selected = set(manifest.metrics)
    if "tid" in selected:
        outcome.tid_mmcg = total_interference_degree(
            build_conflict_graph(topo, ca, MMCG, manifest.ir_ratio)
        )
        outcome.tid_emmcg = total_interference_degree(
            build_conflict_graph(topo, ca, EMMCG, manifest.ir_ratio)
        )
    if "cdal" in selected:
        outcome.cdal_cost = metrics_mod.cdal_cost(topo, ca)
    if "cxls" in selected:
        outcome.cxls_wt = metrics_mod.cxls_wt(topo, ca, max(2, manifest.ir_ratio))
    if "calm" in selected:
        report = metrics_mod.calm(topo, ca)
        outcome.calm_report = report
        if commodities:
            weights = report.link_weights()
            if manifest.strict_nonoperational:
                for quality in report.links:
                    if not quality.operational:
                        weights[(quality.link.a, quality.link.b)] = 0.0
            problem = netcap_mod.build_problem(
                topo, weights, commodities, manifest.capacity_mbps, manifest.scale
            )
            outcome.netcap_problem = problem
            outcome.netcap = netcap_mod.solve(problem)
    return outcome


def run_pipeline(manifest: RunManifest) -> PipelineResult:
    """Evaluate every assignment, rank the predictions, and write the report bundle.

    Per-CA errors are recorded and skipped so one bad assignment cannot sink
    the rest of the run; outputs are deterministic for a given manifest.
    """
    topo, cas, commodities = parse_inputs(manifest)
    result = PipelineResult(manifest)

    for name, ca in sorted(cas, key=lambda item: item[0]):
        try:
            result.outcomes.append(
                _evaluate_ca(topo, name, ca, commodities, manifest)
            )
        except (MeshcalmError, ValueError) as exc:
            result.failures[name] = f"{name}: {exc}"

    if any(o.ca_class != TPCA for o in result.outcomes):
        result.flags["tid"] = TID_DISRUPTION_NOTE

    result.rankings = _build_rankings(result.outcomes)
    if manifest.observed is not None:
        _evaluate_against_observed(result, manifest)

    _write_bundle(result)
    return result


def _metric_values(outcomes: list[CaOutcome]) -> dict[str, dict[str, float]]:
    values: dict[str, dict[str, float]] = {}
    for key, getter in (
        ("tid", lambda o: o.tid_emmcg),
        ("cdal", lambda o: o.cdal_cost),
        ("cxls", lambda o: o.cxls_wt),
        ("calm", lambda o: o.calm_report.calm if o.calm_report else None),
        ("netcap", lambda o: o.netcap.total if o.netcap else None),
    ):
        collected = {o.name: getter(o) for o in outcomes if getter(o) is not None}
        if collected:
            values[key] = collected
    return values


_BETTER = {"tid": "smaller", "cdal": "smaller", "cxls": "larger", "calm": "larger", "netcap": "larger"}


def _build_rankings(outcomes: list[CaOutcome]) -> dict[str, object]:
    rankings: dict[str, object] = {}
    for key, vals in _metric_values(outcomes).items():
        if len(vals) < 2:
            continue
        ranking = rank_by_metric(vals, _BETTER[key], criterion=key)
        rankings[key] = {
            "names": list(ranking.names),
            "better": ranking.better,
            "ties": [list(group) for group in ranking.ties],
        }
    return rankings


def _evaluate_against_observed(result: PipelineResult, manifest: RunManifest) -> None:
    doc = load_json(manifest.observed)
    if not isinstance(doc, dict):
        raise ParseError(f"{manifest.observed}: expected a JSON object of name -> Mbps")
    observed: dict[str, float] = {}
    for o in result.outcomes:
        if o.name not in doc:
            raise ParseError(f"{manifest.observed}: no observed value for '{o.name}'")
        observed[o.name] = float(doc[o.name])
    result.observed = observed
    if len(observed) < 2:
        return
    reference = rank_by_metric(observed, "larger", criterion="observed")

    for key, vals in _metric_values(result.outcomes).items():
        if set(vals) != set(observed):
            continue
        predicted = rank_by_metric(vals, _BETTER[key], criterion=key)
        errors = eis(predicted, reference)
        accuracy = moa(errors, len(observed))
        result.eval_rows.append(
            {
                "metric": key,
                "parameter": "nat",
                "eis": errors,
                "n": len(observed),
                "moa": round_moa(accuracy),
                "moa_exact": accuracy,
            }
        )

    for o in result.outcomes:
        if o.netcap is None:
            continue
        pct = spread(o.netcap.total, observed[o.name])
        result.spread_rows.append(
            {
                "ca": o.name,
                "estimate": o.netcap.total,
                "observed": observed[o.name],
                "spread_pct": pct,
                "moe_pct": abs(pct),
            }
        )


def _safe_name(name: str, taken: set[str]) -> str:
    safe = _NAME_SAFE.sub("_", name) or "_"
    if safe in taken:
        raise InvalidArgumentError(f"assignment names collide after sanitizing: '{safe}'")
    taken.add(safe)
    return safe


def _write_bundle(result: PipelineResult) -> None:
    out = Path(result.manifest.out)
    out.mkdir(parents=True, exist_ok=True)
    dump_json(result.manifest.to_dict(), out / "manifest.json")

    taken: set[str] = set()
    csv_rows = []
    for o in result.outcomes:
        safe = _safe_name(o.name, taken)
        report: dict[str, object] = {
            "ca_name": o.name,
            "ca_class": o.ca_class,
            "disrupted_links": [list(pair) for pair in o.disrupted],
            "tid": o.tid_emmcg,
            "tid_mmcg": o.tid_mmcg,
            "cdal_cost": o.cdal_cost,
            "cxls_wt": o.cxls_wt,
            "calm": None,
            "max_adj_count": None,
            "avg_adj_link": None,
            "links": None,
        }
        if o.calm_report is not None:
            calm_doc = metrics_mod.calm_report_to_dict(o.calm_report)
            report.update(
                calm=calm_doc["calm"],
                max_adj_count=calm_doc["max_adj_count"],
                avg_adj_link=calm_doc["avg_adj_link"],
                links=calm_doc["links"],
            )
        dump_json(report, out / "reports" / f"{safe}.json")
        if o.netcap is not None and o.netcap_problem is not None:
            dump_json(
                netcap_mod.estimate_to_dict(o.netcap_problem, o.netcap),
                out / "netcap" / f"{safe}.json",
            )
        csv_rows.append(
            [
                o.name,
                o.ca_class,
                _cell(o.tid_mmcg),
                _cell(o.tid_emmcg),
                _cell(o.cdal_cost),
                _cell(o.cxls_wt),
                _cell(o.calm_report.calm if o.calm_report else None),
                _cell(o.netcap.total if o.netcap else None),
            ]
        )
    dump_csv(
        out / "metrics.csv",
        ["ca", "ca_class", "tid_mmcg", "tid_emmcg", "cdal_cost", "cxls_wt", "calm", "netcap_mbps"],
        csv_rows,
    )
    dump_json(result.rankings, out / "rankings.json")
    if result.eval_rows:
        dump_json(result.eval_rows, out / "eval.json")
        dump_csv(
            out / "eval.csv",
            ["metric", "parameter", "eis", "n", "moa"],
            [[r["metric"], r["parameter"], r["eis"], r["n"], r["moa"]] for r in result.eval_rows],
        )
    if result.observed:
        # plot-ready data: one row per CA pairing each estimate with the
        # observed parameter
        dump_csv(
            out / "plot.csv",
            ["ca", "observed_mbps", "tid", "cdal_cost", "cxls_wt", "calm", "netcap_mbps"],
            [
                [
                    o.name,
                    _cell(result.observed.get(o.name)),
                    _cell(o.tid_emmcg),
                    _cell(o.cdal_cost),
                    _cell(o.cxls_wt),
                    _cell(o.calm_report.calm if o.calm_report else None),
                    _cell(o.netcap.total if o.netcap else None),
                ]
                for o in result.outcomes
            ],
        )
    if result.spread_rows:
        dump_json(result.spread_rows, out / "spread.json")
        dump_csv(
            out / "spread.csv",
            ["ca", "estimate", "observed", "spread_pct", "moe_pct"],
            [
                [r["ca"], r["estimate"], r["observed"], r["spread_pct"], r["moe_pct"]]
                for r in result.spread_rows
            ],
        )
    dump_json(
        {
            "seed": result.manifest.seed,
            "num_cas": len(result.outcomes) + len(result.failures),
            "ok": [o.name for o in result.outcomes],
            "failures": dict(sorted(result.failures.items())),
            "flags": result.flags,
        },
        out / "summary.json",
    )


def _cell(value: object) -> object:
    return "" if value is None else value
