"""HTTP facade over the core package.

Route handlers are plain functions over the pydantic schemas; the CLI invokes
them in-process, so the command line and the HTTP surface share one
implementation. Core exceptions are translated to HTTP errors at the app
boundary only.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from .. import metrics as metrics_mod
from .. import netcap as netcap_mod
from ..assignment import check_assignment
from ..ca import brute_force_best, classify, gcaa
from ..conflict import EMMCG, MMCG, TidCalculator, build_conflict_graph, total_interference_degree
from ..errors import (
    CorrectionFailureError,
    InvalidArgumentError,
    NotFoundError,
    ParseError,
    TooLargeError,
)
from ..evaluation import Ranking, eis, moa, round_moa, spread
from ..pipeline import RunManifest, run_pipeline
from ..topology import gen_grid, network_density, validate
from . import schemas as s

app = FastAPI(title="meshcalm", version=__version__)


@app.exception_handler(InvalidArgumentError)
@app.exception_handler(ParseError)
@app.exception_handler(CorrectionFailureError)
async def _bad_request(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(NotFoundError)
async def _not_found(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=404, content={"detail": str(exc)})


@app.exception_handler(TooLargeError)
async def _too_large(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=413, content={"detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/topology/grid", response_model=s.TopologyModel)
def topology_grid(req: s.GridRequest) -> s.TopologyModel:
    topo = gen_grid(
        req.rows, req.cols, req.radios_per_node, req.spacing, req.channels, req.tx_range
    )
    return s.TopologyModel.from_topology(topo)


@app.post("/topology/density", response_model=s.DensityResponse)
def topology_density(req: s.DensityRequest) -> s.DensityResponse:
    return s.DensityResponse(density=network_density(req.topology.to_topology()))


@app.post("/topology/validate", response_model=s.ValidateResponse)
def topology_validate(req: s.ValidateRequest) -> s.ValidateResponse:
    problems = validate(req.topology.to_topology(), req.alpha_min, req.alpha_max)
    return s.ValidateResponse(ok=not problems, violations=problems)


@app.post("/ca/classify", response_model=s.ClassifyResponse)
def ca_classify(req: s.ClassifyRequest) -> s.ClassifyResponse:
    topo = req.topology.to_topology()
    kind = classify(topo, s.ca_from_map(req.assignment, topo.num_nodes))
    return s.ClassifyResponse(
        ca_class=kind.kind,
        disrupted_links=[(ln.a, ln.b) for ln in kind.disrupted],
        connected=kind.connected,
    )


@app.post("/ca/gcaa", response_model=s.GcaaResponse)
def ca_gcaa(req: s.GcaaRequest) -> s.GcaaResponse:
    topo = req.topology.to_topology()
    emitted = gcaa(
        topo,
        req.mode,
        emit_every=req.emit_every,
        node_order=req.node_order,
        ir_ratio=req.ir_ratio,
        require_pairs=req.require_pairs,
    )
    calc = TidCalculator(topo, req.ir_ratio)
    width = max(4, len(str(len(emitted))))
    named = [
        s.NamedAssignmentModel(
            name=f"gcaa_{str(k).zfill(width)}",
            assignment={i: list(row) for i, row in enumerate(ca.radios)},
        )
        for k, ca in enumerate(emitted)
    ]
    return s.GcaaResponse(assignments=named, tids=[calc.tid(ca) for ca in emitted])


@app.post("/ca/brute-force", response_model=s.BruteForceResponse)
def ca_brute_force(req: s.BruteForceRequest) -> s.BruteForceResponse:
    topo = req.topology.to_topology()
    best = brute_force_best(
        topo, req.metric, req.direction, req.ir_ratio, req.xls_size, req.cap
    )
    value = _metric_value(topo, best, req.metric, req.ir_ratio, req.xls_size)
    direction = req.direction or {"tid": "min", "cdal": "min", "cxls": "max", "calm": "max"}[req.metric]
    return s.BruteForceResponse(
        assignment={i: list(row) for i, row in enumerate(best.radios)},
        metric=req.metric,
        direction=direction,
        value=value,
    )


def _metric_value(topo, ca, metric: str, ir_ratio: int, xls_size: int) -> float:
    check_assignment(topo, ca)
    if metric == "tid":
        return float(TidCalculator(topo, ir_ratio).tid(ca))
    if metric == "cdal":
        return metrics_mod.cdal_cost(topo, ca)
    if metric == "cxls":
        return metrics_mod.cxls_wt(topo, ca, xls_size)
    if metric == "calm":
        return metrics_mod.calm(topo, ca).calm
    raise InvalidArgumentError(f"unknown metric '{metric}'")


@app.post("/metrics/value", response_model=s.MetricValueResponse)
def metrics_value(req: s.MetricValueRequest) -> s.MetricValueResponse:
    topo = req.topology.to_topology()
    ca = s.ca_from_map(req.assignment, topo.num_nodes)
    return s.MetricValueResponse(
        metric=req.metric,
        value=_metric_value(topo, ca, req.metric, req.ir_ratio, req.xls_size),
    )


@app.post("/metrics/report", response_model=s.MetricReportResponse)
def metrics_report(req: s.MetricReportRequest) -> s.MetricReportResponse:
    topo = req.topology.to_topology()
    if (req.assignment is None) == (req.link_channels is None):
        raise InvalidArgumentError("provide exactly one of assignment or link_channels")
    if req.assignment is not None:
        ca = s.ca_from_map(req.assignment, topo.num_nodes)
        kind: str | None = classify(topo, ca).kind
        tid_e = total_interference_degree(build_conflict_graph(topo, ca, EMMCG, req.ir_ratio))
        tid_m = total_interference_degree(build_conflict_graph(topo, ca, MMCG, req.ir_ratio))
        cdal = metrics_mod.cdal_cost(topo, ca)
        cxls = metrics_mod.cxls_wt(topo, ca, req.xls_size)
        report = metrics_mod.calm(topo, ca)
    else:
        mapping = {tuple(entry.link): entry.channels for entry in req.link_channels}
        kind = None
        tid_e = tid_m = 0  # radio-level conflicts are undefined for link-granularity input
        cdal = metrics_mod.cdal_cost_from_channels(topo, mapping)
        cxls = metrics_mod.cxls_wt_from_channels(topo, mapping, req.xls_size)
        report = metrics_mod.calm_from_channels(topo, mapping)
    doc = metrics_mod.calm_report_to_dict(report)
    return s.MetricReportResponse(
        ca_name=req.name,
        ca_class=kind,
        tid=tid_e,
        tid_mmcg=tid_m,
        cdal_cost=cdal,
        cxls_wt=cxls,
        calm=doc["calm"],
        max_adj_count=doc["max_adj_count"],
        avg_adj_link=doc["avg_adj_link"],
        links=[s.LinkQualityModel.model_validate(entry) for entry in doc["links"]],
    )


@app.post("/netcap/solve", response_model=s.NetcapResponse)
def netcap_solve(req: s.NetcapRequest) -> s.NetcapResponse:
    topo = req.topology.to_topology()
    if isinstance(req.scenario, str):
        commodities = netcap_mod.scenario_grid(topo, req.scenario)
    else:
        commodities = [(pair.src, pair.dst) for pair in req.scenario]
    weights = {tuple(entry.link): entry.weight for entry in req.link_weights}
    problem = netcap_mod.build_problem(
        topo, weights, commodities, req.capacity_mbps, req.scale
    )
    estimate = netcap_mod.solve(problem)
    doc = netcap_mod.estimate_to_dict(problem, estimate)
    return s.NetcapResponse.model_validate(doc)


@app.post("/eval/eis", response_model=s.EisResponse)
def eval_eis(req: s.EisRequest) -> s.EisResponse:
    predicted = Ranking(tuple(req.predicted), "predicted", "larger")
    reference = Ranking(tuple(req.reference), "reference", "larger")
    errors = eis(predicted, reference)
    accuracy = moa(errors, len(req.reference))
    return s.EisResponse(
        eis=errors, n=len(req.reference), moa=accuracy, moa_rounded=round_moa(accuracy)
    )


@app.post("/eval/moa", response_model=s.MoaResponse)
def eval_moa(req: s.MoaRequest) -> s.MoaResponse:
    accuracy = moa(req.eis, req.n)
    return s.MoaResponse(moa=accuracy, rounded=round_moa(accuracy))


@app.post("/eval/spread", response_model=s.SpreadResponse)
def eval_spread(req: s.SpreadRequest) -> s.SpreadResponse:
    pct = spread(req.estimate, req.observed)
    return s.SpreadResponse(spread_pct=pct, moe_pct=abs(pct))


@app.post("/pipeline/run", response_model=s.PipelineResponse)
def pipeline_run(req: s.PipelineRequest) -> s.PipelineResponse:
    manifest = RunManifest(
        topology=req.topology,
        ca_set=req.ca_set,
        out=req.out,
        scenario=req.scenario,
        capacity_mbps=req.capacity_mbps,
        scale=req.scale,
        ir_ratio=req.ir_ratio,
        metrics=tuple(req.metrics),
        observed=req.observed,
        seed=req.seed,
        strict_nonoperational=req.strict_nonoperational,
    )
    result = run_pipeline(manifest)
    return s.PipelineResponse(
        out=str(manifest.out),
        num_cas=len(result.outcomes) + len(result.failures),
        ok=[o.name for o in result.outcomes],
        failures=result.failures,
        flags=result.flags,
        rankings=result.rankings,
    )
