"""Command-line front end.

Each subcommand is a thin client of the service layer: it reads input files
into the service request models, invokes the same handler functions the HTTP
routes use, and writes the response out as JSON/CSV.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .assignment import named_assignments_from_doc
from .errors import MeshcalmError
from .fileio import dump_json, dumps_json, load_json
from .pipeline import ALL_METRICS, RunManifest, run_pipeline
from .service import app as handlers
from .service import schemas as s
from .topology import topology_from_dict, topology_to_dict

EXIT_OK = 0
EXIT_CA_FAILURES = 1
EXIT_INPUT_ERROR = 2

OUT_ENV_VAR = "MESHCALM_OUT"


def _resolve_out(value: str | None) -> str | None:
    return os.environ.get(OUT_ENV_VAR) or value


def _emit(doc: object, out: str | None) -> None:
    if out:
        dump_json(doc, out)
    else:
        sys.stdout.write(dumps_json(doc))


def _load_topology_model(path: str) -> s.TopologyModel:
    return s.TopologyModel.from_topology(topology_from_dict(load_json(path)))


def _load_ca_set(path: str, topo_model: s.TopologyModel) -> list[tuple[str, dict[int, list[int]]]]:
    topo = topo_model.to_topology()
    named = named_assignments_from_doc(load_json(path), topo)
    return [(name, {i: list(row) for i, row in enumerate(ca.radios)}) for name, ca in named]


def _channel_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad channel list '{text}'") from exc


def cmd_topo_gen_grid(args: argparse.Namespace) -> int:
    req = s.GridRequest(
        rows=args.rows,
        cols=args.cols,
        radios_per_node=args.radios,
        spacing=args.spacing,
        channels=args.channels,
        tx_range=args.tx_range,
    )
    model = handlers.topology_grid(req)
    _emit(topology_to_dict(model.to_topology()), _resolve_out(args.out))
    return EXIT_OK


def cmd_topo_validate(args: argparse.Namespace) -> int:
    model = _load_topology_model(args.topology)
    resp = handlers.topology_validate(
        s.ValidateRequest(topology=model, alpha_min=args.alpha_min, alpha_max=args.alpha_max)
    )
    _emit(resp.model_dump(), _resolve_out(args.out))
    return EXIT_OK if resp.ok else EXIT_INPUT_ERROR


def cmd_ca_gcaa(args: argparse.Namespace) -> int:
    model = _load_topology_model(args.topology)
    resp = handlers.ca_gcaa(
        s.GcaaRequest(
            topology=model,
            mode=args.mode,
            emit_every=args.emit_every,
            ir_ratio=args.ir_ratio,
        )
    )
    doc = [
        {
            "name": named.name,
            "assignment": {str(k): v for k, v in named.assignment.items()},
            "tid": tid,
        }
        for named, tid in zip(resp.assignments, resp.tids)
    ]
    _emit(doc, _resolve_out(args.out))
    return EXIT_OK


def cmd_ca_classify(args: argparse.Namespace) -> int:
    model = _load_topology_model(args.topology)
    out = []
    for name, mapping in _load_ca_set(args.ca_set, model):
        resp = handlers.ca_classify(s.ClassifyRequest(topology=model, assignment=mapping))
        out.append({"name": name, **resp.model_dump()})
    _emit(out, _resolve_out(args.out))
    return EXIT_OK


def cmd_ca_brute_force(args: argparse.Namespace) -> int:
    model = _load_topology_model(args.topology)
    resp = handlers.ca_brute_force(
        s.BruteForceRequest(
            topology=model,
            metric=args.metric,
            direction=args.direction,
            ir_ratio=args.ir_ratio,
            xls_size=args.xls_size,
            cap=args.cap,
        )
    )
    _emit(resp.model_dump(), _resolve_out(args.out))
    return EXIT_OK


def cmd_metric(args: argparse.Namespace) -> int:
    model = _load_topology_model(args.topology)
    values = {}
    for name, mapping in _load_ca_set(args.ca_set, model):
        resp = handlers.metrics_value(
            s.MetricValueRequest(
                topology=model,
                assignment=mapping,
                metric=args.metric,
                ir_ratio=args.ir_ratio,
                xls_size=args.xls_size,
            )
        )
        values[name] = resp.value
    _emit({"metric": args.metric, "values": values}, _resolve_out(args.out))
    return EXIT_OK


def _load_link_weights(path: str) -> list[s.LinkWeightModel]:
    doc = load_json(path)
    if isinstance(doc, dict) and "links" in doc:
        entries = doc["links"]  # a metric report; its links carry the weights
        return [
            s.LinkWeightModel(link=tuple(e["link"]), weight=e["link_weight"])
            for e in entries
        ]
    if isinstance(doc, list):
        return [s.LinkWeightModel(link=tuple(e["link"]), weight=e["weight"]) for e in doc]
    raise MeshcalmError(f"{path}: expected a metric report or a [{{link, weight}}] array")


def cmd_netcap_solve(args: argparse.Namespace) -> int:
    model = _load_topology_model(args.topology)
    if args.scenario.lower().startswith("file:"):
        doc = load_json(args.scenario[len("file:") :])
        scenario: object = [s.ScenarioPairModel(src=e["src"], dst=e["dst"]) for e in doc]
    else:
        scenario = args.scenario
    resp = handlers.netcap_solve(
        s.NetcapRequest(
            topology=model,
            link_weights=_load_link_weights(args.weights),
            scenario=scenario,
            capacity_mbps=args.capacity_mbps,
            scale=args.scale,
        )
    )
    _emit(resp.model_dump(), _resolve_out(args.out))
    return EXIT_OK


def cmd_eval_eis(args: argparse.Namespace) -> int:
    predicted = load_json(args.predicted)
    reference = load_json(args.reference)
    resp = handlers.eval_eis(s.EisRequest(predicted=predicted, reference=reference))
    _emit(resp.model_dump(), _resolve_out(args.out))
    return EXIT_OK


def cmd_eval_moa(args: argparse.Namespace) -> int:
    resp = handlers.eval_moa(s.MoaRequest(eis=args.eis, n=args.n))
    _emit(resp.model_dump(), _resolve_out(args.out))
    return EXIT_OK


def cmd_eval_spread(args: argparse.Namespace) -> int:
    resp = handlers.eval_spread(
        s.SpreadRequest(estimate=args.estimate, observed=args.observed)
    )
    _emit(resp.model_dump(), _resolve_out(args.out))
    return EXIT_OK


def cmd_pipeline_run(args: argparse.Namespace) -> int:
    out = _resolve_out(args.out)
    if not out:
        raise MeshcalmError("pipeline run needs --out DIR (or MESHCALM_OUT)")
    manifest = RunManifest(
        topology=Path(args.topology),
        ca_set=Path(args.ca_set),
        out=Path(out),
        scenario=args.scenario,
        capacity_mbps=args.capacity_mbps,
        scale=args.scale,
        ir_ratio=args.ir_ratio,
        metrics=tuple(args.metrics.split(",")) if args.metrics else ALL_METRICS,
        observed=Path(args.observed) if args.observed else None,
        seed=args.seed,
    )
    result = run_pipeline(manifest)
    sys.stdout.write(
        dumps_json(
            {
                "out": str(manifest.out),
                "ok": [o.name for o in result.outcomes],
                "failures": result.failures,
                "flags": result.flags,
            }
        )
    )
    return EXIT_OK if result.ok else EXIT_CA_FAILURES


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("meshcalm.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshcalm",
        description="Channel-assignment performance prediction for multi-radio mesh networks",
    )
    top = parser.add_subparsers(dest="group", required=True)

    topo = top.add_parser("topo", help="topology operations").add_subparsers(
        dest="command", required=True
    )
    gen = topo.add_parser("gen-grid", help="generate a grid deployment")
    gen.add_argument("--rows", type=int, required=True)
    gen.add_argument("--cols", type=int, required=True)
    gen.add_argument("--radios", type=int, default=2)
    gen.add_argument("--spacing", type=float, default=None)
    gen.add_argument("--channels", type=_channel_list, default=[1, 2, 3])
    gen.add_argument("--tx-range", type=float, default=250.0)
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=cmd_topo_gen_grid)
    val = topo.add_parser("validate", help="check structural invariants")
    val.add_argument("--topology", required=True)
    val.add_argument("--alpha-min", type=int, default=1)
    val.add_argument("--alpha-max", type=int, default=16)
    val.add_argument("--out", default=None)
    val.set_defaults(func=cmd_topo_validate)

    ca = top.add_parser("ca", help="channel-assignment operations").add_subparsers(
        dest="command", required=True
    )
    gca = ca.add_parser("gcaa", help="generate assignments by greedy TID descent")
    gca.add_argument("--topology", required=True)
    gca.add_argument("--mode", choices=["tpca", "gpca"], default="tpca")
    gca.add_argument("--emit-every", type=int, default=1)
    gca.add_argument("--ir-ratio", type=int, default=2)
    gca.add_argument("--out", default=None)
    gca.set_defaults(func=cmd_ca_gcaa)
    cls = ca.add_parser("classify", help="classify each assignment in a CA set")
    cls.add_argument("--topology", required=True)
    cls.add_argument("--ca-set", required=True)
    cls.add_argument("--out", default=None)
    cls.set_defaults(func=cmd_ca_classify)
    bf = ca.add_parser("brute-force", help="exhaustive search for the best assignment")
    bf.add_argument("--topology", required=True)
    bf.add_argument("--metric", choices=["tid", "cdal", "cxls", "calm"], required=True)
    bf.add_argument("--direction", choices=["min", "max"], default=None)
    bf.add_argument("--ir-ratio", type=int, default=2)
    bf.add_argument("--xls-size", type=int, default=2)
    bf.add_argument("--cap", type=int, default=10_000_000)
    bf.add_argument("--out", default=None)
    bf.set_defaults(func=cmd_ca_brute_force)

    metric = top.add_parser("metric", help="compute one prediction metric per CA")
    metric_sub = metric.add_subparsers(dest="command", required=True)
    for name in ("tid", "cdal", "cxls", "calm"):
        m = metric_sub.add_parser(name)
        m.add_argument("--topology", required=True)
        m.add_argument("--ca-set", required=True)
        m.add_argument("--ir-ratio", type=int, default=2)
        m.add_argument("--xls-size", type=int, default=2)
        m.add_argument("--out", default=None)
        m.set_defaults(func=cmd_metric, metric=name)

    netcap = top.add_parser("netcap", help="capacity estimation").add_subparsers(
        dest="command", required=True
    )
    slv = netcap.add_parser("solve", help="solve the link-weighted flow problem")
    slv.add_argument("--topology", required=True)
    slv.add_argument("--weights", required=True, help="metric report or [{link, weight}] JSON")
    slv.add_argument("--scenario", default="r5c5", help="r5 | c5 | r5c5 | file:PATH")
    slv.add_argument("--capacity-mbps", type=float, default=54.0)
    slv.add_argument("--scale", type=float, default=1.0)
    slv.add_argument("--out", default=None)
    slv.set_defaults(func=cmd_netcap_solve)

    ev = top.add_parser("eval", help="ranking evaluation").add_subparsers(
        dest="command", required=True
    )
    e1 = ev.add_parser("eis", help="errors in sequence between two rankings")
    e1.add_argument("--predicted", required=True, help="JSON array of names, worst to best")
    e1.add_argument("--reference", required=True)
    e1.add_argument("--out", default=None)
    e1.set_defaults(func=cmd_eval_eis)
    e2 = ev.add_parser("moa", help="measure of accuracy from an EIS count")
    e2.add_argument("--eis", type=int, required=True)
    e2.add_argument("--n", type=int, required=True)
    e2.add_argument("--out", default=None)
    e2.set_defaults(func=cmd_eval_moa)
    e3 = ev.add_parser("spread", help="relative deviation of an estimate")
    e3.add_argument("--estimate", type=float, required=True)
    e3.add_argument("--observed", type=float, required=True)
    e3.add_argument("--out", default=None)
    e3.set_defaults(func=cmd_eval_spread)

    pipe = top.add_parser("pipeline", help="full prediction pipeline").add_subparsers(
        dest="command", required=True
    )
    run = pipe.add_parser("run", help="topology + CA set -> metric, capacity and eval reports")
    run.add_argument("--topology", required=True)
    run.add_argument("--ca-set", required=True)
    run.add_argument("--scenario", default="r5c5")
    run.add_argument("--capacity-mbps", type=float, default=54.0)
    run.add_argument("--scale", type=float, default=1.0)
    run.add_argument("--ir-ratio", type=int, default=2)
    run.add_argument("--metrics", default=None, help="comma-separated subset of tid,cdal,cxls,calm")
    run.add_argument("--observed", default=None)
    run.add_argument("--out", default=None)
    run.add_argument("--seed", type=int, default=0)
    run.set_defaults(func=cmd_pipeline_run)

    serve = top.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MeshcalmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
