"""Command line entry point: ``estgraph <command> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on
bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .graph import write_edge_list
from .harness.experiments import (
    ALGORITHMS,
    ExperimentConfig,
    load_graph,
    report_json,
    report_text,
    run_experiment,
)
from .harness.generators import MODELS
from .harness.verify import ArtifactMismatch, verify
from .hopset.build import HopsetParams, hopset_build
from .hopset.oracle import (
    OracleIndex,
    _hopset_from_dict,
    _hopset_to_dict,
    build_oracle,
    index_from_dict,
    query_many,
)
from .spanner import Spanner, SpannerParams, build_spanner
from .sssp import is_unreachable

log = logging.getLogger("estgraph")


def _value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _graph_spec(a) -> dict:
    if a.graph:
        return {"file": a.graph}
    if not a.model:
        raise SystemExit("need --graph FILE or --model NAME")
    spec = {"model": a.model, "seed": a.graph_seed}
    for key in ("n", "m", "rows", "cols", "degree"):
        v = getattr(a, key)
        if v is not None:
            spec[key] = v
    if a.weights:
        spec["weights"] = list(a.weights)
    return spec


def _add_graph_args(p: argparse.ArgumentParser):
    src = p.add_argument_group("graph")
    src.add_argument("--graph", metavar="FILE", help="edge list file")
    src.add_argument("--model", choices=MODELS)
    src.add_argument("--n", type=int)
    src.add_argument("--m", type=int)
    src.add_argument("--rows", type=int)
    src.add_argument("--cols", type=int)
    src.add_argument("--degree", type=float)
    src.add_argument("--weights", type=float, nargs=2, metavar=("LO", "HI"),
                     help="draw weights log-uniformly from [LO, HI]")
    src.add_argument("--graph-seed", type=int, default=0)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--format", choices=("json", "text"), default="json")


def _add_experiment_args(p: argparse.ArgumentParser):
    _add_graph_args(p)
    _add_common(p)
    p.add_argument("--seeds", type=int, default=1, help="number of seeded runs")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="extra parameter; VALUE is parsed as JSON when possible")


def _params(a, **explicit) -> dict:
    out = {k: v for k, v in explicit.items() if v is not None}
    for item in a.param:
        if "=" not in item:
            raise SystemExit(f"bad --param {item!r}, expected KEY=VALUE")
        k, v = item.split("=", 1)
        out[k] = _value(v)
    return out


def _emit(a, text: str):
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)


def _run(a, algorithm: str, params: dict) -> int:
    cfg = ExperimentConfig(algorithm, _graph_spec(a), params, a.seeds, a.seed)
    report = run_experiment(cfg)
    _emit(a, report_json(report) if a.format == "json" else report_text(report))
    return 0 if report["passed"] else 1


def cmd_gen(a) -> int:
    g = load_graph(_graph_spec(a), a.graph_seed)
    _emit(a, write_edge_list(g))
    return 0


def cmd_cluster(a) -> int:
    ball = {"radius": a.ball_radius, "j": a.ball_j} if a.ball_radius is not None else None
    return _run(a, "cluster", _params(a, beta=a.beta, mode=a.mode, confidence=a.confidence, ball=ball))


def cmd_spanner(a) -> int:
    if a.save:
        g = load_graph(_graph_spec(a), a.graph_seed)
        sp = build_spanner(g, SpannerParams(k=a.k, seed=a.seed))
        Path(a.save).write_text(sp.to_json())
    algo = "spanner-weighted" if a.weighted else "spanner"
    return _run(a, algo, _params(a, k=a.k))


def cmd_hopset(a) -> int:
    explicit = dict(epsilon=a.epsilon, delta=a.delta, gamma1=a.gamma1, gamma2=a.gamma2,
                    repetitions=a.repetitions, pairs=a.pairs)
    if a.save:
        g = load_graph(_graph_spec(a), a.graph_seed)
        p = HopsetParams(**{k: v for k, v in explicit.items() if v is not None and k != "pairs"})
        hs = hopset_build(g, p, seed=a.seed)
        Path(a.save).write_text(json.dumps({"format": "estgraph-hopset", "version": 1,
                                            "hopset": _hopset_to_dict(hs)}, sort_keys=True))
    return _run(a, "hopset", _params(a, **explicit))


def cmd_experiment(a) -> int:
    cfg_dict = json.loads(Path(a.config).read_text())
    cfg = ExperimentConfig.from_dict(cfg_dict)
    report = run_experiment(cfg)
    _emit(a, report_json(report) if a.format == "json" else report_text(report))
    return 0 if report["passed"] else 1


def cmd_oracle_build(a) -> int:
    g = load_graph(_graph_spec(a), a.graph_seed)
    p = HopsetParams(epsilon=a.epsilon, weighted=True, repetitions=a.repetitions, seed=a.seed)
    o = build_oracle(g, a.epsilon, a.eta, p)
    if not a.out:
        raise SystemExit("oracle build needs --out FILE")
    o.save(a.out)
    log.info("wrote %d bundles, %d shortcuts", len(o.bundles), o.shortcut_count())
    return 0


def cmd_oracle_query(a) -> int:
    g = load_graph(_graph_spec(a), a.graph_seed)
    o = OracleIndex.load(a.index, g)
    pairs = [tuple(p) for p in a.pair]
    res = query_many(o, pairs)
    rows = []
    for (s, t), r in zip(pairs, res):
        rows.append({"s": s, "t": t, "value": None if is_unreachable(r.value) else r.value,
                     "level": r.level, "scale": r.scale, "hops": r.hops, "fallback": r.fallback})
    if a.format == "json":
        _emit(a, json.dumps({"queries": rows}, sort_keys=True, indent=1) + "\n")
    else:
        _emit(a, "".join(f"{r['s']} {r['t']} {r['value'] if r['value'] is not None else 'inf'}\n"
                         for r in rows))
    return 0


def _load_artifact(path: str, g):
    d = json.loads(Path(path).read_text())
    if d.get("format") == "estgraph-oracle":
        return index_from_dict(d, g)
    if d.get("format") == "estgraph-hopset":
        return _hopset_from_dict(d["hopset"])
    if "edges" in d and "levels" in d:
        return Spanner.from_dict(d)
    raise SystemExit(f"{path}: unrecognized artifact")


def cmd_verify(a) -> int:
    g = load_graph(_graph_spec(a), a.graph_seed)
    art = _load_artifact(a.artifact, g)
    rep = verify(g, art, a.samples, a.seed, a.hops)
    d = rep.to_dict()
    if a.format == "json":
        _emit(a, json.dumps(d, sort_keys=True, indent=1) + "\n")
    else:
        _emit(a, f"{rep.kind}: samples={rep.samples} max_ratio={rep.max_ratio:.6g}"
                 f" mean_ratio={rep.ratio_summary.get('mean', float('nan')):.6g}"
                 + (f" within={rep.within:.4f}" if rep.within is not None else "") + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="estgraph", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    _add_graph_args(p)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cluster", help="clustering experiment")
    _add_experiment_args(p)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--mode", choices=("exact", "rounds"), default="exact")
    p.add_argument("--confidence", type=float)
    p.add_argument("--ball-radius", type=float)
    p.add_argument("--ball-j", type=int, default=3)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("spanner", help="spanner experiment")
    _add_experiment_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--weighted", action="store_true", help="use the bucketed weighted construction")
    p.add_argument("--save", metavar="FILE", help="also write the spanner built with --seed")
    p.set_defaults(func=cmd_spanner)

    p = sub.add_parser("hopset", help="hopset experiment")
    _add_experiment_args(p)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--gamma1", type=float)
    p.add_argument("--gamma2", type=float)
    p.add_argument("--repetitions", type=int)
    p.add_argument("--pairs", type=int)
    p.add_argument("--save", metavar="FILE", help="also write the hopset built with --seed")
    p.set_defaults(func=cmd_hopset)

    p = sub.add_parser("experiment", help=f"run a JSON config; algorithm in {', '.join(ALGORITHMS)}")
    p.add_argument("config")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("oracle", help="approximate distance oracle")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    b = osub.add_parser("build", help="build and save an index")
    _add_graph_args(b)
    _add_common(b)
    b.add_argument("--epsilon", type=float, default=0.5)
    b.add_argument("--eta", type=float, default=0.5)
    b.add_argument("--repetitions", type=int, default=3)
    b.set_defaults(func=cmd_oracle_build)
    q = osub.add_parser("query", help="answer queries from a saved index")
    _add_graph_args(q)
    _add_common(q)
    q.add_argument("--index", required=True, metavar="FILE")
    q.add_argument("--pair", type=int, nargs=2, action="append", required=True, metavar=("S", "T"))
    q.set_defaults(func=cmd_oracle_query)

    p = sub.add_parser("verify", help="check a saved artifact against Dijkstra")
    _add_graph_args(p)
    _add_common(p)
    p.add_argument("--artifact", required=True, metavar="FILE")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--hops", type=int, help="fixed hop budget for hopsets")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return a.func(a)
    except ArtifactMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
