"""Command-line front end.

One master seed per invocation; every subcommand derives labeled
child seeds, so a single integer reproduces an entire experiment.
Exit codes: 0 success, 2 precondition/usage failure, 3 phase or
theorem failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import graphs, hamilton, linalg, matching, mixing, sampling
from .errors import (BadParameter, ConnectFailed, CoverageGap,
                     ExpanderLabError, NoConvergence,
                     PartitionRetriesExhausted, PerfectMatchingFailed,
                     RetryExhausted, SchemaMismatch, TheoremFalsified)
from .rng import derive_seed, generator

ARTIFACT_VERSION = 1

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_PHASE = 3
EXIT_VERIFICATION = 4

_PHASE_ERRORS = (TheoremFalsified, NoConvergence, RetryExhausted,
                 PartitionRetriesExhausted, ConnectFailed,
                 PerfectMatchingFailed, CoverageGap)


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out: Path, command: str, cfg: dict, seed: int,
                    inputs: list, outputs: list, started: float):
    manifest = {
        "command": command,
        "config": cfg,
        "seed": seed,
        "artifact_version": ARTIFACT_VERSION,
        "inputs": {str(p): _digest(Path(p)) for p in inputs},
        "outputs": [str(p) for p in outputs],
        "wall_time": round(time.time() - started, 3),
    }
    path = out.with_suffix(out.suffix + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_graph(path: str) -> graphs.Graph:
    return graphs.read_graph(path)


def _vertex_list(spec: str) -> list:
    return [int(tok) for tok in spec.replace(",", " ").split()]


def _cmd_gen(args) -> int:
    kind = args.kind
    if kind == "paley":
        g = graphs.gen_paley(int(args.params[0]))
    elif kind == "regular":
        n, d = int(args.params[0]), int(args.params[1])
        g = graphs.gen_random_regular(n, d, seed=args.seed)
    else:
        n = int(args.params[0]) if args.params else None
        g = graphs.gen_named(kind, n)
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges()))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_certify(args) -> int:
    g = _load_graph(args.graph)
    cert = graphs.certify_expander(g, seed=derive_seed(args.seed, "certify") % 2**31)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "d", "gamma_hat", "lambda_hat"])
        w.writerow([cert.n, cert.d, cert.gamma_hat, cert.lambda_hat])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(graphs.certificate_to_json(cert) + "\n", args.out)
    return EXIT_OK


def _cmd_eml(args) -> int:
    g = _load_graph(args.graph)
    cert = graphs.certify_expander(g, seed=derive_seed(args.seed, "certify") % 2**31)
    rng = generator(args.seed, "eml-samples")
    rows = []
    violated = 0
    for i in range(args.samples):
        sizes = rng.integers(1, max(2, g.n // 2), size=2)
        perm = rng.permutation(g.n)
        s = perm[:sizes[0]]
        t = perm[sizes[0]:sizes[0] + sizes[1]]
        audit = mixing.eml_graph_audit(cert, g, s, t)
        violated += not audit.holds
        rows.append({"sample": i, "size_s": int(sizes[0]),
                     "size_t": int(sizes[1]),
                     "count": audit.ordered_count,
                     "lower": audit.lower, "upper": audit.upper,
                     "holds": audit.holds})
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _emit(buf.getvalue(), args.out)
    else:
        _emit(json.dumps({"samples": args.samples, "violated": violated,
                          "rows": rows}, indent=2) + "\n", args.out)
    return EXIT_PHASE if violated else EXIT_OK


def _cmd_subsample(args) -> int:
    g = _load_graph(args.graph)
    cert = graphs.certify_expander(g, seed=derive_seed(args.seed, "certify") % 2**31)
    exp = sampling.induced_subgraph_experiment(
        g, cert, args.sigma, trials=args.trials, seed=args.seed,
        gamma_target=args.gamma_target)
    floor = 1 - g.n ** (-1 / 6)
    summary = exp.summary(floor)
    summary["schema_version"] = ARTIFACT_VERSION
    if args.out:
        out = Path(args.out)
        csv_path = out.with_suffix(".trials.csv")
        with csv_path.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["trial", "seed", "s2",
                                               "degrees_ok", "success"],
                               lineterminator="\n")
            w.writeheader()
            w.writerows(exp.csv_rows())
        out.write_text(json.dumps(summary, indent=2) + "\n")
    else:
        sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK if summary["pass"] else EXIT_PHASE


def _cmd_submatrix(args) -> int:
    m = linalg.read_matrix(args.matrix)
    est = sampling.submatrix_norm_experiment(
        m, args.mode, sigma=args.sigma, m=args.m, p=args.p,
        trials=args.trials, seed=args.seed)
    payload = {"schema_version": ARTIFACT_VERSION, "mode": args.mode,
               "p": est.p, "trials": est.trials,
               "empirical_lp": est.empirical_lp,
               "std_error": est.std_error,
               "theoretical_bound": est.theoretical_bound,
               "holds": est.holds}
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK if est.holds else EXIT_PHASE


def _cmd_match(args) -> int:
    g = _load_graph(args.graph)
    view = graphs.BipartiteView(parent=g, left=_vertex_list(args.left),
                                right=_vertex_list(args.right))
    if args.mode == "max":
        m = matching.max_matching(view)
    elif args.mode == "perfect":
        cert = graphs.certify_expander(g, seed=derive_seed(args.seed, "certify") % 2**31)
        seed = derive_seed(args.seed, "match-s2") % 2**31
        sub, _ = g.induced(view.left + view.right)
        s2 = linalg.singular_values_array(sub.spectral_matrix(), 2,
                                          seed=seed).values[1]
        m = matching.perfect_matching_expander(
            view, d=cert.d, gamma=args.gamma, lam=s2,
            gamma_cap=args.gamma_cap, ratio_cap=args.ratio_cap)
    else:
        raise BadParameter(f"unknown match mode {args.mode!r}")
    _emit(m.to_json() + "\n", args.out)
    return EXIT_OK


def _cmd_hamilton(args) -> int:
    g = _load_graph(args.graph)
    cfg_data = {}
    if args.config:
        cfg_data = json.loads(Path(args.config).read_text())
    cfg_data.setdefault("seed", args.seed)
    cfg = hamilton.PipelineConfig.from_dict(cfg_data)
    result = hamilton.hamilton_pipeline(g, cfg)
    trace_text = result.trace.to_json() + "\n"
    outputs = []
    if args.out:
        out = Path(args.out)
        out.write_text(trace_text)
        outputs.append(out)
        if result.cycle:
            cycle_path = out.with_suffix(".cycle.txt")
            cycle_path.write_text(result.cycle.to_line() + "\n")
            outputs.append(cycle_path)
    else:
        sys.stdout.write(trace_text)
        if result.cycle:
            sys.stdout.write(result.cycle.to_line() + "\n")
    return EXIT_OK if result.cycle else EXIT_PHASE


def _cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    cycle = hamilton.HamiltonCycle.from_line(Path(args.cycle).read_text())
    verdict = hamilton.verify_hamilton_cycle(g, cycle)
    sys.stdout.write(json.dumps({"ok": verdict.ok,
                                 "reason": verdict.reason}) + "\n")
    return EXIT_OK if verdict else EXIT_VERIFICATION


def _cmd_summarize(args) -> int:
    files = sorted(Path(args.directory).glob("*.json"))
    records = []
    versions = {}
    for path in files:
        if path.name.endswith(".manifest.json"):
            continue
        data = json.loads(path.read_text())
        if "schema_version" not in data or "success_fraction" not in data:
            continue
        versions[str(path)] = data["schema_version"]
        records.append((path, data))
    if not records:
        raise SchemaMismatch(f"no experiment summaries in {args.directory}")
    if len(set(versions.values())) > 1:
        raise SchemaMismatch(f"mixed schema versions: {versions}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sigma", "success_fraction", "floor", "pass"])
    for _, data in records:
        w.writerow([data["params"]["sigma"], data["success_fraction"],
                    data["floor"], data["pass"]])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expanderlab",
        description="Spectral-expander laboratory: certificates, mixing "
                    "audits, sampling experiments, matchings, and a "
                    "constructive Hamilton-cycle pipeline.")
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed; all randomness derives from it")
    parser.add_argument("--config", help="JSON config file (hamilton)")
    parser.add_argument("--out", help="output file path")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("kind", choices=["paley", "regular", "complete", "cycle",
                                    "complete_bipartite", "petersen"])
    p.add_argument("params", nargs="*", help="kind-specific sizes")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("certify", help="spectral expander certificate")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("eml", help="random mixing-window audits")
    p.add_argument("--graph", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=_cmd_eml)

    p = sub.add_parser("subsample", help="random induced-subgraph experiment")
    p.add_argument("--graph", required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--gamma-target", type=float, default=0.05)
    p.set_defaults(func=_cmd_subsample)

    p = sub.add_parser("submatrix", help="random submatrix norm experiment")
    p.add_argument("--matrix", required=True)
    p.add_argument("--mode", choices=["two_sided_bernoulli",
                                      "symmetric_uniform"], required=True)
    p.add_argument("--sigma", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=_cmd_submatrix)

    p = sub.add_parser("match", help="bipartite matchings")
    p.add_argument("--graph", required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--mode", choices=["max", "perfect"], default="max")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--gamma-cap", type=float, default=1.2)
    p.add_argument("--ratio-cap", type=float, default=0.2)
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("hamilton", help="run the Hamilton-cycle pipeline")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_hamilton)

    p = sub.add_parser("verify", help="verify a cycle file against a graph")
    p.add_argument("graph")
    p.add_argument("cycle")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("summarize", help="collect experiment summaries to CSV")
    p.add_argument("directory")
    p.set_defaults(func=_cmd_summarize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PRECONDITION if exc.code else EXIT_OK
    started = time.time()
    try:
        code = args.func(args)
    except _PHASE_ERRORS as exc:
        sys.stderr.write(f"phase failure: {exc}\n")
        return EXIT_PHASE
    except (ExpanderLabError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PRECONDITION
    if args.out and Path(args.out).exists():
        inputs = [p for p in (getattr(args, "graph", None),
                              getattr(args, "matrix", None),
                              getattr(args, "cycle", None),
                              args.config)
                  if p and Path(p).exists()]
        cfg = {k: v for k, v in vars(args).items()
               if k != "func" and not callable(v)}
        _write_manifest(Path(args.out), args.command, cfg, args.seed,
                        inputs, [args.out], started)
    return code


if __name__ == "__main__":
    sys.exit(main())
