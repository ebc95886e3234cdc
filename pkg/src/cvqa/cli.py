"""Command-line interface.

Subcommands: gen-graph, esop, brute-force, solve, experiment, stats.
Exit codes: 0 on success, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ansatz, esop, experiment, hamiltonians, simulator, vqa
from .graphs import ConfigError, Graph, brute_force_mis, brute_force_mvc, generate_erdos_renyi


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_graph(path: str) -> Graph:
    try:
        with open(path) as fh:
            return Graph.from_json(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read graph file {path}: {exc}") from exc


def _cmd_gen_graph(args) -> int:
    g = generate_erdos_renyi(args.n, args.p, args.seed)
    _write(g.to_json(), args.output)
    return 0


def _cmd_esop(args) -> int:
    g = _load_graph(args.graph)
    expr = esop.constraint_esop(args.problem, g, minimize=not args.raw)
    if args.resources:
        est = simulator.resource_estimate(expr)
        _write(json.dumps(est, sort_keys=True) + "\n", args.output)
    else:
        _write(expr.to_text(), args.output)
    return 0


def _cmd_brute_force(args) -> int:
    g = _load_graph(args.graph)
    res = brute_force_mvc(g) if args.problem == "MVC" else brute_force_mis(g)
    out = {
        "problem": args.problem,
        "n": g.n,
        "optimal_value": res.optimal_value,
        "optimal_set": sorted(res.optimal_set),
        "feasible_count": len(res.feasible_set),
    }
    if args.full:
        out["feasible_set"] = sorted(res.feasible_set)
    _write(json.dumps(out, sort_keys=True, indent=1) + "\n", args.output)
    return 0


def _cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    method = ansatz.PENALTY if args.method == "penalty" else ansatz.FEASIBILITY
    lam = args.lam
    if method == ansatz.PENALTY and lam is None:
        raise ConfigError("--lambda is required for the penalty method")
    if method == ansatz.FEASIBILITY and lam is not None:
        raise ConfigError("--lambda only applies to the penalty method")
    spec = ansatz.make_ansatz(args.problem, g, method, args.depth, lam=lam)
    loss = vqa.make_loss(args.problem, g, method, lam=lam)
    seeds = [args.seed + k for k in range(args.starts)]
    records = vqa.multistart(spec, loss, seeds, args.budget)
    rows = [r.to_json_dict() for r in records]
    if args.postselect:
        for rec, row in zip(records, rows):
            state = ansatz.build_state(spec, list(rec.theta))
            row["accuracy_postselected"] = vqa.accuracy(
                state, args.problem, g, method, postselect=True
            )
    best = max(range(len(records)), key=lambda i: records[i].accuracy)
    out = {
        "problem": args.problem,
        "method": method,
        "n": g.n,
        "depth": args.depth,
        "lambda": lam,
        "param_count": ansatz.param_count(spec),
        "records": rows,
        "best_start": rows[best],
    }
    if method == ansatz.FEASIBILITY:
        out["oracle_resources"] = simulator.resource_estimate(spec.expr)
    _write(json.dumps(out, sort_keys=True, indent=1) + "\n", args.output)
    best_theta = list(records[best].theta)
    if args.dump_circuit:
        _write(
            simulator.format_circuit(ansatz.build_circuit(spec, best_theta)),
            args.dump_circuit,
        )
    if args.dump_hamiltonian:
        ham = {
            "objective": hamiltonians.objective(args.problem, g).to_json_dict(),
            "constraint": hamiltonians.constraint(args.problem, g).to_json_dict(),
            "penalty": None
            if lam is None
            else hamiltonians.penalty_hamiltonian(
                hamiltonians.objective(args.problem, g),
                hamiltonians.constraint(args.problem, g),
                lam,
            ).to_json_dict(),
        }
        _write(json.dumps(ham, sort_keys=True, indent=1) + "\n", args.dump_hamiltonian)
    if args.save_params:
        ansatz.save_params(spec, best_theta, args.save_params)
    return 0


def _cmd_experiment(args) -> int:
    cfg = experiment.ExperimentConfig.from_file(args.config)
    if args.workers is not None:
        cfg.workers = args.workers
    table = experiment.run_experiment(cfg)
    json_path, csv_path = experiment.emit_results(table, args.out)
    sys.stdout.write(f"wrote {json_path} and {csv_path}\n")
    return 0


def _cmd_stats(args) -> int:
    try:
        with open(args.results) as fh:
            table = experiment.StatsTable.from_json(fh.read())
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read results file {args.results}: {exc}") from exc
    stats = experiment.recompute_stats(table)
    _write(json.dumps(stats, sort_keys=True, indent=1) + "\n", args.output)
    return 0


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="cvqa",
        description="Constrained-optimization variational solver with a "
        "feasibility-certifying oracle and a penalty baseline.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="sample a random problem instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_gen_graph)

    p = sub.add_parser("esop", help="compile a constraint to ESOP form")
    p.add_argument("--graph", required=True)
    p.add_argument("--problem", choices=("MVC", "MIS"), required=True)
    p.add_argument("--raw", action="store_true", help="skip cube minimization")
    p.add_argument("--resources", action="store_true", help="print the gate-cost estimate")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_esop)

    p = sub.add_parser("brute-force", help="exact reference solution")
    p.add_argument("--graph", required=True)
    p.add_argument("--problem", choices=("MVC", "MIS"), required=True)
    p.add_argument("--full", action="store_true", help="include the feasible set")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_brute_force)

    p = sub.add_parser("solve", help="optimize one instance with one method")
    p.add_argument("--graph", required=True)
    p.add_argument("--problem", choices=("MVC", "MIS"), required=True)
    p.add_argument("--method", choices=("feasibility", "penalty"), default="feasibility")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--starts", type=int, default=6)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--postselect", action="store_true",
                   help="also report accuracy conditioned on the ancilla flag")
    p.add_argument("--dump-circuit", default=None, metavar="FILE")
    p.add_argument("--dump-hamiltonian", default=None, metavar="FILE")
    p.add_argument("--save-params", default=None, metavar="FILE")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("experiment", help="run a configured sweep or comparison")
    p.add_argument("--config", required=True, help="TOML or JSON config file")
    p.add_argument("--out", default="results")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("stats", help="recompute statistics from a results file")
    p.add_argument("--results", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_stats)

    return top


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
