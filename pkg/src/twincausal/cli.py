"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or graph error, 3 query not
identified (from any subcommand that needs an identified query).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bayes.abc import abc_nonidentifiable
from .bayes.cpts import cpts_from_json, forward_sample
from .convergence_lab import estimate_both, rows_to_csv, run_convergence
from .data_io import read_counts, serialize_counts
from .do_engine import identify
from .errors import NotIdentifiedError, TwinCausalError
from .graph_dsl import read_graph
from .twin_builder import causal_bayes_construct, twin_to_dot, twin_to_json

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NOT_IDENTIFIED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _assignment(text: str) -> tuple[str, int | None]:
    name, sep, state = text.partition("=")
    if not name:
        raise argparse.ArgumentTypeError(f"expected NAME or NAME=STATE, got {text!r}")
    if not sep:
        return name, None
    try:
        return name, int(state)
    except ValueError:
        raise argparse.ArgumentTypeError(f"state must be an integer in {text!r}") from None


def _grid(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated integers: {text!r}") from None
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("grid needs non-negative sample sizes")
    return values


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twincausal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("identify", help="express P(y|do(t)) over the observational joint")
    p.add_argument("--graph", required=True, help=".cg or .json graph file")
    p.add_argument("--do", required=True, type=_assignment, metavar="T[=t]")
    p.add_argument("--outcome", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("construct", help="build the twin PGM for do(T=t)")
    p.add_argument("--graph", required=True)
    p.add_argument("--do", required=True, type=_assignment, metavar="T=t")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("infer", help="plug-in and Bayesian estimates of P(y|do(t))")
    p.add_argument("--graph", required=True)
    p.add_argument("--data", required=True, help="counts CSV")
    p.add_argument("--do", required=True, type=_assignment, metavar="T[=t]")
    p.add_argument("--outcome", required=True)
    p.add_argument("--prior", type=_positive(float), default=1.0, help="Dirichlet prior strength")
    p.add_argument("--method", choices=("auto", "abc"), default="auto")
    p.add_argument("--latent-card", type=_positive(int), default=2)
    p.add_argument("--epsilon", type=_positive(float), default=0.01)
    p.add_argument("--samples", type=_positive(int), default=1_000_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("simulate", help="forward-sample a counts table")
    p.add_argument("--graph", required=True)
    p.add_argument("--cpts", required=True, help="CPT JSON")
    p.add_argument("--m", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("converge", help="compare both estimators against the truth")
    p.add_argument("--graph", required=True)
    p.add_argument("--cpts", required=True)
    p.add_argument("--grid", required=True, type=_grid)
    p.add_argument("--replicates", required=True, type=_positive(int))
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--do", type=_assignment, default=("T", None), metavar="T")
    p.add_argument("--outcome", default="Y")
    p.add_argument("--prior", type=_positive(float), default=1.0)
    p.add_argument("--out", help="output path (default stdout)")
    return parser


def _write(text: str, path: str | None, stdout) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _cmd_identify(args, stdout, stderr):
    graph = read_graph(args.graph)
    treatment, _ = args.do
    result = identify(graph, treatment, args.outcome)
    if args.format == "json":
        payload = {"identified": result.identified}
        if result.identified:
            payload.update(method=result.method, estimand=str(result.estimand),
                           tree=result.estimand.to_dict(),
                           derivation=[str(r) for r in result.derivation])
        else:
            payload["reason"] = result.reason
        stdout.write(_dumps(payload))
    elif result.identified:
        stdout.write(str(result.estimand) + "\n")
    else:
        stdout.write(f"NOT IDENTIFIED: {result.reason}\n")
    return EXIT_OK if result.identified else EXIT_NOT_IDENTIFIED


def _cmd_construct(args, stdout, stderr):
    graph = read_graph(args.graph)
    treatment, state = args.do
    if state is None:
        raise UsageError("construct: --do needs a state, e.g. T=1")
    twin = causal_bayes_construct(graph, treatment, state)
    text = twin_to_dot(twin) if args.format == "dot" else twin_to_json(twin) + "\n"
    _write(text, args.out, stdout)
    return EXIT_OK


def _cmd_infer(args, stdout, stderr):
    graph = read_graph(args.graph)
    table = read_counts(args.data, graph)
    treatment, state = args.do
    graph.check([treatment, args.outcome])
    states = [state] if state is not None else list(range(graph.card(treatment)))

    if args.method == "abc":
        if args.seed is None:
            raise UsageError("infer --method abc requires --seed")
        contrast = abc_nonidentifiable(
            table.marginalize([treatment, args.outcome]), args.latent_card, args.samples,
            args.epsilon, args.seed, treatment, args.outcome,
        )
        card_y = graph.card(args.outcome)
        results = [{
            "t_star": t_star,
            "method": "abc",
            "estimand": None,
            "do_plugin": None,
            "bayes_predictive": {str(y): contrast.mean(t_star, y) for y in range(card_y)},
            "interval": {str(y): list(contrast.interval(t_star, y)) for y in range(card_y)},
            "acceptance_rate": contrast.acceptance_rate,
        } for t_star in states]
        payload = {"treatment": treatment, "outcome": args.outcome, "method": "abc",
                   "latent_card": args.latent_card, "epsilon": args.epsilon,
                   "n_samples": args.samples, "n_accepted": contrast.n_accepted,
                   "seed": args.seed, "results": results}
        _write(_dumps(payload), args.out, stdout)
        return EXIT_OK

    ident = identify(graph, treatment, args.outcome)
    if not ident.identified:
        stderr.write(
            f"NOT IDENTIFIED: {ident.reason}; try --method abc for a partial answer\n"
        )
        return EXIT_NOT_IDENTIFIED
    results = []
    for t_star in states:
        plugin, bayes = estimate_both(graph, table, treatment, args.outcome, t_star,
                                      args.prior, ident)
        results.append({
            "t_star": t_star,
            "method": ident.method,
            "estimand": str(ident.estimand),
            "do_plugin": {str(y): (None if p != p else float(p)) for y, p in enumerate(plugin)},
            "bayes_predictive": {str(y): float(b) for y, b in enumerate(bayes)},
        })
    payload = {"treatment": treatment, "outcome": args.outcome, "prior": args.prior,
               "results": results}
    _write(_dumps(payload), args.out, stdout)
    return EXIT_OK


def _read_cpts(path, graph):
    with open(path, encoding="utf-8") as fh:
        return cpts_from_json(json.load(fh), graph)


def _cmd_simulate(args, stdout, stderr):
    graph = read_graph(args.graph)
    if args.m < 0:
        raise UsageError("simulate: --m must be non-negative")
    table = forward_sample(graph, _read_cpts(args.cpts, graph), args.m, args.seed)
    _write(serialize_counts(table), args.out, stdout)
    return EXIT_OK


def _cmd_converge(args, stdout, stderr):
    graph = read_graph(args.graph)
    treatment, _ = args.do
    ident = identify(graph, treatment, args.outcome)
    if not ident.identified:
        stderr.write(f"NOT IDENTIFIED: {ident.reason}; see the ABC demonstration "
                     "(infer --method abc)\n")
        return EXIT_NOT_IDENTIFIED
    rows = run_convergence(graph, _read_cpts(args.cpts, graph), args.grid, args.replicates,
                           args.seed, treatment, args.outcome, prior_strength=args.prior)
    _write(rows_to_csv(rows), args.out, stdout)
    return EXIT_OK


COMMANDS = {
    "identify": _cmd_identify,
    "construct": _cmd_construct,
    "infer": _cmd_infer,
    "simulate": _cmd_simulate,
    "converge": _cmd_converge,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, stdout, stderr)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except NotIdentifiedError as exc:
        stderr.write(f"NOT IDENTIFIED: {exc}\n")
        return EXIT_NOT_IDENTIFIED
    except (TwinCausalError, ValueError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_DATA


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
