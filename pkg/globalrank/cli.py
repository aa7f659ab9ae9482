"""Command-line interface.

Exit codes: 0 on success, 1 on usage or parameter errors, 2 on data errors
(unparsable input, disconnected graph, degenerate degree distribution,
failed download).
"""

import argparse
import logging
import sys
from contextlib import contextmanager
from typing import List, Optional

from . import __version__
from .datasets import KNOWN_DATASETS, DatasetClient
from .estimator import METHODS, RankEstimator
from .exceptions import (
    ConfigurationError,
    DataError,
    GlobalRankException,
    NodeNotFoundError,
    ParameterError,
)
from .graph import generate_ba, generate_er, load_edge_list_bytes, write_edge_list
from .harness import (
    ExperimentConfig,
    closeness_curve,
    emit_csv,
    emit_curve_csv,
    experiment_metadata,
    resolve_workers,
    run_experiment,
)
from .oracles import METRICS, closeness_rank, degree_rank
from .params import ProvidedParameters

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    verbosity.add_argument("--debug", action="store_true", help="log debug diagnostics")
    return common


def _parameter_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("provided network parameters (all four or none)")
    group.add_argument("--n", dest="param_n", type=int, default=None, help="network size")
    group.add_argument("--dmin", type=int, default=None, help="minimum degree")
    group.add_argument("--dmax", type=int, default=None, help="maximum degree")
    group.add_argument("--davg", type=float, default=None, help="average degree")


def build_parser() -> ArgumentParser:
    """Build the argument parser with all subcommands."""
    common = _common_flags()
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = ArgumentParser(
        prog="globalrank",
        description="Estimate global centrality ranks of nodes in large networks.",
        formatter_class=fmt,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("generate", parents=[common], formatter_class=fmt,
                       help="generate a synthetic graph")
    p.add_argument("--model", choices=("ba", "er"), required=True, help="graph model")
    p.add_argument("--n", type=int, required=True, help="number of nodes")
    p.add_argument("--m-attach", type=int, default=5, help="edges per new node (ba)")
    p.add_argument("--p", type=float, default=0.05, help="edge probability (er)")
    p.add_argument("-o", "--output", required=True, help="edge list file to write")

    p = sub.add_parser("exact-rank", parents=[common], formatter_class=fmt,
                       help="exact rank of one node")
    p.add_argument("--graph", required=True, help="edge list file")
    p.add_argument("--metric", choices=METRICS, default="degree", help="centrality metric")
    p.add_argument("--node", required=True, help="node label")
    p.add_argument("--workers", type=int, default=None, help="BFS threads (default: $RANK_THREADS or 1)")

    p = sub.add_parser("estimate", parents=[common], formatter_class=fmt,
                       help="estimated rank of one node")
    p.add_argument("--method", choices=METHODS, required=True, help="estimation method")
    p.add_argument("--graph", required=True, help="edge list file")
    p.add_argument("--node", required=True, help="node label")
    p.add_argument("--sample-frac", type=float, default=RankEstimator.DEFAULT_SAMPLE_FRAC,
                   help="sample size as a fraction of n")
    p.add_argument("--burn-in", type=int, default=RankEstimator.DEFAULT_BURN_IN,
                   help="discarded walk steps")
    p.add_argument("--slope", type=float, default=RankEstimator.DEFAULT_SLOPE,
                   help="logistic slope for closeness-sigmoid")
    p.add_argument("--round", action="store_true", help="print the rank as an integer")
    _parameter_flags(p)

    p = sub.add_parser("evaluate", parents=[common], formatter_class=fmt,
                       help="error versus actual rank over seeded iterations")
    p.add_argument("--methods", default="us,mh,rw", help="comma-separated methods")
    p.add_argument("--graph", required=True, help="edge list file")
    p.add_argument("--iterations", type=int, default=20, help="iterations per method")
    p.add_argument("--sample-frac", type=float, default=0.01, help="sample size as a fraction of n")
    p.add_argument("--burn-in", type=int, default=100, help="discarded walk steps")
    p.add_argument("--slope", type=float, default=13.0, help="logistic slope for closeness-sigmoid")
    p.add_argument("--eval-nodes", type=int, default=None,
                   help="evaluate this many rank-stratified nodes (default: all)")
    p.add_argument("--workers", type=int, default=None, help="threads (default: $RANK_THREADS or 1)")
    p.add_argument("-o", "--output", default=None, help="CSV file (default: stdout)")
    _parameter_flags(p)

    p = sub.add_parser("curve", parents=[common], formatter_class=fmt,
                       help="reverse closeness rank curve, exact and estimated")
    p.add_argument("--graph", required=True, help="edge list file")
    p.add_argument("--slope", type=float, default=13.0, help="logistic slope")
    p.add_argument("--workers", type=int, default=None, help="BFS threads (default: $RANK_THREADS or 1)")
    p.add_argument("-o", "--output", default=None, help="CSV file (default: stdout)")

    p = sub.add_parser("fetch", parents=[common], formatter_class=fmt,
                       help="download a public evaluation network")
    p.add_argument("--dataset", choices=sorted(KNOWN_DATASETS), required=True, help="dataset name")
    p.add_argument("--host", default=None,
                   help="download host (default: $GLOBALRANK_DATA_HOST or the SNAP mirror)")
    p.add_argument("-o", "--output", required=True, help="file to write")

    return parser


_handler: Optional[logging.Handler] = None


def _configure_logging(args) -> None:
    global _handler
    if args.debug:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    package = logging.getLogger("globalrank")
    if _handler is not None:
        package.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
    package.addHandler(_handler)
    package.setLevel(level)


def _read_graph(path: str):
    try:
        with open(path, "rb") as fh:
            payload = fh.read()
    except OSError as e:
        raise DataError(f"Cannot read graph {path}: {e.strerror}")
    return load_edge_list_bytes(payload)


@contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        yield fh


def _provided_params(args) -> Optional[ProvidedParameters]:
    values = (args.param_n, args.dmin, args.dmax, args.davg)
    if all(v is None for v in values):
        return None
    if any(v is None for v in values):
        raise ParameterError("--n, --dmin, --dmax and --davg must be given together")
    return ProvidedParameters(args.param_n, args.dmin, args.dmax, args.davg)


def cmd_generate(args) -> None:
    if args.model == "ba":
        graph = generate_ba(args.n, args.m_attach, seed=args.seed)
    else:
        graph = generate_er(args.n, args.p, seed=args.seed)
    with _output(args.output) as fh:
        write_edge_list(graph, fh)
    logger.info("Wrote %s graph n=%d m=%d to %s", args.model, graph.n, graph.m, args.output)


def cmd_exact_rank(args) -> None:
    graph = _read_graph(args.graph)
    u = graph.node_id(args.node)
    if args.metric == "degree":
        result = degree_rank(graph, u)
    else:
        result = closeness_rank(graph, u, workers=resolve_workers(args.workers))
    print(f"node={args.node} method=exact-{args.metric} rank={result.rank}")


def cmd_estimate(args) -> None:
    graph = _read_graph(args.graph)
    estimator = RankEstimator(
        graph,
        params=_provided_params(args),
        sample_frac=args.sample_frac,
        burn_in=args.burn_in,
        slope=args.slope,
        seed=args.seed,
        debug=args.debug,
    )
    result = estimator.estimate_label(args.node, args.method)
    rank = str(result.rounded()) if args.round else f"{result.value:.6f}"
    print(f"node={args.node} method={args.method} rank={rank}")


def cmd_evaluate(args) -> None:
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    cfg = ExperimentConfig(
        methods=methods,
        sample_frac=args.sample_frac,
        iterations=args.iterations,
        base_seed=args.seed,
        eval_nodes=args.eval_nodes,
        burn_in=args.burn_in,
        slope=args.slope,
        workers=args.workers,
    )
    graph = _read_graph(args.graph)
    params = _provided_params(args)
    records = run_experiment(graph, cfg, params=params)
    metadata = experiment_metadata(graph, cfg, params)
    with _output(args.output) as fh:
        emit_csv(records, fh, methods=cfg.methods, metadata=metadata)
    logger.info("Wrote %d records", len(records))


def cmd_curve(args) -> None:
    graph = _read_graph(args.graph)
    points = closeness_curve(graph, slope=args.slope, workers=args.workers)
    with _output(args.output) as fh:
        emit_curve_csv(points, fh, metadata={"slope": f"{args.slope:g}", "n": str(len(points))})


def cmd_fetch(args) -> None:
    client = DatasetClient(host=args.host, debug=args.debug)
    client.download(args.dataset, args.output)


COMMANDS = {
    "generate": cmd_generate,
    "exact-rank": cmd_exact_rank,
    "estimate": cmd_estimate,
    "evaluate": cmd_evaluate,
    "curve": cmd_curve,
    "fetch": cmd_fetch,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _configure_logging(args)

    try:
        COMMANDS[args.command](args)
    except (ParameterError, NodeNotFoundError, ConfigurationError) as e:
        logger.error(e.message)
        return EXIT_USAGE
    except GlobalRankException as e:
        logger.error(e.message)
        return EXIT_DATA
    return EXIT_OK


def main_entry() -> None:
    sys.exit(main())
