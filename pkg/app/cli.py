"""
Command line entry point.

    python main.py feasible --builtin c24
    python main.py count --builtin c26 --workers 8 --format csv
    python main.py enumerate --builtin c24 --sp 57 --sh 108 --sorted --out runs/c24
    python main.py pca --builtin c24 --sp 57 --sh 108 --store-solutions --out runs/c24
    python main.py pca --builtin c24 --all-pairs --out runs/c24-pca
    python main.py scan --from 20 --to 200 --format csv

Exit codes: 0 success, 1 usage/parse error, 2 validation failure,
3 infeasible request, 4 node budget exceeded (partial output).
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from app import config
from app.middleware.metrics import RunMetrics
from app.routers.command_router import CommandContext, router
from app.schemas.magic import RunManifest
from magic.builtin_graphs import BUILTIN_FACES
from magic.errors import EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, MagicError, UsageError

logger = logging.getLogger(__name__)

PAIR_COMMANDS = ("enumerate", "orbits", "pca")
TABLE_COMMANDS = ("feasible", "count", "scan")
GRAPHLESS_COMMANDS = ("scan",)
SOLUTION_COMMANDS = ("orbits", "pca")


class _Parser(argparse.ArgumentParser):
    """Reports bad flags as UsageError instead of exiting with argparse's code 2."""

    def error(self, message: str) -> None:
        raise UsageError(message)


def _common_flags(graph_source: bool = True) -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    if graph_source:
        _graph_flags(common)
    common.add_argument("--out", type=Path, metavar="PATH", help="directory for artifacts and run-manifest.json")
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: machine parallelism)")
    common.add_argument("--node-budget", type=int, default=None, help="visited-node cap per pair")
    common.add_argument("--verbose", action="store_true", help="debug logging")
    return common


def _graph_flags(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--builtin", choices=[name.lower() for name in BUILTIN_FACES],
                        type=str.lower, help="embedded fullerene")
    source.add_argument("--graph", type=Path, metavar="FILE", help="JSON graph file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fullerene-magic",
                     description="Magical configurations on fullerene graphs.")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    with_graph, without_graph = _common_flags(), _common_flags(graph_source=False)
    for name, summary in router.summaries.items():
        common = without_graph if name in GRAPHLESS_COMMANDS else with_graph
        sub = subparsers.add_parser(name, parents=[common], help=summary, description=summary)
        if name in PAIR_COMMANDS:
            sub.add_argument("--sp", type=int, help="pentagon sum S_p")
            sub.add_argument("--sh", type=int, help="hexagon sum S_h")
        if name in TABLE_COMMANDS:
            sub.add_argument("--format", choices=["json", "csv"], default="json")
        if name == "enumerate":
            sub.add_argument("--sorted", action="store_true", help="lexicographic output order")
        if name in SOLUTION_COMMANDS:
            sub.add_argument("--store-solutions", action="store_true",
                             help="enumerate inline and keep the solutions")
            sub.add_argument("--input", type=Path, metavar="FILE", help="streamed solution file")
        if name == "pca":
            sub.add_argument("--k", type=int, default=2, help="number of principal components")
            sub.add_argument("--all-pairs", action="store_true",
                             help="one projection per feasible pair, enumerated inline")
        if name == "scan":
            sub.add_argument("--from", dest="start", type=int, default=20, help="smallest n")
            sub.add_argument("--to", dest="stop", type=int, default=200, help="largest n")
    return parser


def _parameters(args: argparse.Namespace) -> dict:
    return {key: (str(value) if isinstance(value, Path) else value)
            for key, value in sorted(vars(args).items())}


def _write_manifest(ctx: CommandContext, args: argparse.Namespace, metrics: RunMetrics,
                    exit_code: int) -> None:
    path = ctx.out_dir / config.MANIFEST_NAME
    manifest = RunManifest(
        command=args.command,
        graph_source=ctx.graph_source,
        parameters=_parameters(args),
        wall_time_seconds=round(metrics.duration, 3),
        workers=ctx.workers,
        outputs=list(ctx.outputs),
        partial=ctx.partial,
        exit_code=exit_code,
        metrics=metrics.as_dict(),
        summary=ctx.summary,
    )
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")


def run(argv: List[str], stdout: Optional[TextIO] = None) -> int:
    """Executes one subcommand; returns the process exit code."""
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return int(e.code or EXIT_OK)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)

    ctx = CommandContext(
        args=args,
        stdout=stdout,
        out_dir=args.out,
        workers=config.default_workers() if args.workers is None else args.workers,
        node_budget=config.default_node_budget() if args.node_budget is None else args.node_budget,
    )
    with RunMetrics(args.command) as metrics:
        try:
            router.dispatch(args.command, ctx)
            exit_code = EXIT_PARTIAL if ctx.partial else EXIT_OK
        except MagicError as e:
            logger.error(f"[CLI] {args.command} failed: {e}")
            print(f"error: {e}", file=sys.stderr)
            exit_code = e.exit_code

    if ctx.out_dir is not None:
        _write_manifest(ctx, args, metrics, exit_code)
    return exit_code
