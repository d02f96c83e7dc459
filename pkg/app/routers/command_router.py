# Command Routers
import argparse
import logging
from contextlib import nullcontext
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, TextIO, Tuple

from pydantic import ValidationError

from app.schemas import magic as schemas
from magic import constants, pca, search, symmetry
from magic.builtin_graphs import builtin
from magic.errors import UsageError
from magic.graph import FullereneGraph, load_fullerene

logger = logging.getLogger(__name__)

CSV_COUNT_HEADER = "sp,sh,count,partial,complement_sp,complement_sh"


@dataclass
class CommandContext:
    """Everything a handler needs: parsed flags, sinks and what the run produced."""
    args: argparse.Namespace
    stdout: TextIO
    out_dir: Optional[Path]
    workers: int
    node_budget: int
    outputs: List[str] = field(default_factory=list)
    partial: bool = False
    summary: Dict[str, object] = field(default_factory=dict)
    _graph: Optional[FullereneGraph] = None

    @property
    def graph_source(self) -> str:
        if getattr(self.args, "builtin", None):
            return f"builtin:{self.args.builtin.upper()}"
        if getattr(self.args, "graph", None):
            return str(self.args.graph)
        return "none"

    @property
    def graph(self) -> FullereneGraph:
        if self._graph is None:
            if getattr(self.args, "builtin", None):
                self._graph = builtin(self.args.builtin)
            else:
                self._graph = load_fullerene(self.args.graph)
        return self._graph

    def artifact(self, name: str) -> Optional[Path]:
        if self.out_dir is None:
            return None
        path = self.out_dir / name
        self.outputs.append(str(path))
        return path

    def emit(self, text: str, name: Optional[str] = None) -> None:
        """Prints text; with --out it is also saved as the named artifact."""
        self.stdout.write(text + "\n")
        path = self.artifact(name) if name else None
        if path is not None:
            path.write_text(text + "\n", encoding="utf-8")


Handler = Callable[[CommandContext], None]


class CommandRouter:
    """Maps subcommand names to handlers."""

    def __init__(self) -> None:
        self.routes: Dict[str, Handler] = {}
        self.summaries: Dict[str, str] = {}

    def command(self, name: str, summary: str) -> Callable[[Handler], Handler]:
        def register(handler: Handler) -> Handler:
            self.routes[name] = handler
            self.summaries[name] = summary
            return handler
        return register

    def dispatch(self, name: str, ctx: CommandContext) -> None:
        if name not in self.routes:
            raise UsageError(f"unknown command {name!r}")
        self.routes[name](ctx)


router = CommandRouter()


# --- HELPERS ---

def _pair(ctx: CommandContext) -> constants.MagicPair:
    sp, sh = getattr(ctx.args, "sp", None), getattr(ctx.args, "sh", None)
    if sp is None or sh is None:
        raise UsageError("--sp and --sh are required")
    try:
        return constants.MagicPair(sp=sp, sh=sh)
    except ValidationError as e:
        raise UsageError(f"invalid pair ({sp},{sh}): {e.errors()[0]['msg']}") from e


def _stored(ctx: CommandContext, pair: constants.MagicPair) -> search.SolutionSet:
    graph = ctx.graph
    result = search.enumerate_configurations(
        graph, pair, store=True, sorted_output=True,
        workers=ctx.workers, node_budget=ctx.node_budget,
    )
    ctx.partial = ctx.partial or result.partial
    return result


def _solution_sets(ctx: CommandContext, pair: constants.MagicPair,
                   with_complement: bool = False
                   ) -> Tuple[search.SolutionSet, Optional[search.SolutionSet]]:
    """Solutions from --input, or enumerated inline when --store-solutions is set."""
    graph = ctx.graph
    constants.check_relation(graph.n, pair)
    if ctx.args.input:
        solutions = search.read_solutions(ctx.args.input, graph.n)
        for lineno, labels in enumerate(solutions, start=1):
            if not search.verify_configuration(graph, labels, pair):
                raise UsageError(f"{ctx.args.input}: row {lineno} is not a magical configuration for {pair}")
        loaded = search.SolutionSet(graph_id=graph.graph_id, pair=pair, count=len(solutions),
                                    solutions=tuple(solutions))
        return loaded, None
    if not ctx.args.store_solutions:
        raise UsageError("pass --input FILE or --store-solutions to provide the solutions")
    primary = _stored(ctx, pair)
    twin = _stored(ctx, constants.complement_pair(graph.n, pair)) if with_complement else None
    return primary, twin


# --- COMMANDS ---

@router.command("validate", "check a graph against every fullerene invariant")
def validate(ctx: CommandContext) -> None:
    graph = ctx.graph
    summary = schemas.ValidationSummary(
        graph_id=graph.graph_id, n=graph.n, pentagons=len(graph.pentagons),
        hexagons=len(graph.hexagons), edges=len(graph.edges),
    )
    ctx.emit(summary.model_dump_json(indent=2), "validate.json")


@router.command("feasible", "list magic pairs surviving the number-theoretic filters")
def feasible(ctx: CommandContext) -> None:
    report = constants.feasible_pairs(ctx.graph)
    ctx.summary["pairs"] = len(report.pairs)
    if ctx.args.format == "csv":
        lines = ["sp,sh"] + [f"{p.sp},{p.sh}" for p in report.pairs]
        ctx.emit("\n".join(lines), "feasible.csv")
    else:
        ctx.emit(report.model_dump_json(indent=2), "feasible.json")


@router.command("count", "count all configurations for every feasible pair")
def count(ctx: CommandContext) -> None:
    table = search.count_all(ctx.graph, workers=ctx.workers, node_budget=ctx.node_budget)
    ctx.partial = ctx.partial or table.partial
    ctx.summary["counts"] = {f"{row.sp},{row.sh}": row.count for row in table.rows}
    if table.reason and not table.rows:
        logger.info(f"[COUNT] {table.graph_id}: empty table, {table.reason}")
    if ctx.args.format == "csv":
        lines = [CSV_COUNT_HEADER] + [
            f"{r.sp},{r.sh},{r.count},{str(r.partial).lower()},{r.complement_sp},{r.complement_sh}"
            for r in table.rows
        ]
        ctx.emit("\n".join(lines), "counts.csv")
    else:
        ctx.emit(table.model_dump_json(indent=2), "counts.json")


@router.command("enumerate", "stream every configuration of one pair, one per line")
def enumerate_pair(ctx: CommandContext) -> None:
    graph = ctx.graph
    pair = _pair(ctx)
    constants.check_relation(graph.n, pair)
    path = ctx.artifact(f"solutions-{pair.sp}-{pair.sh}.txt")
    with (open(path, "w", encoding="utf-8") if path else nullcontext(ctx.stdout)) as fh:
        result = search.enumerate_configurations(
            graph, pair, search.SearchMode.STREAM,
            sink=lambda labels: fh.write(search.format_configuration(labels) + "\n"),
            sorted_output=ctx.args.sorted, workers=ctx.workers, node_budget=ctx.node_budget,
        )
    ctx.partial = ctx.partial or result.partial
    ctx.summary.update(count=result.count, nodes=result.nodes)
    logger.info(f"[ENUMERATE] {graph.graph_id} {pair}: {result.count} configurations"
                + (" (partial)" if result.partial else ""))


@router.command("orbits", "partition one pair's solutions into automorphism orbits")
def orbits(ctx: CommandContext) -> None:
    graph = ctx.graph
    pair = _pair(ctx)
    grp = symmetry.automorphisms(graph)
    solutions, twin = _solution_sets(ctx, pair, with_complement=True)
    document = schemas.OrbitsDocument(
        graph_id=graph.graph_id,
        group_order=grp.order,
        free_action=symmetry.check_free_action(solutions, grp),
        orbits=symmetry.orbit_partition(solutions, grp),
        cross_pair=symmetry.cross_pair_orbits(solutions, twin, grp) if twin else None,
    )
    ctx.summary.update(orbit_count=document.orbits.orbit_count, group_order=grp.order)
    ctx.emit(document.model_dump_json(indent=2), f"orbits-{pair.sp}-{pair.sh}.json")


@router.command("aut", "automorphism group order and generators")
def aut(ctx: CommandContext) -> None:
    graph = ctx.graph
    grp = symmetry.automorphisms(graph)
    report = schemas.AutReport(graph_id=graph.graph_id, order=grp.order,
                               generators=symmetry.generators(grp))
    ctx.summary["order"] = grp.order
    ctx.emit(report.model_dump_json(indent=2), "aut.json")


def _project_pair(ctx: CommandContext, pair: constants.MagicPair,
                  solutions: Tuple[search.Configuration, ...]) -> pca.SpectrumReport:
    n = ctx.graph.n
    result = pca.run_pca(pca.solution_matrix(solutions, pair, n), ctx.args.k)
    target_dir = ctx.out_dir or Path(".")
    csv_path, json_path = pca.export_projection(result, target_dir / f"pca-{pair.sp}-{pair.sh}.csv", n=n)
    ctx.outputs.extend([str(csv_path), str(json_path)])
    return pca.SpectrumReport.model_validate_json(json_path.read_text(encoding="utf-8"))


@router.command("pca", "principal component projection of one pair's solutions, or of every feasible pair")
def principal_components(ctx: CommandContext) -> None:
    graph = ctx.graph
    if ctx.args.all_pairs:
        if ctx.args.input or ctx.args.sp is not None or ctx.args.sh is not None:
            raise UsageError("--all-pairs enumerates every feasible pair itself; drop --sp, --sh and --input")
        pairs = constants.feasible_pairs(graph).pairs
        spectra = [_project_pair(ctx, pair, _stored(ctx, pair).solutions) for pair in pairs]
        ctx.summary.update(pairs=len(spectra), N={str(s.pair): s.N for s in spectra}, k=ctx.args.k)
        document = schemas.PcaDocument(graph_id=graph.graph_id, spectra=spectra)
        ctx.stdout.write(document.model_dump_json(indent=2) + "\n")
        return
    pair = _pair(ctx)
    solutions, _ = _solution_sets(ctx, pair)
    spectrum = _project_pair(ctx, pair, solutions.solutions)
    ctx.summary.update(N=spectrum.N, k=ctx.args.k)
    ctx.stdout.write(spectrum.model_dump_json(indent=2) + "\n")


@router.command("report", "feasibility, counts and symmetry checks in one document")
def report(ctx: CommandContext) -> None:
    graph = ctx.graph
    feasibility = constants.feasible_pairs(graph)
    table = search.count_all(graph, workers=ctx.workers, node_budget=ctx.node_budget)
    ctx.partial = ctx.partial or table.partial
    grp = symmetry.automorphisms(graph)
    by_pair = {(row.sp, row.sh): row.count for row in table.rows}
    complements = [
        schemas.ComplementCheck(
            sp=row.sp, sh=row.sh, complement_sp=row.complement_sp, complement_sh=row.complement_sh,
            counts_equal=by_pair.get((row.complement_sp, row.complement_sh)) == row.count,
        )
        for row in table.rows
    ]
    document = schemas.ReportDocument(
        graph_id=graph.graph_id,
        feasibility=feasibility,
        counts=table,
        group_order=grp.order,
        divisibility=symmetry.divisibility_checks(table, grp),
        complements=complements,
    )
    ctx.summary["counts"] = {f"{row.sp},{row.sh}": row.count for row in table.rows}
    ctx.emit(document.model_dump_json(indent=2), "report.json")


@router.command("scan", "necessary conditions on n over a range of orders, no graph needed")
def scan(ctx: CommandContext) -> None:
    rows = constants.scan_orders(ctx.args.start, ctx.args.stop)
    ctx.summary.update(orders=len(rows), excluded=sum(row.excluded for row in rows))
    if ctx.args.format == "csv":
        lines = ["n,excluded,mod8_ok,relation,residues,reason"] + [
            f"{r.n},{str(r.excluded).lower()},{str(r.mod8_ok).lower()},{r.relation or ''},"
            f"{';'.join(r.residues)},{r.reason or ''}"
            for r in rows
        ]
        ctx.emit("\n".join(lines), "scan.csv")
    else:
        document = schemas.ScanDocument(start=ctx.args.start, stop=ctx.args.stop, orders=rows)
        ctx.emit(document.model_dump_json(indent=2), "scan.json")
