"""
Command line interface.

Subcommands::

    curvature              curvature reports for the vertices of a graph
    ball                   curvature report for the center of a ball
    enumerate              all quartic incomplete 2-balls with their curvature
    verify-classification  verify the eight globally curvature sharp graphs
    search                 extension search from one seed or from all of them
    named                  build one of the eight named graphs

Exit status is 0 on success, 1 when a verification fails and 2 on input
errors. Diagnostics go to stderr.
"""
import argparse
import json
import logging
import sys
from multiprocessing import cpu_count
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from quartic_curvature import NAME, VERSION
from quartic_curvature.catalog import records_to_frame, table3, verify_all
from quartic_curvature.curvature import batch_curvature, curvature_all, curvature_at, k_infinity
from quartic_curvature.data_models import (
    BALL_TYPE_IDS,
    DEFAULT_MAX_VERTICES,
    DEFAULT_TOL,
    CurvatureOptions,
    CurvatureReport,
    EnumerateOptions,
    SearchOptions,
    SearchOutcome,
)
from quartic_curvature.exceptions import (
    DomainError,
    InvalidParametersError,
    SearchTruncatedError,
    VerificationError,
)
from quartic_curvature.graph_core.constructors import NAMED_GRAPHS, named_graph
from quartic_curvature.graph_core.graph import from_edge_list
from quartic_curvature.search.extension import search_all, search_from_seed, verify_outcome
from quartic_curvature.two_ball import IncompleteTwoBall, enumerate_quartic
from quartic_curvature.util.io import (
    format_edge_list,
    format_float,
    model_to_json,
    read_ball_json,
    read_edge_list,
    round_floats,
    write_edge_list,
)

__all__ = ["main", "get_parser"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2

LOG_FORMAT = "%(levelname)s: [%(asctime)s] %(name)s - %(message)s"

REPORT_COLUMNS = ["vertex", "k_infinity", "upper_bound", "sharp", "triangles_vertex", "degree", "ball_type"]


def _tsv(rows: List[Dict[str, Any]], columns: List[str]) -> str:
    """Render rows as TSV with fixed float formatting"""
    frame = pd.DataFrame(
        [{c: format_float(v) if isinstance(v, float) else v for c, v in row.items()} for row in rows],
        columns=columns,
    )
    return frame.to_csv(sep="\t", index=False, na_rep="")


def _emit(text: str, out: Optional[str] = None):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _reports_output(reports: List[CurvatureReport], fmt: str) -> str:
    if fmt == "json":
        return model_to_json(reports)
    return _tsv([r.dict() for r in reports], REPORT_COLUMNS)


def _curvature_options(args: argparse.Namespace) -> CurvatureOptions:
    return CurvatureOptions(tol=args.tol, eigen_method=args.eigen_method)


def _run_curvature(args: argparse.Namespace) -> int:
    graph = read_edge_list(args.input)
    options = _curvature_options(args)
    if args.vertex is not None:
        reports = [curvature_at(graph, args.vertex, options)]
    else:
        reports = curvature_all(graph, options, progress=args.progress)
    _emit(_reports_output(reports, args.format))
    return EXIT_OK


def _run_ball(args: argparse.Namespace) -> int:
    ball = IncompleteTwoBall.from_model(read_ball_json(args.json))
    report = k_infinity(ball, options=_curvature_options(args))
    _emit(_reports_output([report], args.format))
    return EXIT_OK


def _run_enumerate(args: argparse.Namespace) -> int:
    options = EnumerateOptions(filter=args.filter, jobs=args.jobs)
    balls = enumerate_quartic(progress=args.progress)
    reports = batch_curvature(balls, _curvature_options(args), jobs=options.jobs, progress=args.progress)
    sharp_tol = CurvatureOptions().sharp_tol
    kept = [
        (ball, report)
        for ball, report in zip(balls, reports)
        if options.filter == "all"
        or (options.filter == "nonneg" and report.k_infinity >= -sharp_tol)
        or (options.filter == "sharp" and report.sharp)
    ]
    logger.info(f"{len(kept)} of {len(balls)} balls pass the filter {options.filter!r}")
    if args.format == "json":
        data = [{"ball": b.to_model().dict(), "report": r.dict(exclude_none=True)} for b, r in kept]
        text = json.dumps(round_floats(data), separators=(",", ":"))
    else:
        rows = [
            {
                "s1": "".join(str(bit) for bit in b.s1),
                "s1s2": ",".join("".join(str(i) for i in p) for p in b.s1s2),
                **{c: getattr(r, c) for c in REPORT_COLUMNS[1:]},
            }
            for b, r in kept
        ]
        text = _tsv(rows, ["s1", "s1s2"] + REPORT_COLUMNS[1:])
    _emit(text, args.out)
    return EXIT_OK


def _run_verify(args: argparse.Namespace) -> int:
    records = verify_all(_curvature_options(args), progress=args.progress)
    if args.format == "json":
        _emit(model_to_json(records))
    else:
        frame = records_to_frame(records)
        _emit(_tsv(frame.to_dict("records"), list(frame.columns)))
    if args.search:
        types = table3(search=True, search_options=SearchOptions(jobs=args.jobs))
        expected = table3(search=False)
        if types != expected:
            raise VerificationError("table3", expected, types)
    return EXIT_OK


def _run_search(args: argparse.Namespace) -> int:
    options = SearchOptions(
        seed=None if args.seed == "all" else args.seed,
        max_vertices=args.max_vertices,
        rigidity_prune=not args.no_rigidity_prune,
        jobs=args.jobs,
        fail_on_truncation=not args.allow_truncation,
        memoize=not args.no_memo,
    )
    try:
        if args.seed == "all":
            outcome, _ = search_all(options, progress=args.progress)
        else:
            outcome = search_from_seed(args.seed, options=options, progress=args.progress)
    except SearchTruncatedError as err:
        if err.outcome is not None:
            _emit(model_to_json(err.outcome))
        raise
    verify_outcome(outcome)
    _write_graphs(outcome, Path(args.out_dir))
    _emit(model_to_json(outcome))
    return EXIT_OK


def _write_graphs(outcome: SearchOutcome, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    for completed in outcome.completed_graphs:
        label = completed.name or f"graph_{completed.fingerprint}"
        write_edge_list(from_edge_list(completed.n, completed.edges), out_dir / f"{outcome.seed}_{label}.txt")


def _run_named(args: argparse.Namespace) -> int:
    graph = named_graph(args.name)
    if args.emit_edges:
        write_edge_list(graph, args.emit_edges)
    else:
        _emit(format_edge_list(graph))
    return EXIT_OK


def _common_parser(with_defaults: bool) -> argparse.ArgumentParser:
    """Options accepted both before and after the subcommand

    The copy attached to the subcommands suppresses its defaults so that a
    value given before the subcommand is not overwritten.
    """

    def default(value):
        return value if with_defaults else argparse.SUPPRESS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--progress", action="store_true", default=default(False), help="Show progress bars")
    common.add_argument("--jobs", type=int, default=default(cpu_count()), help="Worker processes (default: all cores)")
    common.add_argument("--tol", type=float, default=default(DEFAULT_TOL), help="Bisection tolerance")
    common.add_argument("--eigen-method", choices=["lapack", "jacobi"], default=default("lapack"))
    return common


def get_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command"""
    parser = argparse.ArgumentParser(prog="quartic-curvature", description=NAME, parents=[_common_parser(True)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_parser(False)

    def add_command(name: str, help_text: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, help=help_text, parents=[common])

    curvature = add_command("curvature", "Curvature at the vertices of a graph")
    curvature.add_argument("--input", required=True, help="Edge-list file")
    which = curvature.add_mutually_exclusive_group()
    which.add_argument("--vertex", type=int, help="A single vertex")
    which.add_argument("--all", action="store_true", help="Every vertex (default)")
    curvature.add_argument("--format", choices=["tsv", "json"], default="tsv")
    curvature.set_defaults(func=_run_curvature)

    ball = add_command("ball", "Curvature at the center of a ball given as JSON")
    ball.add_argument("--json", required=True, help="Ball JSON file")
    ball.add_argument("--format", choices=["tsv", "json"], default="tsv")
    ball.set_defaults(func=_run_ball)

    enum = add_command("enumerate", "All quartic incomplete 2-balls with their curvature")
    enum.add_argument("--filter", choices=["all", "nonneg", "sharp"], default="all")
    enum.add_argument("--out", help="Output file (default: stdout)")
    enum.add_argument("--format", choices=["tsv", "json"], default="tsv")
    enum.set_defaults(func=_run_enumerate)

    verify = add_command("verify-classification", "Verify the eight globally sharp graphs")
    verify.add_argument("--format", choices=["tsv", "json"], default="tsv")
    verify.add_argument("--search", action="store_true", help="Also re-derive the ball type map by search")
    verify.set_defaults(func=_run_verify)

    search = add_command("search", "Extension search from a seed ball type")
    search.add_argument("--seed", required=True, choices=list(BALL_TYPE_IDS) + ["all"])
    search.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)
    search.add_argument("--no-rigidity-prune", action="store_true", help="Do not use the hypercube shortcut")
    search.add_argument("--no-memo", action="store_true", help="Do not merge isomorphic partial graphs")
    search.add_argument("--allow-truncation", action="store_true", help="Warn instead of failing at the cap")
    search.add_argument(
        "--out-dir", default=".", help="Directory for one edge-list file per completed graph (default: cwd)"
    )
    search.set_defaults(func=_run_search)

    named = add_command("named", "Build a named graph")
    named.add_argument("name", choices=list(NAMED_GRAPHS))
    named.add_argument("--emit-edges", help="Edge-list file to write (default: stdout)")
    named.set_defaults(func=_run_named)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line interface and return the exit status"""
    parser = get_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code == 0 else EXIT_INPUT
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    try:
        return args.func(args)
    except (VerificationError, SearchTruncatedError) as err:
        logger.error(str(err))
        return EXIT_MISMATCH
    except (InvalidParametersError, DomainError, ValidationError) as err:
        logger.error(str(err))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
