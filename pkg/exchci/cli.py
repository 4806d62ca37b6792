"""Command-line entry point: ``exchci <command> [options]``.

Exit codes: 0 on success, 1 when a classification is Inconsistent or a
verify run has failures, 2 on any input error.
"""

import argparse
import logging
from collections.abc import Callable, Sequence

from exchci.config import CI_TOL, DEFAULT_NMAX, DEFAULT_SEED, MAX_ELEMENTS
from exchci.core import Kind
from exchci.display import emit, error, verify_table
from exchci.errors import CapacityError, ExchciError, InvalidArgumentError
from exchci.exchange import (
    RegimeTag,
    Semantics,
    TableOracle,
    characterization_check,
    classify_regime,
    faithfulness_report,
    skeleton_class,
    structured_assumption_check,
)
from exchci.formats import format_graph, format_model, read_model, read_table, to_dot
from exchci.graphs import MixedGraph, SeparatorMode, enumerate_separators, family, parse_graph_spec, separates
from exchci.imodel import (
    Property,
    check_property,
    closure_with,
    dual,
    parse_properties,
    semigraphoid_closure,
    skeleton_of_model,
)
from exchci.verify.models import TSV_HEADER
from exchci.verify.registry import SUITES
from exchci.verify.runner import run_verify

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace], int]


def _render_graph(g: MixedGraph, dot: bool) -> None:
    emit((to_dot(g) if dot else format_graph(g)).rstrip("\n"))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_classify(args: argparse.Namespace) -> int:
    table = read_table(args.file)
    ground = table.ground
    if ground.kind is not Kind.NETWORK:
        raise InvalidArgumentError("The classifier needs a network distribution file")
    if ground.n < 5:
        raise InvalidArgumentError("classifier requires n ≥ 5")
    regime = classify_regime(TableOracle(table, tol=args.tol), ground.n, seed=args.seed)
    for line in regime.describe(ground):
        emit(line)
    return 1 if regime.tag is RegimeTag.INCONSISTENT else 0


def cmd_closure(args: argparse.Namespace) -> int:
    m = closure_with(read_model(args.model), parse_properties(args.rules))
    logger.info("closure has %d elementary statements", len(m))
    emit(format_model(m).rstrip("\n"))
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    m = semigraphoid_closure(read_model(args.model))
    report = check_property(m, Property(args.property), general=args.general)
    if report.holds:
        emit("holds")
    else:
        emit("fails")
        emit(f"witness {report.witness.describe(m.ground)}")
    return 0


def cmd_dual(args: argparse.Namespace) -> int:
    emit(format_model(dual(read_model(args.model))).rstrip("\n"))
    return 0


def cmd_skeleton(args: argparse.Namespace) -> int:
    m = read_model(args.model)
    _render_graph(skeleton_of_model(m), args.dot)
    if m.ground.kind is Kind.NETWORK and m.ground.is_full and not args.dot:
        emit(f"class {skeleton_class(m).value}")
    return 0


def cmd_sep(args: argparse.Namespace) -> int:
    g = parse_graph_spec(args.graph)
    ground = g.ground
    a, b = ground.parse_set(args.A), ground.parse_set(args.B)
    if args.mode is None:
        emit("separated" if separates(g, a, b, ground.parse_set(args.C)) else "connected")
        return 0
    if a.bit_count() != 1 or b.bit_count() != 1:
        raise InvalidArgumentError("Separator listing needs a single element in --A and in --B")
    listing = enumerate_separators(g, a.bit_length() - 1, b.bit_length() - 1, SeparatorMode(args.mode))
    if listing.adjacent:
        emit("adjacent")
    for c in listing.separators:
        emit(ground.format_set(c))
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    _render_graph(family(args.family, args.n), args.dot)
    return 0


def cmd_faithful(args: argparse.Namespace) -> int:
    m = semigraphoid_closure(read_model(args.model))
    if args.graph:
        report = faithfulness_report(m, parse_graph_spec(args.graph))
        emit(f"markovian {'yes' if report.markovian else 'no'}")
        emit("faithful" if report.faithful else "not faithful")
        if report.failing_triple is not None:
            emit(f"differs at {report.failing_triple.format(m.ground)}")
        return 0
    for semantics in Semantics:
        report = characterization_check(m, semantics)
        emit(f"{semantics.value}: {'faithful' if report.faithfulness.faithful else 'not faithful'} to its skeleton")
        for r in report.reports:
            emit(f"  {r.property.value} {'holds' if r.holds else 'fails'}")
    return 0


def cmd_assumptions(args: argparse.Namespace) -> int:
    m = semigraphoid_closure(read_model(args.model))
    report = structured_assumption_check(m, RegimeTag(args.case))
    for h in report.hypotheses:
        emit(f"{h.name} {'holds' if h.holds else 'fails'}" + (f": {h.witness}" if h.witness else ""))
    emit("hypotheses hold" if report.holds else "hypotheses fail")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.nmax < 1 or args.nmax * (args.nmax - 1) // 2 > MAX_ELEMENTS:
        raise CapacityError(f"--nmax {args.nmax} is outside the supported range of network sizes")
    summary = run_verify(args.suite, args.nmax, args.seed, only=args.only or ())
    if args.tsv:
        emit(TSV_HEADER)
        for result in summary.results:
            emit(result.tsv_row())
    else:
        verify_table(summary.results)
        for result in summary.failed:
            emit(f"reproduce: {result.reproduce}")
    return 0 if summary.ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exchci", description="Conditional independence for exchangeable vectors and networks.")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress at INFO level.")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    sub = command("classify", cmd_classify, "Classify a network distribution into one of the six regimes.")
    sub.add_argument("file", help="Distribution file (dist or orbits format).")
    sub.add_argument("--tol", type=float, default=CI_TOL)
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sub = command("closure", cmd_closure, "Close a model under the semi-graphoid axioms and extra rules.")
    sub.add_argument("--model", required=True)
    sub.add_argument("--rules", default="", help="Comma-separated, e.g. intersection,composition.")

    sub = command("check", cmd_check, "Check one property on the closure of a model.")
    sub.add_argument("--model", required=True)
    sub.add_argument("--property", required=True, choices=[p.value for p in Property if p is not Property.SYMMETRY])
    form = sub.add_mutually_exclusive_group()
    form.add_argument("--general", dest="general", action="store_true", default=None)
    form.add_argument("--elementary", dest="general", action="store_false")
    sub.set_defaults(general=None)

    sub = command("dual", cmd_dual, "Print the dual model.")
    sub.add_argument("--model", required=True)

    sub = command("skeleton", cmd_skeleton, "Print the skeleton of a model.")
    sub.add_argument("--model", required=True)
    sub.add_argument("--dot", action="store_true")

    sub = command("sep", cmd_sep, "Test separation in a canonical graph, or list separators.")
    sub.add_argument("--graph", required=True, help="<family>:<n>, e.g. L-:5")
    sub.add_argument("--A", required=True)
    sub.add_argument("--B", required=True)
    sub.add_argument("--C", nargs="?", const="", default="")
    sub.add_argument("--mode", choices=[m.value for m in SeparatorMode], default=None)

    sub = command("gen", cmd_gen, "Print one of the canonical graphs.")
    sub.add_argument("--family", required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--dot", action="store_true")

    sub = command("faithful", cmd_faithful, "Compare a model with a graph, or run both characterizations.")
    sub.add_argument("--model", required=True)
    sub.add_argument("--graph", default=None)

    sub = command("assumptions", cmd_assumptions, "Check the structured faithfulness hypotheses of a regime.")
    sub.add_argument("--model", required=True)
    sub.add_argument("--case", required=True, choices=[t.value for t in RegimeTag])

    sub = command("verify", cmd_verify, "Run the registered checks.")
    sub.add_argument("--suite", choices=["all", *SUITES], default="all")
    sub.add_argument("--nmax", type=int, default=DEFAULT_NMAX)
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--tsv", action="store_true")
    sub.add_argument("--only", action="append", help="Run only this check id (repeatable).")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except (ExchciError, OSError) as e:
        error(f"error: {e}")
        return 2
