"""Text file grammars for models and tables, plus graph rendering.

Model files::

    ground network n=4
    # comment
    stmt {1-2} ; {3-4} ; {1-3,1-4}

Table files start with ``dist <kind> n=<int>`` followed by ``p <bits> <prob>``
lines, or with ``orbits <kind> n=<int>`` followed by ``w <bits> <weight>``
lines, one per orbit, keyed by the orbit's lexicographically least bitstring.
Character k of a bitstring is the value of ground element k; omitted states
have probability zero.
"""

import logging
import re
from pathlib import Path

import numpy as np

from exchci.core import GroundSet, Kind, universe
from exchci.dist import JointTable, OrbitWeighting, table_from_orbits
from exchci.errors import ExchciError, FormatError
from exchci.graphs import EdgeKind, MixedGraph
from exchci.imodel import IndependenceModel, Statement

logger = logging.getLogger(__name__)

HEADER = re.compile(r"^(ground|dist|orbits)\s+(\S+)\s+n=(\S+)$")


def _lines(text: str) -> list[tuple[int, str]]:
    """Non-blank lines with comments stripped, paired with their 1-based numbers."""
    kept = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            kept.append((number, line))
    return kept


def _header(lines: list[tuple[int, str]], keywords: tuple[str, ...]) -> tuple[str, GroundSet]:
    if not lines:
        raise FormatError(f"Empty file; expected a '{keywords[0]} <vector|network> n=<int>' header")
    number, line = lines[0]
    match = HEADER.match(line)
    if not match or match.group(1) not in keywords:
        raise FormatError(f"Bad header {line!r}; expected '{keywords[0]} <vector|network> n=<int>'", number)
    keyword, kind, count = match.groups()
    try:
        ground = universe(Kind(kind), int(count))
    except ValueError as e:
        raise FormatError(f"Bad header {line!r}: {e}", number) from e
    return keyword, ground


def _wrap(number: int, e: ExchciError | ValueError) -> FormatError:
    return FormatError(str(e), number)


# ---------------------------------------------------------------------------
# Model files
# ---------------------------------------------------------------------------


def parse_model(text: str) -> IndependenceModel:
    lines = _lines(text)
    _, ground = _header(lines, ("ground",))
    statements = []
    for number, line in lines[1:]:
        keyword, _, body = line.partition(" ")
        if keyword != "stmt":
            raise FormatError(f"Expected a 'stmt' line, got {line!r}", number)
        parts = body.split(";")
        if len(parts) != 3:
            raise FormatError(f"A statement needs three ';'-separated sets, got {len(parts)}", number)
        try:
            a, b, c = (ground.parse_set(part) for part in parts)
            statements.append(Statement(a, b, c))
        except ValueError as e:
            raise _wrap(number, e) from e
    model = IndependenceModel.from_statements(ground, statements)
    logger.debug("parsed %d statements into %d elementary ones", len(statements), len(model))
    return model


def format_model(m: IndependenceModel) -> str:
    """Canonical text: elementary statements in sorted order, one per line."""
    ground = m.ground
    lines = [f"ground {ground.kind.value} n={ground.n}"]
    for s in m.statements():
        lines.append(f"stmt {ground.format_set(s.a)} ; {ground.format_set(s.b)} ; {ground.format_set(s.c)}")
    return "\n".join(lines) + "\n"


def read_model(path: str | Path) -> IndependenceModel:
    return parse_model(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Table files
# ---------------------------------------------------------------------------


def _state(bits: str, ground: GroundSet, number: int) -> int:
    if len(bits) != ground.size or set(bits) - {"0", "1"}:
        raise FormatError(f"State {bits!r} must be {ground.size} characters of 0/1", number)
    return sum(1 << k for k, ch in enumerate(bits) if ch == "1")


def _bits(state: int, size: int) -> str:
    return "".join("1" if state >> k & 1 else "0" for k in range(size))


def parse_table(text: str) -> JointTable:
    lines = _lines(text)
    keyword, ground = _header(lines, ("dist", "orbits"))
    prefix = "p" if keyword == "dist" else "w"
    values: dict[int, float] = {}
    for number, line in lines[1:]:
        parts = line.split()
        if len(parts) != 3 or parts[0] != prefix:
            raise FormatError(f"Expected '{prefix} <bits> <decimal>', got {line!r}", number)
        state = _state(parts[1], ground, number)
        if state in values:
            raise FormatError(f"State {parts[1]} listed twice", number)
        try:
            values[state] = float(parts[2])
        except ValueError as e:
            raise FormatError(f"Not a decimal: {parts[2]!r}", number) from e
    try:
        if keyword == "orbits":
            return table_from_orbits(OrbitWeighting(ground, values))
        probs = np.zeros(1 << ground.size, dtype=np.float64)
        for state, p in values.items():
            probs[state] = p
        return JointTable(ground, probs)
    except ExchciError as e:
        raise FormatError(str(e)) from e


def format_table(t: JointTable) -> str:
    """Every state with non-zero probability, in state order, with round-trip float text."""
    lines = [f"dist {t.ground.kind.value} n={t.ground.n}"]
    for state in np.flatnonzero(t.probs).tolist():
        lines.append(f"p {_bits(state, t.ground.size)} {float(t.probs[state])!r}")
    return "\n".join(lines) + "\n"


def format_orbits(w: OrbitWeighting) -> str:
    """One `w` line per weighted orbit, keyed by its least bitstring, in bitstring order."""
    ground = w.ground
    keyed = sorted((_bits(rep, ground.size), weight) for rep, weight in w.weights.items())
    lines = [f"orbits {ground.kind.value} n={ground.n}"]
    lines.extend(f"w {bits} {weight!r}" for bits, weight in keyed)
    return "\n".join(lines) + "\n"


def read_table(path: str | Path) -> JointTable:
    return parse_table(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------

DOT_STYLE = {EdgeKind.LINE: "none", EdgeKind.ARROW: "forward", EdgeKind.ARC: "both"}
EDGE_GLYPH = {EdgeKind.LINE: "--", EdgeKind.ARROW: "->", EdgeKind.ARC: "<->"}


def to_dot(g: MixedGraph) -> str:
    """A `digraph` with one quoted node per element; `dir` marks the edge kind."""
    ground = g.ground
    lines = ["digraph G {"]
    lines.extend(f'  "{ground.token(e)}";' for e in ground.elements)
    for edge in sorted(g.edges):
        u, v = ground.token(ground.elements[edge.u]), ground.token(ground.elements[edge.v])
        lines.append(f'  "{u}" -> "{v}" [dir={DOT_STYLE[edge.kind]}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_graph(g: MixedGraph) -> str:
    ground = g.ground
    lines = [f"graph {ground.kind.value} n={ground.n} vertices={ground.size} edges={len(g.edges)}"]
    for edge in sorted(g.edges):
        u, v = ground.token(ground.elements[edge.u]), ground.token(ground.elements[edge.v])
        lines.append(f"{u} {EDGE_GLYPH[edge.kind]} {v}")
    return "\n".join(lines) + "\n"
