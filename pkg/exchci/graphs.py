"""Mixed graphs over a ground set, canonical families and walk-based separation.

Edges are lines (u - v), arrows (u -> v) or arcs (u <-> v). Two vertex sets
are separated given C when no walk between them has every collider section
meeting C and every other section avoiding C; a section is a maximal run of
lines, and it is a collider when the edges on both sides put an arrowhead on
it.
"""

import itertools
import logging
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import StrEnum

import networkx as nx

from exchci.core import Dyad, GroundSet, NodePermutation, VarSet, bit, dyad_universe, iter_bits, subsets_by_size
from exchci.errors import InvalidArgumentError
from exchci.imodel import IndependenceModel

logger = logging.getLogger(__name__)


class EdgeKind(StrEnum):
    LINE = "line"
    ARROW = "arrow"
    ARC = "arc"


class SeparatorMode(StrEnum):
    MINIMAL = "minimal"
    MAXIMAL = "maximal"
    ALL = "all"


@dataclass(frozen=True, order=True)
class Edge:
    """An edge between vertex indices; an arrow points from u to v, other kinds keep u < v."""

    u: int
    v: int
    kind: EdgeKind = EdgeKind.LINE

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise InvalidArgumentError(f"Loops are not allowed, got an edge at vertex {self.u}")
        if self.kind is not EdgeKind.ARROW and self.u > self.v:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)

    def head_at(self, x: int) -> bool:
        if self.kind is EdgeKind.ARC:
            return x in (self.u, self.v)
        return self.kind is EdgeKind.ARROW and x == self.v

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u

    @property
    def pair(self) -> tuple[int, int]:
        return (min(self.u, self.v), max(self.u, self.v))


@dataclass(frozen=True)
class MixedGraph:
    """A simple mixed graph whose vertices are the elements of `ground`."""

    ground: GroundSet
    edges: frozenset[Edge]
    _adjacency: tuple[VarSet, ...] = field(init=False, repr=False, compare=False)
    _incident: tuple[tuple[tuple[int, bool, bool, bool], ...], ...] = field(init=False, repr=False, compare=False)
    _by_pair: dict[tuple[int, int], Edge] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        size = self.ground.size
        by_pair: dict[tuple[int, int], Edge] = {}
        for edge in self.edges:
            if not (0 <= edge.u < size and 0 <= edge.v < size):
                raise InvalidArgumentError(f"Edge {edge} leaves the {size}-vertex ground set")
            if edge.pair in by_pair:
                raise InvalidArgumentError(f"Graph is not simple: two edges join {self._label(*edge.pair)}")
            by_pair[edge.pair] = edge
        adjacency = [0] * size
        incident: list[list[tuple[int, bool, bool, bool]]] = [[] for _ in range(size)]
        for edge in sorted(self.edges):
            adjacency[edge.u] |= bit(edge.v)
            adjacency[edge.v] |= bit(edge.u)
            is_line = edge.kind is EdgeKind.LINE
            for x in (edge.u, edge.v):
                w = edge.other(x)
                incident[x].append((w, is_line, edge.head_at(x), edge.head_at(w)))
        object.__setattr__(self, "_adjacency", tuple(adjacency))
        object.__setattr__(self, "_incident", tuple(tuple(sorted(row)) for row in incident))
        object.__setattr__(self, "_by_pair", by_pair)

    @classmethod
    def build(cls, ground: GroundSet, edges: Iterable[Edge]) -> "MixedGraph":
        return cls(ground, frozenset(edges))

    def _label(self, u: int, v: int) -> str:
        return f"{self.ground.elements[u]} and {self.ground.elements[v]}"

    @property
    def is_undirected(self) -> bool:
        return all(e.kind is EdgeKind.LINE for e in self.edges)

    @property
    def is_bidirected(self) -> bool:
        return all(e.kind is EdgeKind.ARC for e in self.edges)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self._adjacency[u] >> v & 1)

    def neighbours(self, v: int) -> VarSet:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return self._adjacency[v].bit_count()

    def edge_between(self, u: int, v: int) -> Edge | None:
        return self._by_pair.get((min(u, v), max(u, v)))

    def skeleton(self) -> "MixedGraph":
        return MixedGraph.build(self.ground, (Edge(*e.pair, EdgeKind.LINE) for e in self.edges))

    def permuted(self, perm: NodePermutation) -> "MixedGraph":
        """Relabel vertices by the node permutation; arrows keep their direction."""
        index_map = self.ground.relabeling(perm).index_map
        return MixedGraph.build(self.ground, (Edge(index_map[e.u], index_map[e.v], e.kind) for e in self.edges))

    def to_networkx(self) -> nx.Graph:
        """The skeleton as an undirected networkx graph over vertex indices."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.ground.size))
        graph.add_edges_from(e.pair for e in self.edges)
        return graph

    def line_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.ground.size))
        graph.add_edges_from(e.pair for e in self.edges if e.kind is EdgeKind.LINE)
        return graph


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def _uniform_kind(kind: EdgeKind) -> EdgeKind:
    kind = EdgeKind(kind)
    if kind is EdgeKind.ARROW:
        raise InvalidArgumentError("Canonical families use lines or arcs, not arrows")
    return kind


def empty_graph(ground: GroundSet) -> MixedGraph:
    return MixedGraph.build(ground, ())


def complete_graph(ground: GroundSet, kind: EdgeKind = EdgeKind.LINE) -> MixedGraph:
    kind = _uniform_kind(kind)
    return MixedGraph.build(ground, (Edge(u, v, kind) for u, v in itertools.combinations(range(ground.size), 2)))


def incidence_graph(n: int, kind: EdgeKind = EdgeKind.LINE) -> MixedGraph:
    """The line graph of the complete graph on n nodes: dyads adjacent iff they share a node."""
    if n < 2:
        raise InvalidArgumentError(f"Incidence graph needs n >= 2, got {n}")
    kind = _uniform_kind(kind)
    ground = dyad_universe(n)
    line = nx.line_graph(nx.complete_graph(range(1, n + 1)))
    edges = [Edge(ground.index(Dyad(*x)), ground.index(Dyad(*y)), kind) for x, y in line.edges()]
    return MixedGraph.build(ground, edges)


def complement_graph(g: MixedGraph, kind: EdgeKind = EdgeKind.LINE) -> MixedGraph:
    kind = _uniform_kind(kind)
    complement = nx.complement(g.to_networkx())
    return MixedGraph.build(g.ground, (Edge(u, v, kind) for u, v in complement.edges()))


FAMILIES = ("empty", "complete", "L-", "Lbi", "Lc-", "Lcbi")


def family(name: str, n: int) -> MixedGraph:
    """One of the six canonical graphs over the dyads of n nodes."""
    if name == "empty":
        return empty_graph(dyad_universe(n))
    if name == "complete":
        return complete_graph(dyad_universe(n))
    if name == "L-":
        return incidence_graph(n, EdgeKind.LINE)
    if name == "Lbi":
        return incidence_graph(n, EdgeKind.ARC)
    if name == "Lc-":
        return complement_graph(incidence_graph(n), EdgeKind.LINE)
    if name == "Lcbi":
        return complement_graph(incidence_graph(n), EdgeKind.ARC)
    raise InvalidArgumentError(f"Unknown graph family: {name!r}; expected one of {list(FAMILIES)}")


def parse_graph_spec(spec: str) -> MixedGraph:
    """Parse '<family>:<n>', e.g. 'L-:5'."""
    name, sep, count = spec.strip().rpartition(":")
    if not sep:
        raise InvalidArgumentError(f"Graph spec must look like <family>:<n>, got {spec!r}")
    try:
        n = int(count)
    except ValueError as e:
        raise InvalidArgumentError(f"Graph spec {spec!r} has a non-integer node count") from e
    return family(name, n)


# ---------------------------------------------------------------------------
# Separation
# ---------------------------------------------------------------------------


def _check_sets(g: MixedGraph, a: VarSet, b: VarSet, c: VarSet) -> None:
    for mask in (a, b, c):
        g.ground.check_mask(mask)
    if a & b or a & c or b & c:
        raise InvalidArgumentError("Separation needs pairwise disjoint vertex sets")


def _flood(g: MixedGraph, start: VarSet, allowed: VarSet) -> VarSet:
    reach = frontier = start
    while frontier:
        grown = 0
        for v in iter_bits(frontier):
            grown |= g.neighbours(v)
        frontier = grown & allowed & ~reach
        reach |= frontier
    return reach


def _walk_connected(g: MixedGraph, a: VarSet, b: VarSet, c: VarSet) -> bool:
    """Search states (vertex, arrowhead into current section, section meets C)."""
    start = [(v, False, False) for v in iter_bits(a)]
    seen = set(start)
    queue = deque(start)
    while queue:
        v, head_in, hit = queue.popleft()
        if b >> v & 1 and not hit:
            return True
        for w, is_line, head_at_v, head_at_w in g._incident[v]:
            if is_line:
                state = (w, head_in, hit or bool(c >> w & 1))
            else:
                if (head_in and head_at_v) != hit:
                    continue
                state = (w, head_at_w, bool(c >> w & 1))
            if state not in seen:
                seen.add(state)
                queue.append(state)
    return False


def separates(g: MixedGraph, a: VarSet, b: VarSet, c: VarSet) -> bool:
    """True iff no connecting walk joins a and b given c."""
    _check_sets(g, a, b, c)
    if not a or not b:
        return True
    if g.is_undirected:
        return not _flood(g, a, g.ground.full_mask & ~c) & b
    if g.is_bidirected:
        reach = _flood(g, a, c)
        touched = 0
        for v in iter_bits(reach):
            touched |= g.neighbours(v)
        return not touched & b
    return not _walk_connected(g, a, b, c)


def induced_model(g: MixedGraph) -> IndependenceModel:
    """Every elementary <u,v|C> with u and v separated by C in g."""
    full = g.ground.full_mask
    triples = []
    for u, v in itertools.combinations(range(g.ground.size), 2):
        if g.adjacent(u, v):
            continue
        rest = full & ~(bit(u) | bit(v))
        triples.extend((u, v, c) for c in subsets_by_size(rest) if separates(g, bit(u), bit(v), c))
    logger.debug("induced model of %d-vertex graph: %d statements", g.ground.size, len(triples))
    return IndependenceModel(g.ground, frozenset(triples))


def markov_equivalent(g: MixedGraph, h: MixedGraph) -> bool:
    if g.ground != h.ground:
        raise InvalidArgumentError("Markov equivalence needs graphs over the same vertex set")
    return induced_model(g) == induced_model(h)


# ---------------------------------------------------------------------------
# Trisections and separators
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Trisection:
    """A walk <i, section, j> whose section is a line-connected run entered and left by non-lines."""

    endpoints: tuple[int, int]
    section: VarSet
    collider: bool
    shielded: bool


def trisections(g: MixedGraph) -> list[Trisection]:
    """All trisections with distinct endpoints, sections taken as shortest line paths."""
    lines = g.line_graph()
    paths = {x: nx.single_source_shortest_path(lines, x) for x in range(g.ground.size)}
    found: set[Trisection] = set()
    for x in range(g.ground.size):
        entries = [e for e in g.edges if x in (e.u, e.v) and e.kind is not EdgeKind.LINE]
        for y, path in paths[x].items():
            exits = [e for e in g.edges if y in (e.u, e.v) and e.kind is not EdgeKind.LINE]
            section = sum(bit(w) for w in path)
            for first, last in itertools.product(entries, exits):
                i, j = first.other(x), last.other(y)
                if i == j:
                    continue
                collider = first.head_at(x) and last.head_at(y)
                found.add(Trisection((min(i, j), max(i, j)), section, collider, g.adjacent(i, j)))
    return sorted(found)


def unshielded_collider_trisections(g: MixedGraph) -> list[Trisection]:
    return [t for t in trisections(g) if t.collider and not t.shielded]


@dataclass(frozen=True)
class SeparatorListing:
    separators: list[VarSet]
    adjacent: bool = False


def enumerate_separators(g: MixedGraph, u: int, v: int, mode: SeparatorMode = SeparatorMode.ALL) -> SeparatorListing:
    """Separators of u and v by increasing size, lexicographic within a size."""
    mode = SeparatorMode(mode)
    if u == v:
        raise InvalidArgumentError("Separator enumeration needs two distinct vertices")
    if g.adjacent(u, v):
        return SeparatorListing([], adjacent=True)
    rest = g.ground.full_mask & ~(bit(u) | bit(v))
    found = [c for c in subsets_by_size(rest) if separates(g, bit(u), bit(v), c)]
    if mode is SeparatorMode.ALL:
        return SeparatorListing(found)
    lookup = set(found)
    if mode is SeparatorMode.MINIMAL:
        kept = [c for c in found if not any(c & ~bit(x) in lookup for x in iter_bits(c))]
    else:
        kept = [c for c in found if not any(c | bit(x) in lookup for x in iter_bits(rest & ~c))]
    return SeparatorListing(kept)


def is_maximal(g: MixedGraph) -> bool:
    """Every non-adjacent pair has some separator."""
    full = g.ground.full_mask
    for u, v in itertools.combinations(range(g.ground.size), 2):
        if g.adjacent(u, v):
            continue
        rest = full & ~(bit(u) | bit(v))
        if not any(separates(g, bit(u), bit(v), c) for c in subsets_by_size(rest)):
            return False
    return True


# ---------------------------------------------------------------------------
# Separator families over dyads
# ---------------------------------------------------------------------------


def _dyads_where(ground: GroundSet, keep) -> VarSet:
    return ground.mask_of(d for d in ground.elements if keep(d))


def pair_separator(ground: GroundSet, i: int, j: int) -> VarSet:
    """{ir, jr : r != i, j}."""
    return _dyads_where(ground, lambda d: len({i, j} & set(d.nodes)) == 1)


def coseparator(ground: GroundSet, nodes: Iterable[int]) -> VarSet:
    """Dyads with neither endpoint among the given nodes."""
    excluded = set(nodes)
    return _dyads_where(ground, lambda d: not excluded & set(d.nodes))


def node_star(ground: GroundSet, j: int) -> VarSet:
    """{jr : r != j}."""
    return _dyads_where(ground, lambda d: j in d.nodes)


@dataclass(frozen=True)
class SeparatorFamilies:
    n: int
    nodes: tuple[int, int, int, int]
    c_ijkl: VarSet
    c_ij: VarSet
    cd_ij: VarSet
    c_j: VarSet
    cd_ijk: VarSet


def separator_families(n: int, i: int = 1, j: int = 2, k: int = 3, l: int = 4) -> SeparatorFamilies:
    nodes = (i, j, k, l)
    if len(set(nodes)) != 4 or not all(1 <= x <= n for x in nodes):
        raise InvalidArgumentError(f"Separator families need four distinct nodes in 1..{n}, got {nodes}")
    ground = dyad_universe(n)
    return SeparatorFamilies(
        n=n,
        nodes=nodes,
        c_ijkl=ground.mask_of([Dyad(i, k), Dyad(i, l), Dyad(j, k), Dyad(j, l)]),
        c_ij=pair_separator(ground, i, j),
        cd_ij=coseparator(ground, (i, j)),
        c_j=node_star(ground, j),
        cd_ijk=coseparator(ground, (i, j, k)),
    )
