"""Slow, independent reference implementations the suites compare the library against."""

import itertools
from collections import deque
from collections.abc import Iterable

import networkx as nx

from exchci.core import VarSet, iter_bits, submasks
from exchci.graphs import Edge, EdgeKind, MixedGraph

GeneralTriple = tuple[VarSet, VarSet, VarSet]


def naive_semigraphoid(size: int, seeds: Iterable[GeneralTriple]) -> frozenset[GeneralTriple]:
    """Fixpoint of the four semi-graphoid axioms over general triples, both orientations stored."""
    full = (1 << size) - 1
    known: set[GeneralTriple] = set()
    queue: deque[GeneralTriple] = deque()

    def add(a: VarSet, b: VarSet, c: VarSet) -> None:
        for triple in ((a, b, c), (b, a, c)):
            if triple not in known:
                known.add(triple)
                queue.append(triple)

    for a, b, c in seeds:
        add(a, b, c)

    while queue:
        a, b, c = queue.popleft()
        for d in submasks(b):
            if d and d != b:
                add(a, b & ~d, c)
                add(a, b & ~d, c | d)
        # <a,b|c> as the conditioned premise <a,b|k∪d> of contraction with <a,d|k>
        for d in submasks(c):
            if d and (a, d, c & ~d) in known:
                add(a, b | d, c & ~d)
        # <a,b|c> as the marginal premise, paired with <a,x|c∪b>
        for x in submasks(full & ~(a | b | c)):
            if x and (a, x, c | b) in known:
                add(a, b | x, c)
    return frozenset(known)


def general_triples(size: int) -> list[GeneralTriple]:
    """Every (A, B, C) of pairwise disjoint sets with A and B non-empty."""
    triples = []
    for labels in itertools.product(range(4), repeat=size):
        sets = [0, 0, 0, 0]
        for k, label in enumerate(labels):
            sets[label] |= 1 << k
        _, a, b, c = sets
        if a and b:
            triples.append((a, b, c))
    return triples


# ---------------------------------------------------------------------------
# Walk enumeration
# ---------------------------------------------------------------------------


def _sections(edges: list[Edge]) -> list[tuple[int, int]]:
    """Vertex-position ranges of the maximal line runs of a walk."""
    sections = []
    start = 0
    for k, edge in enumerate(edges):
        if edge.kind is not EdgeKind.LINE:
            sections.append((start, k))
            start = k + 1
    sections.append((start, len(edges)))
    return sections


def _section_ok(vertices: list[int], edges: list[Edge], start: int, end: int, c: VarSet) -> bool:
    collider = (
        start > 0
        and end < len(edges)
        and edges[start - 1].head_at(vertices[start])
        and edges[end].head_at(vertices[end])
    )
    hit = any(c >> vertices[k] & 1 for k in range(start, end + 1))
    return collider == hit


def is_connecting(vertices: list[int], edges: list[Edge], c: VarSet) -> bool:
    return all(_section_ok(vertices, edges, s, t, c) for s, t in _sections(edges))


def walk_separated(g: MixedGraph, u: int, v: int, c: VarSet, cap: int) -> bool:
    """True iff no walk of at most `cap` edges from u to v is connecting given c."""
    stack: list[tuple[list[int], list[Edge]]] = [([u], [])]
    while stack:
        vertices, edges = stack.pop()
        if edges and edges[-1].kind is not EdgeKind.LINE:
            closed = _sections(edges)[-2]
            if not _section_ok(vertices, edges, *closed, c):
                continue
        if vertices[-1] == v and edges and is_connecting(vertices, edges, c):
            return False
        if len(edges) == cap:
            continue
        here = vertices[-1]
        for w in iter_bits(g.neighbours(here)):
            edge = g.edge_between(here, w)
            stack.append((vertices + [w], edges + [edge]))
    return True


# ---------------------------------------------------------------------------
# networkx path criteria
# ---------------------------------------------------------------------------


def nx_undirected_separated(g: MixedGraph, a: VarSet, b: VarSet, c: VarSet) -> bool:
    """Removing C leaves no path between A and B."""
    graph = g.to_networkx()
    graph.remove_nodes_from(iter_bits(c))
    return not any(nx.has_path(graph, x, y) for x in iter_bits(a) for y in iter_bits(b))


def nx_bidirected_separated(g: MixedGraph, a: VarSet, b: VarSet, c: VarSet) -> bool:
    """Every path between A and B has an inner vertex outside C."""
    graph = g.to_networkx()
    for x in iter_bits(a):
        for y in iter_bits(b):
            for path in nx.all_simple_paths(graph, x, y):
                if all(c >> w & 1 for w in path[1:-1]):
                    return False
    return True
