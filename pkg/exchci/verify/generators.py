"""Seeded random inputs for the verify suites."""

import itertools

import networkx as nx
import numpy as np

from exchci.core import GroundSet, bit, dyad_universe, vector_universe
from exchci.dist import JointTable, OrbitWeighting, state_orbits, table_from_orbits
from exchci.exchange import orbit_closure
from exchci.graphs import Edge, EdgeKind, MixedGraph
from exchci.imodel import IndependenceModel, semigraphoid_closure


def random_model(rng: np.random.Generator, ground: GroundSet, count: int) -> IndependenceModel:
    """`count` elementary statements drawn uniformly (duplicates collapse)."""
    triples = []
    for _ in range(count):
        u, v = (int(x) for x in rng.choice(ground.size, size=2, replace=False))
        rest = [k for k in range(ground.size) if k not in (u, v)]
        c = sum(bit(k) for k in rest if rng.random() < 0.5)
        triples.append((u, v, c))
    return IndependenceModel.of(ground, triples)


def random_closed_model(rng: np.random.Generator, ground: GroundSet, count: int) -> IndependenceModel:
    return semigraphoid_closure(random_model(rng, ground, count))


def random_exchangeable_model(rng: np.random.Generator, ground: GroundSet, count: int) -> IndependenceModel:
    """Closure of an orbit-closed seed; closing keeps the model exchangeable."""
    return semigraphoid_closure(orbit_closure(random_model(rng, ground, count)))


def random_orbit_weighting(rng: np.random.Generator, ground: GroundSet) -> OrbitWeighting:
    orbits = state_orbits(ground)
    raw = {rep: float(rng.random()) + 0.05 for rep in orbits}
    total = sum(len(orbits[rep]) * w for rep, w in raw.items())
    return OrbitWeighting(ground, {rep: w / total for rep, w in raw.items()})


def random_exchangeable_table(rng: np.random.Generator, ground: GroundSet) -> JointTable:
    return table_from_orbits(random_orbit_weighting(rng, ground))


def random_vector_table(rng: np.random.Generator, n: int) -> JointTable:
    return random_exchangeable_table(rng, vector_universe(n))


def random_network_table(rng: np.random.Generator, n: int) -> JointTable:
    return random_exchangeable_table(rng, dyad_universe(n))


def random_undirected_graph(rng: np.random.Generator, size: int, p: float = 0.5) -> MixedGraph:
    ground = vector_universe(size)
    edges = [Edge(u, v) for u, v in itertools.combinations(range(size), 2) if rng.random() < p]
    return MixedGraph.build(ground, edges)


def random_mixed_graph(rng: np.random.Generator, size: int, p: float = 0.5) -> MixedGraph:
    """A simple mixed graph with arrowheads only at non-line vertices and no semi-directed cycle.

    Vertices get a random order; arrows point from earlier to later
    vertices, and an arc joins two non-line vertices only when neither is
    an ancestor of the other through arrows.
    """
    ground = vector_universe(size)
    order = [int(x) for x in rng.permutation(size)]
    position = {v: k for k, v in enumerate(order)}
    line_vertices = {v for v in range(size) if rng.random() < 0.5}
    arrows = nx.DiGraph()
    arrows.add_nodes_from(range(size))
    edges: list[Edge] = []
    arc_candidates: list[tuple[int, int]] = []
    for u, v in itertools.combinations(range(size), 2):
        if rng.random() >= p:
            continue
        if u in line_vertices and v in line_vertices:
            edges.append(Edge(u, v, EdgeKind.LINE))
            continue
        tail, head = (u, v) if position[u] < position[v] else (v, u)
        if head in line_vertices:
            continue
        if tail not in line_vertices and rng.random() < 0.5:
            arc_candidates.append((u, v))
            continue
        edges.append(Edge(tail, head, EdgeKind.ARROW))
        arrows.add_edge(tail, head)
    for u, v in arc_candidates:
        if not nx.has_path(arrows, u, v) and not nx.has_path(arrows, v, u):
            edges.append(Edge(u, v, EdgeKind.ARC))
    return MixedGraph.build(ground, edges)
