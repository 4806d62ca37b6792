"""Exchangeability: orbit closure, oracle-driven regime classification and the faithfulness reports.

Every query here runs against a CIOracle, so the same classifier serves
independence models, graphs, exact tables and Gaussian equicorrelation models.
"""

import itertools
import logging
from collections import deque
from collections.abc import Iterator
from dataclasses import dataclass
from enum import StrEnum
from typing import Protocol

import numpy as np

from exchci.config import CI_TOL, DEFAULT_SEED, GAUSSIAN_TOL
from exchci.core import Dyad, GroundSet, Kind, NodePermutation, VarSet, bit, iter_bits, subsets_by_size, vector_universe
from exchci.dist import Equicorrelation, JointTable, ci_holds, partial_covariance
from exchci.errors import InvalidArgumentError, PreconditionError, UnsupportedGraphError
from exchci.graphs import (
    Edge,
    EdgeKind,
    MixedGraph,
    coseparator,
    induced_model,
    incidence_graph,
    separates,
)
from exchci.imodel import (
    IndependenceModel,
    Property,
    PropertyReport,
    Statement,
    Triple,
    check_property,
    skeleton_of_model,
    triple_order,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


class CIOracle(Protocol):
    """Answers <a,b|c> queries over a fixed ground set; answers must be deterministic."""

    @property
    def ground(self) -> GroundSet: ...

    def holds(self, a: VarSet, b: VarSet, c: VarSet) -> bool: ...


@dataclass(frozen=True)
class ModelOracle:
    model: IndependenceModel

    @property
    def ground(self) -> GroundSet:
        return self.model.ground

    def holds(self, a: VarSet, b: VarSet, c: VarSet) -> bool:
        return self.model.holds(a, b, c)


@dataclass(frozen=True)
class GraphOracle:
    graph: MixedGraph

    @property
    def ground(self) -> GroundSet:
        return self.graph.ground

    def holds(self, a: VarSet, b: VarSet, c: VarSet) -> bool:
        return separates(self.graph, a, b, c)


@dataclass(frozen=True)
class TableOracle:
    table: JointTable
    tol: float = CI_TOL

    @property
    def ground(self) -> GroundSet:
        return self.table.ground

    def holds(self, a: VarSet, b: VarSet, c: VarSet) -> bool:
        return ci_holds(self.table, a, b, c, self.tol)


@dataclass(frozen=True)
class GaussianOracle:
    """Vanishing partial covariance block of an equicorrelated Gaussian vector."""

    model: Equicorrelation
    tol: float = GAUSSIAN_TOL

    @property
    def ground(self) -> GroundSet:
        return vector_universe(self.model.n)

    def holds(self, a: VarSet, b: VarSet, c: VarSet) -> bool:
        if a & b or a & c or b & c:
            raise InvalidArgumentError("CI queries need pairwise disjoint sets")
        if not a or not b:
            return True
        block = partial_covariance(self.model.covariance(), list(iter_bits(a)), list(iter_bits(b)), list(iter_bits(c)))
        return bool(np.max(np.abs(block)) <= self.tol)


# ---------------------------------------------------------------------------
# Orbit closure
# ---------------------------------------------------------------------------


def orbit_closure(m: IndependenceModel) -> IndependenceModel:
    """Smallest superset of m closed under the ground's node-permutation action."""
    relabelings = [m.ground.relabeling(p) for p in m.ground.generators()]
    known: set[Triple] = set(m.elementary)
    queue: deque[Triple] = deque(known)
    while queue:
        u, v, c = queue.popleft()
        for relabel in relabelings:
            x, y = relabel.index_map[u], relabel.index_map[v]
            image = (x, y, relabel(c)) if x < y else (y, x, relabel(c))
            if image not in known:
                known.add(image)
                queue.append(image)
    logger.debug("orbit closure: %d -> %d statements", len(m), len(known))
    return IndependenceModel(m.ground, frozenset(known))


def is_exchangeable_model(m: IndependenceModel) -> bool:
    """Invariance under the generators is invariance under the whole group."""
    for perm in m.ground.generators():
        relabel = m.ground.relabeling(perm)
        for u, v, c in m.elementary:
            x, y = relabel.index_map[u], relabel.index_map[v]
            if not m.contains(x, y, relabel(c)):
                return False
    return True


# ---------------------------------------------------------------------------
# Regime classification
# ---------------------------------------------------------------------------


class RegimeTag(StrEnum):
    EMPTY = "Empty"
    UNDIRECTED_INCIDENCE = "UndirectedIncidence"
    BIDIRECTED_INCIDENCE = "BidirectedIncidence"
    UNDIRECTED_COMPLEMENT = "UndirectedComplement"
    BIDIRECTED_COMPLEMENT = "BidirectedComplement"
    COMPLETE = "Complete"
    INCONSISTENT = "Inconsistent"


@dataclass(frozen=True)
class Regime:
    """Classifier verdict.

    `disjoint_witness` is the first C with 1-2 ⊥ 3-4 | C, `sharing_witness` the
    first C with 1-2 ⊥ 1-3 | C. An Inconsistent verdict carries two
    witnesses of the same statement that disagree on the branch test.
    """

    tag: RegimeTag
    disjoint_witness: VarSet | None = None
    sharing_witness: VarSet | None = None
    conflict: tuple[VarSet, VarSet] | None = None

    def describe(self, ground: GroundSet) -> list[str]:
        lines = [f"regime {self.tag.value}"]
        if self.disjoint_witness is not None:
            lines.append(f"witness 1-2 ⊥ 3-4 | {ground.format_set(self.disjoint_witness)}")
        if self.sharing_witness is not None:
            lines.append(f"witness 1-2 ⊥ 1-3 | {ground.format_set(self.sharing_witness)}")
        if self.conflict is not None:
            first, second = self.conflict
            lines.append(f"conflict {ground.format_set(first)} vs {ground.format_set(second)}")
        return lines


def _spot_check(oracle: CIOracle, n: int, seed: int, rounds: int = 3) -> None:
    """Compare a few random queries with their permuted images."""
    ground = oracle.ground
    rng = np.random.default_rng(seed)
    for _ in range(rounds):
        u, v = (int(x) for x in rng.choice(ground.size, size=2, replace=False))
        rest = [k for k in range(ground.size) if k not in (u, v)]
        c = sum(bit(k) for k in rest if rng.random() < 0.5)
        perm = NodePermutation(tuple(int(x) + 1 for x in rng.permutation(n)))
        relabel = ground.relabeling(perm)
        before = oracle.holds(bit(u), bit(v), c)
        after = oracle.holds(bit(relabel.index_map[u]), bit(relabel.index_map[v]), relabel(c))
        if before != after:
            statement = Statement.elementary(u, v, c).format(ground)
            raise PreconditionError(f"Oracle is not exchangeable: {statement!r} changes under permutation {perm}")


def _split(witnesses: list[VarSet], marker: VarSet) -> tuple[list[VarSet], list[VarSet]]:
    return [c for c in witnesses if c & marker], [c for c in witnesses if not c & marker]


def classify_regime(oracle: CIOracle, n: int, seed: int = DEFAULT_SEED) -> Regime:
    """Decide which of the six canonical Markov classes an exchangeable network oracle belongs to.

    Fixes the nodes i, j, k, l, m to 1..5 and searches every conditioning set
    for 1-2 ⊥ 3-4 and for 1-2 ⊥ 1-3. Branch tests run over all witnesses.
    """
    ground = oracle.ground
    if ground.kind is not Kind.NETWORK or not ground.is_full or ground.n != n:
        raise InvalidArgumentError(f"classify_regime needs an oracle over all dyads of {n} nodes")
    if n < 4:
        raise InvalidArgumentError(f"classify_regime needs at least four nodes, got n={n}")
    _spot_check(oracle, n, seed)

    ij, kl, ik = (ground.index(Dyad(*pair)) for pair in ((1, 2), (3, 4), (1, 3)))
    disjoint = [
        c
        for c in subsets_by_size(ground.full_mask & ~(bit(ij) | bit(kl)))
        if oracle.holds(bit(ij), bit(kl), c)
    ]
    sharing = [
        c
        for c in subsets_by_size(ground.full_mask & ~(bit(ij) | bit(ik)))
        if oracle.holds(bit(ij), bit(ik), c)
    ]
    logger.info("classify: %d witnesses for 1-2,3-4 and %d for 1-2,1-3", len(disjoint), len(sharing))
    first_disjoint = disjoint[0] if disjoint else None
    first_sharing = sharing[0] if sharing else None

    if disjoint and sharing:
        return Regime(RegimeTag.EMPTY, first_disjoint, first_sharing)
    if disjoint:
        with_ik, without_ik = _split(disjoint, bit(ik))
        if with_ik and without_ik:
            return Regime(RegimeTag.INCONSISTENT, first_disjoint, None, (with_ik[0], without_ik[0]))
        tag = RegimeTag.UNDIRECTED_INCIDENCE if with_ik else RegimeTag.BIDIRECTED_INCIDENCE
        return Regime(tag, first_disjoint, None)
    if sharing:
        if n < 5:
            raise InvalidArgumentError("The complement branch tests dyad 4-5 and needs n >= 5")
        lm = ground.index(Dyad(4, 5))
        with_lm, without_lm = _split(sharing, bit(lm))
        if with_lm and without_lm:
            return Regime(RegimeTag.INCONSISTENT, None, first_sharing, (with_lm[0], without_lm[0]))
        tag = RegimeTag.UNDIRECTED_COMPLEMENT if with_lm else RegimeTag.BIDIRECTED_COMPLEMENT
        return Regime(tag, None, first_sharing)
    return Regime(RegimeTag.COMPLETE)


# ---------------------------------------------------------------------------
# Faithfulness
# ---------------------------------------------------------------------------


class Semantics(StrEnum):
    UNDIRECTED = "undirected"
    BIDIRECTED = "bidirected"


@dataclass(frozen=True)
class FaithfulnessReport:
    graph: MixedGraph
    markovian: bool
    faithful: bool
    failing_triple: Statement | None = None


def faithfulness_report(m: IndependenceModel, g: MixedGraph) -> FaithfulnessReport:
    """Compare m with the separations of a purely undirected or purely bidirected graph."""
    if g.ground != m.ground:
        raise InvalidArgumentError("Faithfulness needs the graph and the model over the same ground set")
    if not (g.is_undirected or g.is_bidirected):
        raise UnsupportedGraphError("Faithfulness is only defined here for undirected or bidirected graphs")
    separations = induced_model(g).elementary
    markovian = separations <= m.elementary
    disagreements = sorted(separations ^ m.elementary, key=triple_order)
    failing = Statement.elementary(*disagreements[0]) if disagreements else None
    return FaithfulnessReport(g, markovian, not disagreements, failing)


def graph_of_model(m: IndependenceModel, semantics: Semantics) -> MixedGraph:
    """The skeleton of m drawn with lines or with arcs."""
    skeleton = skeleton_of_model(m)
    if Semantics(semantics) is Semantics.UNDIRECTED:
        return skeleton
    return MixedGraph.build(m.ground, (Edge(*e.pair, EdgeKind.ARC) for e in skeleton.edges))


CHARACTERIZATIONS = {
    Semantics.UNDIRECTED: (Property.INTERSECTION, Property.SINGLETON_TRANSITIVITY, Property.UPWARD_STABILITY),
    Semantics.BIDIRECTED: (Property.COMPOSITION, Property.SINGLETON_TRANSITIVITY, Property.DOWNWARD_STABILITY),
}


@dataclass(frozen=True)
class CharacterizationReport:
    semantics: Semantics
    reports: tuple[PropertyReport, ...]
    faithfulness: FaithfulnessReport

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.reports)

    @property
    def consistent(self) -> bool:
        """The property triple holds exactly when m is faithful to its own skeleton."""
        return self.all_hold == self.faithfulness.faithful


def characterization_check(m: IndependenceModel, semantics: Semantics) -> CharacterizationReport:
    semantics = Semantics(semantics)
    reports = tuple(check_property(m, p) for p in CHARACTERIZATIONS[semantics])
    faithfulness = faithfulness_report(m, graph_of_model(m, semantics))
    return CharacterizationReport(semantics, reports, faithfulness)


# ---------------------------------------------------------------------------
# Structured assumptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypothesisResult:
    name: str
    holds: bool
    witness: str | None = None


@dataclass(frozen=True)
class AssumptionReport:
    case: RegimeTag
    hypotheses: tuple[HypothesisResult, ...]

    @property
    def holds(self) -> bool:
        if self.case is RegimeTag.EMPTY:
            return any(h.holds for h in self.hypotheses)
        return all(h.holds for h in self.hypotheses)


def _model_separators(m: IndependenceModel, u: int, v: int, minimal: bool) -> list[VarSet]:
    """Inclusion-minimal (or maximal) C with <u,v|C> in m, by size then lexicographically."""
    found = [c for c in subsets_by_size(m.ground.full_mask & ~(bit(u) | bit(v))) if m.contains(u, v, c)]
    lookup = set(found)
    if minimal:
        return [c for c in found if not any(c & ~bit(x) in lookup for x in iter_bits(c))]
    free = m.ground.full_mask & ~(bit(u) | bit(v))
    return [c for c in found if not any(c | bit(x) in lookup for x in iter_bits(free & ~c))]


def _swap(ground: GroundSet, mask: VarSet, *pairs: tuple[int, int]) -> VarSet:
    """Apply the node transpositions in order."""
    for a, b in pairs:
        mask = ground.act(NodePermutation.transposition(ground.n, a, b), mask)
    return mask


def _incidence_invariance(ground: GroundSet, c: VarSet, outside: VarSet) -> str | None:
    """C must be fixed by swapping 3<->m then 4<->h for every dyad mh in `outside` avoiding nodes 1 and 2.

    Either orientation of mh is accepted.
    """
    for d in ground.members(outside):
        if {1, 2} & set(d.nodes):
            continue
        if not any(_swap(ground, c, (3, m), (4, h)) == c for m, h in (d.nodes, d.nodes[::-1])):
            return f"{ground.format_set(c)} moves under swapping 3 with {d.i} and 4 with {d.j}"
    return None


def _complement_invariance(ground: GroundSet, c: VarSet) -> str | None:
    """C must be fixed by swapping 3<->m for every m outside 1, 2, 3 with 1-m or 3-m missing from C."""
    for m in range(4, ground.n + 1):
        if all(c & bit(ground.index(Dyad(l, m))) for l in (1, 3)):
            continue
        if _swap(ground, c, (3, m)) != c:
            return f"{ground.format_set(c)} moves under swapping 3 with {m}"
    return None


def _first_failure(items: Iterator[str | None]) -> str | None:
    return next((item for item in items if item is not None), None)


def _hypothesis(name: str, witness: str | None) -> HypothesisResult:
    return HypothesisResult(name, witness is None, witness)


def structured_assumption_check(m: IndependenceModel, case: RegimeTag) -> AssumptionReport:
    """Check the minimal/maximal separator hypotheses under which intersection and composition imply faithfulness."""
    case = RegimeTag(case)
    if case in (RegimeTag.COMPLETE, RegimeTag.INCONSISTENT):
        raise InvalidArgumentError(f"No structural hypotheses to check for regime {case.value!r}")
    ground = m.ground
    if ground.kind is not Kind.NETWORK or not ground.is_full or ground.n < 4:
        raise InvalidArgumentError("Structured assumptions need a model over all dyads of at least four nodes")
    if not m.is_semigraphoid:
        raise PreconditionError("structured_assumption_check needs a semi-graphoid closed model")
    if not is_exchangeable_model(m):
        raise PreconditionError("structured_assumption_check needs an exchangeable model")

    ij, kl, ik = (ground.index(Dyad(*pair)) for pair in ((1, 2), (3, 4), (1, 3)))
    full = ground.full_mask

    if case is RegimeTag.EMPTY:
        rest_kl = full & ~(bit(ij) | bit(kl))
        rest_ik = full & ~(bit(ij) | bit(ik))
        unconditional = m.contains(ij, kl, 0) and m.contains(ij, ik, 0)
        conditioned = m.contains(ij, kl, rest_kl) and m.contains(ij, ik, rest_ik)
        missing = "statement missing from the model"
        return AssumptionReport(
            case,
            (
                HypothesisResult("unconditional", unconditional, None if unconditional else missing),
                HypothesisResult("fully-conditioned", conditioned, None if conditioned else missing),
            ),
        )

    if case in (RegimeTag.UNDIRECTED_INCIDENCE, RegimeTag.BIDIRECTED_INCIDENCE):
        pair = bit(ij) | bit(kl)
        anchor = ground.mask_of([Dyad(1, 3), Dyad(1, 4), Dyad(2, 3), Dyad(2, 4)])
        undirected = case is RegimeTag.UNDIRECTED_INCIDENCE
        separators = _model_separators(m, ij, kl, minimal=undirected)
    else:
        pair = bit(ij) | bit(ik)
        anchor = coseparator(ground, (1, 2, 3))
        undirected = case is RegimeTag.UNDIRECTED_COMPLEMENT
        separators = _model_separators(m, ij, ik, minimal=undirected)

    if undirected:
        placement = _hypothesis(
            "containment",
            _first_failure(
                None if anchor & ~c == 0 else f"{ground.format_set(c)} misses {ground.format_set(anchor & ~c)}"
                for c in separators
            ),
        )
        views = separators
    else:
        placement = _hypothesis(
            "disjointness",
            _first_failure(
                None if not anchor & c else f"{ground.format_set(c)} meets {ground.format_set(anchor & c)}"
                for c in separators
            ),
        )
        # bidirected hypotheses are the duals: read them on the dual complement
        views = [full & ~(c | pair) for c in separators]

    if case in (RegimeTag.UNDIRECTED_INCIDENCE, RegimeTag.BIDIRECTED_INCIDENCE):
        invariance = _first_failure(_incidence_invariance(ground, v, full & ~(v | pair)) for v in views)
    else:
        # quantified over the named separator: the dyads avoiding 1 and 2, or for
        # the bidirected case the star set whose dual complement that is
        named_view = coseparator(ground, (1, 2))
        named = named_view if undirected else full & ~(named_view | pair)
        if named not in separators:
            kind = "minimal" if undirected else "maximal"
            invariance = f"{ground.format_set(named)} is not a {kind} separator of 1-2 and 1-3"
        else:
            invariance = _complement_invariance(ground, named_view)
    logger.debug("structured assumptions %s: %d separators examined", case.value, len(separators))
    return AssumptionReport(case, (placement, _hypothesis("swap-invariance", invariance)))


# ---------------------------------------------------------------------------
# Skeleton classes
# ---------------------------------------------------------------------------


class SkeletonClass(StrEnum):
    EMPTY = "empty"
    INCIDENCE = "incidence"
    COMPLEMENT = "complement"
    COMPLETE = "complete"
    OTHER = "other"


def skeleton_class(m: IndependenceModel) -> SkeletonClass:
    """Which canonical dyad graph the skeleton of a network model is, if any."""
    if m.ground.kind is not Kind.NETWORK or not m.ground.is_full or m.ground.n < 2:
        raise InvalidArgumentError("Skeleton classes are defined for models over all dyads")
    pairs = {e.pair for e in skeleton_of_model(m).edges}
    every = set(itertools.combinations(range(m.ground.size), 2))
    if not pairs:
        return SkeletonClass.EMPTY
    if pairs == every:
        return SkeletonClass.COMPLETE
    incidence = {e.pair for e in incidence_graph(m.ground.n).edges}
    if pairs == incidence:
        return SkeletonClass.INCIDENCE
    if pairs == every - incidence:
        return SkeletonClass.COMPLEMENT
    return SkeletonClass.OTHER


@dataclass(frozen=True)
class NodeSharingReport:
    skeleton: SkeletonClass
    conforms: bool
    offending: Statement | None = None


def node_sharing_pattern(m: IndependenceModel) -> NodeSharingReport:
    """Incidence skeletons admit statements only between disjoint dyads, complement skeletons only between sharing ones."""
    skeleton = skeleton_class(m)
    if skeleton is SkeletonClass.OTHER:
        return NodeSharingReport(skeleton, False)
    if skeleton in (SkeletonClass.EMPTY, SkeletonClass.COMPLETE):
        return NodeSharingReport(skeleton, True)
    want_shared = skeleton is SkeletonClass.COMPLEMENT
    elements = m.ground.elements
    for u, v, c in sorted(m.elementary, key=triple_order):
        if elements[u].shares_node(elements[v]) != want_shared:
            return NodeSharingReport(skeleton, False, Statement.elementary(u, v, c))
    return NodeSharingReport(skeleton, True)
