"""Tests for exchci.exchange — orbit closure, regime classification and faithfulness reports."""

import pytest

from exchci.core import Dyad, bit, dyad_universe
from exchci.dist import Equicorrelation
from exchci.errors import InvalidArgumentError, PreconditionError, UnsupportedGraphError
from exchci.exchange import (
    GaussianOracle,
    GraphOracle,
    ModelOracle,
    RegimeTag,
    Semantics,
    SkeletonClass,
    characterization_check,
    classify_regime,
    faithfulness_report,
    graph_of_model,
    is_exchangeable_model,
    node_sharing_pattern,
    orbit_closure,
    skeleton_class,
    structured_assumption_check,
)
from exchci.graphs import Edge, EdgeKind, MixedGraph, family, incidence_graph, induced_model
from exchci.imodel import IndependenceModel

X1, X2, X3 = bit(0), bit(1), bit(2)


def _model(name, n):
    return induced_model(family(name, n))


# ---------------------------------------------------------------------------
# Orbit closure
# ---------------------------------------------------------------------------


class TestOrbitClosure:
    def test_vector_orbit(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, 0)])
        assert not is_exchangeable_model(m)
        closed = orbit_closure(m)
        assert closed.elementary == {(0, 1, 0), (0, 2, 0), (1, 2, 0)}
        assert is_exchangeable_model(closed)

    def test_network_orbit(self, network4):
        ij, kl = network4.index(Dyad(1, 2)), network4.index(Dyad(3, 4))
        closed = orbit_closure(IndependenceModel.of(network4, [(ij, kl, 0)]))
        # one statement per perfect matching of four nodes
        assert len(closed) == 3

    def test_graph_models_are_exchangeable(self):
        for name in ("L-", "Lbi", "Lc-", "Lcbi"):
            assert is_exchangeable_model(_model(name, 4))


# ---------------------------------------------------------------------------
# Regime classification
# ---------------------------------------------------------------------------


class TestClassifyRegime:
    @pytest.mark.parametrize(
        "name, tag",
        [
            ("empty", RegimeTag.EMPTY),
            ("L-", RegimeTag.UNDIRECTED_INCIDENCE),
            ("Lbi", RegimeTag.BIDIRECTED_INCIDENCE),
            ("Lc-", RegimeTag.UNDIRECTED_COMPLEMENT),
            ("Lcbi", RegimeTag.BIDIRECTED_COMPLEMENT),
            ("complete", RegimeTag.COMPLETE),
        ],
    )
    def test_canonical_graphs(self, name, tag):
        assert classify_regime(GraphOracle(family(name, 5)), 5).tag is tag

    def test_describe(self, network5):
        regime = classify_regime(GraphOracle(family("empty", 5)), 5)
        assert regime.describe(network5) == [
            "regime Empty",
            "witness 1-2 ⊥ 3-4 | {}",
            "witness 1-2 ⊥ 1-3 | {}",
        ]

    def test_bidirected_incidence_witness(self, network5):
        regime = classify_regime(GraphOracle(family("Lbi", 5)), 5)
        assert regime.disjoint_witness == 0
        assert regime.sharing_witness is None

    def test_inconsistent(self):
        merged = IndependenceModel(
            dyad_universe(5), _model("L-", 5).elementary | _model("Lbi", 5).elementary
        )
        regime = classify_regime(ModelOracle(merged), 5)
        assert regime.tag is RegimeTag.INCONSISTENT
        assert regime.conflict is not None
        assert regime.describe(dyad_universe(5))[-1].startswith("conflict ")

    def test_four_nodes_incidence(self):
        assert classify_regime(GraphOracle(family("L-", 4)), 4).tag is RegimeTag.UNDIRECTED_INCIDENCE

    def test_four_nodes_complement_branch(self):
        with pytest.raises(InvalidArgumentError, match="needs n >= 5"):
            classify_regime(GraphOracle(family("Lc-", 4)), 4)

    def test_ground_mismatch(self):
        with pytest.raises(InvalidArgumentError, match="needs an oracle"):
            classify_regime(GraphOracle(family("L-", 4)), 5)

    def test_too_few_nodes(self):
        with pytest.raises(InvalidArgumentError, match="at least four nodes"):
            classify_regime(GraphOracle(family("L-", 3)), 3)


class TestGaussianOracle:
    def test_equicorrelation(self):
        oracle = GaussianOracle(Equicorrelation(3, 0.3))
        assert oracle.ground.elements == (1, 2, 3)
        assert not oracle.holds(X1, X2, X3)
        assert oracle.holds(X1, 0, X3)

    def test_zero_correlation(self):
        assert GaussianOracle(Equicorrelation(3, 0.0)).holds(X1, X2 | X3, 0)


# ---------------------------------------------------------------------------
# Faithfulness
# ---------------------------------------------------------------------------


class TestFaithfulness:
    def test_graph_model_is_faithful(self, incidence4):
        report = faithfulness_report(induced_model(incidence4), incidence4)
        assert report.markovian and report.faithful
        assert report.failing_triple is None

    def test_wrong_semantics(self, incidence4):
        report = faithfulness_report(induced_model(incidence4), incidence_graph(4, EdgeKind.ARC))
        assert not report.markovian
        assert not report.faithful
        assert report.failing_triple is not None

    def test_ground_mismatch(self, incidence4):
        with pytest.raises(InvalidArgumentError, match="same ground set"):
            faithfulness_report(induced_model(incidence4), incidence_graph(5))

    def test_rejects_mixed_graph(self, vector3):
        g = MixedGraph.build(vector3, [Edge(0, 1, EdgeKind.ARROW)])
        with pytest.raises(UnsupportedGraphError):
            faithfulness_report(IndependenceModel.empty(vector3), g)

    def test_graph_of_model(self, incidence4):
        g = graph_of_model(induced_model(incidence4), Semantics.BIDIRECTED)
        assert g.is_bidirected
        assert g == incidence_graph(4, EdgeKind.ARC)

    @pytest.mark.parametrize("name, semantics", [("L-", Semantics.UNDIRECTED), ("Lbi", Semantics.BIDIRECTED)])
    def test_characterization(self, name, semantics):
        report = characterization_check(_model(name, 4), semantics)
        assert report.all_hold
        assert report.faithfulness.faithful
        assert report.consistent


# ---------------------------------------------------------------------------
# Structured assumptions
# ---------------------------------------------------------------------------


class TestStructuredAssumptions:
    @pytest.mark.parametrize(
        "name, case",
        [
            ("L-", RegimeTag.UNDIRECTED_INCIDENCE),
            ("Lbi", RegimeTag.BIDIRECTED_INCIDENCE),
            ("Lc-", RegimeTag.UNDIRECTED_COMPLEMENT),
            ("Lcbi", RegimeTag.BIDIRECTED_COMPLEMENT),
        ],
    )
    def test_canonical_graphs_pass(self, name, case):
        report = structured_assumption_check(_model(name, 5), case)
        assert [h.name for h in report.hypotheses][1] == "swap-invariance"
        assert report.holds

    def test_complement_named_separator_must_separate(self):
        report = structured_assumption_check(_model("Lc-", 5), RegimeTag.BIDIRECTED_COMPLEMENT)
        hypotheses = {h.name: h for h in report.hypotheses}
        assert not hypotheses["swap-invariance"].holds
        assert hypotheses["swap-invariance"].witness == "{1-4,1-5,2-3,2-4,2-5} is not a maximal separator of 1-2 and 1-3"
        assert not report.holds

    def test_empty_case(self, network4):
        assert structured_assumption_check(IndependenceModel.full(network4), RegimeTag.EMPTY).holds
        report = structured_assumption_check(IndependenceModel.empty(network4), RegimeTag.EMPTY)
        assert [h.name for h in report.hypotheses] == ["unconditional", "fully-conditioned"]
        assert not report.holds

    def test_no_hypotheses_for_complete(self, network4):
        with pytest.raises(InvalidArgumentError, match="No structural hypotheses"):
            structured_assumption_check(IndependenceModel.empty(network4), RegimeTag.COMPLETE)

    def test_needs_network_ground(self, vector4):
        with pytest.raises(InvalidArgumentError, match="all dyads"):
            structured_assumption_check(IndependenceModel.empty(vector4), RegimeTag.EMPTY)

    def test_needs_closed_model(self, network4):
        ij, kl, ik = (network4.index(Dyad(*p)) for p in ((1, 2), (3, 4), (1, 3)))
        m = orbit_closure(IndependenceModel.of(network4, [(ij, kl, bit(ik)), (ij, ik, 0)]))
        with pytest.raises(PreconditionError, match="semi-graphoid"):
            structured_assumption_check(m, RegimeTag.EMPTY)

    def test_needs_exchangeable_model(self, network4):
        m = IndependenceModel.of(network4, [(0, 5, 0)])
        with pytest.raises(PreconditionError, match="exchangeable"):
            structured_assumption_check(m, RegimeTag.EMPTY)


# ---------------------------------------------------------------------------
# Skeleton classes
# ---------------------------------------------------------------------------


class TestSkeletonClass:
    @pytest.mark.parametrize(
        "name, expected",
        [
            ("L-", SkeletonClass.INCIDENCE),
            ("Lbi", SkeletonClass.INCIDENCE),
            ("Lc-", SkeletonClass.COMPLEMENT),
            ("Lcbi", SkeletonClass.COMPLEMENT),
        ],
    )
    def test_canonical_models(self, name, expected):
        assert skeleton_class(_model(name, 4)) is expected

    def test_extremes(self, network4):
        assert skeleton_class(IndependenceModel.empty(network4)) is SkeletonClass.COMPLETE
        assert skeleton_class(IndependenceModel.full(network4)) is SkeletonClass.EMPTY

    def test_other(self, network4):
        assert skeleton_class(IndependenceModel.of(network4, [(0, 5, 0)])) is SkeletonClass.OTHER

    def test_vector_model(self, vector3):
        with pytest.raises(InvalidArgumentError, match="all dyads"):
            skeleton_class(IndependenceModel.empty(vector3))

    def test_node_sharing(self, network4):
        assert node_sharing_pattern(_model("L-", 4)).conforms
        assert node_sharing_pattern(_model("Lc-", 4)).conforms
        assert not node_sharing_pattern(IndependenceModel.of(network4, [(0, 5, 0)])).conforms
