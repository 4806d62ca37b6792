"""Tests for exchci.imodel — statements, closures, property checks and duality."""

import pytest

from exchci.core import NodePermutation, bit
from exchci.errors import InvalidArgumentError, PreconditionError
from exchci.imodel import (
    IndependenceModel,
    Property,
    Statement,
    check_property,
    closure_with,
    dual,
    holds,
    parse_properties,
    semigraphoid_closure,
    skeleton_of_model,
)

# vector3 indices 0, 1, 2 are the elements 1, 2, 3
X1, X2, X3 = bit(0), bit(1), bit(2)


# ---------------------------------------------------------------------------
# Statements and models
# ---------------------------------------------------------------------------


class TestStatement:
    def test_sides_are_ordered(self):
        s = Statement(X2, X1)
        assert (s.a, s.b) == (X1, X2)

    def test_rejects_overlap(self):
        with pytest.raises(InvalidArgumentError, match="pairwise disjoint"):
            Statement(X1, X1 | X2)

    def test_format(self, vector3):
        assert Statement.elementary(0, 1, X3).format(vector3) == "1 ⊥ 2 | {3}"
        assert Statement(X1, X2 | X3).format(vector3) == "1 ⊥ {2,3} | {}"

    def test_flags(self):
        assert Statement.elementary(0, 1).is_elementary
        assert Statement(0, X1).is_trivial


class TestIndependenceModel:
    def test_from_statements_expands(self, vector3):
        m = IndependenceModel.from_statements(vector3, [Statement(X1, X2 | X3)])
        assert m.elementary == {(0, 1, 0), (0, 1, X3), (0, 2, 0), (0, 2, X2)}
        assert holds(m, X1, X2 | X3, 0)

    def test_of_canonicalizes_pairs(self, vector3):
        m = IndependenceModel.of(vector3, [(1, 0, X3)])
        assert m.contains(0, 1, X3)
        assert m.contains(1, 0, X3)

    def test_of_rejects_overlap(self, vector3):
        with pytest.raises(InvalidArgumentError, match="overlaps"):
            IndependenceModel.of(vector3, [(0, 1, X1)])

    def test_holds_trivial_sides(self, vector3):
        assert IndependenceModel.empty(vector3).holds(0, X1, X2)

    def test_holds_rejects_overlap(self, vector3):
        with pytest.raises(InvalidArgumentError, match="disjoint"):
            holds(IndependenceModel.empty(vector3), X1, X1, 0)

    def test_full_model(self, vector3):
        assert len(IndependenceModel.full(vector3)) == 6

    def test_statements_sorted(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, X3), (1, 2, 0), (0, 1, 0)])
        assert [(s.a, s.b, s.c) for s in m.statements()] == [(X1, X2, 0), (X1, X2, X3), (X2, X3, 0)]

    def test_permuted(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, X3)])
        swapped = m.permuted(NodePermutation.transposition(3, 1, 3))
        assert swapped.elementary == {(1, 2, X1)}


# ---------------------------------------------------------------------------
# Closure
# ---------------------------------------------------------------------------


class TestClosure:
    def test_contraction(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, X3), (0, 2, 0)])
        assert not m.is_semigraphoid
        closed = semigraphoid_closure(m)
        assert closed.is_semigraphoid
        assert closed == IndependenceModel.from_statements(vector3, [Statement(X1, X2 | X3)])

    def test_intersection_rule(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, X3), (0, 2, X2)])
        assert semigraphoid_closure(m) == m
        closed = closure_with(m, {Property.INTERSECTION})
        assert closed.contains(0, 1, 0)
        assert closed.contains(0, 2, 0)

    def test_composition_rule(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, 0), (0, 2, 0)])
        closed = closure_with(m, {Property.COMPOSITION})
        assert closed.contains(0, 1, X3)
        assert closed.contains(0, 2, X2)

    def test_upward_and_downward(self, vector3):
        up = closure_with(IndependenceModel.of(vector3, [(0, 1, 0)]), {Property.UPWARD_STABILITY})
        assert up.contains(0, 1, X3)
        down = closure_with(IndependenceModel.of(vector3, [(0, 1, X3)]), {Property.DOWNWARD_STABILITY})
        assert down.contains(0, 1, 0)

    def test_rejects_singleton_transitivity(self, vector3):
        with pytest.raises(InvalidArgumentError, match="disjunctive"):
            closure_with(IndependenceModel.empty(vector3), {Property.SINGLETON_TRANSITIVITY})

    def test_rejects_axiom_as_rule(self, vector3):
        with pytest.raises(InvalidArgumentError, match="Not a closure rule"):
            closure_with(IndependenceModel.empty(vector3), {Property.CONTRACTION})

    def test_idempotent(self, vector3):
        m = closure_with(IndependenceModel.of(vector3, [(0, 1, X3), (0, 2, X2)]), {Property.INTERSECTION})
        assert closure_with(m, {Property.INTERSECTION}) == m


class TestParseProperties:
    def test_parses_list(self):
        assert parse_properties("intersection, composition") == {Property.INTERSECTION, Property.COMPOSITION}

    def test_empty(self):
        assert parse_properties("") == frozenset()

    def test_unknown(self):
        with pytest.raises(InvalidArgumentError, match="Unknown property"):
            parse_properties("bogus")


# ---------------------------------------------------------------------------
# Property checks
# ---------------------------------------------------------------------------


class TestCheckProperty:
    def test_requires_closed_model(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, X3), (0, 2, 0)])
        with pytest.raises(PreconditionError, match="semi-graphoid"):
            check_property(m, Property.INTERSECTION)

    @pytest.mark.parametrize("general", [True, False])
    def test_intersection_violation(self, vector3, general):
        m = IndependenceModel.of(vector3, [(0, 1, X3), (0, 2, X2)])
        report = check_property(m, Property.INTERSECTION, general=general)
        assert not report.holds
        assert report.witness.recheck(m)

    @pytest.mark.parametrize("general", [True, False])
    def test_composition_violation(self, vector3, general):
        m = IndependenceModel.of(vector3, [(0, 1, 0), (0, 2, 0)])
        report = check_property(m, Property.COMPOSITION, general=general)
        assert not report.holds
        assert report.witness.recheck(m)

    def test_closed_model_satisfies_axioms(self, vector3):
        m = semigraphoid_closure(IndependenceModel.of(vector3, [(0, 1, X3), (0, 2, 0)]))
        for p in (Property.SYMMETRY, Property.DECOMPOSITION, Property.WEAK_UNION, Property.CONTRACTION):
            assert check_property(m, p).holds

    def test_singleton_transitivity(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, 0), (0, 1, X3)])
        report = check_property(m, Property.SINGLETON_TRANSITIVITY)
        assert not report.holds
        assert report.witness.describe(vector3) == "1 ⊥ 2 | {} and 1 ⊥ 2 | {3} but not 1 ⊥ 3 | {} nor 2 ⊥ 3 | {}"

    def test_stability(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, 0)])
        assert not check_property(m, Property.UPWARD_STABILITY).holds
        assert check_property(m, Property.DOWNWARD_STABILITY).holds

    def test_empty_model_satisfies_everything(self, vector3):
        m = IndependenceModel.empty(vector3)
        assert all(check_property(m, p).holds for p in Property)


# ---------------------------------------------------------------------------
# Duality and skeleton
# ---------------------------------------------------------------------------


class TestDual:
    def test_complements_conditioning_set(self, vector3):
        assert dual(IndependenceModel.of(vector3, [(0, 1, 0)])).elementary == {(0, 1, X3)}

    def test_involution(self, vector4):
        m = IndependenceModel.of(vector4, [(0, 1, 0), (2, 3, bit(0))])
        assert dual(dual(m)) == m

    def test_swaps_intersection_and_composition(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, 0), (0, 2, 0)])
        assert not check_property(m, Property.COMPOSITION).holds
        assert not check_property(dual(m), Property.INTERSECTION).holds


class TestSkeleton:
    def test_skeleton(self, vector3):
        g = skeleton_of_model(IndependenceModel.of(vector3, [(0, 1, 0)]))
        assert {e.pair for e in g.edges} == {(0, 2), (1, 2)}
