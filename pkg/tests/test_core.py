"""Tests for exchci.core — dyads, bit masks, node permutations and ground sets."""

import pytest

from exchci.core import (
    Dyad,
    GroundSet,
    Kind,
    NodePermutation,
    all_permutations,
    dyad_universe,
    iter_bits,
    submasks,
    subsets_by_size,
    universe,
    vector_universe,
)
from exchci.errors import CapacityError, InvalidArgumentError


# ---------------------------------------------------------------------------
# Dyad
# ---------------------------------------------------------------------------


class TestDyad:
    def test_orders_endpoints(self):
        d = Dyad(3, 1)
        assert (d.i, d.j) == (1, 3)
        assert str(d) == "1-3"

    def test_rejects_loop(self):
        with pytest.raises(InvalidArgumentError, match="distinct"):
            Dyad(2, 2)

    def test_rejects_zero_node(self):
        with pytest.raises(InvalidArgumentError, match="1-based"):
            Dyad(0, 2)

    def test_parse(self):
        assert Dyad.parse(" 2-4 ") == Dyad(4, 2)

    def test_parse_rejects_garbage(self):
        with pytest.raises(InvalidArgumentError, match="Not a dyad token"):
            Dyad.parse("24")

    def test_shares_node(self):
        assert Dyad(1, 2).shares_node(Dyad(2, 3))
        assert not Dyad(1, 2).shares_node(Dyad(3, 4))


# ---------------------------------------------------------------------------
# Bit masks
# ---------------------------------------------------------------------------


class TestBitHelpers:
    def test_iter_bits(self):
        assert list(iter_bits(0b1011)) == [0, 1, 3]

    def test_submasks_order(self):
        assert list(submasks(0b101)) == [0b101, 0b100, 0b001, 0]

    def test_subsets_by_size(self):
        assert list(subsets_by_size(0b111)) == [0, 1, 2, 4, 3, 5, 6, 7]

    def test_subsets_by_size_restricted(self):
        assert list(subsets_by_size(0b1010, sizes=[1])) == [0b10, 0b1000]


# ---------------------------------------------------------------------------
# NodePermutation
# ---------------------------------------------------------------------------


class TestNodePermutation:
    def test_transposition(self):
        assert NodePermutation.transposition(4, 1, 2).mapping == (2, 1, 3, 4)

    def test_cycle(self):
        assert NodePermutation.cycle(4, [1, 2, 3, 4]).mapping == (2, 3, 4, 1)

    def test_compose_applies_right_first(self):
        p = NodePermutation.transposition(3, 1, 2)
        q = NodePermutation.cycle(3, [1, 2, 3])
        assert p.compose(q).mapping == (1, 3, 2)

    def test_inverse(self):
        c = NodePermutation.cycle(3, [1, 2, 3])
        assert c.inverse().mapping == (3, 1, 2)
        assert c.compose(c.inverse()).is_identity()

    def test_rejects_non_bijection(self):
        with pytest.raises(InvalidArgumentError, match="Not a permutation"):
            NodePermutation((1, 1, 2))

    def test_compose_size_mismatch(self):
        with pytest.raises(InvalidArgumentError, match="compose"):
            NodePermutation.identity(3).compose(NodePermutation.identity(4))

    def test_image_of_dyad_is_canonical(self):
        assert NodePermutation.transposition(4, 1, 4).image(Dyad(1, 3)) == Dyad(3, 4)

    def test_all_permutations(self):
        assert len(all_permutations(4)) == 24


# ---------------------------------------------------------------------------
# GroundSet
# ---------------------------------------------------------------------------


class TestGroundSet:
    def test_dyad_order(self, network4):
        assert [str(d) for d in network4.elements] == ["1-2", "1-3", "1-4", "2-3", "2-4", "3-4"]
        assert network4.size == 6
        assert network4.full_mask == 63
        assert network4.index(Dyad(2, 3)) == 3

    def test_format_and_parse_set(self, network4):
        mask = network4.mask_of([Dyad(3, 4), Dyad(1, 2)])
        assert network4.format_set(mask) == "{1-2,3-4}"
        assert network4.parse_set("{3-4, 1-2}") == mask
        assert network4.parse_set("1-2,3-4") == mask

    def test_empty_set(self, network4):
        assert network4.parse_set("") == 0
        assert network4.parse_set("{}") == 0
        assert network4.format_set(0) == "{}"

    def test_unknown_token(self, network4):
        with pytest.raises(InvalidArgumentError, match="not in the ground set"):
            network4.parse_token("5-6")

    def test_vector_token(self, vector3):
        assert vector3.parse_token("2") == 2
        with pytest.raises(InvalidArgumentError, match="vector element"):
            vector3.parse_token("x")

    def test_mask_outside_ground(self, vector3):
        with pytest.raises(InvalidArgumentError, match="outside"):
            vector3.check_mask(0b1000)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            dyad_universe(9)
        with pytest.raises(CapacityError):
            vector_universe(33)

    def test_rejects_unsorted_elements(self):
        with pytest.raises(InvalidArgumentError, match="lexicographic"):
            GroundSet(Kind.VECTOR, 3, (2, 1))

    def test_universe_dispatch(self):
        assert universe(Kind.NETWORK, 3).elements == (Dyad(1, 2), Dyad(1, 3), Dyad(2, 3))
        assert universe(Kind.VECTOR, 2).elements == (1, 2)

    def test_restrict(self, network4):
        sub = network4.restrict(0b101)
        assert sub.elements == (Dyad(1, 2), Dyad(1, 4))
        assert not sub.is_full
        assert network4.is_full

    def test_nodes_of(self, network4):
        assert network4.nodes_of(network4.mask_of([Dyad(1, 2), Dyad(2, 4)])) == {1, 2, 4}


class TestAction:
    def test_act_on_dyads(self, network4):
        perm = NodePermutation.transposition(4, 1, 3)
        assert network4.act(perm, network4.mask_of([Dyad(1, 2)])) == network4.mask_of([Dyad(2, 3)])

    def test_act_is_a_homomorphism(self, network4):
        p = NodePermutation.cycle(4, [1, 2, 3, 4])
        q = NodePermutation.transposition(4, 2, 4)
        for mask in (0b000111, 0b101010, 0b110001):
            assert network4.act(p.compose(q), mask) == network4.act(p, network4.act(q, mask))

    def test_symmetry_group_of_full_ground(self, network4):
        assert len(network4.symmetry_group()) == 24
        assert len(network4.generators()) == 2

    def test_symmetry_group_of_restricted_ground(self, network4):
        sub = network4.restrict(network4.mask_of([Dyad(1, 2)]))
        assert len(sub.symmetry_group()) == 4

    def test_image_outside_restricted_ground(self, network4):
        sub = network4.restrict(network4.mask_of([Dyad(1, 2)]))
        with pytest.raises(InvalidArgumentError, match="outside the ground set"):
            sub.relabeling(NodePermutation.transposition(4, 2, 3))

    def test_permutation_size_mismatch(self, network4):
        with pytest.raises(InvalidArgumentError, match="Permutation over 3 nodes"):
            network4.relabeling(NodePermutation.identity(3))
