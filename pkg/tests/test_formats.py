"""Tests for exchci.formats — model and table files, graph rendering."""

import pytest

from exchci.core import Dyad, bit
from exchci.dist import orbits_of_table
from exchci.errors import FormatError
from exchci.formats import (
    format_graph,
    format_model,
    format_orbits,
    format_table,
    parse_model,
    parse_table,
    read_model,
    read_table,
    to_dot,
)
from exchci.graphs import Edge, EdgeKind, MixedGraph, incidence_graph
from exchci.imodel import IndependenceModel

NETWORK_MODEL = """\
ground network n=4
# 1-2 against 3-4 given the four mixed dyads
stmt {1-2} ; {3-4} ; {1-3,1-4,2-3,2-4}
"""


# ---------------------------------------------------------------------------
# Model files
# ---------------------------------------------------------------------------


class TestModelFiles:
    def test_parse_network_model(self, network4):
        m = parse_model(NETWORK_MODEL)
        assert m.ground == network4
        ij, kl = network4.index(Dyad(1, 2)), network4.index(Dyad(3, 4))
        assert m.elementary == {(ij, kl, network4.full_mask & ~(bit(ij) | bit(kl)))}

    def test_general_statement_expands(self):
        m = parse_model("ground vector n=3\nstmt 1 ; 2,3 ; {}\n")
        assert len(m) == 4

    def test_format_model(self, vector3):
        m = IndependenceModel.of(vector3, [(0, 1, bit(2)), (0, 1, 0)])
        assert format_model(m) == "ground vector n=3\nstmt {1} ; {2} ; {}\nstmt {1} ; {2} ; {3}\n"

    def test_format_is_canonical(self):
        text = format_model(parse_model("ground vector n=3\nstmt {2} ; {1} ; {3}\n"))
        assert format_model(parse_model(text)) == text

    def test_empty_model(self, vector3):
        assert parse_model("ground vector n=3\n") == IndependenceModel.empty(vector3)

    def test_read_model(self, write_file):
        assert len(read_model(write_file("m.txt", NETWORK_MODEL))) == 1

    @pytest.mark.parametrize(
        "text, message",
        [
            ("", "Empty file"),
            ("ground graph n=4\n", "Bad header"),
            ("ground vector n=x\n", "Bad header"),
            ("ground vector n=3\nstatement 1 ; 2 ; {}\n", "line 2: Expected a 'stmt' line"),
            ("ground vector n=3\nstmt 1 ; 2\n", "three ';'-separated sets"),
            ("ground vector n=3\nstmt 1 ; 1 ; {}\n", "line 2: .*disjoint"),
            ("ground vector n=3\nstmt 1 ; 4 ; {}\n", "line 2: .*not in the ground set"),
        ],
    )
    def test_malformed(self, text, message):
        with pytest.raises(FormatError, match=message):
            parse_model(text)

    def test_error_carries_line_number(self):
        with pytest.raises(FormatError) as excinfo:
            parse_model("ground vector n=3\n\n# note\nstmt 1 ; 9 ; {}\n")
        assert excinfo.value.line == 4


# ---------------------------------------------------------------------------
# Table files
# ---------------------------------------------------------------------------


class TestTableFiles:
    def test_parse_dist(self):
        t = parse_table("dist vector n=2\np 10 0.25\np 01 0.25\np 11 0.5\n")
        # character k is element k
        assert t.probability(0b01) == pytest.approx(0.25)
        assert t.probability(0b11) == pytest.approx(0.5)
        assert t.probability(0) == 0.0

    def test_parse_orbits(self):
        t = parse_table("orbits network n=4\nw 000000 0.5\nw 111111 0.5\n")
        assert t.probability(0) == pytest.approx(0.5)
        assert t.probability(63) == pytest.approx(0.5)

    def test_orbit_keys_are_least_bitstrings(self):
        text = "orbits network n=3\nw 000 0.4\nw 001 0.2\n"
        t = parse_table(text)
        assert t.probability(0b001) == pytest.approx(0.2)
        assert format_orbits(orbits_of_table(t)) == text

    def test_orbit_key_must_be_least(self):
        with pytest.raises(FormatError, match="canonical state"):
            parse_table("orbits network n=3\nw 000 0.4\nw 100 0.2\n")

    def test_format_table(self):
        text = "dist vector n=2\np 10 0.25\np 01 0.25\np 11 0.5\n"
        assert format_table(parse_table(text)) == "dist vector n=2\np 10 0.25\np 01 0.25\np 11 0.5\n"

    def test_read_table(self, write_file):
        t = read_table(write_file("t.txt", "dist vector n=1\np 1 1.0\n"))
        assert t.probability(1) == 1.0

    @pytest.mark.parametrize(
        "text, message",
        [
            ("ground vector n=2\n", "Bad header"),
            ("dist vector n=2\nw 10 1.0\n", "Expected 'p <bits> <decimal>'"),
            ("dist vector n=2\np 1 1.0\n", "must be 2 characters"),
            ("dist vector n=2\np 12 1.0\n", "must be 2 characters"),
            ("dist vector n=2\np 10 0.5\np 10 0.5\n", "line 3: State 10 listed twice"),
            ("dist vector n=2\np 10 half\n", "Not a decimal"),
            ("dist vector n=2\np 10 0.5\n", "sum to"),
            ("dist vector n=2\np 10 1.5\np 01 -0.5\n", "Negative probability"),
            ("orbits network n=4\nw 000001 1.0\n", "normalize"),
            ("orbits network n=4\nw 010000 0.5\nw 111111 0.5\n", "canonical state"),
        ],
    )
    def test_malformed(self, text, message):
        with pytest.raises(FormatError, match=message):
            parse_table(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_table(str(tmp_path / "absent.txt"))


# ---------------------------------------------------------------------------
# Graph rendering
# ---------------------------------------------------------------------------


class TestGraphRendering:
    def test_format_graph(self, vector3):
        g = MixedGraph.build(vector3, [Edge(0, 1, EdgeKind.LINE), Edge(2, 1, EdgeKind.ARROW)])
        assert format_graph(g) == "graph vector n=3 vertices=3 edges=2\n1 -- 2\n3 -> 2\n"

    def test_format_arcs(self, vector3):
        g = MixedGraph.build(vector3, [Edge(0, 2, EdgeKind.ARC)])
        assert format_graph(g).splitlines()[1] == "1 <-> 3"

    def test_incidence_header(self):
        assert format_graph(incidence_graph(4)).splitlines()[0] == "graph network n=4 vertices=6 edges=12"

    def test_to_dot(self, vector3):
        g = MixedGraph.build(vector3, [Edge(2, 1, EdgeKind.ARROW), Edge(0, 1, EdgeKind.ARC)])
        assert to_dot(g) == (
            "digraph G {\n"
            '  "1";\n'
            '  "2";\n'
            '  "3";\n'
            '  "1" -> "2" [dir=both];\n'
            '  "3" -> "2" [dir=forward];\n'
            "}\n"
        )
