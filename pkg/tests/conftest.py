"""Shared fixtures for exchci tests."""

import pytest

from exchci.core import Dyad, dyad_universe, vector_universe
from exchci.dist import OrbitWeighting, canonical_state, table_from_orbits
from exchci.graphs import incidence_graph
from exchci.verify.suites import upward_orbit_model


@pytest.fixture
def vector3():
    return vector_universe(3)


@pytest.fixture
def vector4():
    return vector_universe(4)


@pytest.fixture
def network4():
    return dyad_universe(4)


@pytest.fixture
def network5():
    return dyad_universe(5)


@pytest.fixture
def incidence4():
    return incidence_graph(4)


@pytest.fixture
def incidence5():
    return incidence_graph(5)


@pytest.fixture(scope="session")
def upward_orbit():
    """Orbit of <1-2,3-4 | {1-3,1-4,2-3,2-4}> over five nodes, closed under upward-stability."""
    return upward_orbit_model(5)


@pytest.fixture
def matching_triangle_table():
    """Four nodes: each perfect matching has mass 1/6 and each triangle 1/8."""
    ground = dyad_universe(4)
    matching = canonical_state(ground.mask_of([Dyad(1, 2), Dyad(3, 4)]), ground)
    triangle = canonical_state(ground.mask_of([Dyad(1, 2), Dyad(1, 3), Dyad(2, 3)]), ground)
    return table_from_orbits(OrbitWeighting(ground, {matching: 1 / 6, triangle: 1 / 8}))


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path as a string."""

    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write
