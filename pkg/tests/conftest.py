from __future__ import annotations

import pytest
from hypothesis import strategies as st

import dagshare as ds


@st.composite
def instances(draw, max_nodes=6, max_contractors=3):
    """Random valid instances, built through the deterministic generator."""
    seed = draw(st.integers(min_value=0, max_value=10_000))
    n_nodes = draw(st.integers(min_value=1, max_value=max_nodes))
    n_contractors = draw(st.integers(min_value=2, max_value=max_contractors))
    density = draw(st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]))
    return ds.generate_instance(
        seed=seed,
        n_nodes=n_nodes,
        n_contractors=n_contractors,
        edge_density=density,
        cost_range=(1, 12),
    )


@pytest.fixture(scope="session")
def fig1():
    from helpers import load_fixture

    return load_fixture("fig1.inst")


@pytest.fixture(scope="session")
def fig2():
    from helpers import load_fixture

    return load_fixture("fig2.inst")


@pytest.fixture(scope="session")
def fig3():
    from helpers import load_fixture

    return load_fixture("fig3.inst")


@pytest.fixture(scope="session")
def fig4():
    from helpers import load_fixture

    return load_fixture("fig4.inst")


@pytest.fixture(scope="session")
def fig5():
    from helpers import load_fixture

    return load_fixture("fig5.inst")
