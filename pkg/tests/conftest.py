import numpy as np
import pytest

from symflow.model import FluidParams
from symflow.solutions import catalog


@pytest.fixture(scope="session")
def params():
    return FluidParams(H=1.0)


@pytest.fixture(scope="session")
def params_swe():
    return FluidParams(H=0.0)


@pytest.fixture(scope="session")
def catalog_entries(params):
    return {e.id: e for e in catalog(params)}


@pytest.fixture(scope="session")
def catalog_pairs(catalog_entries):
    """Built hodograph pairs, keyed by catalog id (session cache: the
    separable entry reconstructs its g by quadrature)."""
    return {eid: e.build() for eid, e in catalog_entries.items()
            if e.kind in ("hodograph_pair", "separable_f")}


@pytest.fixture(scope="session")
def catalog_fields(catalog_entries):
    return {eid: e.build() for eid, e in catalog_entries.items()
            if e.kind == "closed_field"}


@pytest.fixture()
def rng():
    return np.random.default_rng(2024)
