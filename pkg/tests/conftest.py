import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from endoapprox.approx import derive_ledger
from endoapprox.rings import (
    ProductRingSpec,
    eisenstein_ring,
    gaussian_ring,
    integer_ring,
    quaternion_ring,
    reference_rings,
)

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "src" / "endoapprox" / "scenarios"


@pytest.fixture(scope="session")
def rings():
    return reference_rings()


@pytest.fixture(scope="session")
def ring_z():
    return integer_ring()


@pytest.fixture(scope="session")
def ring_zi():
    return gaussian_ring()


@pytest.fixture(scope="session")
def ring_zw():
    return eisenstein_ring()


@pytest.fixture(scope="session")
def ring_hq():
    return quaternion_ring()


@pytest.fixture(scope="session")
def products(rings):
    return {tag: ProductRingSpec((spec,)) for tag, spec in rings.items()}


@pytest.fixture(scope="session")
def ledgers(products):
    return {tag: derive_ledger(p) for tag, p in products.items()}


@pytest.fixture(scope="session")
def scenario_paths():
    paths = sorted(SCENARIO_DIR.glob("*.json"))
    assert len(paths) >= 5, "bundled scenario pack is incomplete"
    return paths
