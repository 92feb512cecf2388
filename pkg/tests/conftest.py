import pytest

from tcat import catalog

ALL_NAMES = ["trivial", "fibonacci", "ising", "semion", "vec_z2_sym",
             "vec_z3_modular"]
MODULAR_NAMES = ["trivial", "fibonacci", "ising", "semion", "vec_z3_modular"]
DEGENERATE_NAME = "vec_z2_sym"


@pytest.fixture(scope="session")
def cats():
    """Catalog instances, shared session-wide so recoupling caches persist."""
    return {name: catalog(name) for name in ALL_NAMES}
