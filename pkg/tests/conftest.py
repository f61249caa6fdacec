import pytest

from contactposets.core import POSET, SEMILATTICE, ContactStructure
from contactposets.enumeration import AgeCatalog


@pytest.fixture(scope="session")
def poset_catalog_4():
    return AgeCatalog.build(4, POSET)


@pytest.fixture(scope="session")
def semilattice_catalog_4():
    return AgeCatalog.build(4, SEMILATTICE)


@pytest.fixture(scope="session")
def poset_catalog_6():
    return AgeCatalog.build(6, POSET)


@pytest.fixture(scope="session")
def semilattice_catalog_6():
    return AgeCatalog.build(6, SEMILATTICE)


@pytest.fixture
def v_overlap():
    return ContactStructure.build(
        ["0", "a", "b"], "0", [("0", "a"), ("0", "b")],
        [("a", "a"), ("b", "b")], POSET,
    )


@pytest.fixture
def v_contact():
    return ContactStructure.build(
        ["0", "a", "b"], "0", [("0", "a"), ("0", "b")],
        [("a", "a"), ("b", "b"), ("a", "b")], POSET,
    )


@pytest.fixture
def chain3():
    return ContactStructure.build(
        ["0", "c", "1"], "0", [("0", "c"), ("c", "1")],
        [("c", "c"), ("c", "1"), ("1", "1")], POSET,
    )


@pytest.fixture
def chain3_semilattice():
    return ContactStructure.build(
        ["0", "c", "1"], "0", [("0", "c"), ("c", "1")],
        [("c", "c"), ("c", "1"), ("1", "1")], SEMILATTICE,
    )


@pytest.fixture
def diamond():
    return ContactStructure.build(
        ["0", "x", "y", "1"], "0",
        [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")],
        [("x", "x"), ("y", "y"), ("1", "1"), ("x", "1"), ("y", "1")],
        SEMILATTICE,
    )
