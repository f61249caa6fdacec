import pytest

from contactposets.core import POSET, SEMILATTICE, ContactStructure
from contactposets.enumeration import AgeCatalog, canonical_key
from contactposets.fraisse import (
    build_limit_stage,
    check_class_properties,
    check_extension_property,
    generated_subsemilattice,
    one_point_extensions,
    stage_embeds_previous,
    trivial_stage,
)
from contactposets.gallery import m3


@pytest.fixture(scope="module")
def poset_catalog_3():
    return AgeCatalog.build(3, POSET)


@pytest.fixture(scope="module")
def semilattice_catalog_3():
    return AgeCatalog.build(3, SEMILATTICE)


class TestOnePointExtensions:
    def test_two_chain_extension_classes(self, poset_catalog_3):
        two_chain = poset_catalog_3.by_size(2)[0]
        extensions = one_point_extensions(two_chain, poset_catalog_3)
        # oracle, counted by hand: the three-chain extends the copy at its
        # bottom pair and at its outer pair (inequivalent), each fork
        # target contributes one class per contact relation
        assert len(extensions) == 4
        assert len({canonical_key(t) for t, _ in extensions}) == 3

    def test_trivial_extends_to_everything_of_size_two(self, poset_catalog_3):
        trivial = poset_catalog_3.by_size(1)[0]
        extensions = one_point_extensions(trivial, poset_catalog_3)
        assert len(extensions) == 1

    def test_maximal_size_has_none(self, poset_catalog_3):
        for item in poset_catalog_3.by_size(3):
            assert one_point_extensions(item, poset_catalog_3) == []


class TestStageBuilding:
    def test_zero_sweeps_is_trivial(self, poset_catalog_3):
        stage = build_limit_stage(POSET, 1, 0, catalog=poset_catalog_3)
        assert stage.structure.n == 1
        assert stage.log == ()

    def test_cap_one_single_sweep(self, poset_catalog_3):
        # the only size-1 item extends to the single 2-element structure
        stage = build_limit_stage(POSET, 1, 1, catalog=poset_catalog_3)
        assert stage.structure.n == 2
        assert len(stage.log) == 1

    def test_cap_one_reaches_fixpoint(self, poset_catalog_3):
        stage = build_limit_stage(POSET, 1, 10, catalog=poset_catalog_3)
        assert not stage.budget_exceeded
        report = check_extension_property(stage, 1, poset_catalog_3)
        assert report.fraction == 1.0

    def test_budget_flag(self, poset_catalog_3):
        stage = build_limit_stage(POSET, 2, 50, catalog=poset_catalog_3, max_elements=10)
        assert stage.budget_exceeded
        assert stage.structure.n <= 11

    def test_determinism(self, poset_catalog_3):
        one = build_limit_stage(POSET, 2, 3, catalog=poset_catalog_3, max_elements=24)
        two = build_limit_stage(POSET, 2, 3, catalog=poset_catalog_3, max_elements=24)
        assert one.structure == two.structure
        assert one.log == two.log

    def test_stages_grow_monotonically(self, poset_catalog_3):
        previous = build_limit_stage(POSET, 2, 1, catalog=poset_catalog_3, max_elements=30)
        current = build_limit_stage(POSET, 2, 2, catalog=poset_catalog_3, max_elements=30)
        assert stage_embeds_previous(previous, current)
        assert len(current.log) >= len(previous.log)

    def test_realizations_are_verifiable(self, poset_catalog_3):
        from contactposets.core import verify_map

        stage = build_limit_stage(POSET, 2, 2, catalog=poset_catalog_3, max_elements=30)
        for entry in stage.log:
            f = dict(entry.embedding)
            checked = verify_map(entry.sub, stage.structure, f)
            assert checked.report.is_embedding

    def test_semilattice_stage_stays_semilattice(self, semilattice_catalog_3):
        from contactposets.enumeration import is_semilattice

        stage = build_limit_stage(
            SEMILATTICE, 2, 3, catalog=semilattice_catalog_3, max_elements=40
        )
        assert stage.kind == SEMILATTICE
        assert is_semilattice(stage.structure)


class TestExtensionProperty:
    def test_trivial_stage_misses(self, poset_catalog_3):
        report = check_extension_property(trivial_stage(POSET), 1, poset_catalog_3)
        assert report.fraction < 1.0
        assert report.misses

    def test_misses_name_the_copy(self, poset_catalog_3):
        stage = build_limit_stage(POSET, 2, 1, catalog=poset_catalog_3, max_elements=30)
        report = check_extension_property(stage, 2, poset_catalog_3)
        for miss in report.misses:
            assert all(name in stage.structure.names for name in miss.image)

    def test_maximal_elements_block_full_fraction(self, poset_catalog_3):
        # a finite poset stage has a maximal element, whose two-chain copy
        # cannot realize the extension adding a strictly larger point
        stage = build_limit_stage(POSET, 2, 20, catalog=poset_catalog_3, max_elements=40)
        report = check_extension_property(stage, 2, poset_catalog_3)
        assert report.fraction < 1.0


class TestLocalFiniteness:
    def test_generated_subsemilattice_bound(self, semilattice_catalog_3):
        from itertools import combinations

        stage = build_limit_stage(
            SEMILATTICE, 2, 2, catalog=semilattice_catalog_3, max_elements=40
        )
        s = stage.structure
        nonbottom = [n for n in s.names if n != s.names[s.bottom]]
        for k in (1, 2, 3):
            for chosen in combinations(nonbottom[:6], k):
                closure = generated_subsemilattice(s, chosen)
                assert len(closure) <= 2 ** k - 1 + 1


class TestClassProperties:
    def test_poset_age_to_three(self, poset_catalog_3):
        report = check_class_properties(poset_catalog_3, ap_exhaustive_bound=3)
        assert report.ok
        assert report.ap_instances > 0

    def test_semilattice_age_to_three(self, semilattice_catalog_3):
        report = check_class_properties(semilattice_catalog_3, ap_exhaustive_bound=3)
        assert report.ok

    def test_hp_witness_chain_inside_m3(self, poset_catalog_4):
        from contactposets.core import induced_substructure

        piece = induced_substructure(m3("overlap"), ["0", "a", "1"])
        poset_piece = ContactStructure(
            piece.names, piece.bottom, piece.up, piece.contact, POSET
        )
        assert poset_catalog_4.find(poset_piece) is not None

    def test_jep_sizes(self, poset_catalog_3):
        # joint embedding never identifies anything beyond the bottom
        from contactposets.amalgam import AmalgamInstance, contact_amalgam

        two_chain = poset_catalog_3.by_size(2)[0]
        fork = poset_catalog_3.by_size(3)[1]
        c = ContactStructure(("0",), 0, (1,), (0,), POSET)
        inst = AmalgamInstance.from_embeddings(
            two_chain, fork, c, {"0": "0"}, {"0": "0"}
        )
        assert contact_amalgam(inst).n == 4
