"""Finite contact posets, contact semilattices and event structures.

Axiom checking, overlap relations, representation embeddings into set
families and powersets, superamalgamation, finite limit stages, the
event-structure duality and a gallery of machine-checked
counterexamples.
"""

from .core import (
    POSET,
    SEMILATTICE,
    AxiomCheck,
    AxiomReport,
    BottomlessContact,
    ClosureOperator,
    ContactStructure,
    MapReport,
    StructureMap,
    adjoin_bottom,
    check_bottomless_axioms,
    check_contact_axioms,
    close_contact,
    compose_maps,
    contact_from_closure,
    drop_bottom,
    induced_substructure,
    normalize_order,
    overlap_relation,
    verify_map,
)
from .enumeration import (
    AgeCatalog,
    canonical_key,
    canonicalize,
    enumerate_contact_structures,
    enumerate_distributive_lattices,
    enumerate_posets_with_bottom,
    is_distributive,
    is_lattice,
    is_semilattice,
)
from .represent import (
    SetFamilyStructure,
    complete_lattice_embedding,
    join_preserving_embedding,
    macneille_completion,
    overlap_poset_embedding,
    overlap_semilattice_embedding,
    powerset_embedding,
)
from .amalgam import (
    AmalgamInstance,
    contact_amalgam,
    order_amalgam,
    semilattice_amalgam,
    verify_superamalgamation,
)
from .fraisse import (
    LimitStage,
    build_limit_stage,
    check_class_properties,
    check_extension_property,
    one_point_extensions,
)
from .events import (
    EventStructure,
    amalgamate_events,
    check_event_structure,
    contact_to_event,
    event_to_contact,
)
from .gallery import m3, run_gallery

__all__ = [name for name in dir() if not name.startswith("_")]
