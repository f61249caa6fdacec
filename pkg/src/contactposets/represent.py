"""Representation constructions into set families with overlap contact.

All constructions share one target shape: a family of subsets of a
universe ordered by inclusion, with the overlap relation of that order
as contact.  Families remember a provenance entry per set, and the
embedding maps come back fully verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    POSET,
    SEMILATTICE,
    ContactStructure,
    StructureMap,
    bits,
    check_contact_axioms,
    compose_maps,
    overlap_relation,
    subset_join,
    verify_map,
)
from .errors import AxiomViolation, NotSemilattice
from .enumeration import is_lattice


@dataclass(frozen=True)
class Origin:
    kind: str                      # element-image | pair-intersection | union | cut
    refs: tuple[str, ...] = ()


@dataclass(frozen=True)
class SetFamilyStructure:
    """A family of subsets of a universe, ordered by inclusion.

    sets[i] is a bitmask over universe positions; structure is the same
    family viewed as a contact structure whose contact table is the
    family's own overlap relation.
    """

    universe: tuple[str, ...]
    sets: tuple[int, ...]
    provenance: tuple[tuple[Origin, ...], ...]
    structure: ContactStructure

    def members(self, position: int) -> tuple[str, ...]:
        return tuple(self.universe[i] for i in bits(self.sets[position]))

    def position_of(self, mask: int) -> int:
        return self.sets.index(mask)


def _set_name(universe: Sequence[str], mask: int) -> str:
    return "{" + ",".join(universe[i] for i in bits(mask)) + "}"


def overlap_of_family(sets: Sequence[int]) -> list[int]:
    """Overlap table of an inclusion-ordered family, recomputed from the
    family membership alone: x and y touch iff some nonempty member sits
    inside both.

    Small families get the direct witness scan; large ones a subset-sum
    sweep over the universe masks.
    """
    m = len(sets)
    if m <= 64:
        rows = [0] * m
        for i in range(m):
            for j in range(i, m):
                both = sets[i] & sets[j]
                if both and any(q and q & ~both == 0 for q in sets):
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
        return rows
    width = max(mask.bit_length() for mask in sets)
    has_witness = bytearray(1 << width)
    for q in sets:
        if q:
            has_witness[q] = 1
    for bit in range(width):
        step = 1 << bit
        for mask in range(1 << width):
            if mask & step and has_witness[mask ^ step]:
                has_witness[mask] = 1
    rows = [0] * m
    for i in range(m):
        for j in range(i, m):
            if has_witness[sets[i] & sets[j]]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return rows


def family_structure(
    universe: Sequence[str],
    masks: Sequence[int],
    provenance: dict[int, list[Origin]],
    kind: str,
) -> SetFamilyStructure:
    """Assemble the inclusion order plus overlap contact over the masks.

    Masks are sorted by size then bit pattern, which makes every family
    deterministic; the empty set must be present as the bottom.
    """
    ordered = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    if ordered[0] != 0:
        raise AxiomViolation("set family is missing its empty bottom")
    m = len(ordered)
    up = [0] * m
    for i, small in enumerate(ordered):
        for j, big in enumerate(ordered):
            if small & ~big == 0:
                up[i] |= 1 << j
    contact = overlap_of_family(ordered)
    names = tuple(_set_name(universe, mask) for mask in ordered)
    structure = ContactStructure(names, 0, tuple(up), tuple(contact), kind)
    report = check_contact_axioms(structure)
    if not report.ok:
        raise AxiomViolation("set family failed the contact axioms", report)
    return SetFamilyStructure(
        tuple(universe),
        tuple(ordered),
        tuple(tuple(provenance.get(mask, ())) for mask in ordered),
        structure,
    )


# ---------------------------------------------------------------------------
# stage one: complements of principal up-sets


def _nonbelow_masks(s: ContactStructure) -> list[int]:
    """mask of {x | a is not below x}, per element a."""
    return [s.full_mask & ~s.up[a] for a in range(s.n)]


def _image_family(
    s: ContactStructure, union_closed: bool
) -> tuple[list[int], dict[int, list[Origin]]]:
    phi = _nonbelow_masks(s)
    provenance: dict[int, list[Origin]] = {}
    masks: list[int] = []

    def add(mask: int, origin: Origin) -> None:
        if mask not in provenance:
            provenance[mask] = []
            masks.append(mask)
        provenance[mask].append(origin)

    for a in range(s.n):
        add(phi[a], Origin("element-image", (s.names[a],)))
    for a in range(s.n):
        for b in bits(s.contact[a]):
            if b < a:
                continue
            add(
                phi[a] & phi[b],
                Origin("pair-intersection", (s.names[a], s.names[b])),
            )
    if union_closed:
        frontier = list(masks)
        while frontier:
            fresh = []
            for x in frontier:
                for y in list(masks):
                    u = x | y
                    if u not in provenance:
                        add(u, Origin("union"))
                        fresh.append(u)
            frontier = fresh
    return masks, provenance


def overlap_poset_embedding(
    s: ContactStructure,
) -> tuple[SetFamilyStructure, StructureMap]:
    """Embed a contact poset into a set family with overlap contact.

    Each element a maps to the complement of its principal up-set; the
    family holds those images plus one intersection per contact pair, so
    every contact is witnessed inside the family and nothing else is.
    """
    _require_valid(s)
    masks, provenance = _image_family(s, union_closed=False)
    family = family_structure(s.names, masks, provenance, POSET)
    phi = _nonbelow_masks(s)
    mapping = {
        s.names[a]: _set_name(s.names, phi[a]) for a in range(s.n)
    }
    total = verify_map(s, family.structure, mapping)
    return family, total


def overlap_semilattice_embedding(
    s: ContactStructure,
) -> tuple[SetFamilyStructure, StructureMap]:
    """Semilattice version: close the family under finite unions, so set
    union realizes the join and the same map preserves it."""
    if s.kind != SEMILATTICE:
        raise NotSemilattice("input must carry the semilattice kind")
    _require_valid(s)
    family, total = _union_closed_embedding(s, SEMILATTICE)
    return family, total


def join_preserving_embedding(
    s: ContactStructure, check_subsets: bool = True
) -> tuple[SetFamilyStructure, StructureMap]:
    """Embed a mere contact poset into a union-closed overlap family.

    Every join that happens to exist in the source is sent to the union
    of the images; with check_subsets that is verified exhaustively over
    all carrier subsets before returning (callers growing large carriers
    may skip the sweep, the identity holds by construction).
    """
    _require_valid(s)
    family, total = _union_closed_embedding(s, SEMILATTICE)
    if check_subsets:
        missed = existing_join_misses(s, family, total)
        if missed:
            raise AxiomViolation(f"existing joins not preserved: {missed}")
    return family, total


def _union_closed_embedding(
    s: ContactStructure, kind: str
) -> tuple[SetFamilyStructure, StructureMap]:
    masks, provenance = _image_family(s, union_closed=True)
    family = family_structure(s.names, masks, provenance, kind)
    phi = _nonbelow_masks(s)
    mapping = {
        s.names[a]: _set_name(s.names, phi[a]) for a in range(s.n)
    }
    total = verify_map(s, family.structure, mapping)
    return family, total


def existing_join_misses(
    s: ContactStructure, family: SetFamilyStructure, total: StructureMap
) -> list[tuple[str, ...]]:
    """Subsets whose existing join is not mapped to the union of images."""
    phi = _nonbelow_masks(s)
    missed = []
    for subset in range(1 << s.n):
        j = subset_join(s, subset)
        if j is None:
            continue
        union = 0
        for a in bits(subset):
            union |= phi[a]
        if union != phi[j]:
            missed.append(tuple(s.names[a] for a in bits(subset)))
    return missed


# ---------------------------------------------------------------------------
# stage two: the full powerset


def powerset_embedding(
    s: ContactStructure,
) -> tuple[SetFamilyStructure, StructureMap]:
    """Embed a contact poset into a literal powerset with overlap.

    Runs the overlap-family stage first, re-checks that its contact is
    the overlap relation, then sends each family set q to the family
    sets inside q; the target is the powerset of the nonempty family
    members, which is a complete atomic Boolean carrier.
    """
    family, phi_map = overlap_poset_embedding(s)
    q_structure = family.structure
    if tuple(overlap_relation(q_structure)) != q_structure.contact:
        raise AxiomViolation("stage-one contact is not overlap")
    nonempty = [mask for mask in family.sets if mask]
    u = len(nonempty)
    universe = tuple(q_structure.names[family.sets.index(mask)] for mask in nonempty)

    def down_in_family(qmask: int) -> int:
        out = 0
        for pos, member in enumerate(nonempty):
            if member & ~qmask == 0:
                out |= 1 << pos
        return out

    provenance: dict[int, list[Origin]] = {
        mask: [Origin("union")] for mask in range(1 << u)
    }
    for i in range(q_structure.n):
        image = down_in_family(family.sets[i])
        provenance[image].insert(
            0, Origin("element-image", (q_structure.names[i],))
        )
    target = family_structure(universe, list(range(1 << u)), provenance, SEMILATTICE)
    psi = {
        q_structure.names[i]: _set_name(universe, down_in_family(family.sets[i]))
        for i in range(q_structure.n)
    }
    psi_map = verify_map(q_structure, target.structure, psi)
    total = compose_maps(phi_map, psi_map)
    return target, total


def is_boolean_family(family: SetFamilyStructure) -> bool:
    """True when the family is the full powerset of its universe with
    singleton atoms, hence closed under union, intersection and relative
    complement."""
    u = len(family.universe)
    if set(family.sets) != set(range(1 << u)):
        return False
    structure = family.structure
    atoms = [
        i
        for i in range(structure.n)
        if i != structure.bottom
        and all(
            not structure.up[j] >> i & 1
            for j in range(structure.n)
            if j not in (i, structure.bottom)
        )
    ]
    singletons = [i for i, mask in enumerate(family.sets) if bin(mask).count("1") == 1]
    return sorted(atoms) == sorted(singletons)


# ---------------------------------------------------------------------------
# completions by cuts


def macneille_completion(
    s: ContactStructure,
) -> tuple[SetFamilyStructure, StructureMap]:
    """Completion by cuts, with each element landing on its principal
    down-set.

    Cuts are realized as the intersections of principal down-sets plus
    the full carrier; the resulting lattice carries the overlap contact
    of its own order, and the canonical map preserves every meet and
    join that exists in the source (checked exhaustively).
    """
    down = s.down_masks()
    cuts = {s.full_mask} | {down[a] for a in range(s.n)}
    while True:
        fresh = {
            x & down[a] for x in cuts for a in range(s.n)
        } - cuts
        if not fresh:
            break
        cuts |= fresh
    provenance: dict[int, list[Origin]] = {mask: [Origin("cut")] for mask in cuts}
    for a in range(s.n):
        provenance[down[a]].append(Origin("element-image", (s.names[a],)))
    family = _cut_family(s, sorted(cuts), provenance, down[s.bottom])
    chi = {s.names[a]: _set_name(s.names, down[a]) for a in range(s.n)}
    total = verify_map(s, family.structure, chi)
    _check_cut_bounds(s, family, down)
    return family, total


def _cut_family(
    s: ContactStructure,
    masks: list[int],
    provenance: dict[int, list[Origin]],
    bottom_cut: int,
) -> SetFamilyStructure:
    ordered = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    if ordered[0] != bottom_cut:
        raise AxiomViolation("least cut is not the bottom's down-set")
    m = len(ordered)
    up = [0] * m
    for i, small in enumerate(ordered):
        for j, big in enumerate(ordered):
            if small & ~big == 0:
                up[i] |= 1 << j
    names = tuple(_set_name(s.names, mask) for mask in ordered)
    skeleton = ContactStructure(names, 0, tuple(up), tuple([0] * m), SEMILATTICE)
    contact = overlap_relation(skeleton)
    structure = skeleton.with_contact(contact)
    report = check_contact_axioms(structure)
    if not report.ok:
        raise AxiomViolation("cut lattice failed the contact axioms", report)
    if not is_lattice(structure):
        raise AxiomViolation("completion is not a lattice")
    return SetFamilyStructure(
        tuple(s.names),
        tuple(ordered),
        tuple(tuple(provenance.get(mask, ())) for mask in ordered),
        structure,
    )


def _check_cut_bounds(
    s: ContactStructure, family: SetFamilyStructure, down: Sequence[int]
) -> None:
    """Exhaustive meet/join preservation over all carrier subsets."""
    target = family.structure
    pos = {mask: i for i, mask in enumerate(family.sets)}

    def subset_meet(subset: int) -> int | None:
        lb = s.full_mask
        for i in bits(subset):
            lb &= down[i]
        for i in bits(lb):
            if lb & ~down[i] == 0:
                return i
        return None

    for subset in range(1 << s.n):
        chosen = list(bits(subset))
        join = subset_join(s, subset)
        if join is not None:
            images = 0
            for a in chosen:
                images |= 1 << pos[down[a]]
            got = subset_join(target, images)
            if got != pos[down[join]]:
                raise AxiomViolation(
                    f"completion lost the join of {[s.names[a] for a in chosen]}"
                )
        meet = subset_meet(subset)
        if meet is not None and chosen:
            acc = s.full_mask
            for a in chosen:
                acc &= down[a]
            if acc != down[meet]:
                raise AxiomViolation(
                    f"completion lost the meet of {[s.names[a] for a in chosen]}"
                )


def complete_lattice_embedding(
    s: ContactStructure,
) -> tuple[SetFamilyStructure, StructureMap]:
    """Embed a contact semilattice into a bounded complete lattice with
    overlap contact: union-closed overlap family first, then completion
    by cuts of that family."""
    if s.kind != SEMILATTICE:
        raise NotSemilattice("input must carry the semilattice kind")
    family, phi_map = overlap_semilattice_embedding(s)
    completion, chi_map = macneille_completion(family.structure)
    total = compose_maps(phi_map, chi_map)
    return completion, total


def _require_valid(s: ContactStructure) -> None:
    report = check_contact_axioms(s)
    if not report.ok:
        raise AxiomViolation("input structure is invalid", report)
