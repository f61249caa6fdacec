"""Event structures with binary conflict and their contact duals.

An event structure here is a finite causal order with a symmetric,
irreflexive conflict relation inherited upward along causality.  Taking
the dual order and complementing conflict turns one into a bottomless
contact structure, and back; amalgamation rides that bridge through the
contact machinery after a reserved bottom is adjoined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import (
    AxiomCheck,
    AxiomReport,
    BottomlessContact,
    ContactStructure,
    adjoin_bottom,
    bits,
    check_bottomless_axioms,
    drop_bottom,
    normalize_order,
)
from .errors import AxiomViolation, PreconditionViolation, UnknownElement

RESERVED_BOTTOM = "__bot__"


@dataclass(frozen=True)
class EventStructure:
    """Events, a causal order (up[i] = successors), binary conflict."""

    events: tuple[str, ...]
    up: tuple[int, ...]
    conflict: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.events)

    def index(self, name: str) -> int:
        try:
            return self.events.index(name)
        except ValueError:
            raise UnknownElement(f"unknown event {name!r}") from None

    def leq(self, x: str, y: str) -> bool:
        return bool(self.up[self.index(x)] >> self.index(y) & 1)

    def in_conflict(self, x: str, y: str) -> bool:
        return bool(self.conflict[self.index(x)] >> self.index(y) & 1)

    @classmethod
    def build(
        cls,
        events: Sequence[str],
        order: Iterable[tuple[str, str]] = (),
        conflict: Iterable[tuple[str, str]] = (),
    ) -> "EventStructure":
        """Close the causal order, symmetrize conflict, then validate."""
        if not events:
            return cls((), (), ())
        if RESERVED_BOTTOM in events:
            raise UnknownElement(f"{RESERVED_BOTTOM!r} is reserved, not an event name")
        anchor = events[0]
        padded = normalize_order(order, (RESERVED_BOTTOM,) + tuple(events), RESERVED_BOTTOM)
        up = tuple(row >> 1 for row in padded[1:])
        idx = {name: i for i, name in enumerate(events)}
        rows = [0] * len(events)
        for x, y in conflict:
            if x not in idx or y not in idx:
                missing = x if x not in idx else y
                raise UnknownElement(f"unknown event {missing!r} in conflict pair")
            rows[idx[x]] |= 1 << idx[y]
            rows[idx[y]] |= 1 << idx[x]
        del anchor
        out = cls(tuple(events), up, tuple(rows))
        report = check_event_structure(out)
        if not report.ok:
            bad = ", ".join(f"{c.axiom}{c.witness or ''}" for c in report.failures())
            raise AxiomViolation(f"event structure invalid: {bad}", report)
        return out


def check_event_structure(e: EventStructure) -> AxiomReport:
    """Validate irreflexivity, symmetry and conflict inheritance."""
    n, names = e.n, e.events
    checks = []
    irr = None
    for i in range(n):
        if e.conflict[i] >> i & 1:
            irr = (names[i],)
            break
    checks.append(AxiomCheck("irreflexive", irr is None, irr))
    sym = None
    for i in range(n):
        for j in bits(e.conflict[i]):
            if not e.conflict[j] >> i & 1:
                sym = (names[i], names[j])
                break
        if sym:
            break
    checks.append(AxiomCheck("symmetric", sym is None, sym))
    inh = None
    for i in range(n):
        for j in bits(e.conflict[i]):
            if e.up[j] & ~e.conflict[i]:
                k = next(bits(e.up[j] & ~e.conflict[i]))
                inh = (names[i], names[j], names[k])
                break
        if inh:
            break
    checks.append(AxiomCheck("inheritance", inh is None, inh))
    return AxiomReport(tuple(checks))


# ---------------------------------------------------------------------------
# the duality


def event_to_contact(
    e: EventStructure, with_bottom: bool = False
) -> BottomlessContact | ContactStructure:
    """Dualize the causal order and complement conflict.

    The result always satisfies the bottomless contact axioms (asserted);
    with_bottom adjoins the reserved bottom and returns a full contact
    structure.
    """
    n = e.n
    down = [0] * n
    for i in range(n):
        for j in bits(e.up[i]):
            down[j] |= 1 << i
    full = (1 << n) - 1
    contact = tuple(full & ~row for row in e.conflict)
    dual = BottomlessContact(e.events, tuple(down), contact)
    report = check_bottomless_axioms(dual)
    if not report.ok:
        raise AxiomViolation("dual of a valid event structure failed", report)
    if with_bottom:
        return adjoin_bottom(dual, RESERVED_BOTTOM)
    return dual


def contact_to_event(b: BottomlessContact) -> EventStructure:
    """Inverse reading of the duality; round-trips are identities."""
    report = check_bottomless_axioms(b)
    if not report.ok:
        raise AxiomViolation("input fails the bottomless contact axioms", report)
    n = b.n
    down = [0] * n
    for i in range(n):
        for j in bits(b.up[i]):
            down[j] |= 1 << i
    full = (1 << n) - 1
    conflict = tuple(full & ~row for row in b.contact)
    out = EventStructure(b.names, tuple(down), conflict)
    inner = check_event_structure(out)
    if not inner.ok:
        raise AxiomViolation("dual event structure failed", inner)
    return out


# ---------------------------------------------------------------------------
# amalgamation through the bridge


@dataclass(frozen=True)
class EventAmalgam:
    amalgam: EventStructure
    contact_amalgam: ContactStructure
    superamalgamation_ok: bool


def amalgamate_events(
    a: EventStructure, b: EventStructure, c: EventStructure
) -> EventAmalgam:
    """Strong amalgamation of event structures over a shared part.

    Both sides are dualized with one reserved bottom adjoined, the
    contact amalgam runs, the bottom is stripped and the result is
    translated back.  Restrictions to the sides are literal, the carrier
    union is disjoint over C, and superamalgamation holds in the dual
    order.
    """
    from .amalgam import AmalgamInstance, contact_amalgam, verify_superamalgamation

    if set(a.events) & set(b.events) != set(c.events):
        raise PreconditionViolation("event carriers must intersect exactly in C")
    _require_common_part(a, c)
    _require_common_part(b, c)
    ca = event_to_contact(a, with_bottom=True)
    cb = event_to_contact(b, with_bottom=True)
    cc = event_to_contact(c, with_bottom=True)
    inst = AmalgamInstance.from_parts(ca, cb, cc)
    d_contact = contact_amalgam(inst)
    report = verify_superamalgamation(inst, d_contact)
    d = contact_to_event(drop_bottom(d_contact))
    for side in (a, b):
        if not _restricts_exactly(d, side):
            raise AxiomViolation("amalgam does not restrict to a side")
    if d.n != a.n + b.n - c.n:
        raise AxiomViolation("amalgam identified events")
    return EventAmalgam(d, d_contact, report.ok)


def _require_common_part(host: EventStructure, c: EventStructure) -> None:
    for x in c.events:
        for y in c.events:
            if host.leq(x, y) != c.leq(x, y):
                raise PreconditionViolation(
                    f"order disagrees with C at ({x!r}, {y!r})"
                )
            if host.in_conflict(x, y) != c.in_conflict(x, y):
                raise PreconditionViolation(
                    f"conflict disagrees with C at ({x!r}, {y!r})"
                )


def _restricts_exactly(d: EventStructure, side: EventStructure) -> bool:
    for x in side.events:
        for y in side.events:
            if d.leq(x, y) != side.leq(x, y):
                return False
            if d.in_conflict(x, y) != side.in_conflict(x, y):
                return False
    return True


# ---------------------------------------------------------------------------
# enumeration through the contact catalog


def enumerate_event_structures(max_events: int) -> tuple[EventStructure, ...]:
    """All event structures with at most max_events events, up to
    isomorphism: exactly the duals of the contact catalog one size up."""
    from .enumeration import AgeCatalog

    catalog = AgeCatalog.build(max_events + 1)
    out = []
    for item in catalog.items:
        out.append(contact_to_event(drop_bottom(item)))
    return tuple(out)


def sub_event(e: EventStructure, chosen: Sequence[int]) -> EventStructure:
    """Induced event substructure on the chosen indices (any subset)."""
    pos = {i: k for k, i in enumerate(chosen)}

    def shrink(row: int) -> int:
        out = 0
        for j in bits(row):
            if j in pos:
                out |= 1 << pos[j]
        return out

    return EventStructure(
        tuple(e.events[i] for i in chosen),
        tuple(shrink(e.up[i]) for i in chosen),
        tuple(shrink(e.conflict[i]) for i in chosen),
    )


def event_isomorphisms(a: EventStructure, b: EventStructure) -> list[tuple[int, ...]]:
    """Index permutations carrying a onto b (order and conflict)."""
    from itertools import permutations

    if a.n != b.n:
        return []
    out = []
    for perm in permutations(range(a.n)):
        if all(
            (a.up[i] >> j & 1) == (b.up[perm[i]] >> perm[j] & 1)
            and (a.conflict[i] >> j & 1) == (b.conflict[perm[i]] >> perm[j] & 1)
            for i in range(a.n)
            for j in range(a.n)
        ):
            out.append(perm)
    return out


def event_automorphisms(e: EventStructure) -> list[tuple[int, ...]]:
    return event_isomorphisms(e, e)


def iter_event_gluings(
    a: EventStructure, b: EventStructure
) -> Iterator[tuple[EventStructure, EventStructure, EventStructure]]:
    """Ways of gluing b onto a along a common part, one per instance
    isomorphism class.

    Gluings differing only by automorphisms of the sides produce
    isomorphic amalgamation problems, so orbit representatives keep the
    verification exhaustive up to isomorphism at a fraction of the cost.
    Yields renamed-apart triples (a', b', c).
    """
    auts_a = event_automorphisms(a)
    auts_b = event_automorphisms(b)

    def mask_image(mask: int, perm: Sequence[int]) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << perm[i]
        return out

    subset_reps = []
    seen_masks = set()
    for mask in range(1 << a.n):
        canon = min(mask_image(mask, alpha) for alpha in auts_a)
        if canon in seen_masks:
            continue
        seen_masks.add(canon)
        subset_reps.append(mask)
    for mask in subset_reps:
        chosen = list(bits(mask))
        c = sub_event(a, chosen)
        stabilizer = [
            tuple(chosen.index(alpha[i]) for i in chosen)
            for alpha in auts_a
            if mask_image(mask, alpha) == mask
        ]
        seen_maps: set[tuple[int, ...]] = set()
        for size_mask in range(1 << b.n):
            if bin(size_mask).count("1") != c.n:
                continue
            target = list(bits(size_mask))
            piece = sub_event(b, target)
            for perm in event_isomorphisms(c, piece):
                mapping = tuple(target[perm[k]] for k in range(c.n))
                canon_map = min(
                    tuple(beta[mapping[sigma[k]]] for k in range(c.n))
                    for sigma in stabilizer
                    for beta in auts_b
                )
                if canon_map in seen_maps:
                    continue
                seen_maps.add(canon_map)
                yield _rename_gluing(a, b, c, mapping)


def _rename_gluing(
    a: EventStructure,
    b: EventStructure,
    c: EventStructure,
    mapping: Sequence[int],
) -> tuple[EventStructure, EventStructure, EventStructure]:
    """Rename apart so the carriers intersect exactly in c's events."""
    c_names = c.events
    a_rename = {
        name: (name if name in c_names else f"a:{name}") for name in a.events
    }
    b_rename = {}
    for k, name in enumerate(c_names):
        b_rename[b.events[mapping[k]]] = name
    for name in b.events:
        if name not in b_rename:
            b_rename[name] = f"b:{name}"
    renamed_a = EventStructure(
        tuple(a_rename[name] for name in a.events), a.up, a.conflict
    )
    renamed_b = EventStructure(
        tuple(b_rename[name] for name in b.events), b.up, b.conflict
    )
    return renamed_a, renamed_b, c
