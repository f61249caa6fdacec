"""Finite contact structures: carriers, axioms, overlap, maps.

A structure is a finite poset with a designated bottom element plus a
contact relation.  Orders and contact relations are stored as fully
closed boolean tables, one bitmask row per element: bit j of ``up[i]``
says i <= j, bit j of ``contact[i]`` says i and j are in contact.
Element names are the external interface; indices are internal.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .errors import (
    AxiomViolation,
    AddOnPoset,
    BottomInSeed,
    CycleError,
    MissingBottom,
    NotJoinClosed,
    NotSemilattice,
    UnknownElement,
)

POSET = "poset"
SEMILATTICE = "semilattice"
KINDS = (POSET, SEMILATTICE)


def bits(mask: int):
    """Yield the set bit positions of mask, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# axiom reports


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    passed: bool
    witness: tuple[str, ...] | None = None


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[AxiomCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def check(self, axiom: str) -> AxiomCheck:
        for c in self.checks:
            if c.axiom == axiom:
                return c
        raise KeyError(axiom)


# ---------------------------------------------------------------------------
# order tables


def _index_elements(elements: Sequence[str]) -> dict[str, int]:
    idx = {}
    for name in elements:
        if name in idx:
            raise UnknownElement(f"duplicate element name {name!r}")
        idx[name] = len(idx)
    return idx


def normalize_order(
    pairs: Iterable[tuple[str, str]],
    elements: Sequence[str],
    bottom: str,
) -> tuple[int, ...]:
    """Reflexive-transitive closure of generating pairs plus bottom <= x.

    Returns one bitmask row per element in carrier order.  Raises
    CycleError if the closure is not antisymmetric, UnknownElement for
    names outside the carrier.
    """
    idx = _index_elements(elements)
    if bottom not in idx:
        raise UnknownElement(f"bottom {bottom!r} not in carrier")
    n = len(elements)
    up = [1 << i for i in range(n)]
    b = idx[bottom]
    up[b] = (1 << n) - 1
    for x, y in pairs:
        if x not in idx or y not in idx:
            missing = x if x not in idx else y
            raise UnknownElement(f"unknown element {missing!r} in order pair")
        up[idx[x]] |= 1 << idx[y]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in bits(up[i]):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    for i in range(n):
        for j in bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise CycleError(
                    f"antisymmetry violated: {elements[i]!r} and {elements[j]!r}"
                )
    return tuple(up)


def _check_order_tables(up: Sequence[int], bottom: int) -> None:
    n = len(up)
    full = (1 << n) - 1
    for i in range(n):
        if not up[i] >> i & 1:
            raise AxiomViolation(f"order not reflexive at index {i}")
        for j in bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise CycleError(f"antisymmetry violated at indices {i}, {j}")
            if up[i] | up[j] != up[i]:
                raise AxiomViolation(f"order not transitive at indices {i}, {j}")
    if up[bottom] != full:
        raise AxiomViolation("bottom is not below every element")


# ---------------------------------------------------------------------------
# the structure type


@dataclass(frozen=True)
class ContactStructure:
    """A finite poset with bottom and a contact relation.

    kind is a tag: SEMILATTICE additionally promises that every pair of
    elements has a least upper bound (joins are computed from the order,
    never stored).
    """

    names: tuple[str, ...]
    bottom: int
    up: tuple[int, ...]
    contact: tuple[int, ...]
    kind: str = POSET

    @classmethod
    def build(
        cls,
        elements: Sequence[str],
        bottom: str,
        order: Iterable[tuple[str, str]] = (),
        contact: Iterable[tuple[str, str]] = (),
        kind: str = POSET,
        close: bool = False,
    ) -> "ContactStructure":
        """Normalize and validate a structure from generating pairs.

        The order is closed reflexively and transitively; contact pairs
        get their symmetric closure.  With close=False the result must
        already satisfy the contact axioms; with close=True the least
        valid contact relation containing overlap and the given pairs is
        computed instead.
        """
        if kind not in KINDS:
            raise AxiomViolation(f"unknown kind {kind!r}")
        up = normalize_order(order, elements, bottom)
        idx = _index_elements(elements)
        n = len(elements)
        rows = [0] * n
        seed_pairs = []
        for x, y in contact:
            if x not in idx or y not in idx:
                missing = x if x not in idx else y
                raise UnknownElement(f"unknown element {missing!r} in contact pair")
            rows[idx[x]] |= 1 << idx[y]
            rows[idx[y]] |= 1 << idx[x]
            seed_pairs.append((x, y))
        skeleton = cls(tuple(elements), idx[bottom], up, tuple(rows), kind)
        if kind == SEMILATTICE and not is_semilattice_order(skeleton):
            raise NotSemilattice("not every pair has a least upper bound")
        if close:
            return close_contact(skeleton, seed_pairs)
        report = check_contact_axioms(skeleton)
        if not report.ok:
            bad = ", ".join(
                f"{c.axiom}{c.witness or ''}" for c in report.failures()
            )
            raise AxiomViolation(f"contact axioms fail: {bad}", report)
        return skeleton

    # -- carrier helpers ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownElement(f"unknown element {name!r}") from None

    def leq(self, x: str, y: str) -> bool:
        return bool(self.up[self.index(x)] >> self.index(y) & 1)

    def delta(self, x: str, y: str) -> bool:
        return bool(self.contact[self.index(x)] >> self.index(y) & 1)

    def down_masks(self) -> tuple[int, ...]:
        down = [0] * self.n
        for i, row in enumerate(self.up):
            for j in bits(row):
                down[j] |= 1 << i
        return tuple(down)

    def cover_pairs(self) -> list[tuple[int, int]]:
        """Hasse diagram edges (i, j) with j covering i."""
        down = self.down_masks()
        out = []
        for i in range(self.n):
            strict = self.up[i] & ~(1 << i)
            for j in bits(strict):
                if strict & down[j] & ~(1 << j) == 0:
                    out.append((i, j))
        return out

    def with_contact(self, table: Sequence[int]) -> "ContactStructure":
        return replace(self, contact=tuple(table))

    def relabel(self, perm: Sequence[int]) -> "ContactStructure":
        """Move element i to position perm[i], keeping names attached."""
        n = self.n
        names = [""] * n
        up = [0] * n
        contact = [0] * n
        for i in range(n):
            names[perm[i]] = self.names[i]
            row_u = row_c = 0
            for j in bits(self.up[i]):
                row_u |= 1 << perm[j]
            for j in bits(self.contact[i]):
                row_c |= 1 << perm[j]
            up[perm[i]] = row_u
            contact[perm[i]] = row_c
        return ContactStructure(
            tuple(names), perm[self.bottom], tuple(up), tuple(contact), self.kind
        )

    def rename(self, mapping: Mapping[str, str]) -> "ContactStructure":
        names = tuple(mapping.get(name, name) for name in self.names)
        if len(set(names)) != len(names):
            raise UnknownElement("renaming collapses element names")
        return replace(self, names=names)


# ---------------------------------------------------------------------------
# joins and meets


def _least_of(s: ContactStructure, mask: int) -> int | None:
    """Least element of the subset mask, or None."""
    for i in bits(mask):
        if mask & ~s.up[i] == 0:
            return i
    return None


def join_index(s: ContactStructure, i: int, j: int) -> int | None:
    return _least_of(s, s.up[i] & s.up[j])


def meet_index(s: ContactStructure, i: int, j: int) -> int | None:
    down = s.down_masks()
    common = down[i] & down[j]
    for k in bits(common):
        if common & ~down[k] == 0:
            return k
    return None


def subset_join(s: ContactStructure, mask: int) -> int | None:
    """Least upper bound of a subset mask, if it exists (empty -> bottom)."""
    ub = s.full_mask
    for i in bits(mask):
        ub &= s.up[i]
    return _least_of(s, ub)


def is_semilattice_order(s: ContactStructure) -> bool:
    return all(
        join_index(s, i, j) is not None
        for i in range(s.n)
        for j in range(i + 1, s.n)
    )


# ---------------------------------------------------------------------------
# axioms


def check_contact_axioms(s: ContactStructure, require_add: bool = False) -> AxiomReport:
    """One pass/fail entry per Sym, Emp, Ext, Ref plus derived Inh.

    With require_add the additivity law is checked as well; that is only
    expressible when joins exist, so a non-semilattice raises AddOnPoset.
    """
    if require_add and s.kind != SEMILATTICE:
        raise AddOnPoset("additivity is not expressible without joins")
    n, names = s.n, s.names
    checks = []

    sym = None
    for i in range(n):
        for j in bits(s.contact[i]):
            if not s.contact[j] >> i & 1:
                sym = (names[i], names[j])
                break
        if sym:
            break
    checks.append(AxiomCheck("Sym", sym is None, sym))

    emp = None
    if s.contact[s.bottom]:
        emp = (names[s.bottom], names[next(bits(s.contact[s.bottom]))])
    else:
        for i in range(n):
            if s.contact[i] >> s.bottom & 1:
                emp = (names[i], names[s.bottom])
                break
    checks.append(AxiomCheck("Emp", emp is None, emp))

    ext = None
    for a in range(n):
        for a1 in bits(s.up[a]):
            if s.contact[a] & ~s.contact[a1]:
                b = next(bits(s.contact[a] & ~s.contact[a1]))
                ext = (names[a], names[b], names[a1], names[b])
                break
        if ext:
            break
    if ext is None:
        for a in range(n):
            for b in bits(s.contact[a]):
                if s.up[b] & ~s.contact[a]:
                    b1 = next(bits(s.up[b] & ~s.contact[a]))
                    ext = (names[a], names[b], names[a], names[b1])
                    break
            if ext:
                break
    checks.append(AxiomCheck("Ext", ext is None, ext))

    ref = None
    for i in range(n):
        if i != s.bottom and not s.contact[i] >> i & 1:
            ref = (names[i],)
            break
    checks.append(AxiomCheck("Ref", ref is None, ref))

    inh = None
    for m in range(n):
        if m == s.bottom:
            continue
        for a in bits(s.up[m]):
            if s.up[m] & ~s.contact[a]:
                b = next(bits(s.up[m] & ~s.contact[a]))
                inh = (names[m], names[a], names[b])
                break
        if inh:
            break
    checks.append(AxiomCheck("Inh", inh is None, inh))

    if require_add:
        add = None
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    j = join_index(s, b, c)
                    if j is None:
                        raise NotSemilattice("missing join during Add check")
                    if (
                        s.contact[a] >> j & 1
                        and not s.contact[a] >> b & 1
                        and not s.contact[a] >> c & 1
                    ):
                        add = (names[a], names[b], names[c])
                        break
                if add:
                    break
            if add:
                break
        checks.append(AxiomCheck("Add", add is None, add))

    return AxiomReport(tuple(checks))


def overlap_relation(s: ContactStructure) -> tuple[int, ...]:
    """Contact table relating a, b iff a nonzero n lies below both."""
    down = s.down_masks()
    nonzero = ~(1 << s.bottom)
    rows = tuple(
        0
        if i == s.bottom
        else _overlap_row(down, down[i] & nonzero, s.n, s.bottom)
        for i in range(s.n)
    )
    out = s.with_contact(rows)
    report = check_contact_axioms(out)
    if not report.ok:
        raise AxiomViolation("overlap relation failed self-check", report)
    return rows


def _overlap_row(down: Sequence[int], strict_down: int, n: int, bottom: int) -> int:
    row = 0
    for j in range(n):
        if j != bottom and down[j] & strict_down:
            row |= 1 << j
    return row


def close_contact(
    s: ContactStructure, seeds: Iterable[tuple[str, str]]
) -> ContactStructure:
    """Least valid contact relation containing overlap and the seeds.

    The closure is the upward closure (in both coordinates) of the
    symmetrized seed set united with the overlap relation; one pass
    suffices and the operation is idempotent.
    """
    n = s.n
    seeded = [0] * n
    for x, y in seeds:
        i, j = s.index(x), s.index(y)
        if s.bottom in (i, j):
            raise BottomInSeed(f"seed pair ({x!r}, {y!r}) touches bottom")
        seeded[i] |= 1 << j
        seeded[j] |= 1 << i
    rows = list(overlap_relation(s))
    for a in range(n):
        for b in bits(seeded[a]):
            for a1 in bits(s.up[a]):
                rows[a1] |= s.up[b]
    out = s.with_contact(rows)
    report = check_contact_axioms(out)
    if not report.ok:
        raise AxiomViolation("contact closure failed self-check", report)
    return out


# ---------------------------------------------------------------------------
# closure operators


@dataclass(frozen=True)
class ClosureOperator:
    """An isotone, idempotent, extensive self-map of a poset.

    The base structure's contact table is ignored; only its order is
    used.  image[i] is the index of the closure of element i.
    """

    base: ContactStructure
    image: tuple[int, ...]

    @classmethod
    def build(cls, base: ContactStructure, mapping: Mapping[str, str]) -> "ClosureOperator":
        image = tuple(base.index(mapping[name]) for name in base.names)
        op = cls(base, image)
        up = base.up
        for i in range(base.n):
            k = image[i]
            if not up[i] >> k & 1:
                raise AxiomViolation(
                    f"closure not extensive at {base.names[i]!r}"
                )
            if image[k] != k:
                raise AxiomViolation(
                    f"closure not idempotent at {base.names[i]!r}"
                )
            for j in bits(up[i]):
                if not up[k] >> image[j] & 1:
                    raise AxiomViolation(
                        f"closure not isotone on {base.names[i]!r} <= {base.names[j]!r}"
                    )
        return op

    def closed_elements(self) -> tuple[str, ...]:
        return tuple(
            self.base.names[i] for i in range(self.base.n) if self.image[i] == i
        )


def contact_from_closure(op: ClosureOperator) -> ContactStructure:
    """Contact via the closure: a and b touch iff a nonzero n lies below
    both closures.

    The result is validated strictly; a closure operator that moves the
    bottom produces bottom-in-contact pairs and is rejected with the
    failing report attached.
    """
    s = op.base
    down = s.down_masks()
    nonzero_down = tuple(d & ~(1 << s.bottom) for d in down)
    rows = [0] * s.n
    for a in range(s.n):
        for b in range(s.n):
            if nonzero_down[op.image[a]] & nonzero_down[op.image[b]]:
                rows[a] |= 1 << b
    out = s.with_contact(rows)
    report = check_contact_axioms(out)
    if not report.ok:
        raise AxiomViolation(
            "closure-induced contact fails the axioms", report
        )
    return out


# ---------------------------------------------------------------------------
# substructures


def induced_substructure(s: ContactStructure, subset: Iterable[str]) -> ContactStructure:
    """Restriction of order and contact to a carrier subset.

    The subset must contain the bottom, and be closed under joins when
    the structure is a semilattice.
    """
    chosen = [s.index(name) for name in subset]
    chosen = sorted(set(chosen))
    if s.bottom not in chosen:
        raise MissingBottom("substructure carrier must contain the bottom")
    mask = 0
    for i in chosen:
        mask |= 1 << i
    if s.kind == SEMILATTICE:
        for a in chosen:
            for b in chosen:
                j = join_index(s, a, b)
                if j is None or not mask >> j & 1:
                    raise NotJoinClosed(
                        f"join of {s.names[a]!r} and {s.names[b]!r} escapes the subset"
                    )
    pos = {i: k for k, i in enumerate(chosen)}

    def shrink(row: int) -> int:
        out = 0
        for j in bits(row & mask):
            out |= 1 << pos[j]
        return out

    out = ContactStructure(
        tuple(s.names[i] for i in chosen),
        pos[s.bottom],
        tuple(shrink(s.up[i]) for i in chosen),
        tuple(shrink(s.contact[i]) for i in chosen),
        s.kind,
    )
    report = check_contact_axioms(out)
    if not report.ok:
        raise AxiomViolation("induced substructure failed self-check", report)
    return out


# ---------------------------------------------------------------------------
# structure maps


@dataclass(frozen=True)
class MapReport:
    injective: bool
    bottom_preserving: bool
    order_preserving: bool
    order_reflecting: bool
    contact_preserving: bool
    contact_reflecting: bool
    join_preserving: bool | None

    @property
    def is_embedding(self) -> bool:
        flags = (
            self.injective
            and self.bottom_preserving
            and self.order_preserving
            and self.contact_preserving
            and self.contact_reflecting
        )
        if self.join_preserving is not None:
            flags = flags and self.join_preserving
        return flags


@dataclass(frozen=True)
class StructureMap:
    source: ContactStructure
    target: ContactStructure
    mapping: tuple[int, ...]
    report: MapReport

    @property
    def name_map(self) -> dict[str, str]:
        return {
            self.source.names[i]: self.target.names[self.mapping[i]]
            for i in range(self.source.n)
        }

    def apply(self, name: str) -> str:
        return self.target.names[self.mapping[self.source.index(name)]]


def verify_map(
    source: ContactStructure,
    target: ContactStructure,
    mapping: Mapping[str, str],
) -> StructureMap:
    """Compute the full property report of a carrier map.

    The map is an embedding when it is injective, bottom-preserving,
    order-preserving and contact-preserving and -reflecting, plus
    join-preserving when both sides are semilattices.  Order reflection
    is reported separately.
    """
    f = tuple(target.index(mapping[name]) for name in source.names)
    n = source.n
    injective = len(set(f)) == n
    bottom = f[source.bottom] == target.bottom
    order_p = order_r = True
    contact_p = contact_r = True
    for i in range(n):
        for j in range(n):
            s_leq = bool(source.up[i] >> j & 1)
            t_leq = bool(target.up[f[i]] >> f[j] & 1)
            if s_leq and not t_leq:
                order_p = False
            if t_leq and not s_leq:
                order_r = False
            s_con = bool(source.contact[i] >> j & 1)
            t_con = bool(target.contact[f[i]] >> f[j] & 1)
            if s_con and not t_con:
                contact_p = False
            if t_con and not s_con:
                contact_r = False
    join_p: bool | None = None
    if source.kind == SEMILATTICE and target.kind == SEMILATTICE:
        join_p = True
        for i in range(n):
            for j in range(n):
                sj = join_index(source, i, j)
                tj = join_index(target, f[i], f[j])
                if sj is None or tj is None or f[sj] != tj:
                    join_p = False
                    break
            if not join_p:
                break
    report = MapReport(
        injective, bottom, order_p, order_r, contact_p, contact_r, join_p
    )
    return StructureMap(source, target, f, report)


def compose_maps(first: StructureMap, second: StructureMap) -> StructureMap:
    """Verified composition, source of first into target of second."""
    composed = {
        name: second.apply(first.apply(name)) for name in first.source.names
    }
    return verify_map(first.source, second.target, composed)


# ---------------------------------------------------------------------------
# structures without a bottom


@dataclass(frozen=True)
class BottomlessContact:
    """A poset with contact but no designated bottom.

    Validity means symmetry, upward extension and reflexivity of contact
    on every element.
    """

    names: tuple[str, ...]
    up: tuple[int, ...]
    contact: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownElement(f"unknown element {name!r}") from None


def check_bottomless_axioms(b: BottomlessContact) -> AxiomReport:
    n, names = b.n, b.names
    checks = []
    sym = None
    for i in range(n):
        for j in bits(b.contact[i]):
            if not b.contact[j] >> i & 1:
                sym = (names[i], names[j])
                break
        if sym:
            break
    checks.append(AxiomCheck("Sym", sym is None, sym))
    ext = None
    for a in range(n):
        for a1 in bits(b.up[a]):
            if b.contact[a] & ~b.contact[a1]:
                k = next(bits(b.contact[a] & ~b.contact[a1]))
                ext = (names[a], names[k], names[a1], names[k])
                break
        if ext is None:
            for k in bits(b.contact[a]):
                if b.up[k] & ~b.contact[a]:
                    k1 = next(bits(b.up[k] & ~b.contact[a]))
                    ext = (names[a], names[k], names[a], names[k1])
                    break
        if ext:
            break
    checks.append(AxiomCheck("Ext", ext is None, ext))
    ref = None
    for i in range(n):
        if not b.contact[i] >> i & 1:
            ref = (names[i],)
            break
    checks.append(AxiomCheck("Ref*", ref is None, ref))
    return AxiomReport(tuple(checks))


def adjoin_bottom(
    b: BottomlessContact, bottom_name: str = "0", kind: str = POSET
) -> ContactStructure:
    """Add a fresh bottom below everything, in contact with nothing."""
    report = check_bottomless_axioms(b)
    if not report.ok:
        bad = ", ".join(f"{c.axiom}{c.witness or ''}" for c in report.failures())
        raise AxiomViolation(f"bottomless axioms fail: {bad}", report)
    if bottom_name in b.names:
        raise UnknownElement(f"bottom name {bottom_name!r} collides with an element")
    n = b.n
    names = (bottom_name,) + b.names
    up = [(1 << (n + 1)) - 1]
    contact = [0]
    for i in range(n):
        up.append(b.up[i] << 1 | 1 << (i + 1))
        contact.append(b.contact[i] << 1)
    out = ContactStructure(names, 0, tuple(up), tuple(contact), kind)
    _check_order_tables(out.up, 0)
    return out


def drop_bottom(s: ContactStructure) -> BottomlessContact:
    """Remove the bottom; the inverse of adjoin_bottom on its image."""
    keep = [i for i in range(s.n) if i != s.bottom]
    pos = {i: k for k, i in enumerate(keep)}

    def shrink(row: int) -> int:
        out = 0
        for j in bits(row):
            if j != s.bottom:
                out |= 1 << pos[j]
        return out

    return BottomlessContact(
        tuple(s.names[i] for i in keep),
        tuple(shrink(s.up[i]) for i in keep),
        tuple(shrink(s.contact[i]) for i in keep),
    )
