"""Exhaustive generation of carriers and contact relations up to
isomorphism, canonical forms, and the age catalog used as the oracle
backbone of the test suite.

Everything here is desk scale: brute-force permutation search with
invariant pruning is deliberate, correctness beats cleverness at n <= 6.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, permutations
from typing import Iterator, Sequence

from .core import (
    POSET,
    SEMILATTICE,
    ContactStructure,
    bits,
    check_contact_axioms,
    is_semilattice_order,
    join_index,
    meet_index,
    overlap_relation,
)

CanonicalKey = tuple


# ---------------------------------------------------------------------------
# canonical forms for labelled relational tables


def _refine_colors(
    n: int, relations: Sequence[Sequence[int]], colors: Sequence[int]
) -> tuple[int, ...]:
    """Iterated neighbourhood refinement of an initial colouring."""
    current = tuple(colors)
    while True:
        signatures = []
        for i in range(n):
            profile = sorted(
                (
                    current[j],
                    tuple(rel[i] >> j & 1 for rel in relations),
                    tuple(rel[j] >> i & 1 for rel in relations),
                )
                for j in range(n)
            )
            signatures.append((current[i], tuple(profile)))
        ranked = {sig: rank for rank, sig in enumerate(sorted(set(signatures)))}
        refreshed = tuple(ranked[sig] for sig in signatures)
        if refreshed == current:
            return refreshed
        current = refreshed


def _admissible_perms(colors: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All relabellings sending each colour class onto its block.

    Positions are blocked by ascending colour; the permutation maps old
    index -> new position.
    """
    n = len(colors)
    classes: dict[int, list[int]] = {}
    for i, c in enumerate(colors):
        classes.setdefault(c, []).append(i)
    ordered = sorted(classes)
    blocks = []
    start = 0
    for c in ordered:
        members = classes[c]
        blocks.append((members, start))
        start += len(members)

    def rec(k: int, perm: list[int]) -> Iterator[tuple[int, ...]]:
        if k == len(blocks):
            yield tuple(perm)
            return
        members, base = blocks[k]
        for arrangement in permutations(members):
            for offset, i in enumerate(arrangement):
                perm[i] = base + offset
            yield from rec(k + 1, perm)

    yield from rec(0, [0] * n)


def _encode(n: int, relations: Sequence[Sequence[int]], perm: Sequence[int]) -> tuple[int, ...]:
    words = []
    for rel in relations:
        acc = 0
        pos = 0
        inv = [0] * n
        for i in range(n):
            inv[perm[i]] = i
        for a in range(n):
            row = rel[inv[a]]
            for b in range(n):
                acc |= (row >> inv[b] & 1) << pos
                pos += 1
        words.append(acc)
    return tuple(words)


def canonical_table_key(
    n: int,
    relations: Sequence[Sequence[int]],
    colors: Sequence[int] | None = None,
) -> tuple[tuple, tuple[int, ...]]:
    """Canonical key and witnessing relabelling for relation tables.

    The key is identical for inputs that differ by a colour-preserving
    relabelling and distinct otherwise; colours survive into the key so
    marked structures canonicalize as marked.
    """
    base = tuple(colors) if colors is not None else (0,) * n
    refined = _refine_colors(n, relations, base)
    best_words: tuple[int, ...] | None = None
    best_perm: tuple[int, ...] | None = None
    for perm in _admissible_perms(refined):
        words = _encode(n, relations, perm)
        if best_words is None or words < best_words:
            best_words = words
            best_perm = perm
    class_sizes = tuple(
        sorted((refined.count(c), base[refined.index(c)]) for c in set(refined))
    )
    assert best_words is not None and best_perm is not None
    return (n, class_sizes, best_words), best_perm


@lru_cache(maxsize=None)
def canonical_form(s: ContactStructure) -> tuple[CanonicalKey, tuple[int, ...]]:
    """Canonical key plus relabelling for a contact structure.

    The bottom is pinned by its colour, so keys compare structures over
    bottom-preserving isomorphisms only.
    """
    colors = tuple(0 if i == s.bottom else 1 for i in range(s.n))
    key, perm = canonical_table_key(s.n, (s.up, s.contact), colors)
    return (s.kind,) + key, perm


def canonical_key(s: ContactStructure) -> CanonicalKey:
    return canonical_form(s)[0]


def canonicalize(s: ContactStructure) -> ContactStructure:
    """Relabelled copy with canonical positions and standard names."""
    _, perm = canonical_form(s)
    moved = s.relabel(perm)
    names = tuple(
        "0" if i == moved.bottom else f"e{i}" for i in range(moved.n)
    )
    return ContactStructure(names, moved.bottom, moved.up, moved.contact, moved.kind)


def isomorphic(s: ContactStructure, t: ContactStructure) -> bool:
    return canonical_key(s) == canonical_key(t)


def automorphisms(s: ContactStructure) -> list[tuple[int, ...]]:
    """All bottom-fixing self-isomorphisms, as index permutations."""
    out = []
    colors = tuple(0 if i == s.bottom else 1 for i in range(s.n))
    refined = _refine_colors(s.n, (s.up, s.contact), colors)
    for perm in _admissible_perms(refined):
        if _is_isomorphism_perm(s, s, perm):
            out.append(perm)
    return out


def _is_isomorphism_perm(
    s: ContactStructure, t: ContactStructure, perm: Sequence[int]
) -> bool:
    for i in range(s.n):
        for j in range(s.n):
            if (s.up[i] >> j & 1) != (t.up[perm[i]] >> perm[j] & 1):
                return False
            if (s.contact[i] >> j & 1) != (t.contact[perm[i]] >> perm[j] & 1):
                return False
    return perm[s.bottom] == t.bottom


def isomorphisms(s: ContactStructure, t: ContactStructure) -> Iterator[tuple[int, ...]]:
    """All bottom-preserving isomorphisms s -> t as index maps."""
    if s.n != t.n or s.kind != t.kind:
        return
    s_colors = _refine_colors(
        s.n, (s.up, s.contact), tuple(0 if i == s.bottom else 1 for i in range(s.n))
    )
    t_colors = _refine_colors(
        t.n, (t.up, t.contact), tuple(0 if i == t.bottom else 1 for i in range(t.n))
    )
    if sorted(s_colors) != sorted(t_colors):
        return
    slots: dict[int, list[int]] = {}
    for j, c in enumerate(t_colors):
        slots.setdefault(c, []).append(j)
    order = sorted(range(s.n), key=lambda i: (s_colors[i], i))

    def rec(k: int, acc: dict[int, int], used: set[int]) -> Iterator[tuple[int, ...]]:
        if k == len(order):
            perm = tuple(acc[i] for i in range(s.n))
            if _is_isomorphism_perm(s, t, perm):
                yield perm
            return
        i = order[k]
        for j in slots.get(s_colors[i], ()):
            if j in used:
                continue
            ok = all(
                (s.up[i] >> i2 & 1) == (t.up[j] >> j2 & 1)
                and (s.up[i2] >> i & 1) == (t.up[j2] >> j & 1)
                and (s.contact[i] >> i2 & 1) == (t.contact[j] >> j2 & 1)
                for i2, j2 in acc.items()
            )
            if not ok:
                continue
            acc[i] = j
            used.add(j)
            yield from rec(k + 1, acc, used)
            del acc[i]
            used.discard(j)

    yield from rec(0, {}, set())


# ---------------------------------------------------------------------------
# poset carriers


def _poset_key(n: int, up: Sequence[int]) -> tuple:
    key, _ = canonical_table_key(n, (tuple(up),))
    return key


def _down_sets(n: int, up: Sequence[int]) -> list[int]:
    """All downward-closed subsets of an n-element order table."""
    down = [0] * n
    for i in range(n):
        for j in bits(up[i]):
            down[j] |= 1 << i
    out = []
    for mask in range(1 << n):
        if all(down[i] & ~mask == 0 for i in bits(mask)):
            out.append(mask)
    return out


@lru_cache(maxsize=None)
def enumerate_posets(k: int) -> tuple[tuple[int, ...], ...]:
    """All posets on k unlabelled points, as canonical order tables.

    Grown one maximal point at a time: the new point sits above an
    arbitrary down-set of the smaller poset.
    """
    if k == 0:
        return ((),)
    if k == 1:
        return ((1,),)
    seen: dict[tuple, tuple[int, ...]] = {}
    for small in enumerate_posets(k - 1):
        for ideal in _down_sets(k - 1, small):
            up = [row | 1 << (k - 1) if ideal >> i & 1 else row
                  for i, row in enumerate(small)]
            up.append(1 << (k - 1))
            key, perm = canonical_table_key(k, (tuple(up),))
            if key not in seen:
                relabeled = [0] * k
                for i in range(k):
                    row = 0
                    for j in bits(up[i]):
                        row |= 1 << perm[j]
                    relabeled[perm[i]] = row
                seen[key] = tuple(relabeled)
    return tuple(seen[key] for key in sorted(seen))


def enumerate_posets_with_bottom(n: int) -> tuple[tuple[int, ...], ...]:
    """All posets with a minimum on n points, bottom at index 0.

    Stripping the minimum is a bijection onto arbitrary posets on n - 1
    points, so the tables are those posets with a bottom adjoined.
    """
    if n < 1:
        raise ValueError("need at least one element")
    if n > 6:
        warnings.warn("poset enumeration beyond n = 6 gets slow", stacklevel=2)
    out = []
    for small in enumerate_posets(n - 1):
        up = [(1 << n) - 1]
        up.extend(row << 1 for row in small)
        out.append(tuple(up))
    return tuple(out)


# ---------------------------------------------------------------------------
# contact relations over a fixed carrier


def _free_pairs(s: ContactStructure) -> list[tuple[int, int]]:
    """Unordered nonzero pairs not already forced into contact."""
    overlap = overlap_relation(s)
    out = []
    for i in range(s.n):
        if i == s.bottom:
            continue
        for j in range(i + 1, s.n):
            if j == s.bottom:
                continue
            if not overlap[i] >> j & 1:
                out.append((i, j))
    return out


def _pair_leq(s: ContactStructure, p: tuple[int, int], q: tuple[int, int]) -> bool:
    (a, b), (c, d) = p, q
    return (
        bool(s.up[a] >> c & 1) and bool(s.up[b] >> d & 1)
    ) or (
        bool(s.up[a] >> d & 1) and bool(s.up[b] >> c & 1)
    )


def all_contact_tables(s: ContactStructure) -> list[tuple[int, ...]]:
    """Every valid contact table on the carrier of s (labelled, all of
    them, not up to isomorphism).

    Valid tables are exactly overlap plus an upward-closed set of free
    pairs, so they are enumerated as up-sets of the free-pair order.
    """
    free = _free_pairs(s)
    m = len(free)
    succ = [0] * m
    for a in range(m):
        for b in range(m):
            if a != b and _pair_leq(s, free[a], free[b]):
                succ[a] |= 1 << b
    overlap = overlap_relation(s)
    tables = []
    for chosen in range(1 << m):
        if any(succ[a] & ~chosen for a in bits(chosen)):
            continue
        rows = list(overlap)
        for a in bits(chosen):
            i, j = free[a]
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        tables.append(tuple(rows))
    return tables


# ---------------------------------------------------------------------------
# lattice predicates


def is_lattice(s: ContactStructure) -> bool:
    return all(
        join_index(s, i, j) is not None and meet_index(s, i, j) is not None
        for i in range(s.n)
        for j in range(i + 1, s.n)
    )


def is_semilattice(s: ContactStructure) -> bool:
    return is_semilattice_order(s)


def is_distributive(s: ContactStructure) -> bool:
    """Distributivity via the triple law; requires a lattice."""
    if not is_lattice(s):
        return False
    for a in range(s.n):
        for b in range(s.n):
            for c in range(s.n):
                left = meet_index(s, a, join_index(s, b, c))
                right = join_index(s, meet_index(s, a, b), meet_index(s, a, c))
                if left != right:
                    return False
    return True


def is_distributive_by_sublattices(s: ContactStructure) -> bool:
    """Distributivity as absence of diamond and pentagon sublattices.

    Cross-checked against the triple law in the tests; a sublattice here
    is any subset closed under the ambient joins and meets.
    """
    if not is_lattice(s):
        return False
    for quint in combinations(range(s.n), 5):
        closed = all(
            join_index(s, a, b) in quint and meet_index(s, a, b) in quint
            for a in quint
            for b in quint
        )
        if not closed:
            continue
        sub = [
            [bool(s.up[a] >> b & 1) for b in quint]
            for a in quint
        ]
        if _is_m3_or_n5(sub):
            return False
    return True


def _is_m3_or_n5(leq: list[list[bool]]) -> bool:
    n = 5
    below = [sum(1 for a in range(n) if leq[a][b]) for b in range(n)]
    bot = below.index(1)
    top = below.index(5)
    mid = [i for i in range(n) if i not in (bot, top)]
    incomparable = [
        (a, b)
        for a in mid
        for b in mid
        if a < b and not leq[a][b] and not leq[b][a]
    ]
    if len(incomparable) == 3:
        return True  # three pairwise incomparable midpoints: diamond
    if len(incomparable) == 2:
        chain = [
            (a, b) for a in mid for b in mid if a != b and leq[a][b]
        ]
        return len(chain) == 1  # pentagon: one comparable pair among mid
    return False


# ---------------------------------------------------------------------------
# the catalog


@dataclass(frozen=True)
class AgeCatalog:
    """Canonical representatives of every valid structure up to a size.

    items are sorted by canonical key; index maps keys back to
    positions, which is what isomorphism lookups use.
    """

    bound: int
    kind: str
    items: tuple[ContactStructure, ...]

    @classmethod
    def build(cls, bound: int, kind: str = POSET) -> "AgeCatalog":
        items: list[ContactStructure] = []
        for n in range(1, bound + 1):
            items.extend(enumerate_contact_structures(n, kind))
        return cls(bound, kind, tuple(items))

    @cached_property
    def index(self) -> dict[CanonicalKey, int]:
        return {canonical_key(item): pos for pos, item in enumerate(self.items)}

    def by_size(self, n: int) -> tuple[ContactStructure, ...]:
        return tuple(item for item in self.items if item.n == n)

    def find(self, s: ContactStructure) -> ContactStructure | None:
        pos = self.index.get(canonical_key(s))
        return None if pos is None else self.items[pos]


@lru_cache(maxsize=None)
def enumerate_contact_structures(n: int, kind: str = POSET) -> tuple[ContactStructure, ...]:
    """All contact structures of size n up to isomorphism, canonical and
    deterministically ordered."""
    found: dict[CanonicalKey, ContactStructure] = {}
    for up in enumerate_posets_with_bottom(n):
        carrier = ContactStructure(
            tuple("0" if i == 0 else f"e{i}" for i in range(n)),
            0,
            up,
            tuple([0] * n),
            POSET,
        )
        if kind == SEMILATTICE and not is_semilattice_order(carrier):
            continue
        tagged = ContactStructure(carrier.names, 0, up, carrier.contact, kind)
        for table in all_contact_tables(tagged):
            candidate = tagged.with_contact(table)
            key = canonical_key(candidate)
            if key not in found:
                item = canonicalize(candidate)
                report = check_contact_axioms(item)
                if not report.ok:
                    raise AssertionError("enumerated an invalid structure")
                found[key] = item
    return tuple(found[key] for key in sorted(found))


# ---------------------------------------------------------------------------
# distributive lattices, grown through Birkhoff duality


@lru_cache(maxsize=None)
def _ideal_bounded_posets(max_ideals: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Posets (size, table) whose number of down-sets stays within the
    bound; grown like enumerate_posets but pruned by ideal count."""
    out: list[tuple[int, tuple[int, ...]]] = [(0, ())]
    layer: dict[tuple, tuple[int, ...]] = {_poset_key(0, ()): ()}
    k = 0
    while layer:
        k += 1
        grown: dict[tuple, tuple[int, ...]] = {}
        for small in layer.values():
            for ideal in _down_sets(k - 1, small):
                up = [row | 1 << (k - 1) if ideal >> i & 1 else row
                      for i, row in enumerate(small)]
                up.append(1 << (k - 1))
                if len(_down_sets(k, up)) > max_ideals:
                    continue
                key, perm = canonical_table_key(k, (tuple(up),))
                if key not in grown:
                    relabeled = [0] * k
                    for i in range(k):
                        row = 0
                        for j in bits(up[i]):
                            row |= 1 << perm[j]
                        relabeled[perm[i]] = row
                    grown[key] = tuple(relabeled)
        out.extend((k, table) for table in grown.values())
        layer = grown
    return tuple(out)


def enumerate_distributive_lattices(max_size: int) -> tuple[ContactStructure, ...]:
    """All distributive lattices with at most max_size elements, up to
    isomorphism, as bare carriers (empty contact) tagged semilattice.

    Each lattice is the lattice of down-sets of a poset; non-isomorphic
    posets give non-isomorphic lattices, so pruned poset generation is
    the whole search.
    """
    out = []
    for _, table in _ideal_bounded_posets(max_size):
        k = len(table)
        ideals = sorted(_down_sets(k, table))
        m = len(ideals)
        if m > max_size:
            continue
        pos = {ideal: i for i, ideal in enumerate(ideals)}
        up = [0] * m
        for i, small in enumerate(ideals):
            for j, big in enumerate(ideals):
                if small & ~big == 0:
                    up[i] |= 1 << j
        lattice = ContactStructure(
            tuple("0" if i == 0 else f"e{i}" for i in range(m)),
            pos[0],
            tuple(up),
            tuple([0] * m),
            SEMILATTICE,
        )
        out.append(canonicalize(lattice))
    return tuple(sorted(out, key=canonical_key))


# ---------------------------------------------------------------------------
# embeddings onto induced substructures


def carrier_subsets(
    t: ContactStructure, size: int, kind: str | None = None
) -> Iterator[tuple[str, ...]]:
    """Subsets of the carrier containing the bottom, join-closed when the
    requested kind (default: t's own) is semilattice."""
    kind = t.kind if kind is None else kind
    others = [i for i in range(t.n) if i != t.bottom]
    for rest in combinations(others, size - 1):
        chosen = (t.bottom,) + rest
        if kind == SEMILATTICE:
            mask = 0
            for i in chosen:
                mask |= 1 << i
            if any(
                join_index(t, a, b) is None or not mask >> join_index(t, a, b) & 1
                for a in chosen
                for b in chosen
            ):
                continue
        yield tuple(t.names[i] for i in sorted(chosen))


def induced_embeddings(
    s: ContactStructure, t: ContactStructure
) -> Iterator[dict[str, str]]:
    """All embeddings of s onto induced substructures of t, as name maps.

    For semilattices only join-closed images count, which makes these
    exactly the signature embeddings.
    """
    from .core import induced_substructure

    if s.n > t.n:
        return
    neutral = ContactStructure(t.names, t.bottom, t.up, t.contact, POSET)
    for subset in carrier_subsets(t, s.n, kind=s.kind):
        piece = induced_substructure(neutral, subset)
        piece = ContactStructure(
            piece.names, piece.bottom, piece.up, piece.contact, s.kind
        )
        for perm in isomorphisms(s, piece):
            yield {
                s.names[i]: piece.names[perm[i]] for i in range(s.n)
            }
