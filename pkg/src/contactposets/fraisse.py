"""Finite approximation of the homogeneous limits and the class checks.

Stages grow by amalgamating one-point extensions over embedded copies of
small substructures.  The limits themselves are infinite; a stage only
witnesses which extensions have been realized so far, and the extension
property check reports the honest fraction over the current structure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .amalgam import (
    AmalgamInstance,
    contact_amalgam,
    semilattice_amalgam,
    verify_superamalgamation,
)
from .core import (
    POSET,
    SEMILATTICE,
    ContactStructure,
    induced_substructure,
    verify_map,
)
from .enumeration import (
    AgeCatalog,
    canonical_key,
    canonical_table_key,
    carrier_subsets,
    induced_embeddings,
)
from .errors import NotJoinClosed, PreconditionViolation


# ---------------------------------------------------------------------------
# one-point extensions


def _marked_key(t: ContactStructure, image: Sequence[int]) -> tuple:
    """Canonical key of t with the embedded copy marked pointwise."""
    colors = [0] * t.n
    for position, element in enumerate(image):
        colors[element] = position + 1
    key, _ = canonical_table_key(t.n, (t.up, t.contact), tuple(colors))
    return (t.kind,) + key


def one_point_extensions(
    s: ContactStructure, catalog: AgeCatalog
) -> list[tuple[ContactStructure, dict[str, str]]]:
    """All ways to extend s by one point, up to isomorphism over s.

    Pairs (t, into) with t a catalog item one element larger and into an
    embedding of s onto an induced substructure of t; two pairs count as
    the same extension when an isomorphism of the targets commutes with
    the inclusions.
    """
    out = []
    seen = set()
    for t in catalog.items:
        if t.n != s.n + 1:
            continue
        for mapping in induced_embeddings(s, t):
            image = [t.index(mapping[name]) for name in s.names]
            key = _marked_key(t, image)
            if key in seen:
                continue
            seen.add(key)
            out.append((t, mapping))
    return out


def embeds_extension(
    stage: ContactStructure,
    f: dict[str, str],
    t: ContactStructure,
    into: dict[str, str],
) -> bool:
    """Does the embedding f of the common part extend to all of t?"""
    anchored = {into[s_name]: f[s_name] for s_name in into}
    free = [name for name in t.names if name not in anchored]
    new_point = free[0]
    for candidate in stage.names:
        if candidate in anchored.values():
            continue
        attempt = dict(anchored)
        attempt[new_point] = candidate
        checked = verify_map(t, stage, attempt)
        if checked.report.is_embedding and checked.report.order_reflecting:
            return True
    return False


# ---------------------------------------------------------------------------
# stages


@dataclass(frozen=True)
class Realization:
    """One log entry: where a copy sat, what was glued on, and the name
    the fresh point received."""

    sub: ContactStructure
    embedding: tuple[tuple[str, str], ...]
    extension: ContactStructure
    fresh_name: str


@dataclass(frozen=True)
class LimitStage:
    structure: ContactStructure
    stage: int
    log: tuple[Realization, ...]
    kind: str
    budget_exceeded: bool = False


@dataclass(frozen=True)
class ExtensionMiss:
    sub: ContactStructure
    image: tuple[str, ...]
    extension: ContactStructure


@dataclass(frozen=True)
class ExtensionReport:
    total: int
    realized: int
    misses: tuple[ExtensionMiss, ...]

    @property
    def fraction(self) -> float:
        return 1.0 if self.total == 0 else self.realized / self.total


def trivial_stage(kind: str) -> LimitStage:
    structure = ContactStructure(("0",), 0, (1,), (0,), kind)
    return LimitStage(structure, 0, (), kind)


def build_limit_stage(
    kind: str,
    cap: int,
    sweeps: int,
    catalog: AgeCatalog | None = None,
    max_elements: int = 64,
) -> LimitStage:
    """Sweep over embedded copies of substructures up to the size cap,
    amalgamating every unrealized one-point extension.

    Stops at a fixpoint sweep, after the sweep budget, or with the
    budget_exceeded flag once the carrier would outgrow max_elements.
    Deterministic for a fixed catalog.
    """
    if catalog is None:
        catalog = AgeCatalog.build(cap + 1, kind)
    stage = trivial_stage(kind)
    structure = stage.structure
    log: list[Realization] = []
    fresh_counter = 0
    exceeded = False
    sweep = 0
    while sweep < sweeps and not exceeded:
        sweep += 1
        snapshot = structure
        realized_any = False
        for sub in catalog.items:
            if sub.n > cap:
                continue
            extensions = one_point_extensions(sub, catalog)
            if not extensions:
                continue
            for f in list(induced_embeddings(sub, snapshot)):
                for t, into in extensions:
                    if embeds_extension(structure, f, t, into):
                        continue
                    if structure.n >= max_elements:
                        exceeded = True
                        break
                    fresh_counter += 1
                    fresh = f"p{fresh_counter}"
                    structure, actual_fresh, extra = _amalgamate_extension(
                        structure, f, t, into, fresh, kind, max_elements
                    )
                    if extra:
                        exceeded = True
                        break
                    log.append(
                        Realization(
                            sub,
                            tuple(sorted(f.items())),
                            t,
                            actual_fresh,
                        )
                    )
                    realized_any = True
                if exceeded:
                    break
            if exceeded:
                break
        if not realized_any:
            break
    return LimitStage(structure, sweep, tuple(log), kind, exceeded)


def _amalgamate_extension(
    structure: ContactStructure,
    f: dict[str, str],
    t: ContactStructure,
    into: dict[str, str],
    fresh: str,
    kind: str,
    max_elements: int,
) -> tuple[ContactStructure, str, bool]:
    """Glue one extension onto the stage; returns the grown stage, the
    fresh point's name, and whether the growth budget was exceeded."""
    anchored = {into[s_name]: f[s_name] for s_name in into}
    free = [name for name in t.names if name not in anchored]
    rename = dict(anchored)
    rename[free[0]] = fresh
    b_side = t.rename(rename)
    c_sub = induced_substructure(structure, [f[name] for name in f])
    inst = AmalgamInstance.from_parts(structure, b_side, c_sub)
    if kind == POSET:
        grown = contact_amalgam(inst)
        return grown, fresh, grown.n > max_elements
    result = semilattice_amalgam(inst, exhaustive_joins=False)
    family_structure = result.family.structure
    if family_structure.n > max_elements:
        return structure, fresh, True
    renames = {}
    used = set()
    for name in structure.names:
        renames[result.from_a.apply(name)] = name
        used.add(name)
    fresh_image = result.from_b.apply(fresh)
    if fresh_image not in renames:
        renames[fresh_image] = fresh
        used.add(fresh)
    counter = 0
    for name in family_structure.names:
        if name not in renames:
            counter += 1
            while f"q{counter}" in used:
                counter += 1
            renames[name] = f"q{counter}"
            used.add(f"q{counter}")
    grown = family_structure.rename(renames)
    grown = ContactStructure(grown.names, grown.bottom, grown.up, grown.contact, kind)
    return grown, fresh, False


def check_extension_property(
    stage: LimitStage, cap: int, catalog: AgeCatalog | None = None
) -> ExtensionReport:
    """Fraction of (copy, extension) pairs realized inside the stage.

    Quantifies over every embedding of every catalog item of size at
    most cap into the stage structure and every one-point extension of
    that item; a finite stage cannot realize extensions above its
    maximal elements, so fractions below 1.0 are expected and reported
    honestly.
    """
    if catalog is None:
        catalog = AgeCatalog.build(cap + 1, stage.kind)
    total = realized = 0
    misses = []
    for sub in catalog.items:
        if sub.n > cap:
            continue
        extensions = one_point_extensions(sub, catalog)
        for f in induced_embeddings(sub, stage.structure):
            for t, into in extensions:
                total += 1
                if embeds_extension(stage.structure, f, t, into):
                    realized += 1
                else:
                    misses.append(
                        ExtensionMiss(
                            sub,
                            tuple(f[name] for name in sub.names),
                            t,
                        )
                    )
    return ExtensionReport(total, realized, tuple(misses))


def stage_embeds_previous(previous: LimitStage, current: LimitStage) -> bool:
    """Stages keep old element names; the inclusion must be an embedding."""
    mapping = {name: name for name in previous.structure.names}
    checked = verify_map(previous.structure, current.structure, mapping)
    return checked.report.is_embedding and checked.report.order_reflecting


# ---------------------------------------------------------------------------
# class properties


@dataclass(frozen=True)
class ClassPropertiesReport:
    hp_ok: bool
    jep_ok: bool
    ap_ok: bool
    hp_failures: tuple[str, ...]
    jep_failures: tuple[str, ...]
    ap_failures: tuple[str, ...]
    ap_instances: int

    @property
    def ok(self) -> bool:
        return self.hp_ok and self.jep_ok and self.ap_ok


def iter_gluings(
    a: ContactStructure, b: ContactStructure
) -> Iterator[AmalgamInstance]:
    """Every way of gluing b onto a along a common induced substructure."""
    for size in range(1, min(a.n, b.n) + 1):
        for subset in carrier_subsets(a, size, kind=a.kind):
            try:
                c = induced_substructure(a, subset)
            except NotJoinClosed:
                continue
            for emb in induced_embeddings(c, b):
                yield AmalgamInstance.from_embeddings(
                    a, b, c, {name: name for name in c.names}, emb
                )


def _run_instance(inst: AmalgamInstance, kind: str) -> str | None:
    """Run an instance through the right pipeline; None means success."""
    try:
        if kind == SEMILATTICE:
            result = semilattice_amalgam(inst)
            d = result.poset_amalgam
            if not result.superamalgamation.ok:
                return "superamalgamation failed in the semilattice target"
        else:
            d = contact_amalgam(inst)
            if not verify_superamalgamation(inst, d).ok:
                return "superamalgamation witness missing"
        if d.n != inst.a.n + inst.b.n - inst.c.n:
            return "amalgam identified elements"
    except PreconditionViolation as exc:
        return f"precondition: {exc}"
    return None


def check_class_properties(
    catalog: AgeCatalog,
    ap_exhaustive_bound: int = 4,
    ap_samples: int = 200,
    seed: int = 2024,
) -> ClassPropertiesReport:
    """Hereditariness, joint embedding and amalgamation over the age.

    HP and JEP are exhaustive over the catalog.  AP is exhaustive over
    gluings of items up to ap_exhaustive_bound elements and sampled with
    a seeded generator above that.
    """
    hp_failures = []
    for item in catalog.items:
        for size in range(1, item.n + 1):
            for subset in carrier_subsets(item, size):
                piece = induced_substructure(item, subset)
                if catalog.find(piece) is None:
                    hp_failures.append(
                        f"substructure {subset} of {canonical_key(item)} not in catalog"
                    )
    jep_failures = []
    for a in catalog.items:
        for b in catalog.items:
            bottom = a.names[a.bottom]
            c = ContactStructure((bottom,), 0, (1,), (0,), catalog.kind)
            inst = AmalgamInstance.from_embeddings(
                a,
                b,
                c,
                {bottom: bottom},
                {bottom: b.names[b.bottom]},
            )
            problem = _run_instance(inst, catalog.kind)
            if problem:
                jep_failures.append(problem)
    ap_failures = []
    ap_instances = 0
    small = [item for item in catalog.items if item.n <= ap_exhaustive_bound]
    for a in small:
        for b in small:
            for inst in iter_gluings(a, b):
                ap_instances += 1
                problem = _run_instance(inst, catalog.kind)
                if problem:
                    ap_failures.append(problem)
    large = [item for item in catalog.items if item.n > ap_exhaustive_bound]
    if large:
        rng = random.Random(seed)
        for _ in range(ap_samples):
            inst = random_instance(catalog, rng)
            if inst is None:
                continue
            ap_instances += 1
            problem = _run_instance(inst, catalog.kind)
            if problem:
                ap_failures.append(problem)
    return ClassPropertiesReport(
        not hp_failures,
        not jep_failures,
        not ap_failures,
        tuple(hp_failures),
        tuple(jep_failures),
        tuple(ap_failures),
        ap_instances,
    )


def random_instance(
    catalog: AgeCatalog, rng: random.Random, max_tries: int = 50
) -> AmalgamInstance | None:
    """A random gluing of two catalog items along a random common part."""
    for _ in range(max_tries):
        a = rng.choice(catalog.items)
        b = rng.choice(catalog.items)
        size = rng.randint(1, min(a.n, b.n))
        subsets = list(carrier_subsets(a, size, kind=a.kind))
        if not subsets:
            continue
        subset = rng.choice(subsets)
        try:
            c = induced_substructure(a, subset)
        except NotJoinClosed:
            continue
        embeddings = list(induced_embeddings(c, b))
        if not embeddings:
            continue
        emb = rng.choice(embeddings)
        return AmalgamInstance.from_embeddings(
            a, b, c, {name: name for name in c.names}, emb
        )
    return None


def generated_subsemilattice(
    s: ContactStructure, generators: Iterable[str]
) -> tuple[str, ...]:
    """Closure of the generators plus bottom under binary joins."""
    from .core import join_index

    closed = {s.index(name) for name in generators}
    closed.add(s.bottom)
    while True:
        fresh = set()
        for i in closed:
            for j in closed:
                join = join_index(s, i, j)
                if join is not None and join not in closed:
                    fresh.add(join)
        if not fresh:
            break
        closed |= fresh
    return tuple(s.names[i] for i in sorted(closed))
