"""Prime spectra of commutative rings and partial spectra of finite rings.

Spec of a finite commutative ring is computed by enumerating all ideals
and filtering for the pairwise prime condition.  The partial spectrum of a
finite ring is the limit of Spec over the commutative-subring poset: a
point is a choice of prime ideal in every maximal commutative subring,
compatible on all pairwise intersections.  The search is a backtracking
CSP with most-constrained-first variable order, and every glued result is
re-verified by the independent pairwise primality checker.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .budget import Budget
from .commlattice import CommLattice, maximal_subrings
from .finring import (
    RingMap,
    RingTable,
    Subring,
    is_ring_hom,
    mask_indices,
    subring_table,
)
from .partial import (
    PartialIdeal,
    PartialMorphism,
    glue_family,
    is_partial_morphism,
    is_prime_partial_ideal,
    partial_ideal,
    standard_structure,
)


class IncompleteLatticeError(Exception):
    """The given lattice does not contain every commutative subring."""


class InternalConsistencyError(Exception):
    """A cross-check that should be impossible to fail has failed."""


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    backtracks: int
    seconds: float
    complete: bool


@dataclass(frozen=True, eq=False)
class SpecResult:
    """All prime ideals of a commutative ring, canonically ordered bitmasks."""

    ring: RingTable
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def index_of(self, mask: int) -> int:
        try:
            return self.primes.index(mask)
        except ValueError:
            raise KeyError(f"{mask:#x} is not a listed prime ideal") from None


@dataclass(frozen=True, eq=False)
class CompatibleFamily:
    """A choice of prime ideal per maximal subring, pairwise compatible.

    choice maps lattice subring index -> position in that subring's prime
    list; ambient maps the same index -> the prime's bitmask inside the
    ambient ring.
    """

    lattice: CommLattice
    choice: dict[int, int]
    ambient: dict[int, int]


@dataclass(frozen=True, eq=False)
class PartSpecResult:
    """All prime partial ideals of a ring, with the families they came from."""

    ring: RingTable
    families: tuple[CompatibleFamily, ...]
    ideals: tuple[PartialIdeal, ...]
    stats: SearchStats

    def __len__(self) -> int:
        return len(self.ideals)

    def masks(self) -> tuple[int, ...]:
        return tuple(i.mask for i in self.ideals)

    def index_of(self, mask: int) -> int:
        for i, ideal in enumerate(self.ideals):
            if ideal.mask == mask:
                return i
        raise KeyError(f"{mask:#x} is not a computed prime partial ideal")


# --------------------------------------------------------------------------
# ideals and Spec of a commutative ring


def enumerate_ideals(ring: RingTable, *, budget: Budget | None = None) -> list[int]:
    """All ideals of a commutative ring as bitmasks, canonically ordered.

    Closure-seeded fixpoint over joins with principal ideals: a principal
    ideal is x*R (the ring is unital), and every ideal is a sum of the
    principal ideals of its elements, so growing each known ideal by one
    principal ideal at a time reaches everything.
    """
    if not ring.is_commutative():
        raise ValueError(f"{ring.label} is not commutative")
    budget = budget or Budget()
    budget.sub("ideal enumeration")
    mul, add = np.asarray(ring.mul), np.asarray(ring.add)

    principal_masks: set[int] = set()
    principal_elems: dict[int, np.ndarray] = {}
    for x in range(ring.size):
        row = np.unique(mul[x])
        mask = 0
        for v in row.tolist():
            mask |= 1 << v
        if mask not in principal_masks:
            principal_masks.add(mask)
            principal_elems[mask] = row

    seen: set[int] = set()
    frontier: list[int] = []

    def visit(mask: int) -> None:
        if mask not in seen:
            seen.add(mask)
            frontier.append(mask)

    visit(1 << ring.zero)
    while frontier:
        mask = frontier.pop()
        elems = np.array(mask_indices(mask))
        for pmask, pelems in principal_elems.items():
            if pmask & ~mask == 0:
                continue
            budget.spend()
            sums = np.unique(add[np.ix_(elems, pelems)])
            joined = 0
            for v in sums.tolist():
                joined |= 1 << v
            visit(joined)
    return sorted(seen, key=lambda m: (bin(m).count("1"), m))


def spec(ring: RingTable, *, budget: Budget | None = None) -> SpecResult:
    """Prime ideals of a commutative ring by the pairwise condition.

    The prime condition is checked directly (ab in P forces a or b in P);
    for a finite commutative ring every prime is also maximal and this is
    asserted against the full ideal list rather than assumed.
    """
    ideals = enumerate_ideals(ring, budget=budget)
    full = (1 << ring.size) - 1
    mul = np.asarray(ring.mul)
    primes = []
    for mask in ideals:
        if mask == full:
            continue
        in_set = np.zeros(ring.size, dtype=bool)
        in_set[mask_indices(mask)] = True
        bad = in_set[mul] & ~in_set[:, None] & ~in_set[None, :]
        if not bad.any():
            primes.append(mask)
    for p in primes:
        for other in ideals:
            if other != p and other != full and (p & other) == p:
                raise InternalConsistencyError(
                    f"prime ideal {p:#x} of {ring.label} is not maximal"
                )
    return SpecResult(ring, tuple(primes))


def spec_map(
    f: RingMap,
    *,
    domain_spec: SpecResult | None = None,
    codomain_spec: SpecResult | None = None,
) -> list[int]:
    """The contravariant action P -> f^-1(P) on prime ideals.

    Returns, for each prime of the codomain (in canonical order), the
    index of its preimage in the domain's canonical prime list.
    """
    if not is_ring_hom(f):
        raise ValueError("spec_map requires a ring homomorphism")
    if not (f.domain.is_commutative() and f.codomain.is_commutative()):
        raise ValueError("spec_map requires commutative rings")
    dom = domain_spec or spec(f.domain)
    cod = codomain_spec or spec(f.codomain)
    table = np.asarray(f.table)
    out = []
    for pmask in cod.primes:
        in_p = np.zeros(f.codomain.size, dtype=bool)
        in_p[mask_indices(pmask)] = True
        pre = 0
        for a in np.nonzero(in_p[table])[0]:
            pre |= 1 << int(a)
        out.append(dom.index_of(pre))
    return out


# --------------------------------------------------------------------------
# partSpec as a compatible-family CSP over the maximal subrings


def _maximal_prime_tables(
    lat: CommLattice, *, budget: Budget | None = None
) -> dict[int, list[int]]:
    """Per maximal subring: its prime ideals as bitmasks in ambient indices."""
    out: dict[int, list[int]] = {}
    for i in lat.maximal:
        sub = lat.subrings[i]
        table, incl = subring_table(sub)
        local = spec(table, budget=budget)
        ambient_primes = []
        for pmask in local.primes:
            amb = 0
            for j in mask_indices(pmask):
                amb |= 1 << int(incl.table[j])
            ambient_primes.append(amb)
        out[i] = ambient_primes
    return out


def part_spec(
    ring: RingTable, lat: CommLattice, *, budget: Budget | None = None
) -> PartSpecResult:
    """All prime partial ideals, as the limit of Spec over the lattice.

    Backtracking over the maximal subrings, most-constrained first;
    after each assignment, candidates incompatible with it are pruned.
    Every solution is glued to a partial ideal and re-verified prime by
    the pairwise checker.  An empty result means the partial spectrum is
    empty, and is only reported when the search ran to completion.
    """
    if lat.ring is not ring and lat.ring.fingerprint() != ring.fingerprint():
        raise IncompleteLatticeError("lattice was computed for a different ring")
    budget = budget or Budget()
    budget.sub("partSpec search")
    t0 = time.monotonic()

    prime_tables = _maximal_prime_tables(lat, budget=budget)
    order = sorted(lat.maximal, key=lambda i: (len(prime_tables[i]), i))
    sub_masks = {i: lat.subrings[i].members for i in lat.maximal}

    nodes = 0
    backtracks = 0
    solutions: list[dict[int, int]] = []

    def compatible(i: int, pi: int, j: int, pj: int) -> bool:
        return (pi & sub_masks[j]) == (sub_masks[i] & pj)

    def extend(pos: int, chosen: dict[int, int], domains: dict[int, list[int]]) -> None:
        nonlocal nodes, backtracks
        if pos == len(order):
            solutions.append(dict(chosen))
            return
        var = order[pos]
        for pmask in domains[var]:
            nodes += 1
            budget.spend()
            chosen[var] = pmask
            pruned: dict[int, list[int]] = {}
            feasible = True
            for later in order[pos + 1 :]:
                keep = [q for q in domains[later] if compatible(var, pmask, later, q)]
                if not keep:
                    feasible = False
                    break
                pruned[later] = keep
            if feasible:
                extend(pos + 1, chosen, {**domains, **pruned})
            else:
                backtracks += 1
            del chosen[var]

    extend(0, {}, {i: list(prime_tables[i]) for i in lat.maximal})

    families = []
    ideals = []
    for sol in solutions:
        glued = glue_family(lat, sol)
        verdict = is_prime_partial_ideal(glued)
        if not verdict:
            raise InternalConsistencyError(
                f"glued family is not prime: witness {verdict.witness}"
            )
        choice = {i: prime_tables[i].index(sol[i]) for i in lat.maximal}
        families.append(CompatibleFamily(lat, choice, dict(sol)))
        ideals.append(glued)

    # canonical order by glued bitmask; families stay aligned
    order_ix = sorted(range(len(ideals)), key=lambda t: ideals[t].mask)
    ideals = [ideals[t] for t in order_ix]
    families = [families[t] for t in order_ix]
    masks = [i.mask for i in ideals]
    if len(set(masks)) != len(masks):
        raise InternalConsistencyError("two distinct families glued to the same ideal")

    stats = SearchStats(nodes, backtracks, time.monotonic() - t0, True)
    return PartSpecResult(ring, tuple(families), tuple(ideals), stats)


def part_spec_map(
    f: RingMap, domain_result: PartSpecResult, codomain_result: PartSpecResult
) -> list[int]:
    """The contravariant action on partial spectra, P -> f^-1(P).

    Returns, per codomain prime partial ideal, the index of its preimage
    among the domain's computed list; a missing preimage means the domain
    lattice was incomplete and raises.
    """
    if not is_ring_hom(f):
        raise ValueError("part_spec_map requires a ring homomorphism")
    if not (domain_result.stats.complete and codomain_result.stats.complete):
        raise ValueError("part_spec_map requires complete results on both sides")
    table = np.asarray(f.table)
    out = []
    for ideal in codomain_result.ideals:
        in_p = np.zeros(f.codomain.size, dtype=bool)
        in_p[ideal.indices()] = True
        pre = 0
        for a in np.nonzero(in_p[table])[0]:
            pre |= 1 << int(a)
        try:
            out.append(domain_result.index_of(pre))
        except KeyError as exc:
            raise InternalConsistencyError(
                f"preimage {pre:#x} missing from domain partSpec; incomplete lattice?"
            ) from exc
    return out


# --------------------------------------------------------------------------
# partial morphisms to a field


def _ring_homs(domain: RingTable, codomain: RingTable) -> list[np.ndarray]:
    """All ring homs domain -> codomain by generator-image backtracking."""
    # greedy generating set: repeatedly adjoin an element outside the
    # closure of what we have
    from .finring import closure

    gens: list[int] = []
    reached = closure(domain, gens).members
    while reached != (1 << domain.size) - 1:
        x = next(i for i in range(domain.size) if not (reached >> i) & 1)
        gens.append(x)
        reached = closure(domain, gens).members

    add_d, mul_d, neg_d = (np.asarray(t) for t in (domain.add, domain.mul, domain.neg))
    add_c, mul_c, neg_c = (np.asarray(t) for t in (codomain.add, codomain.mul, codomain.neg))
    homs: list[np.ndarray] = []

    def close_map(partial_map: dict[int, int]) -> dict[int, int] | None:
        """Extend by ring operations until stable; None on conflict."""
        work = dict(partial_map)
        changed = True
        while changed:
            changed = False
            items = list(work.items())
            for a, fa in items:
                na, nfa = int(neg_d[a]), int(neg_c[fa])
                if na not in work:
                    work[na] = nfa
                    changed = True
                elif work[na] != nfa:
                    return None
                for b, fb in items:
                    pairs = (
                        (int(add_d[a, b]), int(add_c[fa, fb])),
                        (int(mul_d[a, b]), int(mul_c[fa, fb])),
                    )
                    for key, val in pairs:
                        existing = work.get(key)
                        if existing is None:
                            work[key] = val
                            changed = True
                        elif existing != val:
                            return None
        return work

    def assign(i: int, partial_map: dict[int, int]) -> None:
        if i == len(gens):
            if len(partial_map) == domain.size:
                homs.append(
                    np.array([partial_map[a] for a in range(domain.size)], dtype=np.int64)
                )
            return
        for image in range(codomain.size):
            trial = dict(partial_map)
            trial[gens[i]] = image
            closed = close_map(trial)
            if closed is not None:
                assign(i + 1, closed)

    seed = close_map({domain.zero: codomain.zero, domain.one: codomain.one})
    if seed is not None:
        assign(0, seed)
    return homs


def enumerate_partial_morphisms(
    ring: RingTable,
    field: RingTable,
    lat: CommLattice,
    *,
    budget: Budget | None = None,
) -> list[PartialMorphism]:
    """All functions to a finite field that restrict to a ring hom on every
    maximal commutative subring and agree on overlaps.

    Any commeasurable pair lies inside some maximal commutative subring,
    so each result is a partial morphism; this is verified per result.
    """
    from .finring import classify_elements

    if not field.is_commutative() or len(classify_elements(field).units) != field.size - 1:
        raise ValueError(f"{field.label} is not a field")
    budget = budget or Budget()
    budget.sub("partial-morphism enumeration")

    covered = 0
    for i in lat.maximal:
        covered |= lat.subrings[i].members
    if covered != (1 << ring.size) - 1:
        raise IncompleteLatticeError(
            "maximal subrings do not cover the ring; lattice incomplete"
        )

    maximals = list(lat.maximal)
    hom_tables: dict[int, list[np.ndarray]] = {}
    incl_elems: dict[int, list[int]] = {}
    for i in maximals:
        table, incl = subring_table(lat.subrings[i])
        budget.spend()
        hom_tables[i] = _ring_homs(table, field)
        incl_elems[i] = [int(x) for x in incl.table]

    # backtracking over maximal subrings; the shared function table is the
    # consistency constraint on overlaps
    order = sorted(maximals, key=lambda i: (len(hom_tables[i]), i))
    results: list[np.ndarray] = []
    value = np.full(ring.size, -1, dtype=np.int64)

    def extend(pos: int) -> None:
        if pos == len(order):
            results.append(value.copy())
            return
        var = order[pos]
        elems = incl_elems[var]
        for hom in hom_tables[var]:
            budget.spend()
            touched = []
            ok = True
            for local, ambient in enumerate(elems):
                want = int(hom[local])
                if value[ambient] == -1:
                    value[ambient] = want
                    touched.append(ambient)
                elif value[ambient] != want:
                    ok = False
                    break
            if ok:
                extend(pos + 1)
            for ambient in touched:
                value[ambient] = -1

    extend(0)

    std = standard_structure(ring)
    morphisms = []
    for table in sorted(results, key=lambda t: tuple(t.tolist())):
        if (table < 0).any():
            raise InternalConsistencyError(
                "maximal subrings do not cover the ring; lattice incomplete"
            )
        morphism = PartialMorphism(std, field, table)
        verdict = is_partial_morphism(morphism)
        if not verdict:
            raise InternalConsistencyError(
                f"assembled function is not a partial morphism: {verdict.witness}"
            )
        morphisms.append(morphism)
    return morphisms


__all__ = [
    "IncompleteLatticeError",
    "InternalConsistencyError",
    "SearchStats",
    "SpecResult",
    "CompatibleFamily",
    "PartSpecResult",
    "enumerate_ideals",
    "spec",
    "spec_map",
    "part_spec",
    "part_spec_map",
    "enumerate_partial_morphisms",
]
