"""Partial-ring structures over a finite ring.

A partial structure is the ring's universe together with a reflexive
symmetric commeasurability relation; operations are only required to
behave like commutative-ring operations on commeasurable tuples.  The
standard structure declares two elements commeasurable exactly when they
commute, which restricts attention to the commutative subrings of the
ring.  Partial ideals meet every commutative subring in an ideal, and the
prime ones form the partial spectrum computed in `primespec`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .commlattice import CommLattice
from .finring import (
    ElementSubset,
    RingMap,
    RingTable,
    characteristic,
    classify_elements,
    is_ring_hom,
    mask_indices,
    scalar_multiple,
)


@dataclass(frozen=True)
class CheckResult:
    """Boolean verdict plus a witness for the failing condition, if any."""

    ok: bool
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class PartialStructure:
    """A ring universe with a commeasurability relation."""

    ring: RingTable
    comm: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.comm, dtype=bool)
        arr.setflags(write=False)
        object.__setattr__(self, "comm", arr)

    def __repr__(self) -> str:
        return f"PartialStructure({self.ring.label})"


@dataclass(frozen=True, eq=False)
class PartialIdeal:
    """A subset meeting every commutative subring in an ideal of it."""

    structure: PartialStructure
    members: ElementSubset

    @property
    def mask(self) -> int:
        return self.members.members

    def indices(self) -> list[int]:
        return self.members.indices()

    def __repr__(self) -> str:
        return f"PartialIdeal({sorted(self.indices())} of {self.structure.ring.label})"


@dataclass(frozen=True, eq=False)
class PartialMorphism:
    """A function into a commutative ring that is a ring hom on every
    commeasurable subalgebra of the source."""

    source: PartialStructure
    target: RingTable
    table: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.table, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    def __call__(self, i: int) -> int:
        return int(self.table[i])


@dataclass(frozen=True)
class IdempotentPartition:
    """All idempotents split as {0,1} | chosen | {1-e : e chosen}.

    nil_classes, when the ring has prime characteristic, holds one
    representative per scalar class of nonzero square-zero elements.
    """

    ring: RingTable
    trivial: tuple[int, int]
    chosen: tuple[int, ...]
    complement: Mapping[int, int]
    nil_classes: tuple[int, ...] | None = None


def partial_ideal(structure: PartialStructure, indices: Iterable[int] | int) -> PartialIdeal:
    """Wrap an index set (or bitmask) as a PartialIdeal candidate."""
    if isinstance(indices, int):
        subset = ElementSubset(structure.ring, indices)
    else:
        subset = ElementSubset.from_indices(structure.ring, indices)
    return PartialIdeal(structure, subset)


def standard_structure(ring: RingTable) -> PartialStructure:
    """Commeasurability = commutation; the structure every theorem here uses."""
    mul = np.asarray(ring.mul)
    return PartialStructure(ring, mul == mul.T)


# --------------------------------------------------------------------------
# axiom checking


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    passed: bool
    witness: tuple | None = None


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]


def check_axioms(s: PartialStructure) -> AxiomReport:
    """Check the partial-algebra axioms, reporting a witness per failure.

    Covers: reflexivity/symmetry of the relation, commeasurability of 0
    and 1 with everything, closure of the relation under the operations,
    and commutativity/associativity/distributivity, identities, inverses
    and prime-subring bilinearity on commeasurable tuples.
    """
    ring = s.ring
    comm = s.comm
    add, mul, neg = np.asarray(ring.add), np.asarray(ring.mul), np.asarray(ring.neg)
    n = ring.size
    checks: list[AxiomCheck] = []

    def record(axiom: str, passed: bool, witness: tuple | None = None) -> None:
        checks.append(AxiomCheck(axiom, bool(passed), witness))

    diag = np.diagonal(comm)
    record("reflexive", bool(diag.all()), _first_bad((~diag,)))
    sym = comm == comm.T
    record("symmetric", bool(sym.all()), _first_bad((~sym,)))
    record(
        "zero-one-commeasurable (1)",
        bool(comm[:, ring.zero].all() and comm[:, ring.one].all()),
        _first_bad((~comm[:, ring.zero], ~comm[:, ring.one])),
    )

    pairs = np.argwhere(comm)
    char = characteristic(ring)
    scalars = [scalar_multiple(ring, lam, ring.one) for lam in range(char)]

    # axiom (2): relation preserved by the operations, including the
    # prime-subring scalar action
    ok2, wit2 = True, None
    for a1, a2 in pairs:
        partners = comm[a1] & comm[a2]
        if not comm[add[a1, a2]][partners].all():
            a3 = int(np.nonzero(partners & ~comm[add[a1, a2]])[0][0])
            ok2, wit2 = False, (int(a1), int(a2), a3, "sum")
            break
        if not comm[mul[a1, a2]][partners].all():
            a3 = int(np.nonzero(partners & ~comm[mul[a1, a2]])[0][0])
            ok2, wit2 = False, (int(a1), int(a2), a3, "product")
            break
        lam_ok = all(comm[mul[sc, a1], a2] for sc in scalars)
        if not lam_ok:
            ok2, wit2 = False, (int(a1), int(a2), "scalar")
            break
    record("operations-preserve-relation (2)", ok2, wit2)

    # (3.0) identities
    idx = np.arange(n)
    ok = np.array_equal(add[ring.zero], idx) and np.array_equal(mul[ring.one], idx)
    record("identities (3.0)", ok, None if ok else (ring.zero, ring.one))

    # (3.1) commutativity where defined
    bad = comm & (add != add.T)
    ok_add = not bad.any()
    wit_add = None if ok_add else tuple(int(v) for v in np.argwhere(bad)[0])
    bad = comm & (mul != mul.T)
    ok_mul = not bad.any()
    wit_mul = None if ok_mul else tuple(int(v) for v in np.argwhere(bad)[0])
    record("commutativity (3.1)", ok_add and ok_mul, wit_add or wit_mul)

    # (3.2)/(3.3): associativity and distributivity on commeasurable triples
    ok_assoc, wit_assoc = True, None
    ok_dist, wit_dist = True, None
    for a, b in pairs:
        if not (ok_assoc and ok_dist):
            break
        cs = np.nonzero(comm[a] & comm[b])[0]
        if cs.size == 0:
            continue
        lhs = add[add[a, b], cs]
        rhs = add[a, add[b, cs]]
        if not np.array_equal(lhs, rhs):
            ok_assoc = False
            wit_assoc = (int(a), int(b), int(cs[np.argmax(lhs != rhs)]), "+")
            continue
        lhs = mul[mul[a, b], cs]
        rhs = mul[a, mul[b, cs]]
        if not np.array_equal(lhs, rhs):
            ok_assoc = False
            wit_assoc = (int(a), int(b), int(cs[np.argmax(lhs != rhs)]), "*")
            continue
        lhs = mul[a, add[b, cs]]
        rhs = add[mul[a, b], mul[a, cs]]
        if not np.array_equal(lhs, rhs):
            ok_dist = False
            wit_dist = (int(a), int(b), int(cs[np.argmax(lhs != rhs)]))
    record("associativity (3.2)", ok_assoc, wit_assoc)
    record("distributivity (3.3)", ok_dist, wit_dist)

    # (3.4) additive inverses stay commeasurable
    inv_ok = bool((add[idx, neg] == ring.zero).all())
    inv_comm = bool(comm[idx, neg].all())
    neg_preserves = bool((comm <= comm[neg, :]).all())
    record(
        "inverses (3.4)",
        inv_ok and inv_comm and neg_preserves,
        None if inv_ok and inv_comm and neg_preserves else _first_bad((~comm[idx, neg],)),
    )

    # (3.5) prime-subring bilinearity on commeasurable pairs
    ok5, wit5 = True, None
    for a, b in pairs:
        for lam, sc in enumerate(scalars):
            lam_ab = mul[sc, mul[a, b]]
            if mul[mul[sc, a], b] != lam_ab or mul[a, mul[sc, b]] != lam_ab:
                ok5, wit5 = False, (lam, int(a), int(b))
                break
        if not ok5:
            break
    record("bilinearity (3.5)", ok5, wit5)

    return AxiomReport(tuple(checks))


def _first_bad(masks: tuple[np.ndarray, ...]) -> tuple | None:
    for m in masks:
        hits = np.nonzero(m)[0]
        if hits.size:
            return (int(hits[0]),)
    return None


# --------------------------------------------------------------------------
# partial ideals


def is_partial_ideal(candidate: PartialIdeal) -> CheckResult:
    """Check both closure conditions on all commeasurable pairs."""
    s = candidate.structure
    ring = s.ring
    members = candidate.indices()
    in_set = np.zeros(ring.size, dtype=bool)
    in_set[members] = True
    add, mul, comm = np.asarray(ring.add), np.asarray(ring.mul), s.comm

    # zero membership makes the pairwise conditions equivalent to meeting
    # every commutative subring in an ideal of it
    if not in_set[ring.zero]:
        return CheckResult(False, (ring.zero,), "zero is missing")
    if members:
        arr = np.array(members)
        # a, b in I commeasurable  =>  a+b in I
        pair_comm = comm[np.ix_(arr, arr)]
        sums_in = in_set[add[np.ix_(arr, arr)]]
        bad = pair_comm & ~sums_in
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return CheckResult(False, (int(arr[i]), int(arr[j])), "sum escapes the set")
        # b in I, a commeasurable with b  =>  ab in I
        partner_comm = comm[:, arr]
        prods_in = in_set[mul[:, arr]]
        bad = partner_comm & ~prods_in
        if bad.any():
            a, j = np.argwhere(bad)[0]
            return CheckResult(False, (int(a), int(arr[j])), "product escapes the set")
    return CheckResult(True)


def is_prime_partial_ideal(candidate: PartialIdeal) -> CheckResult:
    """Proper, and xy in P forces x or y in P for commeasurable x, y."""
    base = is_partial_ideal(candidate)
    if not base:
        raise ValueError(f"not a partial ideal: witness {base.witness} ({base.reason})")
    ring = candidate.structure.ring
    in_set = np.zeros(ring.size, dtype=bool)
    in_set[candidate.indices()] = True
    if in_set[ring.one]:
        return CheckResult(False, (ring.one,), "contains 1, hence improper")
    if in_set.all():
        return CheckResult(False, None, "equals the whole ring")
    mul, comm = np.asarray(ring.mul), candidate.structure.comm
    bad = comm & in_set[mul] & ~in_set[:, None] & ~in_set[None, :]
    if bad.any():
        x, y = np.argwhere(bad)[0]
        return CheckResult(False, (int(x), int(y)), "product in P but neither factor is")
    return CheckResult(True)


def is_partial_morphism(candidate: PartialMorphism) -> CheckResult:
    """Check the morphism conditions on all commeasurable pairs.

    The target must be commutative.  Prime-subring linearity is forced by
    additivity, so no separate scalar check is stored.
    """
    target = candidate.target
    if not target.is_commutative():
        raise ValueError(f"partial-morphism target {target.label} is not commutative")
    source = candidate.source
    ring = source.ring
    t = np.asarray(candidate.table)
    if t[ring.zero] != target.zero:
        return CheckResult(False, (ring.zero,), "zero not preserved")
    if t[ring.one] != target.one:
        return CheckResult(False, (ring.one,), "one not preserved")
    comm = source.comm
    add_ok = ~comm | (t[np.asarray(ring.add)] == np.asarray(target.add)[t[:, None], t[None, :]])
    if not add_ok.all():
        a, b = np.argwhere(~add_ok)[0]
        return CheckResult(False, (int(a), int(b)), "additivity fails on a commeasurable pair")
    mul_ok = ~comm | (t[np.asarray(ring.mul)] == np.asarray(target.mul)[t[:, None], t[None, :]])
    if not mul_ok.all():
        a, b = np.argwhere(~mul_ok)[0]
        return CheckResult(False, (int(a), int(b)), "multiplicativity fails on a commeasurable pair")
    return CheckResult(True)


def hom_as_partial_morphism(f: RingMap) -> PartialMorphism:
    """View a verified ring hom into a commutative ring as a partial morphism."""
    if not is_ring_hom(f):
        raise ValueError("map is not a ring homomorphism")
    return PartialMorphism(standard_structure(f.domain), f.codomain, np.asarray(f.table))


def preimage(f: PartialMorphism | RingMap, ideal: PartialIdeal) -> PartialIdeal:
    """Pull a partial ideal back along a morphism.

    Accepts either a partial morphism (commutative target) or a verified
    ring homomorphism between arbitrary rings; a full hom is a partial
    morphism for the standard structures.  The result is verified to be a
    partial ideal, and primality is verified to be preserved.
    """
    if isinstance(f, RingMap):
        if not is_ring_hom(f):
            raise ValueError("preimage along a RingMap requires a ring homomorphism")
        source = standard_structure(f.domain)
        target_ring = f.codomain
        table = np.asarray(f.table)
    else:
        source = f.source
        target_ring = f.target
        table = np.asarray(f.table)
    if ideal.structure.ring is not target_ring and (
        ideal.structure.ring.fingerprint() != target_ring.fingerprint()
    ):
        raise ValueError("ideal does not live in the morphism's target")
    base = is_partial_ideal(ideal)
    if not base:
        raise ValueError(f"input is not a partial ideal: witness {base.witness}")

    in_target = np.zeros(target_ring.size, dtype=bool)
    in_target[ideal.indices()] = True
    pulled = partial_ideal(source, np.nonzero(in_target[table])[0])
    verdict = is_partial_ideal(pulled)
    if not verdict:
        raise AssertionError(f"preimage is not a partial ideal: {verdict.witness}")
    if is_prime_partial_ideal_candidate(ideal):
        prime = is_prime_partial_ideal(pulled)
        if not prime:
            raise AssertionError(f"preimage of a prime is not prime: {prime.witness}")
    return pulled


def is_prime_partial_ideal_candidate(candidate: PartialIdeal) -> bool:
    """Silent variant used where primality is an input property, not an error."""
    try:
        return bool(is_prime_partial_ideal(candidate))
    except ValueError:
        return False


# --------------------------------------------------------------------------
# gluing: a partial ideal == a compatible choice of ideal per maximal subring


class CompatibilityError(ValueError):
    """A family of per-subring ideals fails pairwise compatibility."""

    def __init__(self, i: int, j: int, element: int):
        self.pair = (i, j)
        self.element = element
        super().__init__(
            f"ideals for subrings {i} and {j} disagree at element {element}"
        )


def is_ideal_of_subring(ring: RingTable, sub_mask: int, ideal_mask: int) -> bool:
    """ideal_mask is an ideal of the (commutative) subring sub_mask."""
    if ideal_mask & ~sub_mask:
        return False
    elems = mask_indices(sub_mask)
    ideal = mask_indices(ideal_mask)
    if not ((ideal_mask >> ring.zero) & 1):
        return False
    add, mul, neg = np.asarray(ring.add), np.asarray(ring.mul), np.asarray(ring.neg)
    for i in ideal:
        if not ((ideal_mask >> int(neg[i])) & 1):
            return False
        for j in ideal:
            if not ((ideal_mask >> int(add[i, j])) & 1):
                return False
        for c in elems:
            if not ((ideal_mask >> int(mul[c, i])) & 1):
                return False
    return True


def glue_family(lat: CommLattice, assignments: Mapping[int, int]) -> PartialIdeal:
    """Union of a compatible family of ideals over the maximal subrings.

    assignments maps each maximal subring index of the lattice to an ideal
    of that subring, given as a bitmask.  Pairwise compatibility
    I(C1) & C2 == C1 & I(C2) is required and checked; restriction of the
    glued ideal back to each maximal subring recovers the family.
    """
    ring = lat.ring
    if set(assignments) != set(lat.maximal):
        raise ValueError("assignments must cover exactly the maximal subrings")
    for i, ideal_mask in assignments.items():
        sub_mask = lat.subrings[i].members
        if not is_ideal_of_subring(ring, sub_mask, ideal_mask):
            raise ValueError(f"assignment for subring {i} is not an ideal of it")
    items = sorted(assignments.items())
    for a in range(len(items)):
        i, ideal_i = items[a]
        for b in range(a + 1, len(items)):
            j, ideal_j = items[b]
            left = ideal_i & lat.subrings[j].members
            right = lat.subrings[i].members & ideal_j
            if left != right:
                element = mask_indices(left ^ right)[0]
                raise CompatibilityError(i, j, element)

    union = 0
    for _, ideal_mask in items:
        union |= ideal_mask
    glued = partial_ideal(standard_structure(ring), union)
    verdict = is_partial_ideal(glued)
    if not verdict:
        raise AssertionError(f"glued family is not a partial ideal: {verdict.witness}")
    for i, ideal_mask in items:
        if union & lat.subrings[i].members != ideal_mask:
            raise AssertionError(f"restriction to subring {i} does not recover the family")
    return glued


def restrict_family(ideal: PartialIdeal, lat: CommLattice) -> dict[int, int]:
    """Intersect a partial ideal with every subring in the lattice.

    Each intersection is verified to be an ideal of its subring, and the
    nesting condition I(C) == I(C') & C for C <= C' is verified.
    """
    ring = lat.ring
    out: dict[int, int] = {}
    for i, sub in enumerate(lat.subrings):
        piece = ideal.mask & sub.members
        if not is_ideal_of_subring(ring, sub.members, piece):
            raise AssertionError(f"intersection with subring {i} is not an ideal")
        out[i] = piece
    for i in range(len(lat.subrings)):
        for j in range(len(lat.subrings)):
            if lat.inclusion[i, j] and out[i] != (out[j] & lat.subrings[i].members):
                raise AssertionError(f"nesting fails for subrings {i} <= {j}")
    return out


# --------------------------------------------------------------------------
# idempotents


def partition_idempotents(ring: RingTable) -> IdempotentPartition:
    """Split the idempotents as {0,1} | chosen | complements.

    Within each pair {e, 1-e} the smaller index is chosen, so the output
    is reproducible.  When the characteristic is prime, nil_classes also
    picks the least representative of each scalar class of nonzero
    square-zero elements.
    """
    cls = classify_elements(ring)
    idem = set(cls.idempotents)
    one_minus = {
        e: int(ring.add[ring.one, ring.neg[e]]) for e in idem
    }
    for e, c in one_minus.items():
        if c == e and ring.size > 1:
            raise ValueError(f"idempotent {e} equals its own complement in a nonzero ring")
        if c not in idem:
            raise AssertionError(f"1 - idempotent {e} is not idempotent")
    nontrivial = idem - {ring.zero, ring.one}
    chosen = tuple(sorted(e for e in nontrivial if e < one_minus[e]))
    complement = {e: one_minus[e] for e in chosen}

    covered = {ring.zero, ring.one} | set(chosen) | set(complement.values())
    if covered != idem:
        raise AssertionError("idempotent partition does not exhaust the idempotents")

    nil_classes: tuple[int, ...] | None = None
    char = characteristic(ring)
    if _is_prime(char):
        mul = np.asarray(ring.mul)
        square_zero = [
            x for x in range(ring.size)
            if x != ring.zero and mul[x, x] == ring.zero
        ]
        scalars = [scalar_multiple(ring, lam, ring.one) for lam in range(1, char)]
        reps = []
        seen: set[int] = set()
        for x in square_zero:
            if x in seen:
                continue
            orbit = {int(mul[s, x]) for s in scalars}
            seen |= orbit
            reps.append(min(orbit))
        nil_classes = tuple(sorted(reps))

    return IdempotentPartition(
        ring, (ring.zero, ring.one), chosen, complement, nil_classes
    )


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


__all__ = [
    "CheckResult",
    "PartialStructure",
    "PartialIdeal",
    "PartialMorphism",
    "IdempotentPartition",
    "AxiomCheck",
    "AxiomReport",
    "CompatibilityError",
    "partial_ideal",
    "standard_structure",
    "check_axioms",
    "is_partial_ideal",
    "is_prime_partial_ideal",
    "is_partial_morphism",
    "hom_as_partial_morphism",
    "preimage",
    "is_ideal_of_subring",
    "glue_family",
    "restrict_family",
    "partition_idempotents",
]
