"""Enumeration of the poset of unital commutative subrings of a finite ring.

The enumeration is a seeded breadth-first search over closures: start from
the prime subring and all single-generator closures, then repeatedly extend
each known commutative subring C by an outside element commuting with all
of C.  Every commutative subring is reached this way (add its elements one
at a time), so the result is complete whenever the search finishes inside
its budget.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .budget import Budget
from .finring import ElementSubset, RingTable, Subring, centralizer, closure, mask_indices

CACHE_MAGIC = b"PSCL"
CACHE_VERSION = 1


class CacheMissError(Exception):
    """No cached lattice for this ring fingerprint."""


class CacheCorruptError(Exception):
    """Cache file failed its header, fingerprint or invariant checks."""


@dataclass(frozen=True, eq=False)
class CommLattice:
    """The poset of unital commutative subrings, canonically ordered.

    subrings are sorted by (size, bitset); inclusion[i, j] is True iff
    subring i is contained in subring j; maximal lists the indices with no
    proper commutative super-subring.
    """

    ring: RingTable
    subrings: tuple[Subring, ...]
    inclusion: np.ndarray
    maximal: tuple[int, ...]

    def __post_init__(self):
        self.inclusion.setflags(write=False)

    def __len__(self) -> int:
        return len(self.subrings)

    def index_of(self, members: int) -> int:
        for i, sub in enumerate(self.subrings):
            if sub.members == members:
                return i
        raise KeyError("subring not present in lattice")


def _canonical_order(masks: list[int]) -> list[int]:
    return sorted(masks, key=lambda m: (bin(m).count("1"), m))


def _build_lattice(ring: RingTable, masks: list[int]) -> CommLattice:
    ordered = _canonical_order(masks)
    subs = tuple(
        Subring(ElementSubset(ring, m), True) for m in ordered
    )
    k = len(ordered)
    inclusion = np.zeros((k, k), dtype=bool)
    for i, mi in enumerate(ordered):
        for j, mj in enumerate(ordered):
            inclusion[i, j] = (mi & mj) == mi
    proper_above = inclusion & ~np.eye(k, dtype=bool)
    maximal = tuple(i for i in range(k) if not proper_above[i].any())
    return CommLattice(ring, subs, inclusion, maximal)


def enumerate_commutative_subrings(
    ring: RingTable, *, budget: Budget | None = None
) -> CommLattice:
    """Complete list of unital commutative subrings of the ring.

    Raises BudgetExhaustedError if the search cannot finish; a partial
    lattice is never returned.
    """
    budget = budget or Budget()
    budget.sub("subring enumeration")
    commutes = np.asarray(ring.mul) == np.asarray(ring.mul).T

    seen: set[int] = set()
    frontier: list[int] = []

    def visit(mask: int) -> None:
        if mask not in seen:
            seen.add(mask)
            frontier.append(mask)

    budget.spend()
    visit(closure(ring, []).members)
    for a in range(ring.size):
        budget.spend()
        sub = closure(ring, [a])
        if sub.is_commutative:
            visit(sub.members)

    while frontier:
        mask = frontier.pop()
        elems = mask_indices(mask)
        arr = np.array(elems)
        # outside elements commuting with everything in the subring
        commuting = np.nonzero(commutes[:, arr].all(axis=1))[0]
        for x in commuting:
            x = int(x)
            if (mask >> x) & 1:
                continue
            budget.spend()
            extended = closure(ring, elems + [x])
            # x centralizes a commutative subring, so the closure stays
            # commutative; checked anyway since closure computes the flag
            if extended.is_commutative:
                visit(extended.members)

    return _build_lattice(ring, list(seen))


def maximal_subrings(lat: CommLattice) -> list[Subring]:
    """The maximal commutative subrings; each equals its own centralizer."""
    out = []
    for i in lat.maximal:
        sub = lat.subrings[i]
        cent = centralizer(lat.ring, sub.subset)
        if cent.members != sub.members:
            raise AssertionError(
                f"maximal subring {i} is not self-centralizing; lattice incomplete?"
            )
        out.append(sub)
    return out


def is_cofinal(lat: CommLattice, subset: list[int]) -> bool:
    """True iff every subring in the lattice sits inside some listed one."""
    chosen = list(subset)
    for i in range(len(lat.subrings)):
        if not any(lat.inclusion[i, j] for j in chosen):
            return False
    return True


# --------------------------------------------------------------------------
# disk cache: versioned binary header + bitset list


def _cache_path(cache_dir: str | Path, fingerprint: str) -> Path:
    return Path(cache_dir) / f"{fingerprint}.lat"


def cache_store(lat: CommLattice, cache_dir: str | Path) -> Path:
    """Persist a lattice; the file is keyed by the ring's fingerprint."""
    fingerprint = lat.ring.fingerprint()
    path = _cache_path(cache_dir, fingerprint)
    path.parent.mkdir(parents=True, exist_ok=True)
    nbytes = (lat.ring.size + 7) // 8
    buf = io.BytesIO()
    buf.write(CACHE_MAGIC)
    buf.write(struct.pack("<I", CACHE_VERSION))
    buf.write(bytes.fromhex(fingerprint))
    buf.write(struct.pack("<II", lat.ring.size, len(lat.subrings)))
    for sub in lat.subrings:
        buf.write(sub.members.to_bytes(nbytes, "little"))
    path.write_bytes(buf.getvalue())
    return path


def cache_load(ring: RingTable, cache_dir: str | Path) -> CommLattice:
    """Load the lattice for a ring, verifying fingerprint and invariants."""
    fingerprint = ring.fingerprint()
    path = _cache_path(cache_dir, fingerprint)
    if not path.exists():
        raise CacheMissError(f"no cached lattice for {ring.label} at {path}")
    raw = path.read_bytes()
    try:
        if raw[:4] != CACHE_MAGIC:
            raise CacheCorruptError(f"bad magic in {path}")
        (version,) = struct.unpack_from("<I", raw, 4)
        if version != CACHE_VERSION:
            raise CacheCorruptError(f"unsupported cache version {version}")
        stored_fp = raw[8:40].hex()
        if stored_fp != fingerprint:
            raise CacheCorruptError(
                f"fingerprint mismatch: file {stored_fp[:12]}..., ring {fingerprint[:12]}..."
            )
        size, count = struct.unpack_from("<II", raw, 40)
        if size != ring.size:
            raise CacheCorruptError(f"cached ring size {size} != {ring.size}")
        nbytes = (size + 7) // 8
        offset = 48
        masks = []
        for _ in range(count):
            chunk = raw[offset : offset + nbytes]
            if len(chunk) != nbytes:
                raise CacheCorruptError(f"truncated cache file {path}")
            masks.append(int.from_bytes(chunk, "little"))
            offset += nbytes
    except struct.error as exc:
        raise CacheCorruptError(f"malformed cache file {path}: {exc}") from exc

    # re-verify: every stored bitset must be a commutative unital subring
    for mask in masks:
        sub = closure(ring, mask_indices(mask))
        if sub.members != mask or not sub.is_commutative:
            raise CacheCorruptError(f"cached subring {mask:#x} fails invariants")
    return _build_lattice(ring, masks)


__all__ = [
    "CommLattice",
    "CacheMissError",
    "CacheCorruptError",
    "enumerate_commutative_subrings",
    "maximal_subrings",
    "is_cofinal",
    "cache_store",
    "cache_load",
]
