"""Finite unital rings as exact operation tables, and their basic algebra.

Elements of a ring are the indices 0..size-1; addition, multiplication and
negation are dense lookup tables.  Everything downstream is exhaustive
search over these tables, so O(1) operation lookup is the representation
that matters.  Tables are immutable after construction and every
constructor validates the ring axioms (exhaustively up to 512 elements,
sampled above that).
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SIZE_CAP_DEFAULT = 4096

# Fixed irreducible moduli (little-endian coefficients, monic) so that
# GF(p^k) tables are reproducible run to run.  Any irreducible would do.
GF_MODULUS_CATALOG: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),        # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),     # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (3, 2): (1, 0, 1),        # x^2 + 1
    (3, 3): (1, 2, 0, 1),     # x^3 + 2x + 1
    (5, 2): (2, 1, 1),        # x^2 + x + 2
}


class RingError(Exception):
    """Base class for ring construction and validation failures."""


class CapExceededError(RingError):
    """Requested ring would exceed the element-count cap."""


class AxiomError(RingError):
    """A ring axiom failed; carries the axiom name and a witness tuple."""

    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"ring axiom '{axiom}' fails at {witness}")


# --------------------------------------------------------------------------
# construction provenance, kept so elements can be decoded back to matrices,
# pairs, residues etc.  Not part of the ring's fingerprint.


@dataclass(frozen=True)
class ZmodOrigin:
    m: int


@dataclass(frozen=True)
class GFOrigin:
    p: int
    k: int
    modulus: tuple[int, ...]


@dataclass(frozen=True)
class MatrixOrigin:
    base: "RingTable"
    n: int


@dataclass(frozen=True)
class TriangularOrigin:
    base: "RingTable"
    n: int
    positions: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ProductOrigin:
    a: "RingTable"
    b: "RingTable"


@dataclass(frozen=True)
class SubringOrigin:
    parent: "RingTable"
    elements: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class RingTable:
    """A finite unital ring given by dense index tables."""

    size: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    zero: int
    one: int
    label: str
    origin: object | None = None

    def __post_init__(self):
        for name in ("add", "mul", "neg"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __repr__(self) -> str:
        return f"RingTable({self.label!r}, size={self.size})"

    def fingerprint(self) -> str:
        """Content hash of (size, add table, mul table)."""
        h = hashlib.sha256()
        h.update(int(self.size).to_bytes(8, "little"))
        h.update(np.ascontiguousarray(self.add, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.mul, dtype=np.int64).tobytes())
        return h.hexdigest()

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def elements(self) -> range:
        return range(self.size)


def characteristic(ring: RingTable) -> int:
    """Additive order of 1."""
    x = ring.one
    c = 1
    while x != ring.zero:
        x = int(ring.add[x, ring.one])
        c += 1
    return c


def scalar_multiple(ring: RingTable, n: int, a: int) -> int:
    """n-fold sum a + ... + a for an integer scalar n >= 0."""
    acc = ring.zero
    for _ in range(n):
        acc = int(ring.add[acc, a])
    return acc


# --------------------------------------------------------------------------
# axiom validation


def check_ring_axioms(ring: RingTable, *, sample: int | None = None, seed: int = 0) -> None:
    """Raise AxiomError with a witness if any ring axiom fails.

    All single- and two-index axioms are always checked exhaustively.
    Triple axioms (associativity, distributivity) are exhaustive when
    sample is None, otherwise checked on `sample` random triples.
    """
    n = ring.size
    add, mul, neg = ring.add, ring.mul, ring.neg
    if add.shape != (n, n) or mul.shape != (n, n) or neg.shape != (n,):
        raise AxiomError("table-shape", (add.shape, mul.shape, neg.shape))
    for table in (add, mul):
        if table.min() < 0 or table.max() >= n:
            raise AxiomError("index-range", (int(table.min()), int(table.max())))
    if not (0 <= ring.zero < n and 0 <= ring.one < n):
        raise AxiomError("identity-index", (ring.zero, ring.one))
    if n > 1 and ring.zero == ring.one:
        raise AxiomError("zero-ne-one", (ring.zero,))

    idx = np.arange(n)
    if not np.array_equal(add[ring.zero], idx):
        a = int(np.nonzero(add[ring.zero] != idx)[0][0])
        raise AxiomError("additive-identity", (a,))
    if not np.array_equal(add, add.T):
        i, j = np.argwhere(add != add.T)[0]
        raise AxiomError("additive-commutativity", (int(i), int(j)))
    if not np.array_equal(add[idx, neg], np.full(n, ring.zero)):
        a = int(np.nonzero(add[idx, neg] != ring.zero)[0][0])
        raise AxiomError("additive-inverse", (a,))
    if not np.array_equal(mul[ring.one], idx) or not np.array_equal(mul[:, ring.one], idx):
        raise AxiomError("multiplicative-identity", (ring.one,))

    if sample is None:
        for a in range(n):
            lhs = add[add[a], :]
            rhs = add[a][add]
            if not np.array_equal(lhs, rhs):
                b, c = np.argwhere(lhs != rhs)[0]
                raise AxiomError("additive-associativity", (a, int(b), int(c)))
            lhs = mul[mul[a], :]
            rhs = mul[a][mul]
            if not np.array_equal(lhs, rhs):
                b, c = np.argwhere(lhs != rhs)[0]
                raise AxiomError("multiplicative-associativity", (a, int(b), int(c)))
            # a*(b+c) == a*b + a*c  and  (b+c)*a == b*a + c*a
            lhs = mul[a][add]
            rhs = add[mul[a][:, None], mul[a][None, :]]
            if not np.array_equal(lhs, rhs):
                b, c = np.argwhere(lhs != rhs)[0]
                raise AxiomError("left-distributivity", (a, int(b), int(c)))
            lhs = mul[:, a][add]
            rhs = add[mul[:, a][:, None], mul[:, a][None, :]]
            if not np.array_equal(lhs, rhs):
                b, c = np.argwhere(lhs != rhs)[0]
                raise AxiomError("right-distributivity", (a, int(b), int(c)))
    else:
        rng = np.random.default_rng(seed)
        triples = rng.integers(0, n, size=(sample, 3))
        a, b, c = triples[:, 0], triples[:, 1], triples[:, 2]
        checks = [
            ("additive-associativity", add[add[a, b], c], add[a, add[b, c]]),
            ("multiplicative-associativity", mul[mul[a, b], c], mul[a, mul[b, c]]),
            ("left-distributivity", mul[a, add[b, c]], add[mul[a, b], mul[a, c]]),
            ("right-distributivity", mul[add[b, c], a], add[mul[b, a], mul[c, a]]),
        ]
        for name, lhs, rhs in checks:
            bad = np.nonzero(lhs != rhs)[0]
            if bad.size:
                i = int(bad[0])
                raise AxiomError(name, (int(a[i]), int(b[i]), int(c[i])))


_EXHAUSTIVE_LIMIT = 512


def _validated(ring: RingTable) -> RingTable:
    if ring.size <= _EXHAUSTIVE_LIMIT:
        check_ring_axioms(ring)
    else:
        check_ring_axioms(ring, sample=200_000)
    return ring


# --------------------------------------------------------------------------
# constructors


def make_zmod(m: int, *, cap: int = SIZE_CAP_DEFAULT) -> RingTable:
    """The ring Z/m with canonical residue indexing."""
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    if m > cap:
        raise CapExceededError(f"Z/{m} exceeds cap {cap}")
    idx = np.arange(m)
    add = (idx[:, None] + idx[None, :]) % m
    mul = (idx[:, None] * idx[None, :]) % m
    neg = (-idx) % m
    ring = RingTable(m, add, mul, neg, 0, 1 % m, f"Z/{m}", ZmodOrigin(m))
    return _validated(ring)


def _poly_mul_mod(u: Sequence[int], v: Sequence[int], modulus: Sequence[int], p: int) -> tuple[int, ...]:
    k = len(modulus) - 1
    prod = [0] * (len(u) + len(v) - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                prod[i + j] = (prod[i + j] + ui * vj) % p
    # reduce by the monic modulus
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for j in range(k):
                prod[d - k + j] = (prod[d - k + j] - c * modulus[j]) % p
    return tuple(prod[:k]) + (0,) * (k - len(prod[:k]))


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Brute scan: no monic factor of degree 1..deg/2 divides the modulus."""
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for coeffs in itertools.product(range(p), repeat=d):
            factor = list(coeffs) + [1]
            # long division remainder of modulus by factor
            rem = list(modulus)
            for top in range(len(rem) - 1, d - 1, -1):
                c = rem[top]
                if c:
                    rem[top] = 0
                    for j in range(d):
                        rem[top - d + j] = (rem[top - d + j] - c * factor[j]) % p
            if not any(rem):
                return False
    return True


def make_gf(p: int, k: int, *, cap: int = SIZE_CAP_DEFAULT) -> RingTable:
    """The field GF(p^k) using the bundled modulus catalog."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree must be positive, got {k}")
    size = p**k
    if size > cap:
        raise CapExceededError(f"GF({size}) exceeds cap {cap}")
    if k == 1:
        idx = np.arange(p)
        add = (idx[:, None] + idx[None, :]) % p
        mul = (idx[:, None] * idx[None, :]) % p
        neg = (-idx) % p
        ring = RingTable(p, add, mul, neg, 0, 1 % p, f"GF({p})", GFOrigin(p, 1, (0, 1)))
        return _validated(ring)
    modulus = GF_MODULUS_CATALOG.get((p, k))
    if modulus is None:
        raise ValueError(f"GF({p}^{k}) is not in the bundled modulus catalog")
    if not _poly_is_irreducible(modulus, p):
        raise AxiomError("modulus-irreducible", (p, k, modulus))

    # element index = little-endian base-p digits of its coefficient vector
    digits = [tuple((i // p**j) % p for j in range(k)) for i in range(size)]

    def encode(coeffs: Sequence[int]) -> int:
        return sum(c * p**j for j, c in enumerate(coeffs))

    add = np.empty((size, size), dtype=np.int32)
    mul = np.empty((size, size), dtype=np.int32)
    neg = np.empty(size, dtype=np.int32)
    for i in range(size):
        neg[i] = encode([(-c) % p for c in digits[i]])
        for j in range(size):
            add[i, j] = encode([(x + y) % p for x, y in zip(digits[i], digits[j])])
            mul[i, j] = encode(_poly_mul_mod(digits[i], digits[j], modulus, p))
    ring = RingTable(size, add, mul, neg, 0, 1, f"GF({size})", GFOrigin(p, k, tuple(modulus)))
    ring = _validated(ring)
    # field check: every nonzero element has an inverse
    units = classify_elements(ring).units
    if len(units) != size - 1:
        raise AxiomError("field-units", (size, len(units)))
    return ring


def _digit_rows(size: int, npos: int, radix: int) -> np.ndarray:
    """All length-npos digit tuples in big-endian order (index 0 slowest)."""
    rows = np.array(list(itertools.product(range(radix), repeat=npos)), dtype=np.int64)
    return rows.reshape(size, npos)


def _encode_digits(rows: np.ndarray, radix: int) -> np.ndarray:
    npos = rows.shape[-1]
    powers = radix ** np.arange(npos - 1, -1, -1, dtype=np.int64)
    return rows @ powers


def make_matrix_ring(base: RingTable, n: int, *, cap: int = SIZE_CAP_DEFAULT) -> RingTable:
    """The full matrix ring M_n(base) with row-major entry indexing."""
    if n < 1:
        raise ValueError(f"matrix dimension must be positive, got {n}")
    size = base.size ** (n * n)
    if size > cap:
        raise CapExceededError(f"M_{n}({base.label}) has {size} elements, cap {cap}")
    S = base.size
    D = _digit_rows(size, n * n, S)
    E = D.reshape(size, n, n)

    add = _encode_digits(base.add[D[:, None, :], D[None, :, :]], S)
    neg = _encode_digits(np.asarray(base.neg)[D], S)
    prod_digits = np.empty((size, size, n * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            acc = np.full((size, size), base.zero, dtype=np.int64)
            for k in range(n):
                term = base.mul[E[:, None, i, k], E[None, :, k, j]]
                acc = base.add[acc, term]
            prod_digits[:, :, i * n + j] = acc
    mul = _encode_digits(prod_digits, S)

    ident = np.zeros((n, n), dtype=np.int64)
    ident[:] = base.zero
    for i in range(n):
        ident[i, i] = base.one
    zero_idx = int(_encode_digits(np.full(n * n, base.zero, dtype=np.int64), S))
    one_idx = int(_encode_digits(ident.reshape(-1), S))
    ring = RingTable(
        size, add, mul, neg, zero_idx, one_idx,
        f"M{n}({base.label})", MatrixOrigin(base, n),
    )
    return _validated(ring)


def make_product(a: RingTable, b: RingTable, *, cap: int = SIZE_CAP_DEFAULT) -> RingTable:
    """The direct product ring with componentwise operations."""
    size = a.size * b.size
    if size > cap:
        raise CapExceededError(f"{a.label} x {b.label} has {size} elements, cap {cap}")
    idx = np.arange(size)
    ia, ib = idx // b.size, idx % b.size
    add = a.add[ia[:, None], ia[None, :]] * b.size + b.add[ib[:, None], ib[None, :]]
    mul = a.mul[ia[:, None], ia[None, :]] * b.size + b.mul[ib[:, None], ib[None, :]]
    neg = np.asarray(a.neg)[ia] * b.size + np.asarray(b.neg)[ib]
    ring = RingTable(
        size, add, mul, neg,
        a.zero * b.size + b.zero, a.one * b.size + b.one,
        f"{a.label}x{b.label}", ProductOrigin(a, b),
    )
    return _validated(ring)


def make_triangular_ring(base: RingTable, n: int, *, cap: int = SIZE_CAP_DEFAULT) -> RingTable:
    """Upper-triangular n-by-n matrices over a commutative base ring."""
    if not base.is_commutative():
        raise ValueError(f"triangular base must be commutative, got {base.label}")
    if n < 1:
        raise ValueError(f"matrix dimension must be positive, got {n}")
    positions = tuple((i, j) for i in range(n) for j in range(i, n))
    npos = len(positions)
    size = base.size**npos
    if size > cap:
        raise CapExceededError(f"T_{n}({base.label}) has {size} elements, cap {cap}")
    S = base.size
    D = _digit_rows(size, npos, S)
    pos_index = {pos: t for t, pos in enumerate(positions)}

    add = _encode_digits(base.add[D[:, None, :], D[None, :, :]], S)
    neg = _encode_digits(np.asarray(base.neg)[D], S)
    prod_digits = np.empty((size, size, npos), dtype=np.int64)
    for (i, j) in positions:
        acc = np.full((size, size), base.zero, dtype=np.int64)
        for k in range(i, j + 1):
            term = base.mul[
                D[:, None, pos_index[(i, k)]], D[None, :, pos_index[(k, j)]]
            ]
            acc = base.add[acc, term]
        prod_digits[:, :, pos_index[(i, j)]] = acc
    mul = _encode_digits(prod_digits, S)

    zero_digits = np.full(npos, base.zero, dtype=np.int64)
    one_digits = zero_digits.copy()
    for i in range(n):
        one_digits[pos_index[(i, i)]] = base.one
    ring = RingTable(
        size, add, mul, neg,
        int(_encode_digits(zero_digits, S)), int(_encode_digits(one_digits, S)),
        f"T{n}({base.label})", TriangularOrigin(base, n, positions),
    )
    return _validated(ring)


# --------------------------------------------------------------------------
# element decoding for matrix / triangular / product rings


def matrix_entries(ring: RingTable, index: int) -> np.ndarray:
    """Decode an element of a matrix or triangular ring to an n-by-n array
    of base-ring indices."""
    origin = ring.origin
    if isinstance(origin, MatrixOrigin):
        n, S = origin.n, origin.base.size
        out = np.empty((n, n), dtype=np.int64)
        rem = index
        for pos in range(n * n - 1, -1, -1):
            out[pos // n, pos % n] = rem % S
            rem //= S
        return out
    if isinstance(origin, TriangularOrigin):
        n, S = origin.n, origin.base.size
        out = np.full((n, n), origin.base.zero, dtype=np.int64)
        rem = index
        for t in range(len(origin.positions) - 1, -1, -1):
            i, j = origin.positions[t]
            out[i, j] = rem % S
            rem //= S
        return out
    raise TypeError(f"{ring.label} is not a matrix-shaped ring")


def matrix_index(ring: RingTable, entries) -> int:
    """Encode an n-by-n array of base-ring indices to an element index."""
    origin = ring.origin
    arr = np.asarray(entries, dtype=np.int64)
    if isinstance(origin, MatrixOrigin):
        n, S = origin.n, origin.base.size
        index = 0
        for pos in range(n * n):
            index = index * S + int(arr[pos // n, pos % n])
        return index
    if isinstance(origin, TriangularOrigin):
        n, S = origin.n, origin.base.size
        for i in range(n):
            for j in range(i):
                if arr[i, j] != origin.base.zero:
                    raise ValueError("entry below the diagonal is nonzero")
        index = 0
        for (i, j) in origin.positions:
            index = index * S + int(arr[i, j])
        return index
    raise TypeError(f"{ring.label} is not a matrix-shaped ring")


def product_pair(ring: RingTable, index: int) -> tuple[int, int]:
    origin = ring.origin
    if not isinstance(origin, ProductOrigin):
        raise TypeError(f"{ring.label} is not a product ring")
    return index // origin.b.size, index % origin.b.size


def product_index(ring: RingTable, ia: int, ib: int) -> int:
    origin = ring.origin
    if not isinstance(origin, ProductOrigin):
        raise TypeError(f"{ring.label} is not a product ring")
    return ia * origin.b.size + ib


# --------------------------------------------------------------------------
# subsets and subrings


def _mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


def mask_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True, eq=False)
class ElementSubset:
    """A subset of a ring's elements stored as a bitmask over indices."""

    ring: RingTable
    members: int

    def __post_init__(self):
        if self.members < 0 or self.members >> self.ring.size:
            raise ValueError("subset members out of range")

    @classmethod
    def from_indices(cls, ring: RingTable, indices: Iterable[int]) -> "ElementSubset":
        return cls(ring, _mask_from_indices(indices))

    def indices(self) -> list[int]:
        return mask_indices(self.members)

    def __contains__(self, i: int) -> bool:
        return bool((self.members >> int(i)) & 1)

    def __len__(self) -> int:
        return bin(self.members).count("1")


@dataclass(frozen=True, eq=False)
class Subring:
    """A unital subring, with its commutativity established exhaustively."""

    subset: ElementSubset
    is_commutative: bool

    @property
    def ring(self) -> RingTable:
        return self.subset.ring

    @property
    def members(self) -> int:
        return self.subset.members

    def indices(self) -> list[int]:
        return self.subset.indices()

    def __len__(self) -> int:
        return len(self.subset)

    def __repr__(self) -> str:
        return f"Subring(size={len(self)}, of={self.ring.label})"


def _pairwise_commutative(ring: RingTable, elems: Sequence[int]) -> bool:
    sub = ring.mul[np.ix_(elems, elems)]
    return bool(np.array_equal(sub, sub.T))


def closure(ring: RingTable, gens: Iterable[int] | ElementSubset) -> Subring:
    """Smallest unital subring containing the generators.

    Always contains zero and one, and is closed under add, neg and mul;
    commutativity of the result is checked exhaustively, never assumed.
    """
    if isinstance(gens, ElementSubset):
        mask = gens.members
    else:
        mask = _mask_from_indices(gens)
    mask |= (1 << ring.zero) | (1 << ring.one)
    while True:
        elems = mask_indices(mask)
        arr = np.array(elems)
        produced = set(np.asarray(ring.neg)[arr].tolist())
        produced.update(ring.add[np.ix_(arr, arr)].ravel().tolist())
        produced.update(ring.mul[np.ix_(arr, arr)].ravel().tolist())
        new_mask = mask | _mask_from_indices(produced)
        if new_mask == mask:
            break
        mask = new_mask
    elems = mask_indices(mask)
    return Subring(ElementSubset(ring, mask), _pairwise_commutative(ring, elems))


def centralizer(ring: RingTable, s: Iterable[int] | ElementSubset) -> Subring:
    """All elements commuting with every element of s; a unital subring."""
    if isinstance(s, ElementSubset):
        elems = s.indices()
    else:
        elems = sorted(set(int(i) for i in s))
    if not elems:
        members = list(range(ring.size))
    else:
        cols = ring.mul[:, elems]
        rows = ring.mul[elems, :].T
        members = np.nonzero((cols == rows).all(axis=1))[0].tolist()
    mask = _mask_from_indices(members)
    return Subring(ElementSubset(ring, mask), _pairwise_commutative(ring, members))


def subring_table(sub: Subring, *, label: str | None = None) -> tuple[RingTable, "RingMap"]:
    """Realize a subring as a standalone RingTable plus its inclusion map."""
    parent = sub.ring
    elems = sub.indices()
    lookup = {e: i for i, e in enumerate(elems)}
    if parent.zero not in lookup or parent.one not in lookup:
        raise ValueError("subring must contain zero and one")
    arr = np.array(elems)
    try:
        add = np.vectorize(lookup.__getitem__)(parent.add[np.ix_(arr, arr)])
        mul = np.vectorize(lookup.__getitem__)(parent.mul[np.ix_(arr, arr)])
        neg = np.vectorize(lookup.__getitem__)(np.asarray(parent.neg)[arr])
    except KeyError as exc:
        raise ValueError(f"subset is not closed: element {exc} escapes") from exc
    ring = RingTable(
        len(elems), add.astype(np.int64), mul.astype(np.int64), neg.astype(np.int64),
        lookup[parent.zero], lookup[parent.one],
        label or f"{parent.label}|sub{len(elems)}",
        SubringOrigin(parent, tuple(elems)),
    )
    ring = _validated(ring)
    incl = RingMap(ring, parent, arr.astype(np.int64))
    return ring, incl


# --------------------------------------------------------------------------
# maps between rings


@dataclass(frozen=True, eq=False)
class RingMap:
    """A function between rings given by a table of codomain indices."""

    domain: RingTable
    codomain: RingTable
    table: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.table, dtype=np.int64)
        if len(arr) != self.domain.size:
            raise ValueError("map table length does not match domain size")
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    def __call__(self, i: int) -> int:
        return int(self.table[i])

    def __repr__(self) -> str:
        return f"RingMap({self.domain.label} -> {self.codomain.label})"


def identity_map(ring: RingTable) -> RingMap:
    return RingMap(ring, ring, np.arange(ring.size, dtype=np.int64))


def compose_maps(g: RingMap, f: RingMap) -> RingMap:
    """g after f."""
    if g.domain is not f.codomain and g.domain.fingerprint() != f.codomain.fingerprint():
        raise ValueError("maps are not composable")
    return RingMap(f.domain, g.codomain, np.asarray(g.table)[np.asarray(f.table)])


def is_ring_hom(f: RingMap) -> bool:
    """True iff f preserves add, mul, zero and one on all pairs."""
    t = np.asarray(f.table)
    dom, cod = f.domain, f.codomain
    if t[dom.zero] != cod.zero or t[dom.one] != cod.one:
        return False
    if not np.array_equal(t[dom.add], cod.add[t[:, None], t[None, :]]):
        return False
    if not np.array_equal(t[dom.mul], cod.mul[t[:, None], t[None, :]]):
        return False
    return True


def matrix_map(f: RingMap, n: int, *, cap: int = SIZE_CAP_DEFAULT) -> RingMap:
    """Entrywise application of a ring hom, M_n(domain) -> M_n(codomain)."""
    if not is_ring_hom(f):
        raise ValueError("matrix_map requires a verified ring homomorphism")
    dom_mat = make_matrix_ring(f.domain, n, cap=cap)
    cod_mat = make_matrix_ring(f.codomain, n, cap=cap)
    S = f.domain.size
    D = _digit_rows(dom_mat.size, n * n, S)
    table = _encode_digits(np.asarray(f.table)[D], f.codomain.size)
    return RingMap(dom_mat, cod_mat, table.astype(np.int64))


# --------------------------------------------------------------------------
# element classification


@dataclass(frozen=True)
class ElementClassification:
    idempotents: tuple[int, ...]
    nilpotents: tuple[int, ...]
    units: tuple[int, ...]


def classify_elements(ring: RingTable) -> ElementClassification:
    """Exhaustive scan for idempotents, nilpotents and (two-sided) units."""
    idx = np.arange(ring.size)
    idem = np.nonzero(ring.mul[idx, idx] == idx)[0]
    # repeated squaring until the exponent is >= size kills every nilpotent
    y = idx.copy()
    e = 1
    while e < ring.size:
        y = ring.mul[y, y]
        e *= 2
    nil = np.nonzero(y == ring.zero)[0]
    left = ring.mul == ring.one
    units = np.nonzero((left & left.T).any(axis=1))[0]
    return ElementClassification(
        tuple(int(i) for i in idem),
        tuple(int(i) for i in nil),
        tuple(int(i) for i in units),
    )


__all__ = [
    "SIZE_CAP_DEFAULT",
    "GF_MODULUS_CATALOG",
    "RingError",
    "CapExceededError",
    "AxiomError",
    "RingTable",
    "ElementSubset",
    "Subring",
    "RingMap",
    "ElementClassification",
    "ZmodOrigin",
    "GFOrigin",
    "MatrixOrigin",
    "TriangularOrigin",
    "ProductOrigin",
    "SubringOrigin",
    "characteristic",
    "scalar_multiple",
    "check_ring_axioms",
    "make_zmod",
    "make_gf",
    "make_matrix_ring",
    "make_product",
    "make_triangular_ring",
    "matrix_entries",
    "matrix_index",
    "product_pair",
    "product_index",
    "mask_indices",
    "closure",
    "centralizer",
    "subring_table",
    "identity_map",
    "compose_maps",
    "is_ring_hom",
    "matrix_map",
    "classify_elements",
]
