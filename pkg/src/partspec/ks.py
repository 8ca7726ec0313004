"""Exact Kochen-Specker machinery over the ring Z[sqrt(2)].

Rays are projective directions with coordinates a + b*sqrt(2); the Peres
33-ray family needs exactly the entries {0, +-1, +-sqrt(2)}, so exact
integer-pair arithmetic settles every orthogonality question with no
tolerances.  A coloring gives each ray 0 or 1 such that every complete
orthogonal basis contains exactly one 1 and no two orthogonal rays are
both 1 -- the combinatorial shadow of an algebra morphism sending
projections to idempotent scalars.  The solver is an exhaustive
backtracking search with unit propagation, so an UNSAT answer is a proof.
"""

from __future__ import annotations

import itertools
import random
import time
import warnings
from dataclasses import dataclass
from math import gcd
from pathlib import Path

from .budget import Budget


@dataclass(frozen=True)
class QuadInt:
    """An element a + b*sqrt(2) of Z[sqrt(2)], with exact arithmetic."""

    a: int
    b: int

    def __add__(self, other: "QuadInt") -> "QuadInt":
        return QuadInt(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        return QuadInt(self.a - other.a, self.b - other.b)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        return QuadInt(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.a, -self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __repr__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}√2"
        return f"{self.a}{self.b:+d}√2"


ZERO = QuadInt(0, 0)
ONE = QuadInt(1, 0)
SQRT2 = QuadInt(0, 1)


@dataclass(frozen=True)
class Ray:
    """A canonical nonzero direction in d-space over Z[sqrt(2)].

    Canonical means: no common integer factor, no common sqrt(2) factor,
    and the first nonzero coordinate has a > 0 (or a == 0 and b > 0).
    """

    coords: tuple[QuadInt, ...]

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def __repr__(self) -> str:
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"


class RayFormatError(ValueError):
    """A ray file failed to parse; carries the offending line number."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


def canonicalize(coords) -> Ray:
    """Canonical representative of a ray: idempotent, scale- and
    sign-invariant under the integer and sqrt(2) scalings."""
    vec = tuple(c if isinstance(c, QuadInt) else QuadInt(*c) for c in coords)
    if all(c.is_zero() for c in vec):
        raise ValueError("the zero vector is not a ray")
    g = 0
    for c in vec:
        g = gcd(g, abs(c.a))
        g = gcd(g, abs(c.b))
    if g > 1:
        vec = tuple(QuadInt(c.a // g, c.b // g) for c in vec)
    # sqrt(2) divides a + b*sqrt(2) exactly when a is even
    if all(c.a % 2 == 0 for c in vec):
        vec = tuple(QuadInt(c.b, c.a // 2) for c in vec)
    for c in vec:
        if not c.is_zero():
            if c.a < 0 or (c.a == 0 and c.b < 0):
                vec = tuple(-x for x in vec)
            break
    return Ray(vec)


def dot(r1: Ray, r2: Ray) -> QuadInt:
    """Exact inner product; zero iff the rays are orthogonal."""
    if r1.dimension != r2.dimension:
        raise ValueError(f"dimension mismatch: {r1.dimension} vs {r2.dimension}")
    acc = ZERO
    for x, y in zip(r1.coords, r2.coords):
        acc = acc + x * y
    return acc


def _determinant(rows: list[tuple[QuadInt, ...]]) -> QuadInt:
    if len(rows) == 1:
        return rows[0][0]
    acc = ZERO
    for j in range(len(rows)):
        minor = [tuple(r[t] for t in range(len(rows)) if t != j) for r in rows[1:]]
        term = rows[0][j] * _determinant(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


@dataclass(frozen=True, eq=False)
class RaySystem:
    """A deduplicated canonical ray family with all its complete bases."""

    dimension: int
    rays: tuple[Ray, ...]
    bases: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.rays)


def extract_bases(rays: list[Ray], d: int) -> list[tuple[int, ...]]:
    """All d-subsets of the rays that are pairwise orthogonal and span.

    Spanning is certified by a nonzero exact determinant; over a real
    quadratic ring pairwise orthogonality already forces independence,
    so the determinant check is a consistency assertion, not a filter.
    """
    n = len(rays)
    adjacency = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if dot(rays[i], rays[j]).is_zero():
                adjacency[i] |= 1 << j
                adjacency[j] |= 1 << i

    bases: list[tuple[int, ...]] = []

    def grow(chain: list[int], candidates: int) -> None:
        if len(chain) == d:
            det = _determinant([rays[i].coords for i in chain])
            if det.is_zero():
                raise AssertionError(f"orthogonal set {chain} fails the span check")
            bases.append(tuple(chain))
            return
        c = candidates
        while c:
            low = c & -c
            j = low.bit_length() - 1
            c ^= low
            grow(chain + [j], candidates & adjacency[j] & ~((1 << (j + 1)) - 1))

    for i in range(n):
        grow([i], adjacency[i] & ~((1 << (i + 1)) - 1))
    return sorted(bases)


def make_ray_system(coords_list, dimension: int | None = None) -> RaySystem:
    """Canonicalize, deduplicate and extract every complete basis."""
    rays = sorted(
        {canonicalize(c) if not isinstance(c, Ray) else canonicalize(c.coords)
         for c in coords_list},
        key=lambda r: tuple((c.a, c.b) for c in r.coords),
    )
    if not rays:
        if dimension is None:
            raise ValueError("empty ray system needs an explicit dimension")
        return RaySystem(dimension, (), ())
    d = rays[0].dimension
    if any(r.dimension != d for r in rays):
        raise ValueError("rays of mixed dimension")
    if dimension is not None and dimension != d:
        raise ValueError(f"expected dimension {dimension}, rays have {d}")
    return RaySystem(d, tuple(rays), tuple(extract_bases(list(rays), d)))


# --------------------------------------------------------------------------
# the Peres 33-ray family


PERES_SQUARE_CLASSES = ((0, 0, 1), (0, 1, 1), (0, 1, 2), (1, 1, 2))

_PERES_ENTRIES = (ZERO, ONE, -ONE, SQRT2, -SQRT2)


def generate_peres() -> RaySystem:
    """The 33 rays in dimension 3 whose squared-coordinate multisets are
    {1,0,0}, {1,1,0}, {0,1,2} or {1,1,2}, with all complete bases."""
    wanted = set(PERES_SQUARE_CLASSES)
    coords = []
    for v in itertools.product(_PERES_ENTRIES, repeat=3):
        if all(c.is_zero() for c in v):
            continue
        squares = tuple(sorted(c.a * c.a + 2 * c.b * c.b for c in v))
        if squares in wanted:
            coords.append(v)
    return make_ray_system(coords)


def square_class(ray: Ray) -> tuple[int, ...]:
    """Sorted multiset of squared coordinate lengths (integers here)."""
    squares = []
    for c in ray.coords:
        n = c * c
        if n.b != 0:
            raise ValueError(f"coordinate {c} has irrational square")
        squares.append(n.a)
    return tuple(sorted(squares))


# --------------------------------------------------------------------------
# colorability


@dataclass(frozen=True)
class ColoringResult:
    """SAT with a verified witness, or UNSAT from an exhausted search."""

    status: str  # "SAT" | "UNSAT"
    coloring: tuple[int, ...] | None
    nodes: int
    backtracks: int
    seconds: float
    complete: bool

    @property
    def satisfiable(self) -> bool:
        return self.status == "SAT"


class IncompleteBasesError(ValueError):
    """The system's basis list is not the full set of complete bases."""


def verify_coloring(sys: RaySystem, coloring) -> bool:
    """Independent witness check: exactly one 1 per basis, and no two
    orthogonal rays both 1."""
    values = list(coloring)
    if len(values) != len(sys.rays) or any(v not in (0, 1) for v in values):
        return False
    for basis in sys.bases:
        if sum(values[i] for i in basis) != 1:
            return False
    ones = [i for i, v in enumerate(values) if v == 1]
    for i, j in itertools.combinations(ones, 2):
        if dot(sys.rays[i], sys.rays[j]).is_zero():
            return False
    return True


def require_complete_bases(sys: RaySystem) -> None:
    if tuple(extract_bases(list(sys.rays), sys.dimension)) != tuple(sorted(sys.bases)):
        raise IncompleteBasesError("basis list is not complete for the ray set")


def ks_colorable(
    sys: RaySystem,
    *,
    budget: Budget | None = None,
    rng: random.Random | None = None,
) -> ColoringResult:
    """Search for a {0,1}-coloring of the rays.

    Constraints: every complete basis gets exactly one 1, and no two
    orthogonal rays are both 1.  Unit propagation runs to fixpoint, then
    the search branches on the unassigned ray appearing in the most bases
    (or a random one when rng is given; the answer is order-independent),
    trying 1 before 0.  UNSAT is only reported after exhaustion.
    """
    require_complete_bases(sys)
    budget = budget or Budget()
    budget.sub("coloring search")
    t0 = time.monotonic()
    n = len(sys.rays)
    bases = [list(b) for b in sys.bases]
    ortho_pairs = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if dot(sys.rays[i], sys.rays[j]).is_zero()
    ]
    ortho_neighbors: list[list[int]] = [[] for _ in range(n)]
    for i, j in ortho_pairs:
        ortho_neighbors[i].append(j)
        ortho_neighbors[j].append(i)
    basis_count = [0] * n
    for b in bases:
        for i in b:
            basis_count[i] += 1

    assign = [-1] * n
    nodes = 0
    backtracks = 0

    def propagate() -> bool:
        changed = True
        while changed:
            changed = False
            for b in bases:
                vals = [assign[i] for i in b]
                ones = vals.count(1)
                unknown = vals.count(-1)
                if ones > 1 or (ones == 0 and unknown == 0):
                    return False
                if ones == 1 and unknown:
                    for i in b:
                        if assign[i] == -1:
                            assign[i] = 0
                            changed = True
                elif ones == 0 and unknown == 1:
                    for i in b:
                        if assign[i] == -1:
                            assign[i] = 1
                            changed = True
            for i in range(n):
                if assign[i] == 1:
                    for j in ortho_neighbors[i]:
                        if assign[j] == 1:
                            return False
                        if assign[j] == -1:
                            assign[j] = 0
                            changed = True
        return True

    def choose_branch() -> int:
        unassigned = [i for i in range(n) if assign[i] == -1]
        if rng is not None:
            return rng.choice(unassigned)
        return max(unassigned, key=lambda i: (basis_count[i], -i))

    def search() -> bool:
        nonlocal nodes, backtracks
        budget.spend()
        saved = assign[:]
        if not propagate():
            assign[:] = saved
            backtracks += 1
            return False
        if all(v != -1 for v in assign):
            return True
        var = choose_branch()
        for value in (1, 0):
            nodes += 1
            trail = assign[:]
            assign[var] = value
            if search():
                return True
            assign[:] = trail
        assign[:] = saved
        backtracks += 1
        return False

    if n == 0:
        return ColoringResult("SAT", (), 0, 0, time.monotonic() - t0, True)

    sat = search()
    elapsed = time.monotonic() - t0
    if sat:
        witness = tuple(assign)
        if not verify_coloring(sys, witness):
            raise AssertionError("solver returned a coloring that fails verification")
        return ColoringResult("SAT", witness, nodes, backtracks, elapsed, True)
    return ColoringResult("UNSAT", None, nodes, backtracks, elapsed, True)


# --------------------------------------------------------------------------
# dimension lift


def lift_to_dimension(sys: RaySystem, n: int) -> RaySystem:
    """Embed a 3-dimensional system into every contiguous 3-coordinate
    slice of n-space and adjoin the standard axes.

    The slices {i, i+1, i+2} for i = 1..n-2 overlap, so a coloring of the
    lift restricts to a coloring of the source inside whichever slice
    contains the axis colored 1 -- the corner-projection reduction.
    Bases are re-extracted over the lifted ray set, which in particular
    contains every embedded source basis completed by the axes outside
    its slice, plus the full standard basis.
    """
    if sys.dimension != 3:
        raise ValueError(f"lift source must be 3-dimensional, got {sys.dimension}")
    if n < 4:
        raise ValueError(f"lift target dimension must be at least 4, got {n}")
    coords = []
    for start in range(n - 2):
        for ray in sys.rays:
            padded = [ZERO] * n
            padded[start : start + 3] = list(ray.coords)
            coords.append(tuple(padded))
    for i in range(n):
        axis = [ZERO] * n
        axis[i] = ONE
        coords.append(tuple(axis))
    lifted = make_ray_system(coords)

    # the described bases must all be present among the extracted ones
    present = set(lifted.bases)
    index = {ray: i for i, ray in enumerate(lifted.rays)}
    axis_idx = []
    for i in range(n):
        axis = [ZERO] * n
        axis[i] = ONE
        axis_idx.append(index[canonicalize(axis)])
    if tuple(sorted(axis_idx)) not in present:
        raise AssertionError("standard basis missing from the lift")
    for start in range(n - 2):
        outside = [axis_idx[i] for i in range(n) if not start <= i < start + 3]
        for basis in sys.bases:
            embedded = []
            for r in basis:
                padded = [ZERO] * n
                padded[start : start + 3] = list(sys.rays[r].coords)
                embedded.append(index[canonicalize(padded)])
            if tuple(sorted(embedded + outside)) not in present:
                raise AssertionError("embedded source basis missing from the lift")
    return lifted


# --------------------------------------------------------------------------
# the text format: `dim d` header, one ray per line as 2d integers


def save_rays(sys: RaySystem, path: str | Path) -> None:
    lines = [f"dim {sys.dimension}"]
    for ray in sys.rays:
        parts = []
        for c in ray.coords:
            parts.append(str(c.a))
            parts.append(str(c.b))
        lines.append(" ".join(parts))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_rays(path: str | Path) -> RaySystem:
    """Parse a ray file; the result is canonicalized and re-verified.

    Duplicate rays (after canonicalization) are dropped with a warning.
    """
    text = Path(path).read_text(encoding="utf-8")
    dimension: int | None = None
    coords = []
    total = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if dimension is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "dim":
                raise RayFormatError("expected header 'dim d'", lineno)
            try:
                dimension = int(parts[1])
            except ValueError:
                raise RayFormatError(f"bad dimension {parts[1]!r}", lineno) from None
            if dimension < 1:
                raise RayFormatError(f"dimension must be positive, got {dimension}", lineno)
            continue
        parts = line.split()
        if len(parts) != 2 * dimension:
            raise RayFormatError(
                f"expected {2 * dimension} integers, got {len(parts)}", lineno
            )
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise RayFormatError(f"non-integer coordinate in {line!r}", lineno) from None
        vec = tuple(QuadInt(nums[2 * i], nums[2 * i + 1]) for i in range(dimension))
        if all(c.is_zero() for c in vec):
            raise RayFormatError("zero vector is not a ray", lineno)
        coords.append(vec)
        total += 1
    if dimension is None:
        raise RayFormatError("missing 'dim d' header", 1)
    sys = make_ray_system(coords, dimension)
    dropped = total - len(sys.rays)
    if dropped:
        warnings.warn(f"dropped {dropped} duplicate rays while loading {path}")
    return sys


def bundled_peres_path() -> Path:
    """Path of the packaged Peres 33-ray data file."""
    return Path(__file__).resolve().parent / "data" / "peres33.rays"


__all__ = [
    "QuadInt",
    "ZERO",
    "ONE",
    "SQRT2",
    "Ray",
    "RaySystem",
    "ColoringResult",
    "RayFormatError",
    "IncompleteBasesError",
    "PERES_SQUARE_CLASSES",
    "canonicalize",
    "dot",
    "extract_bases",
    "make_ray_system",
    "generate_peres",
    "square_class",
    "verify_coloring",
    "require_complete_bases",
    "ks_colorable",
    "lift_to_dimension",
    "save_rays",
    "load_rays",
    "bundled_peres_path",
]
