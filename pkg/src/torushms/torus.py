"""Straight Lagrangian branes on the flat torus R^2/Z^2.

A brane is an oriented straight line of primitive slope (m,n) through a
rational base point, together with

  * an integer grading offset (the full grading is alpha0(slope) + k,
    where alpha0 in [-1,1) solves e^(pi*i*alpha0) = (m+in)/|(m,n)|;
    odd offsets flip the orientation),
  * a Pin marker: one crossing point at a rational arc position along
    the curve, measured from the base point in the canonical positive
    direction of the unoriented line (upward, or rightward when
    horizontal) — parallel transport picks up a sign each time a
    boundary arc passes the marker,
  * a local system: a Jordan-type flat bundle given by blocks
    (eigenvalue, size) with valuation-zero eigenvalues, optionally
    conjugated by a constant frame matrix.

Index computations never touch floating-point angles: every floor of a
grading difference reduces to sign tests on integer cross products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import MarkerCollision, NonTransverse, NonUnit
from .novikov import NovikovSeries, Rational, _binom, fractional_power, invert

Slope = Tuple[int, int]
Vec = Tuple[Fraction, Fraction]

#: default Pin-marker arc position: 1/2 - 1/64 of the primitive period
DEFAULT_MARKER = Fraction(31, 64)


def det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def is_primitive(v: Slope) -> bool:
    return v != (0, 0) and math.gcd(v[0], v[1]) == 1


def canonical_direction(v: Slope) -> Slope:
    """The positive direction of the unoriented line through v:
    second coordinate positive, or first positive when horizontal."""
    m, n = v
    return v if (n > 0 or (n == 0 and m > 0)) else (-m, -n)


def upper_half(v: Slope) -> int:
    """1 when alpha0(v) >= 0 (direction in the closed upper half plane
    minus the negative x-axis), else 0."""
    m, n = v
    return 1 if (n > 0 or (n == 0 and m > 0)) else 0


def alpha0_floor_diff(v0: Slope, v1: Slope) -> int:
    """floor(alpha0(v1) - alpha0(v0)), exactly, for non-parallel slopes."""
    c = det2(v0, v1)
    if c == 0:
        raise NonTransverse(f"slopes {v0} and {v1} are parallel")
    h0, h1 = upper_half(v0), upper_half(v1)
    diff_positive = (h1 > h0) if h0 != h1 else (c > 0)
    if diff_positive:
        return 0 if c > 0 else 1
    return -1 if c < 0 else -2


def compare_alpha0(u: Slope, v: Slope) -> int:
    """Exact three-way comparison of the standard gradings alpha0."""
    hu, hv = upper_half(u), upper_half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = det2(u, v)
    return 0 if c == 0 else (-1 if c > 0 else 1)


def alpha0_float(v: Slope) -> float:
    """Float rendering of alpha0 (display only; never used in logic).
    The negative x-axis sits at -1, matching the exact predicates."""
    a = math.atan2(v[1], v[0]) / math.pi
    return -1.0 if a == 1.0 else a


# ---------------------------------------------------------------------------
# matrices over NovikovSeries (small, dense, immutable tuples)
# ---------------------------------------------------------------------------

Matrix = Tuple[Tuple[NovikovSeries, ...], ...]


def mat_identity(n: int) -> Matrix:
    one, zero = NovikovSeries.one(), NovikovSeries.zero()
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def mat_zero(rows: int, cols: int) -> Matrix:
    zero = NovikovSeries.zero()
    return tuple(tuple(zero for _ in range(cols)) for _ in range(rows))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def mat_scale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = NovikovSeries.zero()
            for k in range(inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_max_abs(a: Matrix, below: Optional[Rational] = None) -> float:
    return max(x.max_abs_coeff(below) for row in a for x in row)


def _complex_inverse(c: Sequence[Sequence[complex]]):
    """Gaussian elimination for small constant matrices."""
    n = len(c)
    aug = [list(map(complex, row)) + [1.0 if i == j else 0.0 for j in range(n)]
           for i, row in enumerate(c)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if abs(aug[pivot][col]) < 1e-12:
            raise ValueError("frame matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [x / scale for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def _const_matrix(c: Sequence[Sequence[complex]]) -> Matrix:
    return tuple(
        tuple(NovikovSeries.constant(x) for x in row) for row in c
    )


# ---------------------------------------------------------------------------
# local systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalSystem:
    """Jordan-type flat bundle: blocks of (eigenvalue, size), with all
    eigenvalues valuation-zero units.

    `frame`, when given, is a constant invertible matrix C expressing an
    isomorphic system in a different trivialization: monodromy and all
    transports become C * (...) * C^(-1).  The Jordan gauge (frame None)
    is the normal form.
    """

    blocks: Tuple[Tuple[NovikovSeries, int], ...]
    frame: Optional[Tuple[Tuple[complex, ...], ...]] = None

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("local system needs at least one block")
        norm_blocks = []
        for eig, size in self.blocks:
            if not isinstance(eig, NovikovSeries):
                eig = NovikovSeries.constant(eig)
            if eig.is_zero() or eig.val() != 0:
                raise NonUnit("local-system eigenvalues must have val = 0")
            if size < 1:
                raise ValueError("Jordan block size must be >= 1")
            norm_blocks.append((eig, int(size)))
        object.__setattr__(self, "blocks", tuple(norm_blocks))
        if self.frame is not None:
            f = tuple(tuple(complex(x) for x in row) for row in self.frame)
            if len(f) != self.rank or any(len(row) != self.rank for row in f):
                raise ValueError("frame must be a square matrix of the rank")
            _complex_inverse(f)  # raises if singular
            object.__setattr__(self, "frame", f)

    @classmethod
    def trivial(cls, rank: int = 1) -> "LocalSystem":
        return cls(((NovikovSeries.one(), 1),) * rank)

    @classmethod
    def from_eigenvalue(cls, eigenvalue, size: int = 1) -> "LocalSystem":
        """The indecomposable system E_M^size: one Jordan block."""
        return cls(((eigenvalue, size),))

    @property
    def rank(self) -> int:
        return sum(size for _, size in self.blocks)

    def is_trivial_rank_one(self, tol: float = 1e-12) -> bool:
        return (
            self.rank == 1
            and self.frame is None
            and (self.blocks[0][0] - 1).max_abs_coeff() <= tol
        )

    def transport(self, t: Rational) -> Matrix:
        """Parallel transport over an oriented arc fraction t.

        Each Jordan block J = lam*(I + N/lam) contributes
        lam^t * sum_k binom(t,k) (N/lam)^k  (a finite sum since N is
        nilpotent); fractional eigenvalue powers use the principal
        branch, so transport(s) * transport(t) = transport(s+t).
        """
        t = Fraction(t)
        blocks_out = []
        for eig, size in self.blocks:
            lam_t = fractional_power(eig, t)
            inv_eig = invert(eig) if size > 1 else None
            block = [[NovikovSeries.zero() for _ in range(size)]
                     for _ in range(size)]
            for k in range(size):
                coeff = lam_t * _binom(t, k) * (inv_eig ** k if k else 1)
                for i in range(size - k):
                    block[i][i + k] = coeff
            blocks_out.append(block)
        n = self.rank
        out = [[NovikovSeries.zero() for _ in range(n)] for _ in range(n)]
        offset = 0
        for block in blocks_out:
            s = len(block)
            for i in range(s):
                for j in range(s):
                    out[offset + i][offset + j] = block[i][j]
            offset += s
        mat = tuple(tuple(row) for row in out)
        if self.frame is not None:
            c = _const_matrix(self.frame)
            c_inv = _const_matrix(_complex_inverse(self.frame))
            mat = mat_mul(c, mat_mul(mat, c_inv))
        return mat

    def monodromy(self) -> Matrix:
        return self.transport(1)

    def inverse_eigen(self) -> "LocalSystem":
        """The system with every eigenvalue inverted (same block shapes)."""
        return LocalSystem(
            tuple((invert(e), s) for e, s in self.blocks), self.frame
        )


def transport(e: LocalSystem, t: Rational) -> Matrix:
    return e.transport(t)


def ls_ses_triple(m_eigen, h: int):
    """The short-exact-sequence triple (E^1, E^(h+1), E^h) of
    indecomposable systems with a common eigenvalue."""
    if h < 1:
        raise ValueError("tower height h must be >= 1")
    return (
        LocalSystem.from_eigenvalue(m_eigen, 1),
        LocalSystem.from_eigenvalue(m_eigen, h + 1),
        LocalSystem.from_eigenvalue(m_eigen, h),
    )


# ---------------------------------------------------------------------------
# branes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Brane:
    """A straight brane L_{(m,n),x}[k] with Pin marker and local system."""

    slope: Slope
    shift: Fraction = Fraction(0)
    grading_offset: int = 0
    marker: Fraction = DEFAULT_MARKER
    local_system: LocalSystem = field(default_factory=LocalSystem.trivial)

    def __post_init__(self):
        if not is_primitive(self.slope):
            raise ValueError(f"slope {self.slope} must be primitive nonzero")
        object.__setattr__(self, "slope", (int(self.slope[0]), int(self.slope[1])))
        # integer translations of the base point give the same circle
        object.__setattr__(self, "shift", Fraction(self.shift) % 1)
        marker = Fraction(self.marker) % 1
        object.__setattr__(self, "marker", marker)

    @property
    def base_point(self) -> Vec:
        """(shift, 0), or (0, shift) for horizontal branes."""
        if self.slope[1] != 0:
            return (self.shift, Fraction(0))
        return (Fraction(0), self.shift)

    @property
    def marker_point(self) -> Vec:
        """Lift of the Pin marker: base + marker * canonical direction."""
        c = canonical_direction(self.slope)
        b = self.base_point
        return (b[0] + self.marker * c[0], b[1] + self.marker * c[1])

    @property
    def homology_class(self) -> Slope:
        """The oriented class; odd grading offsets reverse orientation."""
        m, n = self.slope
        return (m, n) if self.grading_offset % 2 == 0 else (-m, -n)

    def shifted(self, k: int = 1) -> "Brane":
        return Brane(
            self.slope, self.shift, self.grading_offset + k, self.marker,
            self.local_system,
        )

    @property
    def rank(self) -> int:
        return self.local_system.rank

    def __str__(self):
        s = f"L({self.slope[0]},{self.slope[1]};{self.shift})"
        if self.grading_offset:
            s += f"[{self.grading_offset}]"
        return s


@dataclass(frozen=True)
class IntersectionPoint:
    """One transverse intersection y of an ordered brane pair, with its
    degree and the arc parameters (fractions of the primitive period
    from each base point, mod 1) at which the branes pass through y."""

    coords: Vec
    index: int
    s: Fraction
    t: Fraction
    pair: Tuple[Brane, Brane]


def index_of(l0: Brane, l1: Brane) -> int:
    """Degree of every intersection point of the ordered pair:
    floor(alpha1 - alpha0) + 1 with the integer offsets included."""
    return (
        alpha0_floor_diff(l0.slope, l1.slope)
        + l1.grading_offset
        - l0.grading_offset
        + 1
    )


def intersections(l0: Brane, l1: Brane) -> Tuple[IntersectionPoint, ...]:
    """All |det(v0,v1)| intersection points, sorted by coordinates.

    Raises NonTransverse for parallel slopes and MarkerCollision when a
    Pin marker sits on an intersection point.
    """
    v0, v1 = l0.slope, l1.slope
    d = det2(v0, v1)
    if d == 0:
        raise NonTransverse(f"branes {l0} and {l1} are parallel")
    p0, p1 = l0.base_point, l1.base_point
    idx = index_of(l0, l1)
    bound = abs(v0[0]) + abs(v0[1]) + abs(v1[0]) + abs(v1[1]) + 2
    found = {}
    for j in range(-bound, bound + 1):
        for k in range(-bound, bound + 1):
            rx = p1[0] - p0[0] + j
            ry = p1[1] - p0[1] + k
            # solve s*v0 - t*v1 = r
            s = Fraction(rx * (-v1[1]) - ry * (-v1[0]), -d)
            t = Fraction(v0[0] * ry - v0[1] * rx, -d)
            y = ((p0[0] + s * v0[0]) % 1, (p0[1] + s * v0[1]) % 1)
            found.setdefault(y, (s % 1, t % 1))
    if len(found) != abs(d):
        raise AssertionError(
            f"expected {abs(d)} intersection points, found {len(found)}"
        )
    marker_lifts = (
        (l0, (l0.marker_point[0] % 1, l0.marker_point[1] % 1)),
        (l1, (l1.marker_point[0] % 1, l1.marker_point[1] % 1)),
    )
    pts = []
    for y in sorted(found):
        for brane, mk in marker_lifts:
            if y == mk:
                raise MarkerCollision(
                    f"Pin marker of {brane} sits on intersection point {y}"
                )
        s, t = found[y]
        pts.append(IntersectionPoint(y, idx, s, t, (l0, l1)))
    return tuple(pts)
