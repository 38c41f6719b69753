"""Coherent-sheaf bookkeeping on the Tate curve and K-theory classes.

Indecomposable sheaves are recorded by their classification data, not
constructed module-theoretically: a bundle is (rank, degree,
determinant point), a skyscraper is (support point, thickness), each
with an integer homological shift whose parity flips the K-class sign.

K0 is presented as (rank, degree, determinant point) with the
degree-zero Picard group identified with the curve itself via
O(P - O) <-> P; consequently the class group law multiplies points.

The relation generators come in four families:
  1. isomorphism pairs (same sheaf, two presentations),
  2. divisor sequences  0 -> O(D-Q) -> O(D) -> O_Q -> 0,
  3. coprime-bundle sequences
     0 -> (r-1)*O(-3n.O-twist) -> E(r,d) -> det E ((r-1)n-twist) -> 0,
     where one hyperplane twist has degree 3 and leaves the
     determinant point fixed (the hyperplane divisor is 3.O),
  4. Jordan towers 0 -> Y_1 -> Y_(h+1) -> Y_h -> 0 over a simple
     skyscraper or a coprime stable bundle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import BadBase, BadGcd
from .novikov import NovikovSeries
from .tate import TatePoint, conjugate_zero, point_mul, point_pow

__all__ = [
    "Bundle",
    "Skyscraper",
    "IndecSheaf",
    "SheafSum",
    "K0Class",
    "k0_class",
    "line_bundle",
    "o_of_n_p0",
    "iso_pair",
    "ses_divisor",
    "ses_atiyah_coprime",
    "ses_jordan_tower",
    "RelationTriple",
    "relation_suite",
]


@dataclass(frozen=True)
class Bundle:
    """Indecomposable vector bundle, defined by its classification data."""

    rank: int
    degree: int
    det_pt: TatePoint
    shift: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("bundle rank must be >= 1")

    def shifted(self, k: int = 1) -> "Bundle":
        return Bundle(self.rank, self.degree, self.det_pt, self.shift + k)

    def __str__(self):
        s = f"Bun({self.rank},{self.degree},{self.det_pt})"
        return s + (f"[{self.shift}]" if self.shift else "")


@dataclass(frozen=True)
class Skyscraper:
    """Skyscraper of thickness h supported at a point."""

    pt: TatePoint
    h: int = 1
    shift: int = 0

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("skyscraper thickness must be >= 1")

    def shifted(self, k: int = 1) -> "Skyscraper":
        return Skyscraper(self.pt, self.h, self.shift + k)

    def __str__(self):
        s = f"Sky({self.pt},{self.h})"
        return s + (f"[{self.shift}]" if self.shift else "")


IndecSheaf = Union[Bundle, Skyscraper]


@dataclass(frozen=True)
class SheafSum:
    """Canonicalized formal integer combination of indecomposables."""

    terms: Tuple[Tuple[IndecSheaf, int], ...] = ()

    def __init__(self, terms: Iterable = ()):
        if isinstance(terms, (Bundle, Skyscraper)):
            terms = [(terms, 1)]
        acc = {}
        for entry in terms:
            if isinstance(entry, (Bundle, Skyscraper)):
                sheaf, mult = entry, 1
            else:
                sheaf, mult = entry
            acc[sheaf] = acc.get(sheaf, 0) + int(mult)
        clean = tuple(
            (s, m) for s, m in sorted(acc.items(), key=lambda kv: repr(kv[0]))
            if m != 0
        )
        object.__setattr__(self, "terms", clean)

    def __add__(self, other):
        other = as_sum(other)
        return SheafSum(self.terms + other.terms)

    def __neg__(self):
        return SheafSum(tuple((s, -m) for s, m in self.terms))

    def __sub__(self, other):
        return self + (-as_sum(other))

    def __rmul__(self, k: int):
        return SheafSum(tuple((s, k * m) for s, m in self.terms))

    def is_empty(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            (f"{m}*{s}" if m != 1 else str(s)) for s, m in self.terms
        )


def as_sum(x) -> SheafSum:
    if isinstance(x, SheafSum):
        return x
    if isinstance(x, (Bundle, Skyscraper)):
        return SheafSum([(x, 1)])
    return SheafSum(x)


@dataclass(frozen=True)
class K0Class:
    """(rank, degree, determinant point); the point part is the
    Pic^0-coordinate under O(P - O) <-> P."""

    rk: int
    deg: int
    pt: TatePoint

    @classmethod
    def zero(cls) -> "K0Class":
        return cls(0, 0, TatePoint.zero())

    def __add__(self, other: "K0Class") -> "K0Class":
        return K0Class(
            self.rk + other.rk, self.deg + other.deg,
            point_mul(self.pt, other.pt),
        )

    def __neg__(self):
        return K0Class(-self.rk, -self.deg, conjugate_zero(self.pt))

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self, tol: float = 1e-9) -> bool:
        return (
            self.rk == 0 and self.deg == 0 and self.pt.is_zero_point(tol)
        )

    def approx_eq(self, other: "K0Class", tol: float = 1e-9) -> bool:
        return (
            self.rk == other.rk
            and self.deg == other.deg
            and self.pt.approx_eq(other.pt, tol)
        )

    def __str__(self):
        return f"({self.rk}, {self.deg}, {self.pt})"


def _class_of(sheaf: IndecSheaf) -> K0Class:
    if isinstance(sheaf, Bundle):
        base = K0Class(sheaf.rank, sheaf.degree, sheaf.det_pt)
    else:
        base = K0Class(0, sheaf.h, point_pow(sheaf.pt, sheaf.h))
    return base if sheaf.shift % 2 == 0 else -base


def k0_class(s) -> K0Class:
    """The K-theory class of a sheaf or formal sum (a group morphism:
    additive, and homological shift flips the sign)."""
    total = K0Class.zero()
    for sheaf, mult in as_sum(s).terms:
        cls = _class_of(sheaf)
        step = cls if mult > 0 else -cls
        for _ in range(abs(mult)):
            total = total + step
    return total


def line_bundle(
    plus: Sequence[TatePoint], minus: Sequence[TatePoint] = ()
) -> Bundle:
    """O(D) for the divisor D = sum(plus) - sum(minus)."""
    pt = TatePoint.zero()
    for p in plus:
        pt = point_mul(pt, p)
    for p in minus:
        pt = point_mul(pt, conjugate_zero(p))
    return Bundle(1, len(plus) - len(minus), pt)


def o_of_n_p0(n: int) -> Bundle:
    """O(n P0): degree n, determinant point the n-fold multiple of P0
    (the origin for even n, P0 for odd n)."""
    return Bundle(1, n, point_pow(TatePoint.two_torsion(), n))


@dataclass(frozen=True)
class RelationTriple:
    """A K0 relation [total] - [sub] - [quot] = 0 from a short exact
    sequence (or an isomorphism pair, with empty quotient)."""

    sub: SheafSum
    total: SheafSum
    quot: SheafSum
    label: str = ""

    def k0_defect(self) -> K0Class:
        return k0_class(self.total) - k0_class(self.sub) - k0_class(self.quot)

    def holds(self, tol: float = 1e-9) -> bool:
        return self.k0_defect().is_zero(tol)


def iso_pair(f, g, label: str = "iso") -> RelationTriple:
    """Two presentations of one sheaf: relation [g] - [f] = 0."""
    return RelationTriple(as_sum(f), as_sum(g), SheafSum(), label)


def ses_divisor(d_deg: int, d_pt: TatePoint, q: TatePoint) -> RelationTriple:
    """0 -> O(D - Q) -> O(D) -> O_Q -> 0 for a degree-d divisor D."""
    total = Bundle(1, d_deg, d_pt)
    sub = Bundle(1, d_deg - 1, point_mul(d_pt, conjugate_zero(q)))
    quot = Skyscraper(q, 1)
    return RelationTriple(
        as_sum(sub), as_sum(total), as_sum(quot), "divisor"
    )


def ses_atiyah_coprime(
    r: int, d: int, det_pt: TatePoint, n: int
) -> RelationTriple:
    """0 -> (O(-n-twist))^(r-1) -> E(r,d) -> (det E)((r-1)n-twist) -> 0
    for a stable bundle with coprime (r, d).

    One twist has degree 3 (hyperplane divisor 3.O), so the sub-line
    has degree -3n and the quotient line degree d + 3n(r-1); the
    determinant point is carried entirely by the quotient.
    """
    if r < 2 or gcd(r, abs(d)) != 1:
        raise BadGcd(f"need r >= 2 and gcd(r,d) = 1, got ({r}, {d})")
    sub = SheafSum([(Bundle(1, -3 * n, TatePoint.zero()), r - 1)])
    total = as_sum(Bundle(r, d, det_pt))
    quot = as_sum(Bundle(1, d + 3 * n * (r - 1), det_pt))
    return RelationTriple(sub, total, quot, "atiyah-coprime")


def _tower_member(base: IndecSheaf, h: int) -> IndecSheaf:
    if isinstance(base, Skyscraper):
        return Skyscraper(base.pt, h)
    return Bundle(
        h * base.rank, h * base.degree, point_pow(base.det_pt, h)
    )


def ses_jordan_tower(base: IndecSheaf, h: int) -> RelationTriple:
    """0 -> Y_1 -> Y_(h+1) -> Y_h -> 0, where Y_k is the k-th member of
    the Jordan-type tower over `base` (a simple skyscraper or a
    coprime stable bundle)."""
    if isinstance(base, Skyscraper):
        if base.h != 1 or base.shift:
            raise BadBase("tower base must be a simple unshifted skyscraper")
    elif isinstance(base, Bundle):
        if gcd(base.rank, abs(base.degree)) != 1 or base.shift:
            raise BadBase("tower base bundle must have coprime (rank, degree)")
    else:
        raise BadBase(f"unsupported tower base {base!r}")
    if h < 1:
        raise ValueError("tower height must be >= 1")
    return RelationTriple(
        as_sum(_tower_member(base, 1)),
        as_sum(_tower_member(base, h + 1)),
        as_sum(_tower_member(base, h)),
        "jordan-tower",
    )


def relation_suite(bounds, points: Sequence[TatePoint]) -> List[RelationTriple]:
    """All four relation families over the parameter grid: isomorphism
    pairs, divisor sequences for |d| <= d_max, coprime-bundle sequences
    for r <= r_max, |d| <= d_max, n <= n_max, and Jordan towers up to
    height h_max over skyscraper and bundle bases."""
    out: List[RelationTriple] = []
    for n in range(-bounds.n_max, bounds.n_max + 1):
        out.append(
            iso_pair(
                o_of_n_p0(n),
                Bundle(1, n, point_pow(TatePoint.two_torsion(), n)),
            )
        )
    for d in range(-bounds.d_max, bounds.d_max + 1):
        for d_pt in points:
            for q in points:
                out.append(ses_divisor(d, d_pt, q))
    for r in range(2, bounds.r_max + 1):
        for d in range(-bounds.d_max, bounds.d_max + 1):
            if gcd(r, abs(d)) != 1:
                continue
            for n in range(1, bounds.n_max + 1):
                for det_pt in points:
                    out.append(ses_atiyah_coprime(r, d, det_pt, n))
    bases: List[IndecSheaf] = [Skyscraper(p, 1) for p in points]
    for r in range(1, bounds.r_max + 1):
        for d in range(-bounds.d_max, bounds.d_max + 1):
            if gcd(r, abs(d)) == 1:
                bases.append(Bundle(r, d, points[0]))
    for base in bases:
        for h in range(1, bounds.h_max + 1):
            out.append(ses_jordan_tower(base, h))
    return out
