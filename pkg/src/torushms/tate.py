"""Points, group law, and theta functions of the multiplicative-quotient
elliptic curve X = Lambda^* / q^Z.

Every point has a unique presentation [ -q^x * M ] with x in [0,1)
rational and M a valuation-zero unit series; TatePoint stores that pair.
The marked 2-torsion point is P0 = [ -q^(1/2) ] and the origin of the
group law is O = [1].

The two level-2 theta functions are evaluated as truncated Novikov
series in the point coordinates:

    theta0(w) = sum_n q^(n^2) w^(2n)           w = -q^x M
    theta1(w) = sum_n q^((n+1/2)^2) w^(2n+1)

expanded so that a term of index n contributes exponent n^2 + 2nx with
coefficient M^(2n) (kind 0), resp. exponent (n+1/2)^2 + (2n+1)x with
coefficient -M^(2n+1) (kind 1).  They satisfy the quasi-periodicity law

    theta_i(q w) = q^(-1) w^(-2) theta_i(w).

Global sections of the degree-2 line bundle O(2 P0) are spanned by
theta0 and theta1; SectionCoeffs stores a section s = s0*theta0 +
s1*theta1, and section_through(Q) produces a section vanishing at Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import NonUnit
from .novikov import NovikovSeries, Rational, invert

__all__ = [
    "TatePoint",
    "SectionCoeffs",
    "point_normalize",
    "point_mul",
    "point_pow",
    "conjugate_zero",
    "theta_eval",
    "theta_eval_raw",
    "section_through",
    "eval_section",
    "section_vanishes_at",
]


def _as_unit(unit: Union[NovikovSeries, int, float, complex]) -> NovikovSeries:
    if not isinstance(unit, NovikovSeries):
        unit = NovikovSeries.constant(unit)
    if unit.is_zero() or unit.val() != 0:
        raise NonUnit("point unit coordinate must have valuation 0")
    return unit


@dataclass(frozen=True)
class TatePoint:
    """The point [ -q^x * unit ], with x normalized into [0,1)."""

    x: Fraction
    unit: NovikovSeries

    def __init__(self, x: Rational, unit=1):
        object.__setattr__(self, "x", Fraction(x) % 1)
        object.__setattr__(self, "unit", _as_unit(unit))

    @classmethod
    def zero(cls) -> "TatePoint":
        """O = [1] = [-q^0 * (-1)], the group-law origin."""
        return cls(0, -1)

    @classmethod
    def two_torsion(cls) -> "TatePoint":
        """P0 = [-q^(1/2)], the marked 2-torsion point."""
        return cls(Fraction(1, 2), 1)

    def is_zero_point(self, tol: float = 1e-9) -> bool:
        return self.x == 0 and (self.unit - (-1)).max_abs_coeff() <= tol

    def approx_eq(self, other: "TatePoint", tol: float = 1e-9) -> bool:
        return self.x == other.x and self.unit.approx_eq(other.unit, tol)

    def __str__(self):
        return f"pt(x={self.x}, unit={self.unit})"


def point_normalize(w_x: Rational, w_unit) -> TatePoint:
    """Reduce a raw presentation -q^(w_x) * w_unit modulo q^Z."""
    return TatePoint(w_x, w_unit)


def point_mul(p: TatePoint, r: TatePoint) -> TatePoint:
    """Group law: [ -q^x M ] * [ -q^x' M' ] = [ -q^(x+x') * (-M M') ]."""
    return TatePoint(p.x + r.x, -(p.unit * r.unit))


def conjugate_zero(p: TatePoint) -> TatePoint:
    """The group inverse [ -q^(-x) M^(-1) ]; the other zero of any
    section of O(2 P0) vanishing at p."""
    return TatePoint(-p.x, invert(p.unit))


def point_pow(p: TatePoint, n: int) -> TatePoint:
    """n-fold group-law multiple of p (n may be negative)."""
    if n < 0:
        return point_pow(conjugate_zero(p), -n)
    out = TatePoint.zero()
    for _ in range(n):
        out = point_mul(out, p)
    return out


def _unit_powers(unit: NovikovSeries):
    cache = {0: NovikovSeries.one()}
    inv = None

    def power(k: int) -> NovikovSeries:
        nonlocal inv
        if k in cache:
            return cache[k]
        if k > 0:
            cache[k] = power(k - 1) * unit
        else:
            if inv is None:
                inv = invert(unit)
            cache[k] = power(k + 1) * inv
        return cache[k]

    return power


def theta_eval_raw(
    kind: int, x: Rational, unit, cutoff: Rational
) -> NovikovSeries:
    """Theta series at the (possibly unnormalized) presentation
    w = -q^x * unit, truncated at `cutoff`.

    Accepting x outside [0,1) is what makes the quasi-periodicity law
    directly checkable; for group-law work use theta_eval on TatePoint.
    """
    x = Fraction(x)
    unit = _as_unit(unit)
    cutoff = Fraction(cutoff)
    if kind not in (0, 1):
        raise ValueError("theta kind must be 0 or 1")
    mpow = _unit_powers(unit)

    if kind == 0:
        expo = lambda n: Fraction(n * n) + 2 * n * x
        coef = lambda n: mpow(2 * n)
    else:
        expo = lambda n: Fraction(2 * n + 1, 2) ** 2 + (2 * n + 1) * x
        coef = lambda n: -mpow(2 * n + 1)

    # exponent is a convex quadratic in n: walk outward from its vertex,
    # where it is monotone in both directions
    vertex = -x if kind == 0 else -x - Fraction(1, 2)
    up = math.ceil(vertex)
    out = NovikovSeries.zero(cutoff)
    for start, step in ((up, 1), (up - 1, -1)):
        n = start
        while True:
            e = expo(n)
            if e >= cutoff:
                break
            out = out + NovikovSeries.q_power(e) * coef(n)
            n += step
    return out.truncated(cutoff)


def theta_eval(kind: int, p: TatePoint, cutoff: Rational) -> NovikovSeries:
    return theta_eval_raw(kind, p.x, p.unit, cutoff)


@dataclass(frozen=True)
class SectionCoeffs:
    """A section s = sigma0 * theta0 + sigma1 * theta1 of O(2 P0)."""

    sigma0: NovikovSeries
    sigma1: NovikovSeries

    def __post_init__(self):
        if self.sigma0.is_zero() and self.sigma1.is_zero():
            raise ValueError("section coefficients must not both vanish")


def section_through(q_pt: TatePoint, cutoff: Rational) -> SectionCoeffs:
    """The (projective) section vanishing at q_pt and at its conjugate:
    s = theta1(w_Q) * theta0 - theta0(w_Q) * theta1."""
    return SectionCoeffs(
        sigma0=theta_eval(1, q_pt, cutoff),
        sigma1=-theta_eval(0, q_pt, cutoff),
    )


def eval_section(
    section: SectionCoeffs, p: TatePoint, cutoff: Rational
) -> NovikovSeries:
    return section.sigma0 * theta_eval(0, p, cutoff) + section.sigma1 * theta_eval(
        1, p, cutoff
    )


def section_vanishes_at(
    section: SectionCoeffs,
    p: TatePoint,
    cutoff: Rational,
    slack: Rational = 1,
) -> bool:
    """Truncated-vanishing criterion: the evaluated series has no term
    below (effective cutoff - slack)."""
    value = eval_section(section, p, cutoff)
    window = value.cutoff if value.cutoff is not None else Fraction(cutoff)
    return value.is_zero() or value.val() >= window - Fraction(slack)
