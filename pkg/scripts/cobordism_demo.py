#!/usr/bin/env python3
"""Walk the cobordism-group toolkit on one slope: decompose it into
elementary surgeries, certify that the reference flux is independent of
the decomposition path, compare the algebraic surgery flux with the
exact piecewise-linear polyline oracle, and spot-check the cylinder
(zeta) relations used for the group normal form."""

import argparse
import sys
from fractions import Fraction as F

from torushms.cobord import (
    CurveClass,
    farey_splits,
    normal_form,
    pl_surgery_flux,
    relation_check,
    rho_reference,
    rho_values_by_recursion,
    surgery,
    zeta,
)
from torushms.torus import Brane, det2, is_primitive


def composite(v):
    """Build v by elementary surgeries along the first Farey path."""
    if abs(v[0]) + abs(v[1]) == 1:
        return CurveClass(v, 0)
    a, b = farey_splits(v)[0]
    return surgery(composite(a), composite(b))


def parse_slope(text):
    m, n = (int(p) for p in text.split(","))
    return (m, n)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--slope", type=parse_slope, default=(3, 5),
                    help="primitive slope m,n (default 3,5)")
    args = ap.parse_args()
    v = args.slope
    if not is_primitive(v):
        print(f"slope {v} is not primitive", file=sys.stderr)
        return 1

    splits = farey_splits(v)
    print(f"slope {v}: {len(splits)} elementary splits")
    for a, b in splits:
        print(f"  {v} = {a} + {b}   det {det2(a, b)}")

    values = rho_values_by_recursion(v)
    shown = ", ".join(str(t) for t in sorted(values))
    print(f"reference flux across all decomposition paths: {{{shown}}}")
    print("path-independent:", "yes" if len(values) == 1 else "NO")

    built = composite(v)
    print(f"staircase composite: flux {built.flux}  "
          f"(reference {rho_reference(v)})")

    c0, c1 = CurveClass((1, 0), 0), CurveClass((0, 1), 0)
    print(f"PL oracle c((1,0),(0,1)) = {pl_surgery_flux(c0, c1)} "
          f"(algebraic {surgery(c0, c1).flux})")

    x, y = F(1, 3), F(2, 5)
    vert = lambda s: Brane((0, 1), F(s) % 1)
    horiz = lambda s: Brane((1, 0), F(s) % 1)
    checks = {
        "zeta additivity": zeta(x) + zeta(y) == zeta(x + y),
        "vertical differences": relation_check(
            [(vert(x + y), 1), (vert(y), -1)],
            [(vert(x), 1), (vert(0), -1)],
        ),
        "horizontal transfer": relation_check(
            [horiz(0), vert(x + y)], [horiz(-x), vert(y)]
        ),
    }
    for name, ok in checks.items():
        print(f"{name}: {'yes' if ok else 'NO'}")

    nf = normal_form(Brane(v, F(1, 7)))
    print(f"normal form of L{v} at shift 1/7: zeta={nf.zeta_part} "
          f"hom={nf.hom}")
    ok = len(values) == 1 and built.flux == rho_reference(v)
    return 0 if ok and all(checks.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
