#!/usr/bin/env python3
"""Tabulate both sides of the vanishing bridge on a grid of vertical
positions x: the Floer side asks whether the section-weighted triangle
product vanishes below the truncation window, the theta side asks
whether the section vanishes at the conjugate point.  The verdicts must
agree at every x, for both the section chosen to vanish there and a
generic constant section."""

import argparse
import cmath
import sys
from fractions import Fraction as F

from torushms.errors import DegenerateConfiguration
from torushms.mirror import theta_floer_equiv, zeta_injectivity_witness
from torushms.novikov import NovikovSeries
from torushms.tate import SectionCoeffs, TatePoint, conjugate_zero, section_through


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--denominator", type=int, default=8,
                    help="sweep x = k/denominator (default 8)")
    ap.add_argument("--m-phase", type=F, default=F(1, 7),
                    help="monodromy phase in turns (default 1/7)")
    ap.add_argument("--cutoff", type=F, default=F(6))
    args = ap.parse_args()

    m = cmath.exp(2j * cmath.pi * float(args.m_phase))
    flat = SectionCoeffs(NovikovSeries.one(), NovikovSeries.zero())
    print(f"M = exp(2 pi i {args.m_phase}), cutoff {args.cutoff}")
    print(f"{'x':>6s}  {'tuned section':>16s}  {'constant section':>18s}")
    disagreements = 0
    for k in range(1, args.denominator):
        x = F(k, args.denominator)
        tuned = section_through(conjugate_zero(TatePoint(x, m)), args.cutoff)
        try:
            pairs = [
                theta_floer_equiv(x, m, sigma, args.cutoff)
                for sigma in (tuned, flat)
            ]
        except DegenerateConfiguration:
            print(f"{str(x):>6s}  (skipped: triple point)")
            continue
        cells = []
        for lhs, rhs in pairs:
            mark = "" if lhs == rhs else "  <-- DISAGREE"
            cells.append(f"floer={lhs!s:5s} theta={rhs!s:5s}{mark}")
            if lhs != rhs:
                disagreements += 1
        print(f"{str(x):>6s}  {cells[0]}   {cells[1]}")

    w = zeta_injectivity_witness(F(1, 3))
    print(f"witness(1/3): rk={w.rk} deg={w.deg} nonzero="
          f"{'yes' if not w.is_zero() else 'no'}")
    print("disagreements:", disagreements)
    return 0 if disagreements == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
