#!/usr/bin/env python3
"""The classical inequality corpus around r_n = ln(n! e^n / (sqrt(2 pi n) n^n)).

Every check evaluates both sides from exact integer factorials at high
precision and reports the margin, the distance to the nearest bound.  A
verdict is issued only when the margin clears the arithmetic error
envelope, so "holds" is a certificate, not a float coincidence.
"""

from fractions import Fraction

from stirling import PrecisionCtx, check_bound, impens_sandwich, sequence_point

ctx = PrecisionCtx(128)

print("family       n      mid            margin        holds")
print("-" * 60)
for family in ("robbins", "maria", "hummel", "nanjundiah", "michel"):
    for n in (3, 10, 1000):
        rep = check_bound(family, n, ctx)
        print(f"{family:<12} {n:<6} {float(rep.mid):<14.6g} "
              f"{float(rep.margin):<13.3e} {rep.holds}")

print()
print("the remainder sandwich: even truncations sit below, odd above")
print("x      orders   lower gap     upper gap")
for x in (Fraction(3, 10), Fraction(1), Fraction(10)):
    for orders in (0, 2):
        rep = impens_sandwich(x, orders, orders, ctx)
        lo = float(rep.mid - rep.lhs)
        hi = float(rep.rhs - rep.mid)
        print(f"{str(x):<6} n=m={orders}    {lo:<13.3e} {hi:.3e}")

print()
print("r_n sits between 1/(12n+1) and 1/(12n); its scaled limit:")
for n in (10, 100, 10000):
    r = sequence_point(n, ctx).r_n
    print(f"  n = {n:<6} 12 n r_n = {float(12 * n * r):.8f}")
