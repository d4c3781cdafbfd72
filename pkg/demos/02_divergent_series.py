#!/usr/bin/env python3
"""The divergent log-gamma series and why truncating at the smallest term
is the right move.

The correction terms B_2k/(2k(2k-1) z^(2k-1)) first shrink, reach a
minimum, then blow up.  The even/odd sandwich guarantees the truncation
error never exceeds the first omitted term, so stopping just before the
smallest term gives the best achievable ("superasymptotic") accuracy.
"""

from fractions import Fraction

from stirling import (PrecisionCtx, f_term, lngamma_binet2, lngamma_stirling,
                      optimal_truncation)

ctx = PrecisionCtx(256)

print("term magnitudes at z = 1 (decrease, bottom out, diverge):")
for k in range(1, 9):
    print(f"  |term {k}| = {float(abs(f_term(2 * k, 1, ctx))):.6e}")

print()
print("optimal truncation across arguments, checked against the integral oracle:")
print("z        N*   omitted term   actual error")
for z in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5), Fraction(10)):
    approx = optimal_truncation(z, ctx)
    oracle = lngamma_binet2(z, ctx)
    err = abs(approx.value - oracle.value)
    print(f"{str(z):<7}  {approx.order_used:<3}  "
          f"{float(approx.omitted_term):.3e}      {float(err):.3e}")

print()
print("pushing past the optimum only hurts (z = 2):")
oracle = lngamma_binet2(2, ctx)
for N in (2, 4, 6, 8, 12, 20, 40):
    approx = lngamma_stirling(2, N, ctx)
    print(f"  N={N:<3} error = {float(abs(approx.value - oracle.value)):.3e}")
