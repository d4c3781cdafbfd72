#!/usr/bin/env python3
"""Four more routes to the factorial, each with its own flavor.

Feller telescopes areas between ln t and midpoint steps into an exact
identity whose tail sum recovers (1/2) ln(2 pi).  Marsaglia reverts
w - ln(1+w) = z^2/2 into exact rational coefficients and rebuilds n! from
Gaussian moments.  Namias divides Gamma by the exponentiated main term and
lands on a clean functional equation.  Mermin writes e^(r_n) as an
infinite product whose factors decay like 1/(12 k^2).
"""

import math
from fractions import Fraction

from stirling import (PrecisionCtx, feller_constant, feller_identity_residual,
                      marsaglia_coeffs, marsaglia_factorial,
                      mermin_partial_product, namias_residual, rational_to_str,
                      sequence_point)

ctx = PrecisionCtx(256)

print("Feller identity residual (exact up to roundoff):")
for n in (1, 10, 500):
    print(f"  n = {n:<5} residual = {float(feller_identity_residual(n, ctx)):.2e}")
print("Feller constant from partial sums (tail ~ 1/(24K)):")
for K in (100, 10**3, 10**4):
    c = feller_constant(K, ctx)
    print(f"  K = {K:<6} {c.to_decimal(12)}")

print()
series = marsaglia_coeffs(8)
print("Marsaglia reversion coefficients:",
      " ".join(rational_to_str(c) for c in series.coeffs))
exact = Fraction(math.factorial(20))
print("rebuilding 20! from Gaussian moments:")
for K in (1, 3, 5):
    approx = marsaglia_factorial(20, K, ctx)
    print(f"  K = {K}: ratio to exact = {float(approx / exact):.10f}")

print()
print("Namias functional-equation residual (zero up to oracle error):")
for n in (1, 4, Fraction(3, 4)):
    print(f"  n = {str(n):<5} residual = {float(namias_residual(n, ctx)):.2e}")

print()
print("Mermin log-product converging up to r_n (tail < 1/(12K)):")
r_2 = sequence_point(2, ctx).r_n
for K in (10, 100, 10**4):
    lp = mermin_partial_product(2, K, ctx)
    print(f"  K = {K:<6} log product = {lp.to_decimal(12):<16} "
          f"gap = {float(r_2 - lp):.2e}")
