"""Stirling's series for ln Gamma: main term, correction terms, truncation.

The expansion implemented here is

    ln Gamma(z) ~ P(z) + R_N(z),            z -> infinity,
    P(z)   = z ln z - z - (1/2) ln z + (1/2) ln(2 pi),
    R_N(z) = sum_{k=1..N} B_{2k} / (2k (2k-1) z^(2k-1)),   R_0 = 0.

A note on the correction-term denominator: derivations that organize the
series as f_k(z) = (B_k/k!) d^k/dz^k [z ln z - z] are sometimes displayed
with denominator 2k(2k+1).  That variant is inconsistent with R_N above
and with the constant sequence it induces (the N=1 constant must be
1 - 1/12 = 11/12 ~ 0.91667, which forces 2k(2k-1)).  This module uses
2k(2k-1) throughout, so that sum_{k=0..2N} f_k(z) = P(z) + R_N(z) minus
the (1/2) ln(2 pi) constant, exactly as the remainder form requires.

The series diverges for every fixed z; `optimal_truncation` stops just
before the smallest term, which by the even/odd sandwich property bounds
the error by the first omitted term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import libmp

from .bernoulli import bernoulli, table
from .errors import DomainError, ResourceError
from .mpcore import BigFloat, PrecisionCtx, to_raw

__all__ = [
    "Approximation",
    "half_ln_2pi",
    "main_term_P",
    "remainder_R",
    "f_term",
    "lngamma_stirling",
    "optimal_truncation",
    "stirling_original_log10",
    "ln_factorial_stirling",
    "term_coefficient",
]

_RND = "n"


@dataclass(frozen=True)
class Approximation:
    """A truncated-series value with its own error certificate.

    ``omitted_term`` is the magnitude of the first term left out, which on
    the positive real axis bounds the truncation error.
    """

    value: BigFloat
    order_used: int
    omitted_term: BigFloat
    ctx_bits: int


def term_coefficient(N: int) -> Fraction:
    """Exact coefficient B_{2N} / (2N (2N-1)) of the N-th correction term."""
    if N < 1:
        raise ValueError("term index must be >= 1")
    return bernoulli(2 * N) / (2 * N * (2 * N - 1))


# -- raw kernels -------------------------------------------------------


def _half_ln_2pi_raw(wp: int):
    two_pi = libmp.mpf_shift(libmp.mpf_pi(wp, _RND), 1)
    return libmp.mpf_shift(libmp.mpf_log(two_pi, wp, _RND), -1)


def _require_positive(z_raw, what: str = "z"):
    if libmp.mpf_le(z_raw, libmp.fzero):
        raise DomainError(f"{what} must be positive")


def _main_term_raw(z_raw, wp: int):
    lnz = libmp.mpf_log(z_raw, wp, _RND)
    acc = libmp.mpf_mul(z_raw, lnz, wp, _RND)
    acc = libmp.mpf_sub(acc, z_raw, wp, _RND)
    acc = libmp.mpf_sub(acc, libmp.mpf_shift(lnz, -1), wp, _RND)
    return libmp.mpf_add(acc, _half_ln_2pi_raw(wp), wp, _RND)


def _remainder_raw(z_raw, N: int, wp: int):
    if N == 0:
        return libmp.fzero
    inv = libmp.mpf_div(libmp.fone, z_raw, wp, _RND)
    inv2 = libmp.mpf_mul(inv, inv, wp, _RND)
    zpow = inv  # z^-(2k-1), starting at k=1
    acc = libmp.fzero
    for k in range(1, N + 1):
        c = term_coefficient(k)
        c_raw = libmp.from_rational(c.numerator, c.denominator, wp, _RND)
        acc = libmp.mpf_add(acc, libmp.mpf_mul(c_raw, zpow, wp, _RND), wp, _RND)
        zpow = libmp.mpf_mul(zpow, inv2, wp, _RND)
    return acc


def _abs_term_raw(z_raw, N: int, wp: int):
    """|B_{2N}| / (2N (2N-1) z^(2N-1)) as a raw value."""
    c = abs(term_coefficient(N))
    c_raw = libmp.from_rational(c.numerator, c.denominator, wp, _RND)
    zp = libmp.mpf_pow_int(z_raw, 2 * N - 1, wp, _RND)
    return libmp.mpf_div(c_raw, zp, wp, _RND)


# -- public operations --------------------------------------------------


def half_ln_2pi(ctx: PrecisionCtx) -> BigFloat:
    """(1/2) ln(2 pi), the constant of the main term."""
    return BigFloat.from_raw(_half_ln_2pi_raw(ctx.wprec()), ctx)


def main_term_P(z, ctx: PrecisionCtx) -> BigFloat:
    """P(z) = z ln z - z - (1/2) ln z + (1/2) ln(2 pi), for z > 0."""
    wp = ctx.wprec()
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    return BigFloat.from_raw(_main_term_raw(z_raw, wp), ctx)


def remainder_R(z, N: int, ctx: PrecisionCtx) -> BigFloat:
    """R_N(z) = sum_{k=1..N} B_{2k}/(2k(2k-1) z^(2k-1)); R_0 = 0."""
    if N < 0:
        raise DomainError("N must be >= 0")
    wp = ctx.wprec()
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    if 2 * N > table().cap:
        raise ResourceError(f"order {N} needs B_{2*N}, beyond the table cap")
    return BigFloat.from_raw(_remainder_raw(z_raw, N, wp), ctx)


def f_term(k: int, z, ctx: PrecisionCtx) -> BigFloat:
    """Individual expansion term: f_0 = z ln z - z, f_1 = -(1/2) ln z,
    f_{2m} = B_{2m}/(2m(2m-1) z^(2m-1)), and 0 for odd k >= 3."""
    if k < 0:
        raise DomainError("k must be >= 0")
    wp = ctx.wprec()
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    if k == 0:
        lnz = libmp.mpf_log(z_raw, wp, _RND)
        raw = libmp.mpf_sub(libmp.mpf_mul(z_raw, lnz, wp, _RND), z_raw, wp, _RND)
        return BigFloat.from_raw(raw, ctx)
    if k == 1:
        lnz = libmp.mpf_log(z_raw, wp, _RND)
        return BigFloat.from_raw(libmp.mpf_neg(libmp.mpf_shift(lnz, -1)), ctx)
    if k % 2:
        return BigFloat.from_raw(libmp.fzero, ctx)
    m = k // 2
    if k > table().cap:
        raise ResourceError(f"term {k} needs B_{k}, beyond the table cap")
    c = term_coefficient(m)
    c_raw = libmp.from_rational(c.numerator, c.denominator, wp, _RND)
    zp = libmp.mpf_pow_int(z_raw, k - 1, wp, _RND)
    return BigFloat.from_raw(libmp.mpf_div(c_raw, zp, wp, _RND), ctx)


def lngamma_stirling(z, N: int, ctx: PrecisionCtx) -> Approximation:
    """P(z) + R_N(z) with the first omitted term as the error certificate."""
    if N < 0:
        raise DomainError("N must be >= 0")
    wp = ctx.wprec()
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    if 2 * N + 2 > table().cap:
        raise ResourceError(f"order {N} needs B_{2*N+2}, beyond the table cap")
    val = libmp.mpf_add(_main_term_raw(z_raw, wp), _remainder_raw(z_raw, N, wp), wp, _RND)
    omitted = _abs_term_raw(z_raw, N + 1, wp)
    return Approximation(
        value=BigFloat.from_raw(val, ctx),
        order_used=N,
        omitted_term=BigFloat.from_raw(omitted, ctx),
        ctx_bits=ctx.bits,
    )


def optimal_truncation(z, ctx: PrecisionCtx) -> Approximation:
    """Truncate just before the smallest correction term.

    Scans |term_1|, |term_2|, ... for the first local minimum at index m;
    the returned order is m-1, so the omitted term is that minimal one and
    (by the sandwich property) bounds the actual error.
    """
    wp = ctx.wprec()
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    cap = table().cap // 2 - 1
    prev = _abs_term_raw(z_raw, 1, wp)
    for N in range(1, cap + 1):
        cur = _abs_term_raw(z_raw, N + 1, wp)
        if libmp.mpf_gt(cur, prev):
            return lngamma_stirling(z, N - 1, ctx)
        prev = cur
    raise ResourceError(
        "term magnitudes still decreasing at the table cap; "
        "argument too large for optimal truncation at this cap"
    )


def stirling_original_log10(n, terms: int, ctx: PrecisionCtx) -> BigFloat:
    """Base-10 series for log10(n!) in powers of 1/(n + 1/2).

    With a = 1/ln 10, the displayed term groups are

        (n+1/2) log10(n+1/2) - a (n+1/2) + (1/2) log10(2 pi)
        - a / (24 (n+1/2))
        + 7 a / (2880 (n+1/2)^3)

    and ``terms`` in {1, 2, 3} selects how many are summed.  Coefficients
    past the third displayed group are not defined here.
    """
    if terms not in (1, 2, 3):
        raise DomainError("terms must be 1, 2 or 3")
    wp = ctx.wprec()
    n_raw = to_raw(n, wp)
    _require_positive(n_raw, "n")
    ln10 = libmp.mpf_log(libmp.from_int(10), wp, _RND)
    a = libmp.mpf_div(libmp.fone, ln10, wp, _RND)
    m = libmp.mpf_add(n_raw, libmp.fhalf, wp, _RND)  # n + 1/2
    log10_m = libmp.mpf_div(libmp.mpf_log(m, wp, _RND), ln10, wp, _RND)
    two_pi = libmp.mpf_shift(libmp.mpf_pi(wp, _RND), 1)
    log10_2pi = libmp.mpf_div(libmp.mpf_log(two_pi, wp, _RND), ln10, wp, _RND)
    acc = libmp.mpf_mul(m, log10_m, wp, _RND)
    acc = libmp.mpf_sub(acc, libmp.mpf_mul(a, m, wp, _RND), wp, _RND)
    acc = libmp.mpf_add(acc, libmp.mpf_shift(log10_2pi, -1), wp, _RND)
    if terms >= 2:
        d = libmp.mpf_mul(libmp.from_int(24), m, wp, _RND)
        acc = libmp.mpf_sub(acc, libmp.mpf_div(a, d, wp, _RND), wp, _RND)
    if terms >= 3:
        m3 = libmp.mpf_pow_int(m, 3, wp, _RND)
        num = libmp.mpf_mul(libmp.from_int(7), a, wp, _RND)
        d = libmp.mpf_mul(libmp.from_int(2880), m3, wp, _RND)
        acc = libmp.mpf_add(acc, libmp.mpf_div(num, d, wp, _RND), wp, _RND)
    return BigFloat.from_raw(acc, ctx)


def ln_factorial_stirling(n: int, N: int, ctx: PrecisionCtx) -> Approximation:
    """Series approximation of ln((n-1)!) = ln Gamma(n) for integer n >= 1."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be an integer >= 1")
    return lngamma_stirling(n, N, ctx)
