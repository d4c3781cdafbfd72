"""Classical inequality corpus around the normalized factorial remainder.

Everything is phrased through three sequences computed from *exact*
integer factorials (never from the truncated series, which would make the
checks circular):

    r_n = ln( n! e^n / (sqrt(2 pi n) n^n) )
    c_n = (n + 1/2) ln n - n + 1 - ln(n!)
    v_n = n^n e^(-n) / n!

The families checked, each on its stated validity range:

    robbins      1/(12n+1) < r_n < 1/(12n)                      n >= 1
    maria        [12n + 3/(2(2n+1))]^(-1) < r_n                 n >= 1
    hummel       11/12 < r_n + (1/2) ln(2 pi) < 1               n >= 2
    nanjundiah   R_2(n) < r_n < R_1(n)                          n >= 1
    michel       |e^(r_n) - 1 - 1/(12n) - 1/(288 n^2)|
                     <= 1/(360 n^3) + 1/(108 n^4)               n >= 3

plus the truncation sandwich R_{2n}(x) < ln Gamma(x) - P(x) < R_{2m+1}(x)
for all x > 0 and n, m >= 0, checked against the integral oracle.

A verdict is issued only when the margin clears the arithmetic error
envelope; anything tighter raises InconclusiveError instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from mpmath import libmp

from .errors import DomainError, InconclusiveError, ResourceError, ValidityError
from .mpcore import BigFloat, PrecisionCtx, raw_expm1, to_raw
from .oracle import FACTORIAL_CAP, ln_factorial_range, lngamma_binet2
from .series import _half_ln_2pi_raw, _main_term_raw, _remainder_raw

__all__ = [
    "FAMILY_MIN_N",
    "SequencePoint",
    "BoundReport",
    "sequence_point",
    "check_bound",
    "bound_sweep",
    "impens_sandwich",
    "aissen_ratio",
]

_RND = "n"

FAMILY_MIN_N = {
    "robbins": 1,
    "maria": 1,
    "hummel": 2,
    "nanjundiah": 1,
    "michel": 3,
}

GUARD = 32


@dataclass(frozen=True)
class SequencePoint:
    n: int
    r_n: BigFloat
    c_n: BigFloat
    v_n: BigFloat


@dataclass(frozen=True)
class BoundReport:
    """One inequality instance with both sides evaluated.

    ``lhs``/``rhs`` are None for one-sided families.  ``margin`` is the
    signed distance of ``mid`` to the nearest bound (negative would mean a
    violation); ``holds`` is only ever set after the margin cleared the
    arithmetic error envelope.
    """

    family: str
    n: int
    lhs: BigFloat | None
    mid: BigFloat
    rhs: BigFloat | None
    holds: bool
    margin: BigFloat


def _lnfact_raw(n: int, wp: int):
    if n <= 1:
        return libmp.fzero
    return libmp.mpf_log(libmp.from_int(math.factorial(n), wp, _RND), wp, _RND)


def _r_raw(n: int, lnfact, wp: int):
    n_raw = libmp.from_int(n)
    lnn = libmp.mpf_log(n_raw, wp, _RND)
    acc = libmp.mpf_add(lnfact, n_raw, wp, _RND)
    acc = libmp.mpf_sub(acc, libmp.mpf_mul(n_raw, lnn, wp, _RND), wp, _RND)
    acc = libmp.mpf_sub(acc, libmp.mpf_shift(lnn, -1), wp, _RND)
    return libmp.mpf_sub(acc, _half_ln_2pi_raw(wp), wp, _RND)


def _scale_threshold(n: int, wp: int):
    """Absolute error envelope for values derived from ln n! at wp bits."""
    scale_mag = max(1, int(math.log2(max(2.0, (n + 2) * (math.log(n + 2) + 1)))))
    return libmp.from_man_exp(1, scale_mag - wp + 10)


def sequence_point(n: int, ctx: PrecisionCtx) -> SequencePoint:
    """r_n, c_n, v_n at ctx precision, all from the exact factorial."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be an integer >= 1")
    if n > FACTORIAL_CAP:
        raise ResourceError(f"n={n} exceeds the factorial cap {FACTORIAL_CAP}")
    wp = ctx.bits + GUARD
    lnfact = _lnfact_raw(n, wp)
    n_raw = libmp.from_int(n)
    lnn = libmp.mpf_log(n_raw, wp, _RND)
    r = _r_raw(n, lnfact, wp)
    c = libmp.mpf_mul(libmp.mpf_add(n_raw, libmp.fhalf, wp, _RND), lnn, wp, _RND)
    c = libmp.mpf_sub(c, n_raw, wp, _RND)
    c = libmp.mpf_add(c, libmp.mpf_sub(libmp.fone, lnfact, wp, _RND), wp, _RND)
    v_log = libmp.mpf_sub(libmp.mpf_mul(n_raw, lnn, wp, _RND), n_raw, wp, _RND)
    v_log = libmp.mpf_sub(v_log, lnfact, wp, _RND)
    v = libmp.mpf_exp(v_log, wp, _RND)
    return SequencePoint(
        n=n,
        r_n=BigFloat.from_raw(r, ctx),
        c_n=BigFloat.from_raw(c, ctx),
        v_n=BigFloat.from_raw(v, ctx),
    )


def _rational_raw(q: Fraction, wp: int):
    return libmp.from_rational(q.numerator, q.denominator, wp, _RND)


def _evaluate_family(family: str, n: int, lnfact, wp: int, ctx: PrecisionCtx) -> BoundReport:
    r = _r_raw(n, lnfact, wp)
    lhs_raw = rhs_raw = None
    if family == "robbins":
        lhs_raw = _rational_raw(Fraction(1, 12 * n + 1), wp)
        rhs_raw = _rational_raw(Fraction(1, 12 * n), wp)
        mid_raw = r
    elif family == "maria":
        # [12n + 3/(2(2n+1))]^(-1) = (4n+2) / (48 n^2 + 24 n + 3)
        lhs_raw = _rational_raw(Fraction(4 * n + 2, 48 * n * n + 24 * n + 3), wp)
        mid_raw = r
    elif family == "hummel":
        lhs_raw = _rational_raw(Fraction(11, 12), wp)
        rhs_raw = libmp.fone
        mid_raw = libmp.mpf_add(r, _half_ln_2pi_raw(wp), wp, _RND)
    elif family == "nanjundiah":
        n_raw = libmp.from_int(n)
        lhs_raw = _remainder_raw(n_raw, 2, wp)
        rhs_raw = _remainder_raw(n_raw, 1, wp)
        mid_raw = r
    elif family == "michel":
        e_r = libmp.mpf_exp(r, wp, _RND)
        probe = libmp.mpf_sub(e_r, libmp.fone, wp, _RND)
        probe = libmp.mpf_sub(probe, _rational_raw(Fraction(1, 12 * n), wp), wp, _RND)
        probe = libmp.mpf_sub(probe, _rational_raw(Fraction(1, 288 * n * n), wp), wp, _RND)
        mid_raw = libmp.mpf_abs(probe)
        rhs_raw = _rational_raw(
            Fraction(1, 360 * n**3) + Fraction(1, 108 * n**4), wp)
    else:
        raise DomainError(f"unknown family {family!r}")

    margins = []
    if lhs_raw is not None:
        margins.append(libmp.mpf_sub(mid_raw, lhs_raw, wp, _RND))
    if rhs_raw is not None:
        margins.append(libmp.mpf_sub(rhs_raw, mid_raw, wp, _RND))
    margin = margins[0]
    for m in margins[1:]:
        if libmp.mpf_lt(m, margin):
            margin = m
    threshold = _scale_threshold(n, wp)
    if libmp.mpf_le(libmp.mpf_abs(margin), threshold):
        raise InconclusiveError(
            f"{family} at n={n}: margin within the arithmetic envelope at "
            f"{ctx.bits} bits"
        )
    holds = libmp.mpf_gt(margin, libmp.fzero)
    return BoundReport(
        family=family,
        n=n,
        lhs=None if lhs_raw is None else BigFloat.from_raw(lhs_raw, ctx),
        mid=BigFloat.from_raw(mid_raw, ctx),
        rhs=None if rhs_raw is None else BigFloat.from_raw(rhs_raw, ctx),
        holds=holds,
        margin=BigFloat.from_raw(margin, ctx),
    )


def check_bound(family: str, n: int, ctx: PrecisionCtx) -> BoundReport:
    """Evaluate one family at one index; ValidityError below its range."""
    if family not in FAMILY_MIN_N:
        raise DomainError(f"unknown family {family!r}")
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be an integer >= 1")
    if n < FAMILY_MIN_N[family]:
        raise ValidityError(
            f"{family} is stated for n >= {FAMILY_MIN_N[family]}, got n={n}"
        )
    if n > FACTORIAL_CAP:
        raise ResourceError(f"n={n} exceeds the factorial cap {FACTORIAL_CAP}")
    wp = ctx.bits + GUARD
    return _evaluate_family(family, n, _lnfact_raw(n, wp), wp, ctx)


def bound_sweep(families: list[str], n_max: int, ctx: PrecisionCtx,
                ) -> Iterator[BoundReport | InconclusiveError]:
    """All requested families over n = 1..n_max, sharing one running
    exact-factorial pass.  Inconclusive rows are yielded as the error
    object instead of a report, so sweeps keep going."""
    for family in families:
        if family not in FAMILY_MIN_N:
            raise DomainError(f"unknown family {family!r}")
    if n_max < min(FAMILY_MIN_N[f] for f in families):
        raise ValidityError(
            f"n_max={n_max} is below the validity start of {families}"
        )
    wp = ctx.bits + GUARD
    for n, lnfact in ln_factorial_range(n_max, wp):
        for family in families:
            if n < FAMILY_MIN_N[family]:
                continue
            try:
                yield _evaluate_family(family, n, lnfact, wp, ctx)
            except InconclusiveError as exc:
                yield exc


def impens_sandwich(x, n: int, m: int, ctx: PrecisionCtx) -> BoundReport:
    """Strict sandwich R_{2n}(x) < ln Gamma(x) - P(x) < R_{2m+1}(x), with
    the middle term from the integral oracle.

    Holds is asserted only when both gaps exceed the oracle error bound.
    """
    if n < 0 or m < 0:
        raise DomainError("orders n, m must be >= 0")
    # the verdict is computed with 64 extra bits so that rounding the
    # oracle value to ctx.bits cannot swallow a tight-but-real margin
    work = PrecisionCtx(ctx.bits + 64)
    wp = work.bits + GUARD
    x_raw = to_raw(x, wp)
    if libmp.mpf_le(x_raw, libmp.fzero):
        raise DomainError("x must be positive")
    ov = lngamma_binet2(BigFloat(x_raw, work.bits), work)
    mid_raw = libmp.mpf_sub(ov.value.raw, _main_term_raw(x_raw, wp), wp, _RND)
    lhs_raw = _remainder_raw(x_raw, 2 * n, wp)
    rhs_raw = _remainder_raw(x_raw, 2 * m + 1, wp)
    lo = libmp.mpf_sub(mid_raw, lhs_raw, wp, _RND)
    hi = libmp.mpf_sub(rhs_raw, mid_raw, wp, _RND)
    margin = lo if libmp.mpf_lt(lo, hi) else hi
    threshold = libmp.mpf_add(ov.error_bound.raw, _scale_threshold(int(abs(float(x))) + 2, wp),
                              wp, _RND)
    if libmp.mpf_le(libmp.mpf_abs(margin), threshold):
        raise InconclusiveError(
            f"sandwich at x={x}, n={n}, m={m}: margin within the oracle "
            f"error bound at {ctx.bits} bits"
        )
    return BoundReport(
        family="impens",
        n=n,
        lhs=BigFloat.from_raw(lhs_raw, ctx),
        mid=BigFloat.from_raw(mid_raw, ctx),
        rhs=BigFloat.from_raw(rhs_raw, ctx),
        holds=libmp.mpf_gt(margin, libmp.fzero),
        margin=BigFloat.from_raw(margin, ctx),
    )


def aissen_ratio(n: int, ctx: PrecisionCtx) -> BigFloat:
    """n (y_{n+1}/y_n - 1) with y_n = sqrt(n) v_n; tends to 0 like O(1/n),
    certifying v_n ~ C n^(-1/2)."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be an integer >= 1")
    if n + 1 > FACTORIAL_CAP:
        raise ResourceError(f"n={n} exceeds the factorial cap {FACTORIAL_CAP}")
    wp = ctx.bits + GUARD

    def ln_y(k: int):
        lnfact = _lnfact_raw(k, wp)
        k_raw = libmp.from_int(k)
        lnk = libmp.mpf_log(k_raw, wp, _RND)
        acc = libmp.mpf_shift(lnk, -1)
        acc = libmp.mpf_add(acc, libmp.mpf_mul(k_raw, lnk, wp, _RND), wp, _RND)
        acc = libmp.mpf_sub(acc, k_raw, wp, _RND)
        return libmp.mpf_sub(acc, lnfact, wp, _RND)

    diff = libmp.mpf_sub(ln_y(n + 1), ln_y(n), wp, _RND)
    ratio_m1 = raw_expm1(diff, wp)
    return BigFloat.from_raw(libmp.mpf_mul_int(ratio_m1, n, wp, _RND), ctx)
