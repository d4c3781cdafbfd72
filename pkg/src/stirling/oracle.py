"""Independent high-precision references for ln Gamma and factorials.

None of the evaluators here shares a code path with the truncated-series
module: the integral representation

    ln Gamma(z) = P(z) + 2 * integral_0^inf arctan(t/z) / (e^(2 pi t) - 1) dt

(Binet's second formula) is evaluated by doubling-node tanh-sinh
quadrature with a closed-form tail bound; the limit definition

    Gamma(z) = lim n! n^z / (z (z+1) ... (z+n))

and the infinite product

    1/Gamma(z) = z e^(gamma z) prod_{n>=1} (1 + z/n) e^(-z/n)

serve as slower cross-checks with empirical error estimates.  Exact
integer factorials anchor everything at integer arguments.

Every result carries an explicit ``error_bound`` so downstream inequality
checks can refuse to conclude when a margin falls inside the bound.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from mpmath import libmp

from .errors import (ConvergenceError, DomainError, PrecisionError,
                     ResourceError)
from .mpcore import BigFloat, PrecisionCtx, raw_expm1, raw_log1p, to_raw
from .quadrature import ts_nodes

__all__ = [
    "OracleValue",
    "EulerGamma",
    "euler_gamma",
    "euler_gamma_info",
    "ln_factorial_exact",
    "lngamma_binet2",
    "lngamma_euler_limit",
    "weierstrass_inv_gamma",
    "check_duplication",
    "check_multiplication",
    "gamma_half_integer",
]

_RND = "n"

FACTORIAL_CAP = 10**5
HALF_INTEGER_CAP = 2 * 10**4
BINET_MAX_LEVEL = 14


@dataclass(frozen=True)
class OracleValue:
    value: BigFloat
    method: str  # exact_factorial | binet2 | euler_limit | weierstrass
    error_bound: BigFloat


# -- Euler's constant ---------------------------------------------------

# 205 decimal digits; good to ~680 bits.  Verified at import of first use
# against the harmonic-sum asymptotics H_n - ln n - 1/(2n) -> gamma.
_GAMMA_LITERAL = (
    "0.5772156649015328606065120900824024310421593359399235988057672348848677"
    "2677766467093694706329174674951463144724980708248096050401448654283622417399"
    "7644923536253500333742937337737673942792595258247094916008"
)
_GAMMA_LITERAL_BITS = 670

_gamma_state: dict = {}
_gamma_lock = threading.Lock()


def _gamma_self_check() -> float:
    """Residual of |H_n - ln n - 1/(2n) - gamma| at n = 10^6 (must be tiny)."""
    if "residual" in _gamma_state:
        return _gamma_state["residual"]
    with _gamma_lock:
        if "residual" in _gamma_state:
            return _gamma_state["residual"]
        n = 10**6
        harmonic = math.fsum(1.0 / k for k in range(1, n + 1))
        residual = harmonic - math.log(n) - 0.5 / n - float(_GAMMA_LITERAL[:20])
        if abs(residual) >= 1e-11:
            raise PrecisionError(
                f"Euler-gamma literal failed its harmonic self-check: {residual!r}"
            )
        _gamma_state["residual"] = residual
        return residual


@dataclass(frozen=True)
class EulerGamma:
    decimal_literal: str
    self_check_residual: float


def euler_gamma_info() -> EulerGamma:
    resid = _gamma_self_check()
    return EulerGamma(decimal_literal=_GAMMA_LITERAL, self_check_residual=resid)


def _gamma_raw(wp: int):
    if wp > _GAMMA_LITERAL_BITS:
        raise PrecisionError(
            f"gamma literal supports at most {_GAMMA_LITERAL_BITS} working bits"
        )
    _gamma_self_check()
    return libmp.from_str(_GAMMA_LITERAL, wp, _RND)


def euler_gamma(ctx: PrecisionCtx) -> BigFloat:
    """Euler's constant from the checked literal."""
    return BigFloat.from_raw(_gamma_raw(min(ctx.bits + 16, _GAMMA_LITERAL_BITS)), ctx)


# -- shared raw pieces ---------------------------------------------------


def _require_positive(z_raw, what: str = "z"):
    if libmp.mpf_le(z_raw, libmp.fzero):
        raise DomainError(f"{what} must be positive")


def _oracle_main_term(z_raw, wp: int):
    # deliberately written out here: the oracle keeps its own code path
    lnz = libmp.mpf_log(z_raw, wp, _RND)
    two_pi = libmp.mpf_shift(libmp.mpf_pi(wp, _RND), 1)
    half_l2p = libmp.mpf_shift(libmp.mpf_log(two_pi, wp, _RND), -1)
    acc = libmp.mpf_mul(z_raw, lnz, wp, _RND)
    acc = libmp.mpf_sub(acc, z_raw, wp, _RND)
    acc = libmp.mpf_sub(acc, libmp.mpf_shift(lnz, -1), wp, _RND)
    return libmp.mpf_add(acc, half_l2p, wp, _RND)


def _ulp_raw(value_raw, bits: int, count: int = 8):
    sign, man, exp, bc = value_raw
    mag = (exp + bc) if man else 1
    return libmp.from_man_exp(count, mag - bits)


# -- exact factorials ----------------------------------------------------


def ln_factorial_exact(n: int, ctx: PrecisionCtx) -> OracleValue:
    """ln(n!) via the exact big integer and one logarithm (<= 2 ulp)."""
    if not isinstance(n, int) or n < 0:
        raise DomainError("n must be a non-negative integer")
    if n > FACTORIAL_CAP:
        raise ResourceError(f"n={n} exceeds the exact-factorial cap {FACTORIAL_CAP}")
    if n <= 1:
        zero = BigFloat.from_raw(libmp.fzero, ctx)
        return OracleValue(value=zero, method="exact_factorial", error_bound=zero)
    wp = ctx.wprec()
    f_raw = libmp.from_int(math.factorial(n), wp, _RND)
    val = libmp.mpf_log(f_raw, wp, _RND)
    value = BigFloat.from_raw(val, ctx)
    bound = BigFloat.from_raw(_ulp_raw(val, ctx.bits, 2), ctx)
    return OracleValue(value=value, method="exact_factorial", error_bound=bound)


def ln_factorial_range(n_max: int, wp: int):
    """Yield (n, ln n! at wp bits) for n = 1..n_max, from a running exact
    product: each value's error is one rounding, never accumulated."""
    if n_max > FACTORIAL_CAP:
        raise ResourceError(f"n_max={n_max} exceeds the cap {FACTORIAL_CAP}")
    product = 1
    for n in range(1, n_max + 1):
        product *= n
        if n == 1:
            yield n, libmp.fzero
        else:
            yield n, libmp.mpf_log(libmp.from_int(product, wp, _RND), wp, _RND)


# -- Binet's second formula ----------------------------------------------

_BINET_CACHE: dict = {}
_BINET_LOCK = threading.Lock()


def _binet_T(bits: int, z_low: float) -> int:
    """Upper integration limit making the analytic tail negligible.

    Tail of the integrand past T is below
        (1/z) e^(-2 pi T) (T/(2 pi) + 1/(4 pi^2)) / (1 - e^(-2 pi T)),
    using arctan(x) <= x; choose the smallest integer T pushing that under
    2^-(bits+24).
    """
    z_low = max(min(z_low, 0.125), 1e-300)
    t = 4.0
    for _ in range(6):
        t = ((bits + 24) * math.log(2.0)
             + math.log(1.01 * (t / (2 * math.pi) + 0.0254) / z_low)) / (2 * math.pi)
    return max(2, int(math.ceil(t)))


def _binet_level_nodes(wp: int, T: int, level: int):
    """(t, g) pairs with t = T x and g = w / (e^(2 pi t) - 1), cached."""
    key = (wp, T, level)
    got = _BINET_CACHE.get(key)
    if got is not None:
        return got
    with _BINET_LOCK:
        got = _BINET_CACHE.get(key)
        if got is not None:
            return got
        two_pi = libmp.mpf_shift(libmp.mpf_pi(wp + 16, _RND), 1)
        out = []
        for x, w in ts_nodes(wp, level):
            t = libmp.mpf_mul_int(x, T, wp, _RND)
            denom = raw_expm1(libmp.mpf_mul(two_pi, t, wp + 16, _RND), wp)
            g = libmp.mpf_div(w, denom, wp, _RND)
            out.append((t, g))
        _BINET_CACHE[key] = out
        return out


def _binet_integral(z_raw, bits: int):
    """(2 * integral, quadrature diff, tail bound), all raw at wp."""
    wp = bits + 64
    z_float = libmp.to_float(z_raw)
    T = _binet_T(bits, z_float)
    target = libmp.from_man_exp(1, -(bits + 16))
    total = libmp.fzero
    prev = None
    diff = None
    for level in range(0, BINET_MAX_LEVEL + 1):
        new = libmp.fzero
        for t, g in _binet_level_nodes(wp, T, level):
            a = libmp.mpf_atan(libmp.mpf_div(t, z_raw, wp, _RND), wp, _RND)
            new = libmp.mpf_add(new, libmp.mpf_mul(g, a, wp, _RND), wp, _RND)
        total = libmp.mpf_add(total, new, wp, _RND)
        estimate = libmp.mpf_mul_int(libmp.mpf_shift(total, -level), T, wp, _RND)
        if prev is not None and level >= 4:
            diff = libmp.mpf_abs(libmp.mpf_sub(estimate, prev, wp, _RND))
            if libmp.mpf_le(diff, target):
                prev = estimate
                break
        prev = estimate
    else:
        raise ConvergenceError(
            f"Binet quadrature missed its target at level {BINET_MAX_LEVEL} "
            f"(bits={bits})"
        )
    # closed-form tail bound (see _binet_T)
    t_raw = libmp.from_int(T)
    two_pi = libmp.mpf_shift(libmp.mpf_pi(wp, _RND), 1)
    decay = libmp.mpf_exp(libmp.mpf_neg(libmp.mpf_mul(two_pi, t_raw, wp, _RND)), wp, _RND)
    poly = libmp.mpf_add(
        libmp.mpf_div(t_raw, two_pi, wp, _RND),
        libmp.mpf_div(libmp.fone, libmp.mpf_mul(two_pi, two_pi, wp, _RND), wp, _RND),
        wp, _RND)
    tail = libmp.mpf_div(libmp.mpf_mul(decay, poly, wp, _RND), z_raw, wp, _RND)
    tail = libmp.mpf_mul(tail, libmp.from_str("1.01", wp, _RND), wp, _RND)
    return (libmp.mpf_shift(prev, 1), libmp.mpf_shift(diff, 1),
            libmp.mpf_shift(tail, 1))


def lngamma_binet2(z, ctx: PrecisionCtx) -> OracleValue:
    """ln Gamma(z) from the arctan integral; error bound from the last
    quadrature difference plus the analytic tail."""
    wp = ctx.bits + 64
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    integral, qdiff, tail = _binet_integral(z_raw, ctx.bits)
    val = libmp.mpf_add(_oracle_main_term(z_raw, wp), integral, wp, _RND)
    bound = libmp.mpf_add(qdiff, tail, wp, _RND)
    bound = libmp.mpf_add(bound, _ulp_raw(val, ctx.bits, 8), wp, _RND)
    return OracleValue(
        value=BigFloat.from_raw(val, ctx),
        method="binet2",
        error_bound=BigFloat.from_raw(bound, ctx),
    )


# -- Euler's limit definition ---------------------------------------------


def _euler_limit_raw(z_raw, n: int, wp: int):
    lnfact = libmp.mpf_log(libmp.from_int(math.factorial(n), wp, _RND), wp, _RND)
    lnn = libmp.mpf_log(libmp.from_int(n), wp, _RND)
    prod = libmp.fone
    for k in range(0, n + 1):
        prod = libmp.mpf_mul(prod, libmp.mpf_add(z_raw, libmp.from_int(k), wp, _RND), wp, _RND)
    acc = libmp.mpf_add(lnfact, libmp.mpf_mul(z_raw, lnn, wp, _RND), wp, _RND)
    return libmp.mpf_sub(acc, libmp.mpf_log(prod, wp, _RND), wp, _RND)


def lngamma_euler_limit(z, n: int, ctx: PrecisionCtx) -> OracleValue:
    """ln of n! n^z / (z (z+1) ... (z+n)); converges to ln Gamma(z) at O(1/n).

    The error bound is empirical: the O(1/n) rate means the distance to the
    limit is about twice the observed step to the doubled index, so the
    bound is 3 |L(n) - L(2n)| plus roundoff.
    """
    if not isinstance(n, int) or n < 2:
        raise DomainError("n must be an integer >= 2")
    if n > FACTORIAL_CAP:
        raise ResourceError(f"n={n} exceeds the cap {FACTORIAL_CAP}")
    wp = ctx.bits + 48
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    val = _euler_limit_raw(z_raw, n, wp)
    val2 = _euler_limit_raw(z_raw, 2 * n, wp)
    gap = libmp.mpf_abs(libmp.mpf_sub(val, val2, wp, _RND))
    bound = libmp.mpf_mul_int(gap, 3, wp, _RND)
    bound = libmp.mpf_add(bound, _ulp_raw(val, ctx.bits, 8), wp, _RND)
    return OracleValue(
        value=BigFloat.from_raw(val, ctx),
        method="euler_limit",
        error_bound=BigFloat.from_raw(bound, ctx),
    )


# -- Weierstrass product ---------------------------------------------------


def weierstrass_inv_gamma(z, K: int, ctx: PrecisionCtx) -> OracleValue:
    """1/Gamma(z) ~ z e^(gamma z) prod_{n=1..K} (1 + z/n) e^(-z/n).

    The omitted tail multiplies the result by exp(tau) with
    0 < tau <= z^2/(2K), which dominates the error bound.
    """
    if not isinstance(K, int) or K < 1:
        raise DomainError("K must be an integer >= 1")
    wp = min(ctx.bits + 48, _GAMMA_LITERAL_BITS)
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    s = libmp.fzero
    for n in range(1, K + 1):
        x = libmp.mpf_div(z_raw, libmp.from_int(n), wp, _RND)
        s = libmp.mpf_add(s, libmp.mpf_sub(raw_log1p(x, wp), x, wp, _RND), wp, _RND)
    exponent = libmp.mpf_add(libmp.mpf_mul(_gamma_raw(wp), z_raw, wp, _RND), s, wp, _RND)
    val = libmp.mpf_mul(z_raw, libmp.mpf_exp(exponent, wp, _RND), wp, _RND)
    # |relative tail| <= z^2/(2K); add literal and roundoff allowances
    z2 = libmp.mpf_mul(z_raw, z_raw, wp, _RND)
    tau = libmp.mpf_div(z2, libmp.from_int(2 * K), wp, _RND)
    rel = libmp.mpf_add(tau, libmp.from_man_exp(1, -(ctx.bits + 2)), wp, _RND)
    bound = libmp.mpf_mul(libmp.mpf_abs(val), rel, wp, _RND)
    bound = libmp.mpf_mul(bound, libmp.from_str("1.05", wp, _RND), wp, _RND)
    return OracleValue(
        value=BigFloat.from_raw(val, ctx),
        method="weierstrass",
        error_bound=BigFloat.from_raw(bound, ctx),
    )


# -- functional-equation consistency checks --------------------------------


def check_duplication(z, ctx: PrecisionCtx) -> BigFloat:
    """Residual of ln Gamma(2z) = (2z-1) ln 2 - (1/2) ln pi
    + ln Gamma(z) + ln Gamma(z + 1/2), all sides from the integral oracle."""
    wp = ctx.wprec()
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    two_z = libmp.mpf_shift(z_raw, 1)
    g2z = lngamma_binet2(BigFloat(two_z, ctx.bits), ctx).value
    gz = lngamma_binet2(BigFloat(z_raw, ctx.bits), ctx).value
    gz_half = lngamma_binet2(
        BigFloat(libmp.mpf_add(z_raw, libmp.fhalf, wp, _RND), ctx.bits), ctx).value
    ln2 = libmp.mpf_log(libmp.from_int(2), wp, _RND)
    lnpi = libmp.mpf_log(libmp.mpf_pi(wp, _RND), wp, _RND)
    rhs = libmp.mpf_mul(libmp.mpf_sub(two_z, libmp.fone, wp, _RND), ln2, wp, _RND)
    rhs = libmp.mpf_sub(rhs, libmp.mpf_shift(lnpi, -1), wp, _RND)
    rhs = libmp.mpf_add(rhs, gz.raw, wp, _RND)
    rhs = libmp.mpf_add(rhs, gz_half.raw, wp, _RND)
    resid = libmp.mpf_abs(libmp.mpf_sub(g2z.raw, rhs, wp, _RND))
    return BigFloat.from_raw(resid, ctx)


def check_multiplication(m: int, z, ctx: PrecisionCtx) -> BigFloat:
    """Residual of the order-m multiplication formula
    ln Gamma(mz) = (1-m) ln sqrt(2 pi) + (mz - 1/2) ln m
    + sum_{k=0..m-1} ln Gamma(z + k/m)."""
    if m not in (2, 3, 4, 5):
        raise DomainError("m must be one of 2, 3, 4, 5")
    wp = ctx.wprec()
    z_raw = to_raw(z, wp)
    _require_positive(z_raw)
    mz = libmp.mpf_mul_int(z_raw, m, wp, _RND)
    g_mz = lngamma_binet2(BigFloat(mz, ctx.bits), ctx).value
    two_pi = libmp.mpf_shift(libmp.mpf_pi(wp, _RND), 1)
    ln_sqrt_2pi = libmp.mpf_shift(libmp.mpf_log(two_pi, wp, _RND), -1)
    ln_m = libmp.mpf_log(libmp.from_int(m), wp, _RND)
    rhs = libmp.mpf_mul_int(ln_sqrt_2pi, 1 - m, wp, _RND)
    rhs = libmp.mpf_add(
        rhs,
        libmp.mpf_mul(libmp.mpf_sub(mz, libmp.fhalf, wp, _RND), ln_m, wp, _RND),
        wp, _RND)
    for k in range(m):
        shift = libmp.from_rational(k, m, wp, _RND)
        zk = libmp.mpf_add(z_raw, shift, wp, _RND)
        rhs = libmp.mpf_add(rhs, lngamma_binet2(BigFloat(zk, ctx.bits), ctx).value.raw,
                            wp, _RND)
    resid = libmp.mpf_abs(libmp.mpf_sub(g_mz.raw, rhs, wp, _RND))
    return BigFloat.from_raw(resid, ctx)


def gamma_half_integer(k: int, ctx: PrecisionCtx) -> BigFloat:
    """Gamma(k/2) in exact form: (k/2 - 1)! for even k,
    (k-2)!! / 2^((k-1)/2) * sqrt(pi) for odd k."""
    if not isinstance(k, int) or k < 1:
        raise DomainError("k must be an integer >= 1")
    if k > HALF_INTEGER_CAP:
        raise ResourceError(f"k={k} exceeds the half-integer cap {HALF_INTEGER_CAP}")
    wp = ctx.wprec()
    if k % 2 == 0:
        val = libmp.from_int(math.factorial(k // 2 - 1), wp, _RND)
        return BigFloat.from_raw(val, ctx)
    dfact = 1
    for j in range(k - 2, 1, -2):
        dfact *= j
    q = Fraction(dfact, 1 << ((k - 1) // 2))
    q_raw = libmp.from_rational(q.numerator, q.denominator, wp, _RND)
    sqrt_pi = libmp.mpf_sqrt(libmp.mpf_pi(wp, _RND), wp, _RND)
    return BigFloat.from_raw(libmp.mpf_mul(q_raw, sqrt_pi, wp, _RND), ctx)
