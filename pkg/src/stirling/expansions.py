"""Alternative identities and expansions for the factorial.

Four independent routes are implemented:

* Feller's telescoping identity
      ln(n!) - (1/2) ln n = I(n) - I(1/2) + sum_{k<n} (a_k - b_k) + a_n,
  with I(n) = n ln n - n and a_k, b_k the areas between ln t and its
  midpoint step; the series sum_{k>=1}(a_k - b_k) - I(1/2) converges to
  (1/2) ln(2 pi) at rate O(1/K).  The integrals collapse to closed forms
  through the antiderivative t ln t - t, so the identity check is exact up
  to roundoff.

* The Marsaglia-Marsaglia series: reversion of w - ln(1+w) = z^2/2 gives
  G(z) = 1 + sum b_k z^k with exact rational b_k, and

      n! ~ n^(n+1) e^(-n) sum_k k b_k (2/n)^(k/2) Gamma(k/2),

  where only odd k contribute (even k multiply the vanishing odd-power
  Gaussian moments integral z^(k-1) e^(-n z^2 / 2) over the real line).

* Namias' ratio F(x) = Gamma(x) / exp(P(x)) and its duplication-induced
  functional equation  F(2n) / (F(n) F(n - 1/2)) = sqrt(e) (1 - 1/(2n))^n.
  Dividing by exp(P) rather than by P itself is forced: P is the log-scale
  main term, and the quotient by P would not satisfy this equation.

* Mermin's product  e^(r_n) = prod_{k>=n} e^(-1) (1 + 1/k)^(k + 1/2),
  evaluated in log space; each factor contributes about 1/(12 k^2), so the
  partial product from n to K sits within 1/(12K) of r_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import libmp

from .errors import DomainError, ResourceError
from .mpcore import BigFloat, PrecisionCtx, raw_log1p, to_raw
from .oracle import FACTORIAL_CAP, gamma_half_integer, lngamma_binet2
from .series import main_term_P

__all__ = [
    "FellerTerm",
    "MarsagliaSeries",
    "feller_term",
    "feller_identity_residual",
    "feller_constant",
    "marsaglia_coeffs",
    "reversion_residual",
    "marsaglia_factorial",
    "namias_residual",
    "mermin_partial_product",
]

_RND = "n"
GUARD = 48
MARSAGLIA_CAP = 200


# -- Feller ---------------------------------------------------------------


@dataclass(frozen=True)
class FellerTerm:
    k: int
    a_k: BigFloat
    b_k: BigFloat


def _feller_ab_raw(k: int, wp: int):
    """Closed forms via t ln t - t:
    a_k = (1/2) ln k - k ln k + (k - 1/2) ln(k - 1/2) + 1/2
    b_k = (k + 1/2) ln(k + 1/2) - k ln k - (1/2) ln k - 1/2
    """
    k_raw = libmp.from_int(k)
    lnk = libmp.mpf_log(k_raw, wp, _RND)
    k_minus = libmp.mpf_sub(k_raw, libmp.fhalf, wp, _RND)
    k_plus = libmp.mpf_add(k_raw, libmp.fhalf, wp, _RND)
    k_lnk = libmp.mpf_mul(k_raw, lnk, wp, _RND)
    a = libmp.mpf_shift(lnk, -1)
    a = libmp.mpf_sub(a, k_lnk, wp, _RND)
    a = libmp.mpf_add(a, libmp.mpf_mul(k_minus, libmp.mpf_log(k_minus, wp, _RND), wp, _RND), wp, _RND)
    a = libmp.mpf_add(a, libmp.fhalf, wp, _RND)
    b = libmp.mpf_mul(k_plus, libmp.mpf_log(k_plus, wp, _RND), wp, _RND)
    b = libmp.mpf_sub(b, k_lnk, wp, _RND)
    b = libmp.mpf_sub(b, libmp.mpf_shift(lnk, -1), wp, _RND)
    b = libmp.mpf_sub(b, libmp.fhalf, wp, _RND)
    return a, b


def feller_term(k: int, ctx: PrecisionCtx) -> FellerTerm:
    if not isinstance(k, int) or k < 1:
        raise DomainError("k must be an integer >= 1")
    wp = ctx.bits + GUARD
    a, b = _feller_ab_raw(k, wp)
    return FellerTerm(k=k, a_k=BigFloat.from_raw(a, ctx), b_k=BigFloat.from_raw(b, ctx))


def _i_half_raw(wp: int):
    # I(1/2) = -(1/2) ln 2 - 1/2
    ln2 = libmp.mpf_log(libmp.from_int(2), wp, _RND)
    return libmp.mpf_neg(libmp.mpf_add(libmp.mpf_shift(ln2, -1), libmp.fhalf, wp, _RND))


def feller_identity_residual(n: int, ctx: PrecisionCtx) -> BigFloat:
    """|ln(n!) - (1/2) ln n - [I(n) - I(1/2) + sum_{k<n}(a_k - b_k) + a_n]|,
    with ln(n!) exact; only roundoff should remain."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be an integer >= 1")
    if n > FACTORIAL_CAP:
        raise ResourceError(f"n={n} exceeds the factorial cap {FACTORIAL_CAP}")
    wp = ctx.bits + GUARD
    s = libmp.fzero
    for k in range(1, n):
        a, b = _feller_ab_raw(k, wp)
        s = libmp.mpf_add(s, libmp.mpf_sub(a, b, wp, _RND), wp, _RND)
    a_n, _ = _feller_ab_raw(n, wp)
    n_raw = libmp.from_int(n)
    lnn = libmp.mpf_log(n_raw, wp, _RND)
    i_n = libmp.mpf_sub(libmp.mpf_mul(n_raw, lnn, wp, _RND), n_raw, wp, _RND)
    rhs = libmp.mpf_sub(i_n, _i_half_raw(wp), wp, _RND)
    rhs = libmp.mpf_add(rhs, s, wp, _RND)
    rhs = libmp.mpf_add(rhs, a_n, wp, _RND)
    lnfact = libmp.fzero if n == 1 else libmp.mpf_log(
        libmp.from_int(math.factorial(n), wp, _RND), wp, _RND)
    lhs = libmp.mpf_sub(lnfact, libmp.mpf_shift(lnn, -1), wp, _RND)
    return BigFloat.from_raw(libmp.mpf_abs(libmp.mpf_sub(lhs, rhs, wp, _RND)), ctx)


def feller_residual_sweep(n_max: int, ctx: PrecisionCtx) -> list[BigFloat]:
    """Residuals for n = 1..n_max, sharing one pass over the a/b terms."""
    if n_max > FACTORIAL_CAP:
        raise ResourceError(f"n_max={n_max} exceeds the cap {FACTORIAL_CAP}")
    wp = ctx.bits + GUARD
    i_half = _i_half_raw(wp)
    out = []
    s = libmp.fzero  # sum_{k<n} (a_k - b_k)
    prev_ab = None
    product = 1
    for n in range(1, n_max + 1):
        if prev_ab is not None:
            s = libmp.mpf_add(s, libmp.mpf_sub(prev_ab[0], prev_ab[1], wp, _RND), wp, _RND)
        a_n, b_n = _feller_ab_raw(n, wp)
        prev_ab = (a_n, b_n)
        product *= n
        lnfact = libmp.fzero if n == 1 else libmp.mpf_log(
            libmp.from_int(product, wp, _RND), wp, _RND)
        n_raw = libmp.from_int(n)
        lnn = libmp.mpf_log(n_raw, wp, _RND)
        i_n = libmp.mpf_sub(libmp.mpf_mul(n_raw, lnn, wp, _RND), n_raw, wp, _RND)
        rhs = libmp.mpf_sub(i_n, i_half, wp, _RND)
        rhs = libmp.mpf_add(rhs, s, wp, _RND)
        rhs = libmp.mpf_add(rhs, a_n, wp, _RND)
        lhs = libmp.mpf_sub(lnfact, libmp.mpf_shift(lnn, -1), wp, _RND)
        out.append(BigFloat.from_raw(
            libmp.mpf_abs(libmp.mpf_sub(lhs, rhs, wp, _RND)), ctx))
    return out


def feller_constant(K: int, ctx: PrecisionCtx) -> BigFloat:
    """Partial sum sum_{k=1..K} (a_k - b_k) - I(1/2) -> (1/2) ln(2 pi)."""
    if not isinstance(K, int) or K < 1:
        raise DomainError("K must be an integer >= 1")
    wp = ctx.bits + GUARD
    s = libmp.fzero
    for k in range(1, K + 1):
        a, b = _feller_ab_raw(k, wp)
        s = libmp.mpf_add(s, libmp.mpf_sub(a, b, wp, _RND), wp, _RND)
    return BigFloat.from_raw(libmp.mpf_sub(s, _i_half_raw(wp), wp, _RND), ctx)


# -- Marsaglia-Marsaglia ----------------------------------------------------


@dataclass(frozen=True)
class MarsagliaSeries:
    """Exact coefficients b_0..b_K of G(z) = 1 + w(z)."""

    coeffs: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


def _ps_mul(A: list[Fraction], B: list[Fraction], K: int) -> list[Fraction]:
    out = [Fraction(0)] * (K + 1)
    for i, ai in enumerate(A):
        if i > K or ai == 0:
            continue
        for j, bj in enumerate(B):
            if i + j > K:
                break
            if bj:
                out[i + j] += ai * bj
    return out


def _ps_recip_unit(B: list[Fraction], K: int) -> list[Fraction]:
    """Reciprocal of a series with B[0] == 1."""
    out = [Fraction(0)] * (K + 1)
    out[0] = Fraction(1)
    for i in range(1, K + 1):
        acc = Fraction(0)
        for j in range(1, i + 1):
            if j < len(B) and B[j]:
                acc += B[j] * out[i - j]
        out[i] = -acc
    return out


def _ps_log1p(W: list[Fraction], K: int) -> list[Fraction]:
    """ln(1 + w) for a series with W[0] == 0, via integrating w'/(1+w)."""
    one_plus = [Fraction(1)] + W[1:K + 1]
    deriv = [Fraction(i) * W[i] for i in range(1, min(len(W), K + 1))]
    # deriv is the series of w' shifted down one degree
    q = _ps_mul(deriv, _ps_recip_unit(one_plus, K), K)
    out = [Fraction(0)] * (K + 1)
    for i in range(1, K + 1):
        out[i] = q[i - 1] / i
    return out


def _reversion_defect(W: list[Fraction], K: int) -> list[Fraction]:
    """Coefficients of w - ln(1+w) - z^2/2 through order K."""
    lg = _ps_log1p(W, K)
    out = [Fraction(0)] * (K + 1)
    for i in range(K + 1):
        wi = W[i] if i < len(W) else Fraction(0)
        out[i] = wi - lg[i]
    if K >= 2:
        out[2] -= Fraction(1, 2)
    return out


def marsaglia_coeffs(K: int) -> MarsagliaSeries:
    """Exact b_0..b_K by Newton reversion of w - ln(1+w) = z^2/2,
    on the branch with G'(0) = 1 (so w ~ +z)."""
    if not isinstance(K, int) or K < 0:
        raise DomainError("K must be an integer >= 0")
    if K > MARSAGLIA_CAP:
        raise ResourceError(f"K={K} exceeds the series cap {MARSAGLIA_CAP}")
    if K == 0:
        return MarsagliaSeries(coeffs=(Fraction(1),))
    # correcting w through z^K needs the defect through z^(K+1), so the
    # working truncation carries one guard order beyond that
    order = K + 2
    w = [Fraction(0), Fraction(1)] + [Fraction(0)] * (order - 1)
    steps = max(1, math.ceil(math.log2(order + 1)) + 2)
    for _ in range(steps):
        defect = _reversion_defect(w, order)
        if not any(defect[:K + 2]):
            break
        # Newton: w <- w - defect * (1+w)/w ; w = z * unit
        unit = [w[1 + i] if 1 + i < len(w) else Fraction(0) for i in range(order)]
        shifted = defect[1:] + [Fraction(0)]
        corr_low = _ps_mul(shifted, _ps_recip_unit(unit, order - 1), order - 1)
        one_plus = [Fraction(1)] + w[1:order + 1]
        corr = _ps_mul(corr_low, one_plus, order)
        for i in range(min(len(corr), order + 1)):
            w[i] -= corr[i]
        w[0] = Fraction(0)
    coeffs = [Fraction(1)] + [w[i] for i in range(1, K + 1)]
    return MarsagliaSeries(coeffs=tuple(coeffs))


def reversion_residual(series: MarsagliaSeries) -> list[Fraction]:
    """Exact coefficients of w - ln(1+w) - z^2/2 through order K+1;
    all must vanish for a correct reversion."""
    K = series.order
    w = [Fraction(0)] + list(series.coeffs[1:])
    return _reversion_defect(w, K + 1)


def marsaglia_factorial(n: int, K: int, ctx: PrecisionCtx) -> BigFloat:
    """n^(n+1) e^(-n) sum_{k<=K} k b_k (2/n)^(k/2) Gamma(k/2).

    Terms with even k multiply a vanishing odd Gaussian moment and
    contribute nothing, so the sum effectively runs over odd k.
    """
    if not isinstance(n, int) or n < 2:
        raise DomainError("n must be an integer >= 2")
    if not isinstance(K, int) or K < 1:
        raise DomainError("K must be an integer >= 1")
    series = marsaglia_coeffs(K)
    wp = ctx.bits + GUARD
    n_raw = libmp.from_int(n)
    root = libmp.mpf_sqrt(libmp.from_rational(2, n, wp, _RND), wp, _RND)
    s = libmp.fzero
    for k in range(1, K + 1, 2):
        b_k = series.coeffs[k]
        if b_k == 0:
            continue
        c = b_k * k
        c_raw = libmp.from_rational(c.numerator, c.denominator, wp, _RND)
        term = libmp.mpf_mul(c_raw, libmp.mpf_pow_int(root, k, wp, _RND), wp, _RND)
        gamma_k2 = gamma_half_integer(k, PrecisionCtx(wp)).raw
        s = libmp.mpf_add(s, libmp.mpf_mul(term, gamma_k2, wp, _RND), wp, _RND)
    lnn = libmp.mpf_log(n_raw, wp, _RND)
    lead_log = libmp.mpf_sub(libmp.mpf_mul_int(lnn, n + 1, wp, _RND), n_raw, wp, _RND)
    lead = libmp.mpf_exp(lead_log, wp, _RND)
    return BigFloat.from_raw(libmp.mpf_mul(lead, s, wp, _RND), ctx)


# -- Namias ------------------------------------------------------------------


def namias_residual(n, ctx: PrecisionCtx) -> BigFloat:
    """|F(2n)/(F(n) F(n-1/2)) - sqrt(e) (1 - 1/(2n))^n| with
    F(x) = Gamma(x)/exp(P(x)), Gamma from the integral oracle."""
    wp = ctx.bits + GUARD
    n_raw = to_raw(n, wp)
    if libmp.mpf_le(n_raw, libmp.fhalf):
        raise DomainError("needs n > 1/2")

    def j_log(x_raw):
        x = BigFloat(x_raw, ctx.bits)
        return libmp.mpf_sub(lngamma_binet2(x, ctx).value.raw,
                             main_term_P(x, ctx).raw, wp, _RND)

    two_n = libmp.mpf_shift(n_raw, 1)
    n_half = libmp.mpf_sub(n_raw, libmp.fhalf, wp, _RND)
    lhs_log = libmp.mpf_sub(j_log(two_n), j_log(n_raw), wp, _RND)
    lhs_log = libmp.mpf_sub(lhs_log, j_log(n_half), wp, _RND)
    # rhs: 1/2 + n ln(1 - 1/(2n))
    x = libmp.mpf_neg(libmp.mpf_div(libmp.fhalf, n_raw, wp, _RND))
    rhs_log = libmp.mpf_add(libmp.fhalf,
                            libmp.mpf_mul(n_raw, raw_log1p(x, wp), wp, _RND), wp, _RND)
    lhs = libmp.mpf_exp(lhs_log, wp, _RND)
    rhs = libmp.mpf_exp(rhs_log, wp, _RND)
    return BigFloat.from_raw(libmp.mpf_abs(libmp.mpf_sub(lhs, rhs, wp, _RND)), ctx)


# -- Mermin -------------------------------------------------------------------


def mermin_partial_product(n: int, K: int, ctx: PrecisionCtx) -> BigFloat:
    """Log of prod_{k=n..K} e^(-1) (1 + 1/k)^(k+1/2): the sum of
    (k + 1/2) ln(1 + 1/k) - 1.  Converges upward to r_n with tail < 1/(12K)."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be an integer >= 1")
    if not isinstance(K, int) or K < n:
        raise DomainError("K must be an integer >= n")
    wp = ctx.bits + GUARD
    s = libmp.fzero
    for k in range(n, K + 1):
        x = libmp.from_rational(1, k, wp, _RND)
        k_half = libmp.mpf_add(libmp.from_int(k), libmp.fhalf, wp, _RND)
        term = libmp.mpf_sub(libmp.mpf_mul(k_half, raw_log1p(x, wp), wp, _RND),
                             libmp.fone, wp, _RND)
        s = libmp.mpf_add(s, term, wp, _RND)
    return BigFloat.from_raw(s, ctx)
