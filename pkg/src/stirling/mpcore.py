"""Precision-managed arithmetic substrate.

Exact rationals are plain ``fractions.Fraction`` (always stored reduced,
positive denominator, structural equality).  Approximate values are
``BigFloat``: an immutable radix-2 float together with the significand
precision (in bits) of the context that produced it.  All arithmetic is
delegated to mpmath's ``libmp`` layer, whose primitives are pure functions
of ``(operands, precision, rounding)`` and therefore give bit-identical
results for identical inputs.

Internal computations round at a guarded working precision and the final
result is rounded once to the context's bits, so every published value is
within 2 ulp of the true one.  Results published by higher layers can be
re-validated with :func:`compute_twice`, which recomputes at ``bits + 64``
and reports the agreed leading bits.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from mpmath import libmp

from .errors import DomainError, PrecisionError

__all__ = [
    "PrecisionCtx",
    "BigFloat",
    "bigfloat",
    "default_ctx",
    "elementary",
    "rational_to_float",
    "rational_to_str",
    "rational_from_str",
    "agreement_bits",
    "compute_twice",
    "published_decimal",
]

MIN_BITS = 64
DEFAULT_BITS = 256
PRECISION_ENV_VAR = "STIRLING_PRECISION_BITS"

# Guard bits used by internal raw computations before the final rounding.
GUARD = 16

_RND = "n"  # round to nearest even, everywhere


@dataclass(frozen=True)
class PrecisionCtx:
    """Significand precision in bits for one computation.

    Deterministic by construction: every operation performed under a given
    context depends only on its operands and ``bits``.
    """

    bits: int

    def __post_init__(self) -> None:
        if not isinstance(self.bits, int) or self.bits < MIN_BITS:
            raise PrecisionError(
                f"precision must be an integer >= {MIN_BITS} bits, got {self.bits!r}"
            )

    def wprec(self, extra: int = GUARD) -> int:
        """Internal working precision with guard bits."""
        return self.bits + extra

    def eps(self) -> Fraction:
        """2**(1-bits), one ulp at unit scale."""
        return Fraction(1, 1 << (self.bits - 1))


def default_ctx() -> PrecisionCtx:
    """Context from the STIRLING_PRECISION_BITS env var (default 256)."""
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return PrecisionCtx(DEFAULT_BITS)
    try:
        bits = int(raw)
    except ValueError as exc:
        raise PrecisionError(f"bad {PRECISION_ENV_VAR}={raw!r}") from exc
    return PrecisionCtx(bits)


def _check_finite(raw) -> None:
    sign, man, exp, bc = raw
    if man == 0 and exp != 0:
        # libmp encodes inf/-inf/nan with zero mantissa and sentinel exponents
        raise DomainError("non-finite value escaped an operation")


class BigFloat:
    """Immutable radix-2 float carrying the precision it was created at.

    Arithmetic between BigFloats rounds at the larger of the two contexts;
    int/float/Fraction operands are lifted exactly (Fractions are rounded
    once, at the operation precision).  Equality and ordering compare exact
    numeric values.
    """

    __slots__ = ("_raw", "ctx_bits")

    def __init__(self, raw, ctx_bits: int):
        if ctx_bits < MIN_BITS:
            raise PrecisionError(f"ctx_bits must be >= {MIN_BITS}, got {ctx_bits}")
        _check_finite(raw)
        object.__setattr__(self, "_raw", raw)
        object.__setattr__(self, "ctx_bits", ctx_bits)

    def __setattr__(self, name, value):
        raise AttributeError("BigFloat is immutable")

    # -- construction -------------------------------------------------

    @classmethod
    def from_raw(cls, raw, ctx: PrecisionCtx) -> "BigFloat":
        """Wrap a libmp raw value, rounding it to ``ctx.bits``."""
        return cls(libmp.mpf_pos(raw, ctx.bits, _RND), ctx.bits)

    @classmethod
    def from_hex(cls, text: str, ctx: PrecisionCtx | None = None) -> "BigFloat":
        raw = _raw_from_hex(text)
        bits = (ctx or default_ctx()).bits
        return cls(raw, bits)

    # -- accessors ----------------------------------------------------

    @property
    def raw(self):
        return self._raw

    def is_zero(self) -> bool:
        return self._raw[1] == 0

    def sign(self) -> int:
        if self._raw[1] == 0:
            return 0
        return -1 if self._raw[0] else 1

    def to_hex(self) -> str:
        return _raw_to_hex(self._raw)

    def to_decimal(self, digits: int = 20) -> str:
        return libmp.to_str(self._raw, digits)

    def __float__(self) -> float:
        return libmp.to_float(self._raw)

    def __repr__(self) -> str:
        return f"BigFloat({self.to_decimal(20)!r}, bits={self.ctx_bits})"

    def __hash__(self):
        return hash(libmp.to_float(self._raw))

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        """Return (raw, bits) for the other operand, or None."""
        if isinstance(other, BigFloat):
            return other._raw, other.ctx_bits
        if isinstance(other, int):
            return libmp.from_int(other), self.ctx_bits
        if isinstance(other, float):
            return libmp.from_float(other), self.ctx_bits
        if isinstance(other, Fraction):
            prec = max(self.ctx_bits, MIN_BITS) + GUARD
            return libmp.from_rational(other.numerator, other.denominator, prec, _RND), self.ctx_bits
        return None

    def _binop(self, other, fn, reverse=False):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        oraw, obits = co
        bits = max(self.ctx_bits, obits)
        a, b = (oraw, self._raw) if reverse else (self._raw, oraw)
        try:
            res = fn(a, b, bits, _RND)
        except ZeroDivisionError as exc:
            raise DomainError("division by zero") from exc
        except libmp.ComplexResult as exc:
            raise DomainError(str(exc)) from exc
        return BigFloat(res, bits)

    def __add__(self, other):
        return self._binop(other, libmp.mpf_add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, libmp.mpf_sub)

    def __rsub__(self, other):
        return self._binop(other, libmp.mpf_sub, reverse=True)

    def __mul__(self, other):
        return self._binop(other, libmp.mpf_mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, libmp.mpf_div)

    def __rtruediv__(self, other):
        return self._binop(other, libmp.mpf_div, reverse=True)

    def __pow__(self, other):
        return self._binop(other, libmp.mpf_pow)

    def __neg__(self):
        return BigFloat(libmp.mpf_neg(self._raw), self.ctx_bits)

    def __abs__(self):
        return BigFloat(libmp.mpf_abs(self._raw), self.ctx_bits)

    # -- comparisons (exact, no rounding) ------------------------------

    def _cmp_raw(self, other):
        co = self._coerce(other)
        if co is None:
            return None
        oraw, _ = co
        return libmp.mpf_cmp(self._raw, oraw)

    def __eq__(self, other):
        c = self._cmp_raw(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp_raw(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp_raw(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp_raw(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp_raw(other)
        return NotImplemented if c is None else c >= 0


def bigfloat(x, ctx: PrecisionCtx) -> BigFloat:
    """Coerce ``x`` (BigFloat, int, float, Fraction, decimal str) to a BigFloat.

    ints and floats convert exactly; Fractions and decimal strings are
    correctly rounded to ``ctx.bits``.
    """
    if isinstance(x, BigFloat):
        if x.ctx_bits == ctx.bits:
            return x
        return BigFloat.from_raw(x._raw, ctx)
    if isinstance(x, int):
        return BigFloat(libmp.from_int(x, ctx.bits, _RND), ctx.bits)
    if isinstance(x, float):
        return BigFloat(libmp.from_float(x, ctx.bits, _RND), ctx.bits)
    if isinstance(x, Fraction):
        return rational_to_float(x, ctx)
    if isinstance(x, str):
        return rational_to_float(Fraction(x), ctx)
    raise TypeError(f"cannot convert {type(x).__name__} to BigFloat")


def to_raw(x, wprec: int):
    """Raw libmp value of ``x`` at working precision (module-internal)."""
    if isinstance(x, BigFloat):
        return x._raw
    if isinstance(x, int):
        return libmp.from_int(x)
    if isinstance(x, float):
        return libmp.from_float(x)
    if isinstance(x, Fraction):
        return libmp.from_rational(x.numerator, x.denominator, wprec, _RND)
    if isinstance(x, str):
        q = Fraction(x)
        return libmp.from_rational(q.numerator, q.denominator, wprec, _RND)
    raise TypeError(f"cannot convert {type(x).__name__} to a raw float")


# -- elementary functions ---------------------------------------------

_UNARY = {
    "ln": libmp.mpf_log,
    "exp": libmp.mpf_exp,
    "sqrt": libmp.mpf_sqrt,
    "arctan": libmp.mpf_atan,
}


def elementary(fn: str, x, ctx: PrecisionCtx, y=None) -> BigFloat:
    """Evaluate ln/exp/sqrt/arctan/pow at ``ctx`` precision (<= 2 ulp).

    ``pow`` needs the exponent in ``y``.  ln and sqrt require x > 0.
    """
    wp = ctx.wprec()
    xr = to_raw(x, wp)
    if fn == "pow":
        if y is None:
            raise DomainError("pow requires an exponent argument")
        yr = to_raw(y, wp)
        try:
            res = libmp.mpf_pow(xr, yr, wp, _RND)
        except libmp.ComplexResult as exc:
            raise DomainError(f"pow: {exc}") from exc
        except ZeroDivisionError as exc:
            raise DomainError("pow: zero base with negative exponent") from exc
        return BigFloat(libmp.mpf_pos(res, ctx.bits, _RND), ctx.bits)
    try:
        op = _UNARY[fn]
    except KeyError:
        raise DomainError(f"unknown elementary function {fn!r}") from None
    if fn in ("ln", "sqrt") and libmp.mpf_le(xr, libmp.fzero):
        raise DomainError(f"{fn} requires a positive argument")
    res = op(xr, wp, _RND)
    return BigFloat(libmp.mpf_pos(res, ctx.bits, _RND), ctx.bits)


def ln(x, ctx: PrecisionCtx) -> BigFloat:
    return elementary("ln", x, ctx)


def exp(x, ctx: PrecisionCtx) -> BigFloat:
    return elementary("exp", x, ctx)


def sqrt(x, ctx: PrecisionCtx) -> BigFloat:
    return elementary("sqrt", x, ctx)


def arctan(x, ctx: PrecisionCtx) -> BigFloat:
    return elementary("arctan", x, ctx)


def power(x, y, ctx: PrecisionCtx) -> BigFloat:
    return elementary("pow", x, ctx, y)


def pi(ctx: PrecisionCtx) -> BigFloat:
    return BigFloat(libmp.mpf_pi(ctx.bits, _RND), ctx.bits)


def rational_to_float(q: Fraction, ctx: PrecisionCtx) -> BigFloat:
    """Correctly rounded conversion of an exact rational."""
    q = Fraction(q)
    raw = libmp.from_rational(q.numerator, q.denominator, ctx.bits, _RND)
    return BigFloat(raw, ctx.bits)


# -- raw helpers shared by the numeric modules ------------------------


def raw_log1p(x_raw, prec: int):
    """log(1+x) for x > -1, compensating the cancellation near x = 0."""
    sign, man, exp, bc = x_raw
    if man == 0:
        if exp == 0:
            return libmp.fzero
        raise DomainError("log1p of non-finite value")
    mag = exp + bc  # x is within a factor 2 of 2**mag
    bump = max(0, -mag) + 8
    wp = prec + bump
    one_plus = libmp.mpf_add(libmp.fone, x_raw, wp, _RND)
    if libmp.mpf_le(one_plus, libmp.fzero):
        raise DomainError("log1p requires x > -1")
    return libmp.mpf_pos(libmp.mpf_log(one_plus, wp, _RND), prec, _RND)


def raw_expm1(x_raw, prec: int):
    """exp(x) - 1, accurate for tiny x."""
    sign, man, exp, bc = x_raw
    if man == 0:
        if exp == 0:
            return libmp.fzero
        raise DomainError("expm1 of non-finite value")
    mag = exp + bc
    if mag >= 0:
        # |x| >= 1/2: no destructive cancellation
        e = libmp.mpf_exp(x_raw, prec + 8, _RND)
        return libmp.mpf_pos(libmp.mpf_sub(e, libmp.fone, prec + 8, _RND), prec, _RND)
    bump = -mag + 8
    if bump > prec // 2:
        # x very small: x + x^2/2 + x^3/6, relative error O(x^3)
        wp = prec + 8
        x2 = libmp.mpf_mul(x_raw, x_raw, wp, _RND)
        x3 = libmp.mpf_mul(x2, x_raw, wp, _RND)
        s = libmp.mpf_add(x_raw, libmp.mpf_shift(x2, -1), wp, _RND)
        s = libmp.mpf_add(s, libmp.mpf_div(x3, libmp.from_int(6), wp, _RND), wp, _RND)
        return libmp.mpf_pos(s, prec, _RND)
    wp = prec + bump
    e = libmp.mpf_exp(x_raw, wp, _RND)
    return libmp.mpf_pos(libmp.mpf_sub(e, libmp.fone, wp, _RND), prec, _RND)


# -- serialization ----------------------------------------------------

_HEX_RE = re.compile(r"^(-?)0x([01])(?:\.([0-9a-fA-F]+))?p([+-]?\d+)$")


def _raw_to_hex(raw) -> str:
    sign, man, exp, bc = raw
    if man == 0:
        return "0x0p+0"
    man = int(man)
    frac_bits = bc - 1
    nhex = (frac_bits + 3) // 4
    shift = 4 * nhex - frac_bits
    m = man << shift
    frac = m & ((1 << (4 * nhex)) - 1)
    e = exp + bc - 1
    s = "-" if sign else ""
    if nhex == 0:
        return f"{s}0x1p{e:+d}"
    return f"{s}0x1.{frac:0{nhex}x}p{e:+d}"


def _raw_from_hex(text: str):
    if text == "0x0p+0":
        return libmp.fzero
    m = _HEX_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a hex float: {text!r}")
    neg, lead, frac, e = m.group(1), m.group(2), m.group(3) or "", int(m.group(4))
    man = int(lead + frac, 16)
    if man == 0:
        return libmp.fzero
    exp = e - 4 * len(frac)
    if neg:
        man = -man
    return libmp.from_man_exp(man, exp)


def rational_to_str(q: Fraction) -> str:
    """'num/den' decimal string, den > 0, lowest terms."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rational_from_str(text: str) -> Fraction:
    num, _, den = text.partition("/")
    if den == "":
        den = "1"
    return Fraction(int(num), int(den))


# -- compute-twice validation ------------------------------------------


def agreement_bits(a: BigFloat, b: BigFloat) -> int:
    """Leading bits on which two values agree (large constant if equal)."""
    ar, br = a._raw, b._raw
    if libmp.mpf_eq(ar, br):
        return 1 << 24
    prec = max(a.ctx_bits, b.ctx_bits) + 8
    diff = libmp.mpf_abs(libmp.mpf_sub(ar, br, prec, _RND))
    scale = libmp.mpf_abs(ar) if libmp.mpf_ge(libmp.mpf_abs(ar), libmp.mpf_abs(br)) else libmp.mpf_abs(br)
    if scale[1] == 0:
        return 0
    mag_diff = diff[2] + diff[3]
    mag_scale = scale[2] + scale[3]
    return max(0, mag_scale - mag_diff)


def compute_twice(fn: Callable[[PrecisionCtx], BigFloat], ctx: PrecisionCtx,
                  extra: int = 64) -> tuple[BigFloat, int]:
    """Run at ``ctx`` and at ``ctx.bits + extra``; report agreed bits.

    The cheap alternative to interval arithmetic used before publishing a
    value: the agreed prefix of the two runs is what may be displayed.
    """
    lo = fn(ctx)
    hi = fn(PrecisionCtx(ctx.bits + extra))
    return lo, agreement_bits(lo, hi)


def published_decimal(fn: Callable[[PrecisionCtx], BigFloat], ctx: PrecisionCtx,
                      digits: int) -> str:
    """Decimal rendering limited to the compute-twice agreed prefix."""
    value, agreed = compute_twice(fn, ctx)
    agreed_digits = max(1, int(agreed * 0.30102999566398119))
    return value.to_decimal(min(digits, agreed_digits))
