"""Exact Bernoulli numbers B_k and the series coefficients a_k.

Two independent recurrences are implemented on purpose:

    B_0 = 1,   sum_{j=0..k} C(k+1, j) B_j = 0          (k >= 1)
    a_0 = 1,   sum_{j=0..k} a_j / (k+1-j)! = 0         (k >= 1)

so the identity k! * a_k == B_k is a genuine cross-check between two
computations rather than a restatement of one of them.  Everything is an
exact ``fractions.Fraction``; no floating point enters this module.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .errors import ResourceError

__all__ = ["BernoulliTable", "bernoulli", "series_coeff_a", "table", "DEFAULT_CAP"]

DEFAULT_CAP = 512


class BernoulliTable:
    """Memoized table of exact B_0..B_K and a_0..a_K.

    The table only grows (geometrically), never mutates existing entries,
    and extension is serialized by a lock so concurrent readers always see
    fully written rows.
    """

    def __init__(self, cap: int = DEFAULT_CAP):
        self.cap = cap
        self._b: list[Fraction] = [Fraction(1)]
        self._a: list[Fraction] = [Fraction(1)]
        self._lock = threading.RLock()

    @property
    def max_index(self) -> int:
        return len(self._b) - 1

    def _extend_to(self, k: int) -> None:
        if k > self.cap:
            raise ResourceError(
                f"index {k} exceeds the Bernoulli table cap {self.cap}"
            )
        with self._lock:
            if k <= self.max_index:
                return
            target = min(self.cap, max(k, 2 * len(self._b)))
            b, a = self._b, self._a
            for m in range(len(b), target + 1):
                # binomial recurrence: B_m = -(sum_{j<m} C(m+1,j) B_j)/(m+1)
                s = Fraction(0)
                for j in range(m):
                    if b[j]:
                        s += math.comb(m + 1, j) * b[j]
                b.append(-s / (m + 1))
                # factorial recurrence: a_m = -sum_{j<m} a_j/(m+1-j)!
                t = Fraction(0)
                for j in range(m):
                    if a[j]:
                        t += a[j] / math.factorial(m + 1 - j)
                a.append(-t)

    def b(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("Bernoulli index must be >= 0")
        if k > self.max_index:
            self._extend_to(k)
        return self._b[k]

    def a(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("series coefficient index must be >= 0")
        if k > self.max_index:
            self._extend_to(k)
        return self._a[k]


_TABLE = BernoulliTable()


def table() -> BernoulliTable:
    """The process-wide memoized table."""
    return _TABLE


def bernoulli(k: int) -> Fraction:
    """Exact B_k from the binomial recurrence (B_1 = -1/2 convention)."""
    return _TABLE.b(k)


def series_coeff_a(k: int) -> Fraction:
    """Exact a_k from its own factorial-form recurrence (not via B_k/k!)."""
    return _TABLE.a(k)
