"""2-adic square roots and certified 2-adic valuations on ``Q(sqrt d)``."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import PrecisionExhausted, SpecInvalid


@dataclass(frozen=True)
class PrecisionPolicy:
    """Adaptive precision schedule for 2-adic digits.

    A valuation is returned only when it is strictly below ``P - guard`` for
    the working precision ``P``; otherwise ``P`` grows geometrically up to
    ``p_max`` and then :class:`PrecisionExhausted` is raised.
    """

    p0: int = 32
    growth: int = 2
    p_max: int = 4096
    guard: int = 4

    def schedule(self):
        p = self.p0
        while p <= self.p_max:
            yield p
            p *= self.growth
        if p // self.growth < self.p_max:
            yield self.p_max


def v2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("v2(0) is infinite")
    return (n & -n).bit_length() - 1


class TwoAdicSqrt:
    """The 2-adic square root of ``d`` congruent to 1 mod 4, lifted on demand.

    Lifts are cached; the cache is written under a lock so concurrent readers
    only ever see a fully lifted value.
    """

    def __init__(self, d: int):
        if d % 8 != 1:
            raise SpecInvalid(f"d={d} is not a 2-adic square (need d = 1 mod 8)")
        self.d = d
        self._lock = threading.Lock()
        self._prec = 3
        self._root = 1  # correct mod 2**(_prec - 1)

    def mod(self, prec: int) -> int:
        """Return ``s mod 2**prec`` where ``s**2 == d`` and ``s = 1 mod 4``."""
        if self._prec - 1 < prec:
            with self._lock:
                root, k = self._root, self._prec
                # invariant: root**2 == d mod 2**k
                while k - 1 < prec:
                    if (root * root - self.d) % (1 << (k + 1)):
                        root += 1 << (k - 1)
                    k += 1
                self._root, self._prec = root, k
        r = self._root % (1 << prec)
        if r % 4 != 1:
            r = (-r) % (1 << prec)
        return r


def valuation_q2(a: Fraction, b: Fraction, root: TwoAdicSqrt, sign: int,
                 policy: PrecisionPolicy) -> int:
    """2-adic valuation of ``a + b*sqrt(d)`` under ``sqrt(d) -> sign * s``."""
    if a == 0 and b == 0:
        raise ZeroDivisionError("valuation of 0")
    an, ad, bn, bd = (int(v) for v in (a.numerator, a.denominator, b.numerator, b.denominator))
    if bn == 0:
        return v2(an) - v2(ad)
    c = lcm(ad, bd)
    big_a = an * (c // ad)
    big_b = bn * (c // bd) * sign
    shift = v2(c)
    for prec in policy.schedule():
        m = 1 << prec
        r = (big_a + big_b * root.mod(prec)) % m
        if r:
            val = v2(r)
            if val < prec - policy.guard:
                return val - shift
    raise PrecisionExhausted(f"2-adic valuation not certified within {policy.p_max} digits")
