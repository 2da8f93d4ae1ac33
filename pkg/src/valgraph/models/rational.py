"""``Q`` with ``N = H ∩ U`` for an odd ``m`` and a prime ``l``.

``h`` sends ``±prod p_i^{d_i}`` to ``sum d_i`` and ``H = h^{-1}(mZ)``;
``U = (Q^x)^m (1 + m_l)``.  A rational ``x`` lies in ``U`` iff ``v_l(x)`` is
divisible by ``m`` and the residue of its ``l``-adic unit part is an ``m``-th
power in ``F_l``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from ..errors import FactorizationTooLarge, SpecInvalid
from .base import Model, Window, mixed_radix


def _small_primes(bound: int) -> list[int]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


@lru_cache(maxsize=8)
def _primes_upto(bound: int) -> tuple[int, ...]:
    return tuple(_small_primes(bound))


def is_prime(n: int, bound: int = 10**6) -> bool:
    """Deterministic trial division; ``n`` must be below ``bound**2``."""
    if n < 2:
        return False
    if n >= bound * bound:
        raise FactorizationTooLarge(f"{n} exceeds the trial-division range")
    for p in _primes_upto(bound):
        if p * p > n:
            break
        if n % p == 0:
            return n == p
    return True


class RationalCongruence(Model):
    kind = "RationalCongruence"

    def __init__(self, m: int = 3, l: int = 7, trial_bound: int = 10**6):
        super().__init__()
        if m < 3 or m % 2 == 0:
            raise SpecInvalid(f"m={m} must be odd and at least 3")
        if l < 2 or not is_prime(l):
            raise SpecInvalid(f"l={l} is not prime")
        self.g = gcd(l - 1, m)
        if self.g == 1:
            raise SpecInvalid(f"gcd(l-1, m) = 1 for l={l}, m={m}: F_l^x has no nontrivial m-th power classes")
        self.m, self.l, self.trial_bound = m, l, trial_bound
        self.index = m * m * self.g
        # generator of F_l^x for discrete logs
        self._gen = next(c for c in range(2, l) if all(pow(c, (l - 1) // f, l) != 1
                                                         for f in _prime_factors_int(l - 1))) if l > 2 else 1
        self._log = {}
        x = 1
        for i in range(l - 1):
            self._log[x] = i
            x = x * self._gen % l
        if not self.contains(Fraction(-1)):
            raise SpecInvalid("-1 is not in N")  # pragma: no cover - m odd guarantees this

    # factorization ---------------------------------------------------------
    def factor_int(self, n: int) -> dict[int, int]:
        n = abs(n)
        out: dict[int, int] = {}
        for p in _primes_upto(self.trial_bound):
            if p * p > n:
                break
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        if n > 1:
            if n >= self.trial_bound * self.trial_bound:
                raise FactorizationTooLarge(f"cofactor {n} beyond trial bound {self.trial_bound}")
            out[n] = out.get(n, 0) + 1
        return out

    def h(self, x: Fraction) -> int:
        x = Fraction(x)
        if x == 0:
            raise ZeroDivisionError("h(0)")
        return sum(self.factor_int(x.numerator).values()) - sum(self.factor_int(x.denominator).values())

    def v_l(self, x: Fraction) -> int:
        x = Fraction(x)
        v, a, b = 0, x.numerator, x.denominator
        while a % self.l == 0:
            a //= self.l
            v += 1
        while b % self.l == 0:
            b //= self.l
            v -= 1
        return v

    def unit_residue(self, x: Fraction) -> int:
        x = Fraction(x)
        v = self.v_l(x)
        u = x / Fraction(self.l) ** v
        return u.numerator * pow(u.denominator, -1, self.l) % self.l

    def local_labels(self, x) -> tuple[int, int, int]:
        x = Fraction(x)
        if x == 0:
            raise ZeroDivisionError("0 has no coset")
        hclass = self.h(x) % self.m
        vclass = self.v_l(x) % self.m
        rclass = self._log[self.unit_residue(x)] % self.g
        return hclass, vclass, rclass

    # arithmetic -----------------------------------------------------------
    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(x)

    def pow(self, x, n):
        return Fraction(x) ** n

    def is_zero(self, x):
        return x == 0

    def in_H(self, x) -> bool:
        return self.h(x) % self.m == 0

    def in_U(self, x) -> bool:
        _, v, r = self.local_labels(x)
        return v == 0 and r == 0

    def contains(self, x):
        if x == 0:
            return False
        return self.local_labels(x) == (0, 0, 0)

    def coset_of(self, x):
        return mixed_radix(self.local_labels(x), [self.m, self.m, self.g])

    def _coset_reps(self):
        found: dict[int, Fraction] = {}
        n = 2
        while len(found) < self.index:
            for cand in (Fraction(n), Fraction(1, n), Fraction(-n)):
                found.setdefault(self.coset_of(cand), cand)
            n += 1
            if n > 10**5:  # pragma: no cover
                raise SpecInvalid("could not find coset representatives")
        found.setdefault(0, Fraction(1))
        return list(found.values())

    def n_window(self, window: Window | None = None):
        w = window or Window(-3, 3, 0)
        out = []
        for a in range(1, 60):
            for b in range(1, 60):
                if gcd(a, b) == 1:
                    for s in (1, -1):
                        x = Fraction(s * a, b)
                        if self.contains(x):
                            out.append(x)
        return out

    def d_window(self, window: Window | None = None):
        return [Fraction(s * a, b) for a in range(1, 20) for b in range(1, 8) if gcd(a, b) == 1
                for s in (1, -1)]

    def turnwald_candidates(self, limit: int = 64):
        # c divisible by a high power of l pushes 1 + c*x into 1 + m_l; h is then scanned
        for n in range(1, limit):
            for K in (1, 2, 3, 4):
                yield Fraction(self.l ** K * n)

    def symbols(self):
        return {"l": Fraction(self.l)}

    def fmt(self, x):
        return str(Fraction(x))

    def k_dimension(self):
        return 1

    def k_coordinates(self, x):
        return [Fraction(x)]

    def echo(self):
        return {"kind": self.kind, "m": self.m, "l": self.l, "index": self.index,
                "trial_bound": self.trial_bound}


def _prime_factors_int(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out
