"""Small finite fields ``F_q`` with table-driven arithmetic.

Elements are plain ints in ``range(q)``.  For a prime ``q`` the int is the
residue itself; for ``q = p**k`` it encodes the coefficient vector of a
polynomial in base ``p`` modulo a fixed irreducible polynomial, so in
``F_4`` the element ``2`` is a root ``w`` of ``X^2 + X + 1`` and ``3 = w + 1``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .errors import SpecInvalid


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise ``SpecInvalid`` otherwise."""
    if q < 2:
        raise SpecInvalid(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise SpecInvalid(f"q={q} is not a prime power")
    return p, k


def _digits(x: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds, p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _polymulmod(a, b, f, p):
    # a, b: coefficient lists of length k; f: monic modulus, length k+1
    k = len(f) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            for t in range(k + 1):
                prod[deg - k + t] = (prod[deg - k + t] - c * f[t]) % p
    return prod[:k]


class GF:
    """The field with ``q`` elements."""

    def __init__(self, q: int):
        self.q = q
        self.p, self.k = prime_power(q)
        p, k = self.p, self.k
        if k == 1:
            self._build_prime()
        else:
            self._build_extension()
        self.add_table = [[self._add_raw(a, b) for b in range(q)] for a in range(q)]
        self.neg_table = [self._neg_raw(a) for a in range(q)]
        self.generator = self.exp[1] if q > 2 else 1

    def _build_prime(self):
        q = self.q
        gen = next(g for g in range(1, q) if self._order_mod(g) == q - 1) if q > 2 else 1
        self.exp = [pow(gen, i, q) for i in range(q - 1)]
        self.log = {x: i for i, x in enumerate(self.exp)}
        self.modulus = None

    def _order_mod(self, g):
        x, n = g, 1
        while x != 1:
            x = x * g % self.q
            n += 1
        return n

    def _build_extension(self):
        p, k, q = self.p, self.k, self.q
        for tail in product(range(p), repeat=k):
            f = list(tail) + [1]
            if f[0] == 0:
                continue
            # x (encoded as p) must generate a cyclic group of order q-1
            x = [0] * k
            x[1 if k > 1 else 0] = 1
            powers, cur = [], [1] + [0] * (k - 1)
            seen = set()
            ok = True
            for _ in range(q - 1):
                code = _undigits(cur, p)
                if code in seen or code == 0:
                    ok = False
                    break
                seen.add(code)
                powers.append(code)
                cur = _polymulmod(cur, x, f, p)
            if ok and _undigits(cur, p) == 1:
                self.modulus = tuple(f)
                self.exp = powers
                self.log = {c: i for i, c in enumerate(powers)}
                return
        raise SpecInvalid(f"no primitive polynomial found for q={q}")  # pragma: no cover

    def _add_raw(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return _undigits([(x + y) % self.p for x, y in zip(_digits(a, self.p, self.k), _digits(b, self.p, self.k))], self.p)

    def _neg_raw(self, a):
        if self.k == 1:
            return (-a) % self.p
        return _undigits([(-x) % self.p for x in _digits(a, self.p, self.k)], self.p)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n <= 0:
                raise ZeroDivisionError("0 ** n with n <= 0")
            return 0
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    """Shared, cached field instance for ``q``."""
    return GF(q)
