"""``F_q`` with ``N`` the subgroup of ``m``-th powers."""

from __future__ import annotations

from ..errors import SpecInvalid
from ..gf import field
from .base import Model, Window


class FiniteField(Model):
    kind = "FiniteField"
    enumerable = True

    def __init__(self, q: int, m: int):
        super().__init__()
        self.F = field(q)
        self.q, self.m = q, m
        if m < 2:
            raise SpecInvalid(f"m={m}: N must be a proper subgroup")
        if (q - 1) % m:
            raise SpecInvalid(f"m={m} does not divide q-1={q - 1}")
        self.index = m
        if not self.contains(self.neg(1)):
            raise SpecInvalid(f"-1 is not an {m}-th power in F_{q}")

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return self.F.from_int(n)

    def add(self, x, y):
        return self.F.add(x, y)

    def neg(self, x):
        return self.F.neg(x)

    def sub(self, x, y):
        return self.F.sub(x, y)

    def mul(self, x, y):
        return self.F.mul(x, y)

    def inv(self, x):
        return self.F.inv(x)

    def pow(self, x, n):
        return self.F.pow(x, n)

    def is_zero(self, x):
        return x == 0

    def dlog(self, x) -> int:
        return self.F.log[x]

    def contains(self, x):
        if x == 0:
            return False
        return self.F.log[x] % self.m == 0

    def coset_of(self, x):
        if x == 0:
            raise ZeroDivisionError("0 has no coset")
        return self.F.log[x] % self.m

    def _coset_reps(self):
        g = self.F.generator
        return [self.F.pow(g, i) for i in range(self.m)]

    def elements(self):
        return list(self.F.nonzero())

    def n_window(self, window: Window | None = None):
        return [x for x in self.F.nonzero() if self.contains(x)]

    def d_window(self, window: Window | None = None):
        return list(self.F.nonzero())

    def fmt(self, x):
        return str(x)

    def symbols(self):
        return {"g": self.F.generator}

    def parse(self, text):
        if self.F.k == 1:
            return super().parse(text)
        # in F_{p^k} a bare integer denotes the encoded field element
        t = text.strip()
        if t.isdigit() and int(t) < self.q:
            return int(t)
        return super().parse(text)

    def k_dimension(self):
        return 1

    def k_coordinates(self, x):
        return [x]

    def echo(self):
        return {"kind": self.kind, "q": self.q, "m": self.m, "index": self.index}
