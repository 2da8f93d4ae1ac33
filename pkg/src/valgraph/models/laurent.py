"""Truncated Laurent series ``F_q((t))`` with ``N = <t^e> x (1 + tO)``.

An element is ``t^val * (c_0 + c_1 t + ... + c_{r-1} t^{r-1} + O(t^r))`` with
``c_0 != 0``; ``r`` is its relative precision and ``val + r`` its absolute
horizon.  Multiplication keeps the smaller relative precision; addition keeps
the smaller horizon and refuses results whose leading digit is not certified
well below that horizon.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..errors import NotAUnit, PrecisionExhausted, SpecInvalid
from ..gf import field
from .base import Model, Window


@dataclass(frozen=True, eq=False)
class Series:
    val: int | None  # None marks the exact zero
    coeffs: tuple[int, ...]

    @property
    def horizon(self) -> float:
        return float("inf") if self.val is None else self.val + len(self.coeffs)

    __hash__ = None  # equality is precision-aware

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        if self.val is None or other.val is None:
            return self.val is None and other.val is None
        if self.val != other.val:
            return False
        n = min(len(self.coeffs), len(other.coeffs))
        return self.coeffs[:n] == other.coeffs[:n]


ZERO = Series(None, ())


class LaurentLocal(Model):
    kind = "LaurentLocal"
    local = True

    def __init__(self, q: int = 4, e: int = 2, k: int = 8, guard: int = 4):
        super().__init__()
        self.F = field(q)
        self.q, self.e, self.k, self.guard = q, e, k, guard
        if self.F.p != 2:
            raise SpecInvalid("LaurentLocal needs characteristic 2 so that -1 lies in 1 + tO")
        if e < 1 or k < 1:
            raise SpecInvalid("e and k must be positive")
        if k <= guard:
            raise SpecInvalid(f"precision k={k} must exceed the guard {guard}")
        self.index = e * (q - 1)
        if self.index < 2:
            raise SpecInvalid("N is not a proper subgroup")
        self.places = ("t",)

    # construction ---------------------------------------------------------
    def series(self, val: int, coeffs) -> Series:
        coeffs = list(coeffs)[: self.k]
        coeffs += [0] * (self.k - len(coeffs))
        shift = next((i for i, c in enumerate(coeffs) if c), None)
        if shift is None:
            return ZERO
        return Series(val + shift, tuple(coeffs[shift:]) + (0,) * shift)

    def monomial(self, c: int, v: int) -> Series:
        return self.series(v, [c])

    def zero(self):
        return ZERO

    def one(self):
        return self.series(0, [1])

    def from_int(self, n):
        return self.series(0, [self.F.from_int(n)])

    def is_zero(self, x):
        return x.val is None

    # arithmetic -----------------------------------------------------------
    def neg(self, x):
        if x.val is None:
            return x
        return Series(x.val, tuple(self.F.neg(c) for c in x.coeffs))

    def add(self, x, y):
        if x.val is None:
            return y
        if y.val is None:
            return x
        v = min(x.val, y.val)
        h = min(x.val + len(x.coeffs), y.val + len(y.coeffs))
        out = [0] * (h - v)
        for s in (x, y):
            off = s.val - v
            for i, c in enumerate(s.coeffs):
                if off + i >= h - v:
                    break
                if c:
                    out[off + i] = self.F.add(out[off + i], c)
        d = next((i for i, c in enumerate(out) if c), None)
        if d is None or v + d >= h - self.guard:
            err = PrecisionExhausted(
                f"sum not certified: leading digit at or beyond {h - self.guard} (horizon {h})")
            err.lower_bound = v + d if d is not None else h
            raise err
        return Series(v + d, tuple(out[d:]))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if x.val is None or y.val is None:
            return ZERO
        r = min(len(x.coeffs), len(y.coeffs))
        out = [0] * r
        F = self.F
        for i in range(r):
            a = x.coeffs[i]
            if not a:
                continue
            for j in range(r - i):
                b = y.coeffs[j]
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Series(x.val + y.val, tuple(out))

    def inv(self, x):
        if x.val is None:
            raise ZeroDivisionError("inverse of 0")
        F = self.F
        r = len(x.coeffs)
        c0inv = F.inv(x.coeffs[0])
        out = [c0inv] + [0] * (r - 1)
        for n in range(1, r):
            acc = 0
            for i in range(1, n + 1):
                if x.coeffs[i]:
                    acc = F.add(acc, F.mul(x.coeffs[i], out[n - i]))
            out[n] = F.neg(F.mul(acc, c0inv))
        return Series(-x.val, tuple(out))

    def eq(self, x, y):
        return x == y

    # N and cosets ---------------------------------------------------------
    def contains(self, x):
        if x.val is None:
            return False
        return x.val % self.e == 0 and x.coeffs[0] == 1

    def coset_of(self, x):
        if x.val is None:
            raise ZeroDivisionError("0 has no coset")
        return (x.val % self.e) * (self.q - 1) + self.F.log[x.coeffs[0]]

    def _coset_reps(self):
        g = self.F.generator
        return [self.monomial(self.F.pow(g, j), i) for i in range(self.e) for j in range(self.q - 1)]

    def valuation_of(self, x, place="t"):
        if x.val is None:
            raise ZeroDivisionError("valuation of 0")
        return x.val

    def residue(self, x, place="t"):
        if x.val is None or x.val != 0:
            raise NotAUnit(f"{self.fmt(x)} is not a unit")
        return x.coeffs[0]

    def closed_form_applies(self, y):
        return not self.contains(y)

    # windows --------------------------------------------------------------
    def default_window(self):
        return Window(-4 * self.e, 4 * self.e, 1)

    def _units(self, lead_values, depth):
        for lead in lead_values:
            for tail in product(range(self.q), repeat=depth):
                yield [lead, *tail]

    def n_window(self, window: Window | None = None):
        w = window or self.default_window()
        out = []
        for v in range(w.val_min, w.val_max + 1):
            if v % self.e:
                continue
            out.extend(self.series(v, u) for u in self._units([1], w.unit_depth))
        return out

    def d_window(self, window: Window | None = None):
        w = window or self.default_window()
        out = []
        for v in range(w.val_min, w.val_max + 1):
            out.extend(self.series(v, u) for u in self._units(range(1, self.q), w.unit_depth))
        return out

    def turnwald_candidates(self, limit: int = 64):
        for K in range(0, limit):
            yield self.monomial(1, K)

    # text -----------------------------------------------------------------
    def symbols(self):
        syms = {"t": self.monomial(1, 1)}
        if self.F.k > 1:
            syms["w"] = self.series(0, [self.F.generator])
        return syms

    def parse(self, text):
        return super().parse(text.replace("^", "**"))

    def fmt(self, x):
        if x.val is None:
            return "0"
        terms = []
        for i, c in enumerate(x.coeffs):
            if c:
                deg = x.val + i
                mono = "" if deg == 0 else ("t" if deg == 1 else f"t^{deg}")
                coef = "" if (c == 1 and mono) else str(c)
                terms.append(f"{coef}*{mono}" if coef and mono else (coef or mono))
        return " + ".join(terms) + f" + O(t^{x.val + len(x.coeffs)})"

    def echo(self):
        return {"kind": self.kind, "q": self.q, "e": self.e, "k": self.k, "index": self.index}
