"""The quaternion algebra ``(-1,-1)`` over ``F = Q(sqrt d)`` with two dyadic places.

An element is an 8-tuple of exact rationals (``gmpy2.mpq``): the coordinates ``(A + B sqrt d)`` of
``1, i, j, k``.  ``w~_i = v_2 ∘ Nrd`` under the embedding ``sqrt d -> ±s`` with
``s`` the 2-adic root congruent to 1 mod 4, so ``w~(i+j) = 1`` and the residue
fields are ``F_4``.  ``N = N_1 ∩ N_2`` with ``N_i = <-2> x U^(1)_i``.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq
from itertools import product
from math import isqrt

from ..errors import NotAUnit, SpecInvalid
from ..gf import field
from ..padic import PrecisionPolicy, TwoAdicSqrt, valuation_q2
from .base import Model, Window, mixed_radix

F0 = mpq(0)
F1 = mpq(1)


class Quaternion(Model):
    kind = "Quaternion"
    local = True

    def __init__(self, d: int = 17, policy: PrecisionPolicy | None = None, sqrt_choice: int = 1):
        super().__init__()
        if d % 8 != 1:
            raise SpecInvalid(f"d={d} is not a 2-adic square (need d = 1 mod 8)")
        if d >= 0 and isqrt(d) ** 2 == d:
            raise SpecInvalid(f"d={d} is a rational square; F would not be quadratic")
        if sqrt_choice not in (1, -1):
            raise SpecInvalid("sqrt_choice must be +1 or -1")
        self.d = d
        self.policy = policy or PrecisionPolicy()
        self.sqrt_choice = sqrt_choice
        self.root = TwoAdicSqrt(d)
        self.places = (1, 2)
        self.e = 2
        self.index = 36
        self.F4 = field(4)
        self._signs = {1: sqrt_choice, 2: -sqrt_choice}
        one = self.one()
        self.i = self._basis(1)
        self.j = self._basis(2)
        self.k = self._basis(3)
        self.pi = self.add(self.i, self.j)
        half = mpq(1, 2)
        self.a = self.scale_q(self.add(self.add(self.add(self.neg(one), self.i), self.j), self.k), half)
        # xi * xi' = -2 and exactly one of them is a 2-adic unit at each place
        self.xi = self.f_elem(mpq(3, 2), half)
        self.xi_ = self.f_elem(mpq(3, 2), -half)
        self.theta = self.f_elem(half, half)
        self._lifts = {1: one, 2: self.a, 3: self.add(self.a, one)}
        self.minus_two = self.from_int(-2)
        self.minus_two_inv = self.scale_q(one, mpq(-1, 2))

    # F = Q(sqrt d) helpers -----------------------------------------------
    def _fm(self, x, y):
        a, b = x
        c, e = y
        return (a * c + self.d * b * e, a * e + b * c)

    def f_elem(self, a, b=0):
        return (mpq(a), mpq(b), F0, F0, F0, F0, F0, F0)

    def _basis(self, idx):
        v = [F0] * 8
        v[2 * idx] = F1
        return tuple(v)

    def coords(self, x):
        return [(x[2 * m], x[2 * m + 1]) for m in range(4)]

    def scale_q(self, x, r):
        r = mpq(r)
        return tuple(c * r for c in x)

    # arithmetic -----------------------------------------------------------
    def zero(self):
        return (F0,) * 8

    def one(self):
        return (F1,) + (F0,) * 7

    def from_int(self, n):
        return (mpq(n),) + (F0,) * 7

    def is_zero(self, x):
        return not any(x)

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def neg(self, x):
        return tuple(-a for a in x)

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def mul(self, x, y):
        d = self.d
        a0, b0, a1, b1, a2, b2, a3, b3 = x
        c0, e0, c1, e1, c2, e2, c3, e3 = y

        def fm(a, b, c, e):
            return a * c + d * b * e, a * e + b * c

        p00, q00 = fm(a0, b0, c0, e0)
        p11, q11 = fm(a1, b1, c1, e1)
        p22, q22 = fm(a2, b2, c2, e2)
        p33, q33 = fm(a3, b3, c3, e3)
        p01, q01 = fm(a0, b0, c1, e1)
        p10, q10 = fm(a1, b1, c0, e0)
        p23, q23 = fm(a2, b2, c3, e3)
        p32, q32 = fm(a3, b3, c2, e2)
        p02, q02 = fm(a0, b0, c2, e2)
        p13, q13 = fm(a1, b1, c3, e3)
        p20, q20 = fm(a2, b2, c0, e0)
        p31, q31 = fm(a3, b3, c1, e1)
        p03, q03 = fm(a0, b0, c3, e3)
        p12, q12 = fm(a1, b1, c2, e2)
        p21, q21 = fm(a2, b2, c1, e1)
        p30, q30 = fm(a3, b3, c0, e0)
        return (p00 - p11 - p22 - p33, q00 - q11 - q22 - q33,
                p01 + p10 + p23 - p32, q01 + q10 + q23 - q32,
                p02 - p13 + p20 + p31, q02 - q13 + q20 + q31,
                p03 + p12 - p21 + p30, q03 + q12 - q21 + q30)

    def nrd(self, x):
        """Reduced norm ``x0^2 + x1^2 + x2^2 + x3^2`` as an element of ``F``."""
        a = b = F0
        for c in self.coords(x):
            sq = self._fm(c, c)
            a += sq[0]
            b += sq[1]
        return (a, b)

    def conjugate(self, x):
        return (x[0], x[1]) + tuple(-c for c in x[2:])

    def inv(self, x):
        n = self.nrd(x)
        if n == (F0, F0):
            raise ZeroDivisionError("inverse of 0")
        a, b = n
        den = a * a - self.d * b * b
        ninv = (a / den, -b / den)
        cj = self.conjugate(x)
        out = []
        for c in self.coords(cj):
            out.extend(self._fm(c, ninv))
        return tuple(out)

    def sigma(self, x):
        """The involution extending ``sqrt d -> -sqrt d``; swaps the two places."""
        return tuple(c if i % 2 == 0 else -c for i, c in enumerate(x))

    # valuations -----------------------------------------------------------
    def valuation_of(self, x, place):
        if self.is_zero(x):
            raise ZeroDivisionError("valuation of 0")
        a, b = self.nrd(x)
        return valuation_q2(a, b, self.root, self._signs[place], self.policy)

    def valuation_f(self, c, place):
        """2-adic valuation of an element ``(A, B)`` of ``F`` at a place."""
        return valuation_q2(mpq(c[0]), mpq(c[1]), self.root, self._signs[place], self.policy)

    def _positive(self, x, place) -> bool:
        return self.is_zero(x) or self.valuation_of(x, place) > 0

    def residue(self, x, place):
        if self.is_zero(x) or self.valuation_of(x, place) != 0:
            raise NotAUnit("residue needs a unit")
        hits = [r for r, lift in self._lifts.items() if self._positive(self.sub(x, lift), place)]
        if len(hits) != 1:  # pragma: no cover - the lift set is a complete residue system
            raise NotAUnit(f"ambiguous residue candidates {hits}")
        return hits[0]

    def local_label(self, x, place) -> int:
        w = self.valuation_of(x, place)
        eps = w % 2
        f = (w - eps) // 2
        u = self.scale_q(x, mpq(-2) ** (-f))
        if eps:
            u = self.mul(self.inv(self.pi), u)
        return eps * 3 + self.F4.log[self.residue(u, place)]

    def contains(self, x):
        if self.is_zero(x):
            return False
        return all(self.local_label(x, p) == 0 for p in self.places)

    def coset_of(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("0 has no coset")
        return mixed_radix([self.local_label(x, p) for p in self.places], [6, 6])

    def closed_form_applies(self, y):
        return all(self.local_label(y, p) != 0 for p in self.places)

    def generators(self):
        """Elements acting nontrivially at exactly one place."""
        one = self.one()
        am1 = self.sub(self.a, one)
        return [
            self.add(one, self.mul(self.xi_, am1)),
            self.add(one, self.mul(self.xi, am1)),
            self.add(self.xi, self.mul(self.xi_, self.pi)),
            self.add(self.xi_, self.mul(self.xi, self.pi)),
        ]

    def _coset_reps(self):
        gens = self.generators()
        found = {0: self.one()}
        frontier = [self.one()]
        while frontier and len(found) < self.index:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    lab = self.coset_of(y)
                    if lab not in found:
                        found[lab] = y
                        nxt.append(y)
            frontier = nxt
        if len(found) != self.index:  # pragma: no cover
            raise SpecInvalid("generators do not reach every coset")
        return list(found.values())

    # windows --------------------------------------------------------------
    def default_window(self):
        return Window(-4, 4, 1)

    def _one_units(self, depth):
        zs = [self.zero(), self.one(), self.a, self.add(self.a, self.one())]
        if depth == 0:
            return [self.one()]
        return [self.add(self.one(), self.mul(self.pi, z)) for z in zs]

    def n_window(self, window: Window | None = None):
        w = window or self.default_window()
        out = []
        rng = [v // 2 for v in range(w.val_min, w.val_max + 1) if v % 2 == 0]
        units = self._one_units(w.unit_depth)
        for p, q in product(rng, repeat=2):
            base = self.mul(self.pow(self.xi, p), self.pow(self.xi_, q))
            out.extend(self.mul(base, u) for u in units)
        return out

    def d_window(self, window: Window | None = None):
        w = window or Window(-2, 2, 0)
        reps = self.coset_table().reps
        out = []
        rng = [v // 2 for v in range(w.val_min, w.val_max + 1) if v % 2 == 0]
        for p, q in product(rng, repeat=2):
            base = self.mul(self.pow(self.xi, p), self.pow(self.xi_, q))
            out.extend(self.mul(base, r) for r in reps)
        return out

    def diagonal_window(self, window: Window | None = None):
        """Elements of ``N ∩ Q^x``: signed powers of 2 times small odd integers."""
        w = window or self.default_window()
        out = []
        for v in range(w.val_min // 2, w.val_max // 2 + 1):
            for odd in (1, 3, -1, -3):
                out.append(self.from_int(odd) if v == 0 else self.scale_q(self.from_int(odd), mpq(2) ** v))
        return out

    def in_diagonal(self, x) -> bool:
        return self.contains(x) and all(c == 0 for c in x[1:])

    def turnwald_candidates(self, limit: int = 64):
        for K in range(limit):
            yield self.from_int(2 ** K)

    # text -----------------------------------------------------------------
    def symbols(self):
        return {"i": self.i, "j": self.j, "k": self.k, "pi": self.pi, "a": self.a,
                "s": self.f_elem(0, 1), "xi": self.xi, "xi_": self.xi_, "theta": self.theta}

    def parse(self, text):
        return super().parse(text.replace("^", "**"))

    def fmt(self, x):
        terms = []
        for name, (a, b) in zip(("", "i", "j", "k"), self.coords(x)):
            if a == 0 and b == 0:
                continue
            if b == 0:
                c = str(a)
            elif a == 0:
                c = f"{b}*s"
            else:
                c = f"({a} + {b}*s)"
            if name:
                terms.append(name if c == "1" else (f"-{name}" if c == "-1" else f"{c}*{name}"))
            else:
                terms.append(c)
        return " + ".join(terms) if terms else "0"

    def k_dimension(self):
        return 8

    def k_coordinates(self, x):
        return [Fraction(int(c.numerator), int(c.denominator)) for c in x]

    def echo(self):
        p = self.policy
        return {"kind": self.kind, "d": self.d, "index": self.index, "sqrt_choice": self.sqrt_choice,
                "precision": {"p0": p.p0, "growth": p.growth, "p_max": p.p_max, "guard": p.guard}}
