"""Semi-local model on ``F_q(t)``.

``N`` is the intersection over the declared places ``p_i`` of
``<pi^e> x U^(1)_{p_i}`` where ``pi = prod_i (t - p_i)`` is a common
uniformizer.  Elements are reduced rational functions ``num/den`` with a
monic denominator, so arithmetic and equality are exact.
"""

from __future__ import annotations

from itertools import product

from .. import polys as P
from ..errors import NotAUnit, SpecInvalid
from ..gf import field
from .base import Model, Window, mixed_radix


class FunctionFieldSemiLocal(Model):
    kind = "FunctionFieldSemiLocal"
    local = True

    def __init__(self, q: int = 4, places=(0, 1), e: int = 2):
        super().__init__()
        self.F = F = field(q)
        self.q, self.e = q, e
        places = tuple(int(p) for p in places)
        if F.p != 2:
            raise SpecInvalid("FunctionFieldSemiLocal needs characteristic 2 so that -1 lies in N")
        if not places or len(set(places)) != len(places) or any(not 0 <= p < q for p in places):
            raise SpecInvalid(f"places must be distinct elements of F_{q}")
        if e < 1:
            raise SpecInvalid("e must be positive")
        self.places = places
        self.radix = e * (q - 1)
        self.index = self.radix ** len(places)
        if self.index < 2:
            raise SpecInvalid("N is not a proper subgroup")
        pi: P.Poly = (1,)
        for p in places:
            pi = P.mul(F, pi, (F.neg(p), 1))
        self.pi_poly = pi
        # pi / (t - p_i) evaluated at p_i
        self._pi_cofactor = {}
        for p in places:
            c = 1
            for p2 in places:
                if p2 != p:
                    c = F.mul(c, F.sub(p, p2))
            self._pi_cofactor[p] = c

    # construction ---------------------------------------------------------
    def make(self, num, den=(1,)):
        F = self.F
        num, den = P.trim(num), P.trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return ((), (1,))
        g = P.gcd(F, num, den)
        if len(g) > 1:
            num = P.divmod_(F, num, g)[0]
            den = P.divmod_(F, den, g)[0]
        den, lead = P.monic(F, den)
        num = P.scale(F, num, F.inv(lead))
        return (num, den)

    @property
    def pi(self):
        return (self.pi_poly, (1,))

    def zero(self):
        return ((), (1,))

    def one(self):
        return ((1,), (1,))

    def from_int(self, n):
        c = self.F.from_int(n)
        return ((c,) if c else (), (1,))

    def const(self, c):
        return ((c,) if c else (), (1,))

    def is_zero(self, x):
        return not x[0]

    # arithmetic -----------------------------------------------------------
    def add(self, x, y):
        F = self.F
        if x[1] == y[1]:
            return self.make(P.add(F, x[0], y[0]), x[1])
        return self.make(P.add(F, P.mul(F, x[0], y[1]), P.mul(F, y[0], x[1])), P.mul(F, x[1], y[1]))

    def neg(self, x):
        return (P.neg(self.F, x[0]), x[1])

    def mul(self, x, y):
        F = self.F
        return self.make(P.mul(F, x[0], y[0]), P.mul(F, x[1], y[1]))

    def inv(self, x):
        if not x[0]:
            raise ZeroDivisionError("inverse of 0")
        return self.make(x[1], x[0])

    def pow(self, x, n):
        if n < 0:
            x, n = self.inv(x), -n
        F = self.F
        return (P.power(F, x[0], n), P.power(F, x[1], n)) if x[0] else x

    # valuations -----------------------------------------------------------
    def _split(self, x, p):
        a, n1 = P.order_at(self.F, x[0], p)
        b, d1 = P.order_at(self.F, x[1], p)
        return a - b, n1, d1

    def valuation_of(self, x, place):
        if not x[0]:
            raise ZeroDivisionError("valuation of 0")
        return self._split(x, place)[0]

    def residue(self, x, place):
        if not x[0]:
            raise NotAUnit("0 is not a unit")
        w, n1, d1 = self._split(x, place)
        if w != 0:
            raise NotAUnit(f"valuation {w} at t={place}")
        F = self.F
        return F.mul(P.evaluate(F, n1, place), F.inv(P.evaluate(F, d1, place)))

    def local_label(self, x, place) -> int:
        F = self.F
        w, n1, d1 = self._split(x, place)
        r = F.mul(P.evaluate(F, n1, place), F.inv(P.evaluate(F, d1, place)))
        r = F.mul(r, F.pow(self._pi_cofactor[place], -w))
        return (w % self.e) * (self.q - 1) + F.log[r]

    def contains(self, x):
        if not x[0]:
            return False
        return all(self.local_label(x, p) == 0 for p in self.places)

    def coset_of(self, x):
        if not x[0]:
            raise ZeroDivisionError("0 has no coset")
        return mixed_radix([self.local_label(x, p) for p in self.places], [self.radix] * len(self.places))

    def closed_form_applies(self, y):
        return all(self.local_label(y, p) != 0 for p in self.places)

    def _coset_reps(self):
        F = self.F
        found = {}
        nz = list(F.nonzero())
        for eps in product(range(self.e), repeat=len(self.places)):
            base = (1,)
            for p, k in zip(self.places, eps):
                base = P.mul(F, base, P.power(F, (F.neg(p), 1), k))
            for vals in product(nz, repeat=len(self.places)):
                h = P.interpolate(F, self.places, vals)
                x = self.make(P.mul(F, base, h))
                found.setdefault(self.coset_of(x), x)
        return list(found.values())

    # symmetry and subgroups ------------------------------------------------
    def galois_swap(self, x):
        """``t -> p_1 + p_2 - t``; swaps the two places and fixes ``pi``."""
        if len(self.places) != 2:
            raise SpecInvalid("the swap needs exactly two places")
        F = self.F
        c = F.add(*self.places)
        # t -> c - t equals t -> t + c in characteristic 2
        return self.make(P.compose_shift(F, x[0], c), P.compose_shift(F, x[1], c))

    def in_diagonal(self, x) -> bool:
        """Membership in ``N ∩ F_q(pi)``."""
        return self.contains(x) and self.galois_swap(x) == x

    def _unit_fix(self, exps):
        """Polynomial correcting residues so that ``prod (t-p_i)^a_i * h`` lies in N."""
        F = self.F
        vals = []
        for p, a in zip(self.places, exps):
            # residue of prod_j (t - p_j)^{a_j} * pi^{-a_i} at p_i
            r = F.pow(self._pi_cofactor[p], -a)
            for p2, a2 in zip(self.places, exps):
                if p2 != p:
                    r = F.mul(r, F.pow(F.sub(p, p2), a2))
            vals.append(F.inv(r))
        return P.interpolate(F, self.places, vals)

    def default_window(self):
        return Window(-2 * self.e, 2 * self.e, 1)

    def _one_units(self, depth):
        F = self.F
        for g in product(range(self.q), repeat=depth):
            yield self.make(P.add(F, (1,), P.mul(F, self.pi_poly, P.trim(g))))

    def _monomial_part(self, exps):
        F = self.F
        num, den = (1,), (1,)
        for p, a in zip(self.places, exps):
            lin = (F.neg(p), 1)
            if a >= 0:
                num = P.mul(F, num, P.power(F, lin, a))
            else:
                den = P.mul(F, den, P.power(F, lin, -a))
        return num, den

    def n_window(self, window: Window | None = None):
        w = window or self.default_window()
        out = []
        vals = [v for v in range(w.val_min, w.val_max + 1) if v % self.e == 0]
        units = list(self._one_units(w.unit_depth))
        for exps in product(vals, repeat=len(self.places)):
            num, den = self._monomial_part(exps)
            base = self.make(P.mul(self.F, num, self._unit_fix(exps)), den)
            out.extend(self.mul(base, u) for u in units)
        return out

    def d_window(self, window: Window | None = None):
        w = window or Window(-self.e, self.e, 0)
        F = self.F
        out = []
        nz = list(F.nonzero())
        for exps in product(range(w.val_min, w.val_max + 1), repeat=len(self.places)):
            num, den = self._monomial_part(exps)
            for vals in product(nz, repeat=len(self.places)):
                h = P.interpolate(F, self.places, vals)
                out.append(self.make(P.mul(F, num, h), den))
        return out

    def diagonal_window(self, window: Window | None = None):
        """Elements ``pi^(e j) (1 + c pi)`` of ``N ∩ F_q(pi)``."""
        w = window or self.default_window()
        out = []
        for v in range(w.val_min, w.val_max + 1):
            if v % self.e:
                continue
            base = self.pow(self.pi, v)
            for c in range(self.q):
                out.append(self.mul(base, self.make(P.add(self.F, (1,), P.scale(self.F, self.pi_poly, c)))))
        return out

    def turnwald_candidates(self, limit: int = 64):
        for K in range(limit):
            yield self.pow(self.pi, K)

    # text -----------------------------------------------------------------
    def symbols(self):
        syms = {"t": ((0, 1), (1,)), "pi": self.pi}
        if self.F.k > 1:
            syms["w"] = self.const(self.F.generator)
        return syms

    def parse(self, text):
        return super().parse(text.replace("^", "**"))

    def _fmt_poly(self, a):
        if not a:
            return "0"
        terms = []
        for i, c in enumerate(a):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                coef = "" if (c == 1 and mono) else str(c)
                terms.append(f"{coef}*{mono}" if coef and mono else (coef or mono))
        return " + ".join(reversed(terms))

    def fmt(self, x):
        num = self._fmt_poly(x[0])
        if x[1] == (1,):
            return num
        return f"({num})/({self._fmt_poly(x[1])})"

    def echo(self):
        return {"kind": self.kind, "q": self.q, "places": list(self.places), "e": self.e,
                "index": self.index}
