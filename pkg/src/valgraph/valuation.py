"""Valuations with ``Z^r`` values and the constructions that turn leveled maps into them.

Every search here is bounded; exhausting a bound raises
:class:`~valgraph.errors.SearchExhausted` and is never read as a negative
answer.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Any

from .errors import (DifferenceSearchExhausted, HypothesisNotMet, PrecisionExhausted,
                     SearchExhausted, SpecInvalid, WindowInconclusive)
from .models.base import Model, Window, rank_exact
from .models.rational import RationalCongruence, is_prime
from .order import CERTIFIED, WINDOW, OrderedQuotient, in_n_set, n_elements
from . import polys as P


# valuation handles ------------------------------------------------------------
@dataclass
class ValuationHandle:
    """``x -> (s_i * w_i(x))_i`` over a set of declared places.

    ``signs`` exists so tests can break a handle on purpose; a genuine
    valuation has every sign equal to ``+1``.
    """

    model: Model
    places: tuple
    signs: tuple = ()

    def __post_init__(self):
        unknown = [p for p in self.places if p not in self.model.places]
        if unknown:
            raise SpecInvalid(f"places {unknown} are not declared on the model")
        if not self.signs:
            self.signs = (1,) * len(self.places)

    def __call__(self, x) -> tuple[int, ...]:
        return tuple(s * self.model.valuation_of(x, p) for p, s in zip(self.places, self.signs))

    def negated(self, place) -> "ValuationHandle":
        signs = tuple(-s if p == place else s for p, s in zip(self.places, self.signs))
        return ValuationHandle(self.model, self.places, signs)

    def check_axioms(self, samples: list) -> tuple[bool, Any]:
        """Multiplicativity and the sharpened ultrametric inequality on sample pairs."""
        m = self.model
        for x, y in product(samples, repeat=2):
            vx, vy = self(x), self(y)
            if self(m.mul(x, y)) != tuple(a + b for a, b in zip(vx, vy)):
                return False, ("mul", m.fmt(x), m.fmt(y))
            try:
                s = m.add(x, y)
            except PrecisionExhausted:
                continue
            if m.is_zero(s):
                continue
            vs = self(s)
            for a, b, c in zip(vx, vy, vs):
                if c < min(a, b) or (a != b and c != min(a, b)):
                    return False, ("add", m.fmt(x), m.fmt(y))
        return True, None


def associated_check(v: ValuationHandle, oq: OrderedQuotient, elems: list | None = None):
    """``φ(n) >= 0 => v(n) >= 0`` for every window element; returns ``(ok, witness, tag)``."""
    elems = oq.window if elems is None else elems
    for n in elems:
        if oq.leq(oq.zero, oq.phi(n)) and any(c < 0 for c in v(n)):
            return False, oq.model.fmt(n), CERTIFIED
    return True, None, CERTIFIED if oq.model.enumerable else WINDOW


# congruence subgroups ------------------------------------------------------------
@dataclass
class OpennessResult:
    mode: str
    places: tuple
    delta: tuple | None = None
    witnesses: dict = field(default_factory=dict)
    bound: int = 8
    checked: int = 0
    tag: str = WINDOW

    def to_dict(self) -> dict:
        d = asdict(self)
        d["witnesses"] = {str(k): v for k, v in self.witnesses.items()}
        return d


def _ball_samples(model: Model, v: ValuationHandle, delta, bound: int) -> list:
    lo = min(delta) + 1
    pool = model.d_window(Window(lo, lo + max(2, model.e + 1), 1))
    return [z for z in pool if all(c > d for c, d in zip(v(z), delta))]


def _graded(bound: int, r: int):
    out = [d for d in product(range(bound + 1), repeat=r)]
    return sorted(out, key=lambda d: (sum(d), d))


def _ball_inside_n(model, v, delta, bound):
    zs = _ball_samples(model, v, delta, bound)
    one = model.one()
    if not zs:
        return None, 0
    for z in zs:
        x = model.add(one, z)
        if not model.contains(x):
            return False, len(zs)
    return True, len(zs)


def congruence_openness(model: Model, places=None, mode: str = "find-delta",
                        bound: int = 8) -> OpennessResult:
    """Search for ``δ`` with ``1 + m_T(δ) ⊆ N``, or refute openness place by place."""
    places = tuple(model.places if places is None else places)
    if not model.local:
        raise HypothesisNotMet(f"{model.kind} carries no valuations")
    v = ValuationHandle(model, places)
    if mode == "find-delta":
        res = OpennessResult(mode, places, bound=bound)
        verdicts = {}
        for delta in _graded(bound, len(places)):
            ok, count = _ball_inside_n(model, v, delta, bound)
            res.checked += count
            verdicts[delta] = ok
            if ok:
                # minimal in the graded order: lowering any positive coordinate fails
                for i, d in enumerate(delta):
                    if d > 0:
                        lower = tuple(c - (1 if j == i else 0) for j, c in enumerate(delta))
                        if verdicts.get(lower) is not False:
                            raise WindowInconclusive(f"minimality of {delta} is not certified")
                res.delta = delta
                return res
        raise SearchExhausted(f"no delta <= {bound} per place")
    if mode == "refute-single-place":
        res = OpennessResult(mode, places, bound=bound)
        for p in places:
            res.witnesses[p] = [model.fmt(_refute_one(model, p, d)) for d in range(bound + 1)]
            res.checked += bound + 1
        return res
    raise ValueError(f"unknown mode {mode!r}")


def _refute_one(model: Model, place, delta: int):
    """``x = 1 + c (t - p)^(δ+1)``: close to 1 at ``place`` but outside ``N``."""
    if not hasattr(model, "make"):
        raise HypothesisNotMet(f"single-place refutation needs a function-field model, not {model.kind}")
    F = model.F
    lin = (F.neg(place), 1)
    pw = P.power(F, lin, delta + 1)
    for c, extra in product(F.nonzero(), range(3)):
        poly = P.mul(F, pw, P.power(F, (1, 1), extra))
        x = model.make(P.add(F, (1,), P.scale(F, poly, c)))
        if model.is_zero(x):
            continue
        if model.valuation_of(model.sub(x, model.one()), place) > delta and not model.contains(x):
            return x
    raise SearchExhausted(f"no witness at place {place} for delta={delta}")


@dataclass
class EscapePrime:
    p: int
    k: int
    modulus: int
    in_W: bool
    in_H: bool
    in_N: bool


def escape_prime_search(model: RationalCongruence, moduli: dict[int, int], limit: int = 10**5) -> EscapePrime:
    """A prime ``p = 1 + k * prod q^r`` (so ``p`` lies in the congruence subgroup ``W``) with ``p`` outside ``H``."""
    mod = 1
    for q, r in moduli.items():
        if r < 1 or not is_prime(q):
            raise SpecInvalid(f"bad modulus factor {q}^{r}")
        mod *= q ** r
    for k in range(1, limit):
        p = 1 + k * mod
        if is_prime(p):
            x = Fraction(p)
            in_w = all((p - 1) % (q ** r) == 0 for q, r in moduli.items())
            return EscapePrime(p, k, mod, in_w, model.in_H(x), model.contains(x))
    raise SearchExhausted(f"no prime 1 + k*{mod} for k < {limit}")


# generated rings -------------------------------------------------------------------
@dataclass
class GeneratedRingWindow:
    ring: str
    length: int
    alpha: Any
    generators: list
    members: list  # (element or None, lower bound on valuations if uncertified, term list)
    minus_one_found: bool
    gamma: Any = None  # least window γ with R ∩ N ⊆ N_{>-γ}
    flagged: int = 0
    tag: str = WINDOW

    def summary(self) -> dict:
        return {"ring": self.ring, "length": self.length, "alpha": _plain(self.alpha),
                "generators": len(self.generators), "members": len(self.members),
                "minus_one_found": self.minus_one_found, "gamma": _plain(self.gamma),
                "flagged": self.flagged, "tag": self.tag}


def _plain(g):
    return list(g) if isinstance(g, tuple) else g


def _lowest(model, elems):
    if not model.local:
        return list(elems)
    return sorted(elems, key=lambda z: (sum(abs(c) for c in model.value_vector(z)),))


def generated_ring_window(oq: OrderedQuotient, ring: str = "R", length: int = 2, alpha=None,
                          max_generators: int = 12) -> GeneratedRingWindow:
    """All ``±a_1 ± ... ± a_j`` (``j <= length``) over generators from ``N_{>=0}`` or ``N_{>α}``.

    For ``A`` the absence of ``-1`` is checked; for ``R`` the least window
    ``γ > 0`` with ``R ∩ N ⊆ N_{>-γ}`` is reported.
    """
    model = oq.model
    if ring == "R":
        gens = [n for n in oq.window if oq.leq(oq.zero, oq.phi(n))]
    elif ring == "A":
        if alpha is None:
            from .levels import find_s_level
            alpha, _ = find_s_level(oq)
            if alpha is None:
                raise HypothesisNotMet("phi has no s-level on the window")
        gens = [n for n in oq.window if oq.lt(alpha, oq.phi(n))]
    else:
        raise ValueError(f"unknown ring {ring!r}")
    if not gens:
        raise WindowInconclusive(f"no generators for {ring} on the window")
    gens = _lowest(model, gens)[:max_generators]
    mone = model.neg(model.one())
    members, flagged, minus_one = [], 0, False
    for j in range(1, length + 1):
        for combo in combinations(range(len(gens)), j):
            for signs in product((1, -1), repeat=j):
                terms = [(s, i) for s, i in zip(signs, combo)]
                acc, lower = None, None
                try:
                    for s, i in terms:
                        t = gens[i] if s > 0 else model.neg(gens[i])
                        acc = t if acc is None else model.add(acc, t)
                except PrecisionExhausted as exc:
                    lower = getattr(exc, "lower_bound", None)
                    flagged += 1
                    if lower is None or lower <= 0:
                        raise WindowInconclusive("cancellation hides the sum near valuation 0") from None
                    members.append((None, lower, terms))
                    continue
                if not model.is_zero(acc) and model.eq(acc, mone):
                    minus_one = True
                members.append((acc, None, terms))
    out = GeneratedRingWindow(ring, length, alpha, gens, members, minus_one, flagged=flagged,
                              tag=CERTIFIED if model.enumerable else WINDOW)
    if ring == "R":
        out.gamma = _least_gamma(oq, [m for m, _, _ in members if m is not None])
    return out


def _least_gamma(oq: OrderedQuotient, members: list):
    model = oq.model
    vals = [oq.phi(m) for m in members if not model.is_zero(m) and model.contains(m)]
    cands = [g for g in oq.gamma if oq.lt(oq.zero, g)]
    if oq.kind == "LocalZr":
        cands.sort(key=lambda g: (sum(g), g))
    for g in cands:
        ng = oq.neg(g)
        if all(oq.lt(ng, v) for v in vals):
            return g
    return None


# a = x b ---------------------------------------------------------------------------
@dataclass
class Decomposition:
    x: Any
    a: Any
    b: Any
    terms: list  # signed summands of a, each in N_{>=0}
    method: str

    def fmt(self, model) -> dict:
        return {"x": model.fmt(self.x), "a": model.fmt(self.a), "b": model.fmt(self.b),
                "terms": [model.fmt(t) for t in self.terms], "method": self.method}


def _nonneg(oq, n) -> bool:
    return oq.model.contains(n) and oq.leq(oq.zero, oq.phi(n))


def verify_decomposition(oq: OrderedQuotient, dec: Decomposition) -> bool:
    m = oq.model
    if not _nonneg(oq, dec.b):
        return False
    acc = m.zero()
    for t in dec.terms:
        if not (_nonneg(oq, t) or _nonneg(oq, m.neg(t))):
            return False
        acc = m.add(acc, t)
    if not m.eq(acc, dec.a):
        return False
    return m.eq(m.mul(dec.a, m.inv(dec.b)), dec.x)


def decompose_ab_inverse(oq: OrderedQuotient, x, window: Window | None = None) -> Decomposition:
    """Write ``x = a b^-1`` with ``a`` a signed sum of ``N_{>=0}`` elements and ``b ∈ N_{>=0}``.

    Follows the difference recipe: find ``x = n1 - n2`` with comparable
    ``φ(n1), φ(n2)`` and split on their position relative to 0.  On finite
    models with no comparable difference an exhaustive search over the
    generated ring is used instead.
    """
    model = oq.model
    one = model.one()
    if model.is_zero(x):
        dec = Decomposition(x, x, one, [], "zero")
    elif _nonneg(oq, x):
        dec = Decomposition(x, x, one, [x], "direct")
    else:
        dec = _recipe(oq, x, window)
        if dec is None:
            if not model.enumerable:
                raise DifferenceSearchExhausted(f"no usable x = n1 - n2 for x = {model.fmt(x)}")
            dec = _exhaustive(oq, x)
    if not verify_decomposition(oq, dec):
        raise DifferenceSearchExhausted(f"decomposition of {model.fmt(x)} failed verification")
    return dec


def _recipe(oq, x, window):
    model = oq.model
    one = model.one()
    for n2 in _lowest(model, n_elements(model, window)):
        try:
            n1 = model.add(x, n2)
        except PrecisionExhausted:
            continue
        if model.is_zero(n1) or not model.contains(n1):
            continue
        g1, g2 = oq.phi(n1), oq.phi(n2)
        if oq.leq(g2, g1):
            lo, hi, sign = n2, n1, 1
        elif oq.leq(g1, g2):
            lo, hi, sign = n1, n2, -1
        else:
            continue
        glo = oq.phi(lo)
        if oq.leq(oq.zero, glo):
            return Decomposition(x, x, one, [n1, model.neg(n2)], "recipe")
        if not oq.lt(glo, oq.zero):
            continue
        q = model.mul(hi, model.inv(lo))
        # x = sign * (hi lo^-1 - 1) lo
        if sign > 0:
            a, terms = model.sub(q, one), [q, model.neg(one)]
        else:
            a, terms = model.sub(one, q), [one, model.neg(q)]
        return Decomposition(x, a, model.inv(lo), terms, "recipe")
    return None


def _exhaustive(oq, x):
    """Finite models: close ``N_{>=0}`` under ``+, -, *`` and search ``a = x b``."""
    model = oq.model
    gens = [n for n in oq.window if _nonneg(oq, n)]
    ring = {}
    frontier = []
    for g in gens:
        ring[g] = [g]
        frontier.append(g)
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                for t, term in ((model.add(u, g), g), (model.sub(u, g), model.neg(g))):
                    if t not in ring:
                        ring[t] = ring[u] + [term]
                        nxt.append(t)
        frontier = nxt
    for b in gens:
        a = model.mul(x, b)
        if a in ring:
            return Decomposition(x, a, b, ring[a], "exhaustive")
    raise DifferenceSearchExhausted(f"{model.fmt(x)} is not a quotient over the generated ring")


# Turnwald's element and bases inside N(a) --------------------------------------------
def turnwald_search(model: Model, xs: list, limit: int = 64):
    """``c`` with ``1 + c x_j ∈ N`` for every ``j``, found by scanning candidates."""
    if any(model.is_zero(x) for x in xs):
        raise ValueError("the x_j must be nonzero")
    one = model.one()
    cands = [c for c in model.elements() if not model.is_zero(c)] if model.enumerable \
        else model.turnwald_candidates(limit)
    for c in cands:
        ok = True
        for x in xs:
            try:
                s = model.add(one, model.mul(c, x))
            except PrecisionExhausted:
                ok = False
                break
            if model.is_zero(s) or not model.contains(s):
                ok = False
                break
        if ok:
            return c
    raise SearchExhausted(f"no c among the first {limit} candidates")


def _basis_in_n(model: Model) -> list:
    """A ``k``-basis of ``D`` made of elements of ``N`` (greedy over the ``N`` window)."""
    dim = model.k_dimension()
    chosen, rows = [], []
    pool = n_elements(model)
    extra = [model.mul(a, b) for a, b in product(pool[:12], repeat=2)]
    for n in pool + extra:
        trial = rows + [model.k_coordinates(n)]
        if rank_exact(trial) == len(trial):
            chosen.append(n)
            rows = trial
            if len(chosen) == dim:
                return chosen
    raise SearchExhausted("the N window does not span D")


@dataclass
class BasisCertificate:
    a: Any
    inverse: bool
    elements: list
    rank: int
    dimension: int
    c: Any = None
    s: Any = None


def basis_in_n_set(model: Model, a, inverse: bool = False, limit: int = 64) -> BasisCertificate:
    """``dim_k D`` independent elements of ``N(a)`` (or of ``N(a)^-1`` when ``inverse``).

    Uses a transversal ``x_i``, a basis ``y_j`` inside ``N`` and Turnwald's
    ``c`` for the family ``x_i y_j^-1`` (``x_i y_j``), then rescales by
    ``s ∈ N`` with ``c x_i0 = a s``.
    """
    if model.contains(a):
        raise HypothesisNotMet("a must lie outside N")
    dim = model.k_dimension()
    if model.enumerable:
        # finite D: no Turnwald step, pick straight from N(a)
        members = [n for n in n_elements(model) if in_n_set(model, a, n)]
        picked = []
        for n in members:
            cand = model.inv(n) if inverse else n
            if rank_exact([model.k_coordinates(z) for z in picked + [cand]]) > len(picked):
                picked.append(cand)
            if len(picked) == dim:
                break
        if len(picked) < dim:
            raise SearchExhausted("N(a) does not contain a basis")
        return BasisCertificate(a, inverse, picked, dim, dim)
    ys = _basis_in_n(model)
    xs = model.coset_table().reps
    fam = [model.mul(xi, y if inverse else model.inv(y)) for xi in xs for y in ys]
    c = turnwald_search(model, fam, limit)
    target = model.coset_of(model.mul(model.inv(c), a))
    x0 = next(xi for xi in xs if model.coset_of(xi) == target)
    s = model.mul(model.mul(model.inv(a), c), x0)  # c x0 = a s
    if not model.contains(s):
        raise SearchExhausted("rescaling element left N")  # pragma: no cover
    if inverse:
        elems = [model.mul(s, y) for y in ys]
        ok = all(in_n_set(model, a, model.inv(z)) for z in elems)
    else:
        si = model.inv(s)
        elems = [model.mul(y, si) for y in ys]
        ok = all(in_n_set(model, a, z) for z in elems)
    if not ok:
        raise SearchExhausted("constructed elements fail the N(a) test")  # pragma: no cover
    rank = rank_exact([model.k_coordinates(z) for z in elems])
    if rank != dim:
        raise SearchExhausted(f"rank {rank} < {dim}")  # pragma: no cover
    return BasisCertificate(a, inverse, elems, rank, dim, c, s)


# tame symbol ---------------------------------------------------------------------------
@dataclass
class TameCertificate:
    a: int
    l: int
    m: int
    residue: int
    class_index: int  # index of the residue in F_l^x / (F_l^x)^m
    certificate: bool
    claim: str


def tame_symbol_certificate(model: RationalCongruence, a: int, l: int | None = None,
                            m: int | None = None) -> TameCertificate:
    """Nonvanishing of ``{a, l}_N`` certified by a non-``m``-th-power residue of ``a`` mod ``l``."""
    l = model.l if l is None else l
    m = model.m if m is None else m
    if gcd(a, l) != 1:
        raise SpecInvalid(f"a={a} is not an l-adic unit for l={l}")
    if gcd(l - 1, m) == 1:
        raise SpecInvalid(f"gcd(l-1, m) = 1 for l={l}, m={m}")
    g = gcd(l - 1, m)
    r = a % l
    idx = model._log[r] % g if (l, m) == (model.l, model.m) else _dlog_class(r, l, g)
    ok = pow(r, (l - 1) // g, l) != 1
    if ok != (idx != 0):
        raise AssertionError("power test and discrete log disagree")  # pragma: no cover
    claim = f"{{{a}, {l}}}_N != 0" if ok else "no certificate"
    return TameCertificate(a, l, m, r, idx, ok, claim)


def _dlog_class(r: int, l: int, g: int) -> int:
    gen = next(c for c in range(2, l) if all(pow(c, (l - 1) // f, l) != 1 for f in _pf(l - 1)))
    x, i = 1, 0
    while x != r:
        x = x * gen % l
        i += 1
    return i % g


def _pf(n: int) -> list[int]:
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
