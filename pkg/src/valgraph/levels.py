"""Leveled and strongly leveled maps, the diameter theorems on instances, and property (3½).

For ``φ = φ_y : N -> Γ_y`` and ``α >= 0``:

* ``L(α)``: ``N_{<-α}`` is nonempty and ``N_{<-α} + 1 ⊆ N_{<-α}``;
* ``SL(α)``: ``N_{>α}`` is nonempty and ``1 ± N_{>α} ⊆ N_{<=0}``.

When a subgroup ``M`` is given, every quantifier runs over ``M`` instead of
``N`` (the restricted map ``φ|_M``).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Any, Callable

import numpy as np

from .errors import (AffineRuleViolated, ConditionsDisagree, EmptyLevelSet, HypothesisNotMet,
                     PrecisionExhausted, WindowInconclusive)
from .graphs import QuotientGraph
from .models.base import Model, Window
from .order import (CERTIFIED, INCONCLUSIVE, WINDOW, OrderedQuotient, Subgroup, build_ordered_quotient,
                    check_in_inc, in_n_set, is_totally_ordered, n_elements, p_set)


def _jsonable(g):
    return list(g) if isinstance(g, tuple) else g


@dataclass
class LevelCheck:
    mode: str
    alpha: Any
    holds: bool | None  # None: the window cannot decide
    tag: str
    witness: Any = None  # an element of the level set violating the rule
    checked: int = 0


def _domain(oq: OrderedQuotient, subgroup: Subgroup | None):
    if subgroup is None:
        return oq.window, oq.model.contains
    return subgroup.elements, subgroup.contains


def _tag(oq: OrderedQuotient) -> str:
    return CERTIFIED if oq.model.enumerable else WINDOW


def _decided(oq: OrderedQuotient, alpha, mode: str, values) -> bool:
    """On ``Z^r`` the level set is cut by the window.

    A verdict counts only if ``α`` (``-α`` for L) sits strictly inside the
    coordinate range of the window images, so at least one layer beyond the
    threshold is sampled in every direction.
    """
    if oq.kind != "LocalZr":
        return True
    for i, a in enumerate(alpha):
        coords = [v[i] for v in values]
        if mode == "SL" and not a < max(coords):
            return False
        if mode == "L" and not -a > min(coords):
            return False
    return True


def _phi(oq: OrderedQuotient, n):
    try:
        return oq.phi(n)
    except PrecisionExhausted as exc:
        raise WindowInconclusive(f"phi not certified: {exc}") from None


def _sum(model: Model, a, b):
    try:
        return model.add(a, b)
    except PrecisionExhausted as exc:
        raise WindowInconclusive(f"sum not certified: {exc}") from None


def check_level(oq: OrderedQuotient, alpha, mode: str = "SL",
                subgroup: Subgroup | None = None) -> LevelCheck:
    """Test ``L(α)`` or ``SL(α)`` on the window of ``oq`` (or of ``subgroup``)."""
    if mode not in ("L", "SL"):
        raise ValueError(f"unknown mode {mode!r}")
    if not oq.leq(oq.zero, alpha):
        raise HypothesisNotMet(f"alpha = {alpha} is not non-negative")
    model = oq.model
    elems, member = _domain(oq, subgroup)
    one = model.one()
    ok_tag = _tag(oq) if _decided(oq, alpha, mode, {_phi(oq, n) for n in elems}) else INCONCLUSIVE
    if mode == "L":
        bound = oq.neg(alpha)
        level = [n for n in elems if oq.lt(_phi(oq, n), bound)]
        if not level:
            raise EmptyLevelSet(f"N_<-{alpha} is empty on the window")
        for n in level:
            s = _sum(model, n, one)
            if model.is_zero(s) or not member(s) or not oq.lt(_phi(oq, s), bound):
                return LevelCheck(mode, alpha, False, _tag(oq), model.fmt(n), len(level))
        return LevelCheck(mode, alpha, True, ok_tag, None, len(level))
    level = [n for n in elems if oq.lt(alpha, _phi(oq, n))]
    if not level:
        raise EmptyLevelSet(f"N_>{alpha} is empty on the window")
    for n in level:
        for s in (_sum(model, one, n), _sum(model, one, model.neg(n))):
            if model.is_zero(s) or not member(s) or not oq.leq(_phi(oq, s), oq.zero):
                return LevelCheck(mode, alpha, False, _tag(oq), model.fmt(n), len(level))
    return LevelCheck(mode, alpha, True, ok_tag, None, len(level))


def _candidates(oq: OrderedQuotient, subgroup: Subgroup | None) -> list:
    """Non-negative window values of ``φ`` in graded lexicographic order."""
    elems, _ = _domain(oq, subgroup)
    vals = {_phi(oq, n) for n in elems} | {oq.zero}
    nonneg = [g for g in vals if oq.leq(oq.zero, g)]
    if oq.kind == "LocalZr":
        return sorted(nonneg, key=lambda g: (sum(g), g))
    return sorted(nonneg)


def _scan(oq, mode, subgroup):
    """Verdicts for every candidate with a nonempty level set.

    A pass the window cannot decide is kept with tag ``inconclusive``.
    """
    verdicts = []
    for alpha in _candidates(oq, subgroup):
        try:
            verdicts.append(check_level(oq, alpha, mode, subgroup))
        except EmptyLevelSet:
            # on Z^r an empty level set only says the window is too small
            if oq.kind == "LocalZr":
                verdicts.append(LevelCheck(mode, alpha, None, INCONCLUSIVE))
    return verdicts


def _least(verdicts):
    return next((v.alpha for v in verdicts if v.holds and v.tag != INCONCLUSIVE), None)


def find_s_level(oq: OrderedQuotient, subgroup: Subgroup | None = None):
    """Least window ``α`` (graded lex) with ``SL(α)``, and all verdicts.

    Monotonicity is asserted: every applicable ``β >= α`` also passes.
    """
    verdicts = _scan(oq, "SL", subgroup)
    best = _least(verdicts)
    if best is not None:
        for v in verdicts:
            if oq.leq(best, v.alpha) and v.holds is False:
                raise ConditionsDisagree(f"SL({best}) holds but SL({v.alpha}) fails")
    return best, verdicts


def find_level(oq: OrderedQuotient, subgroup: Subgroup | None = None):
    """Least window ``α`` with ``L(α)``, and all verdicts."""
    verdicts = _scan(oq, "L", subgroup)
    return _least(verdicts), verdicts


@dataclass
class LevelReport:
    is_leveled: bool
    level: Any
    is_strongly_leveled: bool
    s_level: Any
    is_totally_ordered: bool
    is_valuation_like: bool
    is_strong_valuation_like: bool
    s_level_zero: bool
    tag: str
    subgroup: str
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["level"] = _jsonable(self.level)
        d["s_level"] = _jsonable(self.s_level)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, default=str)


def classify_map(oq: OrderedQuotient, subgroup: Subgroup | None = None) -> LevelReport:
    """Combine the level scans with the total-order test.

    ``SL(α) => L(α)`` is cross-asserted for the s-level found.
    """
    s_level, s_verdicts = find_s_level(oq, subgroup)
    level, l_verdicts = find_level(oq, subgroup)
    witnesses: dict = {}
    undecided = lambda vs: any(v.tag == INCONCLUSIVE for v in vs)
    tag = _tag(oq)
    if s_level is not None:
        try:
            lc = check_level(oq, s_level, "L", subgroup)
        except EmptyLevelSet:
            raise ConditionsDisagree(f"N_>{s_level} is nonempty but N_<-{s_level} is empty") from None
        if not lc.holds:
            raise ConditionsDisagree(f"SL({s_level}) holds but L({s_level}) fails at {lc.witness}")
        if level is None and lc.tag != INCONCLUSIVE:
            raise ConditionsDisagree("strongly leveled map found no level")  # pragma: no cover
    else:
        witnesses["SL"] = [(_jsonable(v.alpha), v.witness) for v in s_verdicts if v.holds is False]
    # a missing level only counts as a negative when no candidate was left undecided
    if (s_level is None and undecided(s_verdicts)) or (level is None and undecided(l_verdicts)):
        tag = INCONCLUSIVE
    zero = next((v for v in s_verdicts if v.alpha == oq.zero and v.tag != INCONCLUSIVE), None)
    total, pair = is_totally_ordered(oq, subgroup)
    if not total:
        g, h = pair
        witnesses["incomparable"] = {
            "values": [_jsonable(g), _jsonable(h)],
            "elements": [oq.model.fmt(oq.reps[g]), oq.model.fmt(oq.reps[h])],
        }
    return LevelReport(
        is_leveled=level is not None, level=level,
        is_strongly_leveled=s_level is not None, s_level=s_level,
        is_totally_ordered=total,
        is_valuation_like=level is not None and total,
        is_strong_valuation_like=s_level is not None and total,
        s_level_zero=bool(zero and zero.holds),
        tag=tag, subgroup=subgroup.name if subgroup else "N",
        witnesses=witnesses,
    )


# the diameter theorems on instances -----------------------------------------
@dataclass
class IdentityCheck:
    name: str
    holds: bool
    checked: int
    tag: str
    witness: Any = None


@dataclass
class TheoremReport:
    distance: Any
    sides: dict
    checks: list
    passed: bool

    def to_dict(self) -> dict:
        return {"distance": self.distance, "sides": self.sides,
                "checks": [asdict(c) for c in self.checks], "passed": self.passed}


def _mask(model: Model, z, elems) -> np.ndarray:
    if model.is_zero(z):
        return np.zeros(len(elems), dtype=bool)
    return np.array([in_n_set(model, z, k) for k in elems], dtype=bool)


def _first_bad(bad: np.ndarray, elems, model):
    return model.fmt(elems[int(np.argmax(bad))]) if bad.any() else None


def _lowest(model: Model, elems) -> list:
    """Lowest valuation first, so that derived thresholds stay inside the window."""
    if not model.local:
        return list(elems)
    return sorted(elems, key=lambda z: sum(model.value_vector(z)))


def _coset_samples(model: Model, x, count: int) -> list:
    small = n_elements(model, Window(-2, 2, 0)) if not model.enumerable else n_elements(model)
    return [model.mul(k, x) for k in small[:count]]


def verify_diameter_theorems(model: Model, graph: QuotientGraph, x, y,
                             window: Window | None = None, samples: int = 6) -> TheoremReport:
    """Check the conclusions of the distance-3/4/5 results for the pair ``x, y``.

    Both orientations are computed; the report names the sides that pass.
    Raises :class:`HypothesisNotMet` when ``d(x*, y*) < 3``.
    """
    cx, cy = model.coset_of(x), model.coset_of(y)
    if cx == 0 or cy == 0:
        raise HypothesisNotMet("x and y must lie outside N")
    d = graph.distance(cx, cy)
    if d < 3:
        raise HypothesisNotMet(f"d(x*, y*) = {d} < 3")
    tag = CERTIFIED if model.enumerable else WINDOW
    sides, reports = {}, {}
    for name, z in (("y", y), ("x", x)):
        oq = build_ordered_quotient(model, z, window)
        rep = classify_map(oq)
        reports[name] = (oq, rep)
        sides[name] = rep.to_dict()
    checks: list[IdentityCheck] = []

    def add(name, ok, n, wit=None):
        checks.append(IdentityCheck(name, bool(ok), n, tag, wit))

    add("SL(phi_y)", reports["y"][1].is_strongly_leveled, 1)
    if d >= 4:
        add("strong valuation-like on some side",
            any(r.is_strong_valuation_like for _, r in reports.values()), 2)
    if d >= 5:
        add("s-level 0 on some side", any(r.s_level_zero for _, r in reports.values()), 2)

    elems = n_elements(model, window)
    # N(x+y)
    s = model.add(x, y)
    add("x+y not in N", not model.contains(s), 1)
    mx, my, ms = _mask(model, x, elems), _mask(model, y, elems), _mask(model, s, elems)
    bad = ms != (mx & my)
    add("N(x+y) = N(x) ∩ N(y)", not bad.any(), len(elems), _first_bad(bad, elems, model))
    if graph.distance(model.coset_of(s), cx) >= 3:
        mnx = _mask(model, model.neg(x), elems)
        bad = (ms != my) | (my & ~(mx & mnx))
        add("N(x+y) = N(y) ⊆ N(x) ∩ N(-x)", not bad.any(), len(elems), _first_bad(bad, elems, model))

    # N(ab) on coset samples, for both hypothesis shapes that apply
    one, mone = model.one(), model.neg(model.one())
    n_ab = 0
    ab_bad = None
    for a, b in product(_coset_samples(model, x, samples), _coset_samples(model, y, samples)):
        hyp12 = any((d >= 4 and not in_n_set(model, b, eps)) or in_n_set(model, model.inv(b), eps)
                    for eps in (one, mone))
        hyp3 = any(in_n_set(model, a, eps) for eps in (one, mone))
        if hyp12:
            n_ab += 1
            lhs = _mask(model, model.mul(a, b), elems) | _mask(model, model.mul(b, a), elems)
            rhs = _mask(model, a, elems) & _mask(model, model.neg(a), elems)
            if (lhs & ~rhs).any() and ab_bad is None:
                ab_bad = (model.fmt(a), model.fmt(b))
        if hyp3:
            n_ab += 1
            lhs = _mask(model, b, elems)
            rhs = _mask(model, model.mul(a, b), elems) & _mask(model, model.mul(b, a), elems)
            if (lhs & ~rhs).any() and ab_bad is None:
                ab_bad = (model.fmt(a), model.fmt(b))
    add("N(ab) inclusions", ab_bad is None, n_ab, ab_bad)

    # P_x against P_y
    oq_y = reports["y"][0]
    Px = _lowest(model, p_set(model, x, window).elements)[:samples]
    Py = _lowest(model, p_set(model, y, window).elements)[:samples]
    bad1 = bad2 = bad5 = badc = None
    n5 = 0
    for a in Px:
        a1 = model.add(a, one)
        ainv = model.inv(a)
        m_ainv = _mask(model, ainv, elems)
        if not model.contains(a1) or not oq_y.in_U(a1):
            bad1 = bad1 or model.fmt(a)
        # N(a^-1) ⊆ N_{<=y 0}
        for k, inside in zip(elems, m_ainv):
            if inside and not oq_y.leq(oq_y.phi(k), oq_y.zero):
                badc = badc or model.fmt(k)
        for b in Py:
            if not in_n_set(model, b, a1):
                bad1 = bad1 or (model.fmt(a), model.fmt(b))
            m_b = _mask(model, b, elems)
            if (m_ainv & ~m_b).any():
                bad2 = bad2 or (model.fmt(a), model.fmt(b))
            z = model.inv(model.mul(b, a))  # a^-1 b^-1
            both = [k for k, u, v in zip(elems, _mask(model, a, elems), m_b) if u and v]
            for n in elems:
                if not in_n_set(model, z, model.inv(n)):
                    continue
                n5 += 1
                for k in both[:samples]:
                    for t in (model.add(k, n), model.sub(k, n)):
                        if not (in_n_set(model, a, t) and in_n_set(model, b, t)):
                            bad5 = bad5 or (model.fmt(a), model.fmt(b), model.fmt(n))
                break  # one n per pair keeps the check linear
    add("a+1 in U_y and a+1 in N(b)", bad1 is None, len(Px) * max(1, len(Py)), bad1)
    add("N(a^-1) ⊆ N(b)", bad2 is None, len(Px) * len(Py), bad2)
    add("N(a^-1) ⊆ N_{<=y 0}", badc is None, len(Px), badc)
    add("(N(a) ∩ N(b)) ± n ⊆ N(a) ∩ N(b)", bad5 is None, n5, bad5)
    return TheoremReport(d, sides, checks, all(c.holds for c in checks))


# In/Inc consequences ---------------------------------------------------------
def inc_consequences(model: Model, M: Subgroup, r, s, window: Window | None = None) -> dict:
    """When ``Inc(s*, r*)`` holds: ``φ_s(M)`` is total and ``N_{<=s 0} ⊇ N_{<=r 0}``."""
    rep = check_in_inc(model, M, r, s, window)
    if not rep.Inc_sr:
        return {"Inc(s,r)": False, "In": rep.In, "tag": rep.tag}
    oq_s = build_ordered_quotient(model, s, window)
    oq_r = build_ordered_quotient(model, r, window)
    total, pair = is_totally_ordered(oq_s, M)
    bad = next((model.fmt(k) for k in oq_r.window
                if oq_r.leq(oq_r.phi(k), oq_r.zero) and not oq_s.leq(oq_s.phi(k), oq_s.zero)), None)
    return {"Inc(s,r)": True, "In": rep.In, "tag": rep.tag, "total_on_M": total,
            "incomparable": pair, "N_le0_inclusion": bad is None, "witness": bad}


# property (3½) -----------------------------------------------------------------
@dataclass
class SigmaAction:
    """A permutation of ``D^x`` seen through its action on the quotient."""

    name: str
    perm: np.ndarray  # on group indices, fixing 0
    element_map: Callable[[Any], Any] | None = None


@dataclass
class EthConfig:
    x: int
    y: int
    sigma: list
    M: Subgroup | None = None
    samples: int = 8

    def validate(self, order: int) -> None:
        for s in self.sigma:
            p = np.asarray(s.perm)
            if p.shape != (order,) or sorted(p.tolist()) != list(range(order)):
                raise HypothesisNotMet(f"{s.name} is not a permutation of the quotient")
            if p[0] != 0:
                raise HypothesisNotMet(f"{s.name} does not fix the identity coset")


@dataclass
class EthReport:
    holds: bool
    distance: Any
    paths: list
    witnesses: list  # per path: name of the breaking sigma or None
    affine_checked: int
    tag: str

    def to_dict(self) -> dict:
        return asdict(self)


def _affine_rule(model: Model, cfg: EthConfig) -> int:
    if cfg.M is None:
        return 0
    mone = model.neg(model.one())
    if not cfg.M.contains(mone):
        raise HypothesisNotMet("-1 must lie in M")
    ds = [a for a in model.d_window(Window(-2, 2, 0)) if not model.contains(a)][: cfg.samples]
    ks = cfg.M.elements[: cfg.samples]
    count = 0
    for s in cfg.sigma:
        if s.element_map is None:
            continue
        for k in ks:
            if not model.contains(s.element_map(k)):
                raise AffineRuleViolated(f"{s.name} does not preserve N at {model.fmt(k)}")
        for a in ds:
            sa = s.element_map(a)
            if int(s.perm[model.coset_of(a)]) != model.coset_of(sa):
                raise AffineRuleViolated(f"{s.name} is not compatible with its quotient action")
            for k in ks:
                lhs = model.add(a, k)
                rhs = model.add(sa, k)
                if model.is_zero(lhs) or model.is_zero(rhs):
                    continue
                count += 1
                if model.coset_of(s.element_map(lhs)) != model.coset_of(rhs):
                    raise AffineRuleViolated(
                        f"{s.name}(a+k)* != ({s.name}(a)+k)* at a={model.fmt(a)}, k={model.fmt(k)}")
    return count


def check_eth(model: Model | None, graph: QuotientGraph, cfg: EthConfig) -> EthReport:
    """Decide property (3½) for ``cfg.x, cfg.y`` and the permutations ``cfg.sigma``.

    Every length-3 path ``x, r, s, y`` must be broken by some ``σ`` with
    ``d(σx, y) >= 3`` such that ``σx, σr, s, y`` is not a path.
    """
    cfg.validate(graph.group.order)
    d = graph.distance(cfg.x, cfg.y)
    if d < 3:
        raise HypothesisNotMet(f"d(x*, y*) = {d} < 3")
    affine = _affine_rule(model, cfg) if model is not None else 0
    paths = graph.paths(cfg.x, cfg.y, 3)
    witnesses = []
    for p in paths:
        hit = None
        for s in cfg.sigma:
            sx, sr = int(s.perm[p[0]]), int(s.perm[p[1]])
            if sx == 0 or graph.distance(sx, cfg.y) < 3:
                continue
            if sr == 0 or not graph.is_path((sx, sr, p[2], p[3])):
                hit = s.name
                break
        witnesses.append(hit)
    names = [tuple(graph.name(v) for v in p) for p in paths]
    return EthReport(all(w is not None for w in witnesses), d, names, witnesses, affine,
                     CERTIFIED if model is None or model.enumerable else WINDOW)


def quotient_action(model: Model, fn: Callable[[Any], Any]) -> np.ndarray:
    """The permutation of coset labels induced by an automorphism ``fn`` of ``D``."""
    reps = model.coset_table().reps
    perm = np.array([model.coset_of(fn(r)) for r in reps], dtype=np.int64)
    if sorted(perm.tolist()) != list(range(len(reps))):
        raise AffineRuleViolated("the map does not permute the cosets")
    return perm
