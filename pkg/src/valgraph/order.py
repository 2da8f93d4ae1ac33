"""The sets ``N(y)``, the preorder they induce on ``N`` and the quotient ``Γ_y``.

Every quantified answer carries a tag:

``certified``
    exhaustive over a finite model, or read off the closed form that holds on
    local models when ``y`` lies outside every local factor ``N_i``;
``window``
    exhaustive over a finite enumeration window whose valuation range covers
    every threshold involved, so the answer is decided by the window;
``inconclusive``
    the window could not decide the question.

Only the first two feed assertions downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable

import numpy as np

from .errors import (ConditionsDisagree, HypothesisNotMet, WindowInconclusive, YInN)
from .models.base import Model, Window

CERTIFIED, WINDOW, INCONCLUSIVE = "certified", "window-certified", "inconclusive"


def _check_y(model: Model, y) -> None:
    if model.is_zero(y):
        raise ZeroDivisionError("y must be nonzero")
    if model.contains(y):
        raise YInN(f"{model.fmt(y)} lies in N")


def in_n_set(model: Model, y, n) -> bool:
    """Exact predicate ``n in N(y)``."""
    if model.is_zero(n) or not model.contains(n):
        return False
    s = model.add(y, n)
    return not model.is_zero(s) and model.contains(s)


def has_closed_form(model: Model, y) -> bool:
    return model.local and model.closed_form_applies(y)


def closed_in_n_set(model: Model, y, n) -> bool:
    """``n in N(y)`` via valuations: ``w_i(n) < w_i(y)`` at every place."""
    return model.contains(n) and all(
        model.valuation_of(n, p) < model.valuation_of(y, p) for p in model.places)


def n_elements(model: Model, window: Window | None = None) -> list:
    """All of ``N`` on enumerable models, else the model's ``N`` window."""
    if model.enumerable:
        return [x for x in model.elements() if model.contains(x)]
    return model.n_window(window)


@dataclass
class NSetView:
    """``N(y)`` as an exact predicate plus its trace on an enumeration window."""

    model: Model
    y: Any
    window: list
    mask: np.ndarray
    tag: str
    closed_form: bool
    witness: Any = None  # a member of N(y)
    non_witness: Any = None  # a member of N outside N(y)

    def __contains__(self, n) -> bool:
        return in_n_set(self.model, self.y, n)

    @property
    def members(self) -> list:
        return [x for x, b in zip(self.window, self.mask) if b]


def n_set(model: Model, y, window: Window | None = None) -> NSetView:
    """Build ``N(y)``; on local models the closed form is checked against brute force."""
    _check_y(model, y)
    elems = n_elements(model, window)
    brute = np.array([in_n_set(model, y, n) for n in elems], dtype=bool)
    closed = has_closed_form(model, y)
    if closed:
        cf = np.array([closed_in_n_set(model, y, n) for n in elems], dtype=bool)
        if not np.array_equal(cf, brute):
            bad = int(np.argmax(cf != brute))
            raise ConditionsDisagree(
                f"closed form and brute force disagree on n = {model.fmt(elems[bad])}")
    tag = CERTIFIED if (model.enumerable or closed) else WINDOW
    view = NSetView(model, y, elems, brute, tag, closed)
    if not brute.any():
        if model.enumerable:
            # possible only for finite D, where N - N need not be all of D
            view.non_witness = elems[0] if elems else None
            return view
        raise WindowInconclusive("N(y) has no member in the window")
    view.witness = elems[int(np.argmax(brute))]
    if brute.all():
        # a member of N(y^-1) inverted is never in N(y)
        yi = model.inv(y)
        cand = next((n for n in elems if in_n_set(model, yi, n)), None)
        if cand is None:
            raise WindowInconclusive("could not certify N(y) != N on the window")
        view.non_witness = model.inv(cand)
        if view.non_witness in view:
            raise ConditionsDisagree("n in N(y^-1) but n^-1 in N(y)")
    else:
        view.non_witness = elems[int(np.argmin(brute))]
    return view


@dataclass
class PSetView:
    model: Model
    y: Any
    elements: list
    tag: str


def in_p_set(model: Model, y, b) -> bool:
    """``b in P_y``: ``b in Ny`` and ``1 in N(b)``."""
    return (not model.is_zero(b) and model.coset_of(b) == model.coset_of(y)
            and in_n_set(model, b, model.one()))


def p_set(model: Model, y, window: Window | None = None) -> PSetView:
    """``P_y`` computed as ``N(y)^-1 y`` and checked against ``y N(y)^-1``.

    For each window member ``n`` the element ``m = y n y^-1`` must lie in
    ``N(y)`` with ``m^-1 y = y n^-1``, which matches the two formulas
    element by element.
    """
    view = n_set(model, y, window)
    yi = model.inv(y)
    out = []
    for n in view.members:
        ni = model.inv(n)
        left = model.mul(ni, y)
        right = model.mul(y, ni)
        m = model.mul(model.mul(y, n), yi)
        if not in_n_set(model, y, m) or not model.eq(model.mul(model.inv(m), y), right):
            raise ConditionsDisagree("N(y)^-1 y and y N(y)^-1 differ")
        if not in_p_set(model, y, left) or not in_p_set(model, y, right):
            raise ConditionsDisagree(f"{model.fmt(left)} fails the definition of P")
        out.append(left)
    if not out and not model.enumerable:
        raise WindowInconclusive("P_y is empty on the window")
    return PSetView(model, y, out, view.tag)


# the preorder ---------------------------------------------------------------
def _window_values(model: Model, elems) -> list[set[int]]:
    return [{model.valuation_of(k, p) for k in elems} for p in model.places]


def _threshold(v: int, e: int) -> int:
    """Largest multiple of ``e`` strictly below ``v``."""
    return ((v - 1) // e) * e


def window_decides(model: Model, elems, zs) -> bool:
    """Whether a product window of valuations contains every threshold of ``N(z)``."""
    vals = _window_values(model, elems)
    for i, p in enumerate(model.places):
        thr = [_threshold(model.valuation_of(z, p), model.e) for z in zs]
        if not vals[i] or min(vals[i]) > min(thr) or any(t not in vals[i] for t in thr):
            return False
    return True


def _masks(model: Model, zs, elems) -> list[np.ndarray]:
    return [np.array([in_n_set(model, z, k) for k in elems], dtype=bool) for z in zs]


def rel_closed(model: Model, y, m, n) -> bool:
    if not has_closed_form(model, y):
        raise HypothesisNotMet("no closed form for this y")
    return all(model.valuation_of(m, p) <= model.valuation_of(n, p) for p in model.places)


def rel_brute(model: Model, y, m, n, window: Window | None = None) -> tuple[bool, str]:
    """Inclusion ``N(my) ⊆ N(ny)`` by enumeration, with its certification tag."""
    elems = n_elements(model, window)
    my, ny = model.mul(m, y), model.mul(n, y)
    a, b = _masks(model, (my, ny), elems)
    ok = bool(np.all(~a | b))
    if model.enumerable or not ok:
        return ok, CERTIFIED
    if has_closed_form(model, y) and window_decides(model, elems, (my, ny)):
        return ok, WINDOW
    raise WindowInconclusive("inclusion holds on the window but is not certified")


def rel_P(model: Model, y, m, n, method: str = "both", window: Window | None = None) -> bool:
    """``m P_y n``, i.e. ``N(my) ⊆ N(ny)``."""
    _check_y(model, y)
    if method == "closed":
        return rel_closed(model, y, m, n)
    if method == "brute":
        return rel_brute(model, y, m, n, window)[0]
    if method != "both":
        raise ValueError(f"unknown method {method!r}")
    b = rel_brute(model, y, m, n, window)[0]
    if has_closed_form(model, y):
        c = rel_closed(model, y, m, n)
        if b != c:
            raise ConditionsDisagree(f"brute {b} vs closed {c} for m={model.fmt(m)}, n={model.fmt(n)}")
    return b


# Γ_y and φ_y ---------------------------------------------------------------
@dataclass
class OrderedQuotient:
    """``Γ_y = N/U_y`` with its order and the canonical map ``φ_y``.

    ``kind`` is ``"finite"`` (classes of an enumerable ``N``), ``"LocalZr"``
    (the closed form ``n -> (w_i(n)/e)_i`` with the product order) or
    ``"window"`` (classes of window traces).
    """

    model: Model
    y: Any
    kind: str
    window: list
    tag: str
    gamma: list = field(default_factory=list)
    reps: dict = field(default_factory=dict)
    _class_of_mask: dict = field(default_factory=dict, repr=False)
    _masks: dict = field(default_factory=dict, repr=False)

    @property
    def closed_form(self) -> str | None:
        if self.kind == "LocalZr":
            return f"LocalZr({len(self.model.places)}, {self.model.e})"
        return None

    @property
    def zero(self):
        return tuple(0 for _ in self.model.places) if self.kind == "LocalZr" else 0

    def _trace(self, n) -> int:
        z = self.model.mul(n, self.y)
        bits = 0
        for i, k in enumerate(self.window):
            if in_n_set(self.model, z, k):
                bits |= 1 << i
        return bits

    def phi(self, n):
        if not self.model.contains(n):
            raise ValueError(f"{self.model.fmt(n)} is not in N")
        if self.kind == "LocalZr":
            return tuple(self.model.valuation_of(n, p) // self.model.e for p in self.model.places)
        t = self._trace(n)
        if t not in self._class_of_mask:
            raise WindowInconclusive("phi(n) falls outside the computed window")
        return self._class_of_mask[t]

    def leq(self, g, h) -> bool:
        if self.kind == "LocalZr":
            return all(a <= b for a, b in zip(g, h))
        mg, mh = self._masks[g], self._masks[h]
        return mg & ~mh == 0

    def lt(self, g, h) -> bool:
        return g != h and self.leq(g, h)

    def comparable(self, g, h) -> bool:
        return self.leq(g, h) or self.leq(h, g)

    def add(self, g, h):
        if self.kind == "LocalZr":
            return tuple(a + b for a, b in zip(g, h))
        return self.phi(self.model.mul(self.reps[g], self.reps[h]))

    def neg(self, g):
        if self.kind == "LocalZr":
            return tuple(-a for a in g)
        return self.phi(self.model.inv(self.reps[g]))

    def in_U(self, n) -> bool:
        return self.model.contains(n) and self.phi(n) == self.zero

    def leq_matrix(self) -> np.ndarray:
        return np.array([[self.leq(g, h) for h in self.gamma] for g in self.gamma], dtype=bool)

    def is_total(self) -> bool:
        return all(self.comparable(g, h) for g in self.gamma for h in self.gamma)

    def to_json(self) -> str:
        fmt = self.model.fmt
        data = {
            "kind": self.kind, "tag": self.tag, "y": fmt(self.y), "closed_form": self.closed_form,
            "gamma": [list(g) if isinstance(g, tuple) else g for g in self.gamma],
            "reps": [fmt(self.reps[g]) for g in self.gamma],
            "order": self.leq_matrix().astype(int).tolist(),
            "phi": [[fmt(k), list(v) if isinstance(v, tuple) else v]
                    for k, v in zip(self.window, (self.phi(k) for k in self.window))],
        }
        return json.dumps(data, ensure_ascii=False, sort_keys=True, indent=2)


def build_ordered_quotient(model: Model, y, window: Window | None = None) -> OrderedQuotient:
    _check_y(model, y)
    elems = n_elements(model, window)
    if has_closed_form(model, y):
        oq = OrderedQuotient(model, y, "LocalZr", elems, WINDOW)
        for k in elems:
            oq.reps.setdefault(oq.phi(k), k)
        oq.gamma = sorted(oq.reps, key=lambda g: (sum(map(abs, g)), g))
        if not _crosscheck_zr(oq):
            oq.tag = INCONCLUSIVE
        return oq
    kind = "finite" if model.enumerable else "window"
    oq = OrderedQuotient(model, y, kind, elems, CERTIFIED if model.enumerable else WINDOW)
    traces = [oq._trace(k) for k in elems]
    one_trace = oq._trace(model.one())
    order = [one_trace] + sorted({t for t in traces if t != one_trace})
    for label, t in enumerate(order):
        oq._class_of_mask[t] = label
        oq._masks[label] = t
    for k, t in zip(elems, traces):
        oq.reps.setdefault(oq._class_of_mask[t], k)
    oq.reps.setdefault(0, model.one())
    oq.gamma = list(range(len(order)))
    return oq


def _crosscheck_zr(oq: OrderedQuotient) -> bool:
    """On the window: ``U`` equals the joint one-units and the order is the brute inclusion.

    The order is compared on the classes whose thresholds the window contains;
    returns whether there was at least one such pair.
    """
    model, y = oq.model, oq.y
    reps = [oq.reps[g] for g in oq.gamma]
    zs = [model.mul(k, y) for k in reps]
    masks = _masks(model, zs, oq.window)
    base = _masks(model, [y], oq.window)[0]
    for g, k, mk in zip(oq.gamma, reps, masks):
        brute_u = bool(np.array_equal(mk, base))
        if brute_u != (g == oq.zero):
            raise ConditionsDisagree(f"U membership mismatch at {model.fmt(k)}")
    inside = [window_decides(model, oq.window, [z]) for z in zs]
    compared = 0
    for (g, mg, ig), (h, mh, ih) in product(zip(oq.gamma, masks, inside), repeat=2):
        if not (ig and ih):
            continue
        compared += 1
        if bool(np.all(~mg | mh)) != oq.leq(g, h):
            raise ConditionsDisagree(f"order mismatch between {g} and {h}")
    return compared > 0


def is_totally_ordered(oq: OrderedQuotient, subgroup: "Subgroup | None" = None):
    """``(True, None)`` or ``(False, (g, h))`` for an incomparable pair of images."""
    elems = subgroup.elements if subgroup is not None else oq.window
    images = []
    for k in elems:
        g = oq.phi(k)
        if g not in images:
            images.append(g)
    for g, h in product(images, repeat=2):
        if not oq.comparable(g, h):
            return False, (g, h)
    return True, None


@dataclass
class Subgroup:
    """A subgroup ``M`` of ``N``: exact membership plus a finite window."""

    name: str
    contains: Callable[[Any], bool]
    elements: list


def full_n(model: Model, window: Window | None = None) -> Subgroup:
    return Subgroup("N", model.contains, n_elements(model, window))


def diagonal_subgroup(model: Model, window: Window | None = None) -> Subgroup:
    """``N ∩ k^x`` on models carrying a base field ``k``."""
    if not hasattr(model, "in_diagonal"):
        raise HypothesisNotMet(f"{model.kind} has no diagonal subgroup")
    return Subgroup("diagonal", model.in_diagonal, model.diagonal_window(window))


# the seven conditions ------------------------------------------------------
CONDITIONS = ("P", "phi", "all_y'", "N(nb)", "nb+m", "nP<=mP", "y'-implication")


def lemma34_crosscheck(model: Model, y, m, n, window: Window | None = None,
                       oq: OrderedQuotient | None = None) -> dict[str, bool]:
    """Evaluate the seven equivalent forms of ``m P_y n`` independently."""
    _check_y(model, y)
    if not model.enumerable and not has_closed_form(model, y):
        raise HypothesisNotMet("needs a finite model or a closed form")
    elems = n_elements(model, window)
    oq = oq or build_ordered_quotient(model, y, window)
    P = p_set(model, y, window).elements
    cosets = [model.mul(k, y) for k in elems]

    def incl(u, v):
        a, b = _masks(model, (u, v), elems)
        return bool(np.all(~a | b))

    out = {}
    out["P"] = incl(model.mul(m, y), model.mul(n, y))
    out["phi"] = oq.leq(oq.phi(m), oq.phi(n))
    out["all_y'"] = all(incl(model.mul(m, yp), model.mul(n, yp)) for yp in cosets)
    out["N(nb)"] = all(m in n_set_cached(model, model.mul(n, b), elems) for b in P)
    out["nb+m"] = all(model.contains(model.add(model.mul(n, b), m)) for b in P)
    mi = model.inv(m)
    out["nP<=mP"] = all(in_p_set(model, y, model.mul(mi, model.mul(n, b))) for b in P)
    out["y'-implication"] = all(in_n_set(model, yp, m) for yp in cosets if in_n_set(model, yp, n))
    if len(set(out.values())) != 1:
        raise ConditionsDisagree(f"conditions disagree: {out}")
    return out


class _MaskSet:
    def __init__(self, model, z, elems):
        self.model, self.z = model, z

    def __contains__(self, k):
        return in_n_set(self.model, self.z, k)


def n_set_cached(model: Model, z, elems) -> _MaskSet:
    return _MaskSet(model, z, elems)


# In / Inc -------------------------------------------------------------------
@dataclass
class InIncReport:
    In: bool
    Inc_sr: bool  # Inc(s*, r*)
    Inc_rs: bool  # Inc(r*, s*)
    tag: str
    witness: Any = None


def _dot_traces(model: Model, zs, sub: Subgroup) -> list[int]:
    out = []
    for z in zs:
        bits = 0
        for i, k in enumerate(sub.elements):
            if in_n_set(model, z, k):
                bits |= 1 << i
        out.append(bits)
    return out


def _subset(a: int, b: int) -> bool:
    return a & ~b == 0


def check_in_inc(model: Model, M: Subgroup, r, s, window: Window | None = None) -> InIncReport:
    """``In(r*, s*)``, ``Inc(s*, r*)`` and ``Inc(r*, s*)`` for ``Ṅ_M = N(.) ∩ M``."""
    _check_y(model, r)
    _check_y(model, s)
    if not model.contains(model.neg(model.one())) or not M.contains(model.neg(model.one())):
        raise HypothesisNotMet("-1 must lie in M")
    elems = n_elements(model, window)
    tr_r = _dot_traces(model, [model.mul(k, r) for k in elems], M)
    tr_s = _dot_traces(model, [model.mul(k, s) for k in elems], M)
    p_r = _dot_traces(model, p_set(model, r, window).elements, M)
    p_s = _dot_traces(model, p_set(model, s, window).elements, M)

    # the P elements join the coset samples so the In/Inc disjunction is decided on one set
    cos_r = [model.mul(k, r) for k in elems] + p_set(model, r, window).elements
    cos_s = [model.mul(k, s) for k in elems] + p_set(model, s, window).elements

    def in_rel(ta, tb):
        for (i, a), (j, b) in product(enumerate(ta), enumerate(tb)):
            if not (_subset(a, b) or _subset(b, a)):
                return False, (model.fmt(cos_r[i]), model.fmt(cos_s[j]))
        return True, None

    In, wit = in_rel(tr_r + p_r, tr_s + p_s)
    inc_sr = In and all(any(_subset(a, b) for a in p_r) for b in p_s)
    inc_rs = In and all(any(_subset(b, a) for b in p_s) for a in p_r)
    if In and not (inc_sr or inc_rs):
        raise ConditionsDisagree("In holds but neither Inc direction does")
    tag = CERTIFIED if model.enumerable else WINDOW
    return InIncReport(In, inc_sr, inc_rs, tag, wit)
