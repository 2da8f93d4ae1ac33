from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valgraph.errors import HypothesisNotMet, YInN
from valgraph.models import FiniteField, Window
from valgraph.order import (CERTIFIED, CONDITIONS, build_ordered_quotient, check_in_inc,
                            closed_in_n_set, diagonal_subgroup, full_n, in_n_set,
                            is_totally_ordered, lemma34_crosscheck, n_elements, n_set, p_set,
                            rel_P)

Q17 = 17
N17 = {pow(x, 4, Q17) for x in range(1, Q17)}


def _oracle_n_of(y):
    return {n for n in N17 if (y + n) % Q17 in N17}


# F_17 oracles ------------------------------------------------------------------
def test_n_set_ff17(ff17):
    view = n_set(ff17, 3)
    assert set(view.members) == _oracle_n_of(3) == {1, 13}
    assert view.tag == CERTIFIED
    assert 3 + 0 not in N17


def test_p_set_ff17(ff17):
    P = p_set(ff17, 3).elements
    assert sorted(P) == [3, 12]
    assert sorted(pow(n, -1, Q17) * 3 % Q17 for n in _oracle_n_of(3)) == [3, 12]


def test_y_in_n_rejected(ff17):
    with pytest.raises(YInN):
        n_set(ff17, 4)


def test_rel_p_ff17_is_equality(ff17):
    for m, n in product(sorted(N17), repeat=2):
        oracle = _oracle_n_of(m * 3 % Q17) <= _oracle_n_of(n * 3 % Q17)
        assert rel_P(ff17, 3, m, n, "brute") == oracle == (m == n)


def test_ordered_quotient_ff17(ff17):
    oq = build_ordered_quotient(ff17, 3)
    assert len(oq.gamma) == 4
    assert oq.kind == "finite"
    m = oq.leq_matrix()
    assert (m == (m & m.T)).all() and m.diagonal().all() and m.sum() == 4
    assert not oq.is_total()


def test_lemma34_all_triples_ff17(ff17):
    count = 0
    for y in range(1, Q17):
        if y in N17:
            continue
        oq = build_ordered_quotient(ff17, y)
        for m, n in product(sorted(N17), repeat=2):
            out = lemma34_crosscheck(ff17, y, m, n, oq=oq)
            assert set(out) == set(CONDITIONS) and len(set(out.values())) == 1
            count += 1
    assert count == 192


# identities on finite fields with nonempty N(y) -------------------------------------
@pytest.mark.parametrize("q,m", [(41, 4), (73, 3), (13, 3), (17, 2)])
def test_basic_identities_finite(q, m):
    F = FiniteField(q, m)
    N = n_elements(F)
    Nset = set(N)
    for y in F.elements():
        if F.is_zero(y) or F.contains(y):
            continue
        Ny = {n for n in N if in_n_set(F, y, n)}
        assert Ny and Ny != Nset
        for n in N:
            assert {k for k in N if in_n_set(F, F.mul(n, y), k)} == {F.mul(n, k) for k in Ny}
        yi = F.inv(y)
        for n in N:
            if in_n_set(F, yi, n):
                assert not in_n_set(F, y, F.inv(n))
        left = {F.mul(F.inv(n), y) for n in Ny}
        right = {F.mul(y, F.inv(n)) for n in Ny}
        assert left == right == set(p_set(F, y).elements)


def test_empty_n_of_y_possible_on_small_finite_fields(ff17):
    # nonemptiness of N(y) needs an infinite ring; in F_17 four classes have N(y) empty
    empty = [y for y in range(1, Q17) if y not in N17 and not _oracle_n_of(y)]
    assert empty == [6, 7, 10, 11]
    for y in empty:
        view = n_set(ff17, y)
        assert view.members == [] and view.non_witness is not None
    F = FiniteField(17, 8)
    assert n_set(F, 3).members == []


# local models ------------------------------------------------------------------------
def test_laurent_closed_form_n(laurent):
    L = laurent
    t = L.parse("t")
    view = n_set(L, t)
    assert view.closed_form
    for n in view.window:
        assert (n in view) == (L.valuation_of(n, "t") <= 0)


def test_laurent_gamma_is_z(laurent):
    oq = build_ordered_quotient(laurent, laurent.parse("t"))
    assert oq.kind == "LocalZr" and oq.closed_form == "LocalZr(1, 2)"
    assert oq.is_total()
    assert all(len(g) == 1 for g in oq.gamma)


def test_semilocal_gamma_is_z2_product_order(semi):
    oq = build_ordered_quotient(semi, semi.pi)
    assert oq.closed_form == "LocalZr(2, 2)"
    assert oq.leq((0, 0), (1, 1)) and not oq.comparable((1, 0), (0, 1))
    total, pair = is_totally_ordered(oq)
    assert not total and not oq.comparable(*pair)
    for n in oq.window:
        u1 = all(semi.valuation_of(n, p) == 0 and semi.residue(n, p) == 1 for p in semi.places)
        assert oq.in_U(n) == u1
    assert is_totally_ordered(oq, diagonal_subgroup(semi))[0]


def test_rel_p_local_closed_vs_brute(laurent, semi):
    for model, y in ((laurent, laurent.parse("t")), (semi, semi.pi)):
        elems = n_elements(model)[:10]
        for m, n in product(elems, repeat=2):
            rel_P(model, y, m, n, "both")
        assert rel_P(model, y, elems[0], elems[0], "both")


def test_rel_p_unknown_method(laurent):
    with pytest.raises(ValueError):
        rel_P(laurent, laurent.parse("t"), laurent.one(), laurent.one(), "guess")


def test_local_identities_windowed(laurent, semi, quat):
    for model, ys in ((laurent, ["t", "t^-1", "t^3", "t^-3 + t"]), (semi, ["pi", "t", "t + 1"]),
                      (quat, ["pi", "a"])):
        N = n_elements(model, Window(-4, 4, 1))
        N = N[:: max(1, len(N) // 30)]
        for text in ys:
            y = model.parse(text)
            Ny = [n for n in N if in_n_set(model, y, n)]
            assert Ny and len(Ny) < len(N)
            for n in N[:6]:
                ni = model.inv(n)
                for k in N:
                    assert in_n_set(model, model.mul(n, y), k) == in_n_set(model, y, model.mul(ni, k))
            xs = [model.parse(s) for s in (["a", "pi", "1 + i"] if model is quat else ["t + 1", "t^2"])]
            for x in xs:
                xi = model.inv(x)
                yx = model.mul(model.mul(xi, y), x)
                for k in N[:12]:
                    assert in_n_set(model, yx, k) == in_n_set(model, y, model.mul(model.mul(x, k), xi))
            yi = model.inv(y)
            for n in N:
                if in_n_set(model, yi, n):
                    assert not in_n_set(model, y, model.inv(n))
            p_set(model, y)


def test_closed_form_matches_valuations(laurent):
    L = laurent
    for v in range(-6, 7):
        for c in (1, 2, 3):
            y = L.monomial(c, v)
            if L.contains(y):
                continue
            for n in n_elements(L):
                assert closed_in_n_set(L, y, n) == in_n_set(L, y, n)


def test_lemma34_laurent_samples(laurent):
    L = laurent
    y = L.parse("t")
    oq = build_ordered_quotient(L, y)
    elems = n_elements(L)[:4]
    for m, n in product(elems, repeat=2):
        out = lemma34_crosscheck(L, y, m, n, oq=oq)
        assert len(set(out.values())) == 1
        assert out["phi"] == (L.valuation_of(m, "t") <= L.valuation_of(n, "t"))


def test_lemma34_needs_closed_form_or_finite(quat):
    with pytest.raises(HypothesisNotMet):
        lemma34_crosscheck(quat, quat.generators()[0], quat.one(), quat.one())


# In / Inc ------------------------------------------------------------------------------
def test_in_inc_diagonal_semilocal(semi):
    rep = check_in_inc(semi, diagonal_subgroup(semi), semi.pi, semi.pi)
    assert rep.In and (rep.Inc_rs or rep.Inc_sr)


def _oracle_in_inc(r, s):
    Nd = lambda z: frozenset(_oracle_n_of(z))
    cos = lambda z: [k * z % Q17 for k in N17]
    P = lambda z: [pow(n, -1, Q17) * z % Q17 for n in _oracle_n_of(z)]
    In = all(Nd(a) <= Nd(b) or Nd(b) <= Nd(a) for a in cos(r) + P(r) for b in cos(s) + P(s))
    inc_sr = In and all(any(Nd(a) <= Nd(b) for a in P(r)) for b in P(s))
    inc_rs = In and all(any(Nd(b) <= Nd(a) for b in P(s)) for a in P(r))
    return In, inc_sr, inc_rs


@pytest.mark.parametrize("r,s", [(3, 9), (3, 3), (9, 10), (10, 3)])
def test_in_inc_ff17_oracle(ff17, r, s):
    rep = check_in_inc(ff17, full_n(ff17), r, s)
    assert (rep.In, rep.Inc_sr, rep.Inc_rs) == _oracle_in_inc(r, s)


# properties ------------------------------------------------------------------------------
@given(st.data())
@settings(max_examples=60, deadline=None)
def test_phi_homomorphism_and_order_laws(data):
    model = data.draw(st.sampled_from(["laurent", "semi", "ff"]))
    M = _models()[model]
    oq = _oqs()[model]
    elems = oq.window
    i, j, k = (data.draw(st.integers(0, len(elems) - 1)) for _ in range(3))
    m, n, p = elems[i], elems[j], elems[k]
    g, h, f = oq.phi(m), oq.phi(n), oq.phi(p)
    assert oq.phi(M.mul(m, n)) == oq.add(g, h)
    assert oq.leq(g, g)
    if oq.leq(g, h) and oq.leq(h, g):
        assert g == h
    if oq.leq(g, h) and oq.leq(h, f):
        assert oq.leq(g, f)
    if oq.kind == "LocalZr":
        assert oq.leq(g, h) == oq.leq(oq.add(g, f), oq.add(h, f))


_CACHE: dict = {}


def _models():
    if not _CACHE:
        from valgraph.models import FunctionFieldSemiLocal, LaurentLocal
        _CACHE["models"] = {"laurent": LaurentLocal(4, 2, 8), "semi": FunctionFieldSemiLocal(),
                            "ff": FiniteField(17, 4)}
        ms = _CACHE["models"]
        _CACHE["oqs"] = {"laurent": build_ordered_quotient(ms["laurent"], ms["laurent"].parse("t")),
                         "semi": build_ordered_quotient(ms["semi"], ms["semi"].pi),
                         "ff": build_ordered_quotient(ms["ff"], 3)}
    return _CACHE["models"]


def _oqs():
    _models()
    return _CACHE["oqs"]


def test_ordered_quotient_json_stable(laurent):
    a = build_ordered_quotient(laurent, laurent.parse("t"), Window(-2, 2, 1)).to_json()
    b = build_ordered_quotient(laurent, laurent.parse("t"), Window(-2, 2, 1)).to_json()
    assert a == b and '"kind": "LocalZr"' in a
