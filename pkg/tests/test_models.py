from __future__ import annotations

from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from valgraph.errors import NotAUnit, PrecisionExhausted, SpecInvalid
from valgraph.models import (FiniteField, FunctionFieldSemiLocal, LaurentLocal, Quaternion,
                             RationalCongruence, build_model, element_op)
from valgraph.models.base import rank_exact


# finite fields -------------------------------------------------------------
def test_ff17_n_is_fourth_powers(ff17):
    oracle = sorted({pow(x, 4, 17) for x in range(1, 17)})
    assert oracle == [1, 4, 13, 16]
    assert sorted(ff17.n_window()) == oracle
    assert ff17.index == 4


def test_ff17_coset_reps(ff17):
    assert ff17.coset_table().reps == [1, 3, 9, 10]


def test_ff17_inverse(ff17):
    assert element_op(ff17, "inv", 3) == 6


@pytest.mark.parametrize("q,m", [(17, 16), (17, 3), (7, 2)])
def test_ff_rejects_bad_parameters(q, m):
    # (17,16): -1 is not a 16th power; (17,3): 3 does not divide 16; (7,2): -1 is not a square mod 7
    with pytest.raises(SpecInvalid):
        FiniteField(q, m)


def test_ff17_eighth_powers_contain_minus_one():
    # brute force: the 8th powers of F_17^x are {1, 16}, so -1 = 16 is one of them
    assert {pow(x, 8, 17) for x in range(1, 17)} == {1, 16}
    assert FiniteField(17, 8).index == 8


@pytest.mark.parametrize("q,m", [(17, 4), (41, 4), (73, 3), (13, 3), (16, 3), (25, 4)])
def test_ff_coset_iff_quotient_in_n(q, m):
    F = FiniteField(q, m)
    els = [x for x in F.elements() if not F.is_zero(x)]
    for x in els[:40]:
        for y in els:
            assert (F.coset_of(x) == F.coset_of(y)) == F.contains(F.mul(x, F.inv(y)))


def test_build_model_rejects_unknown():
    with pytest.raises(SpecInvalid):
        build_model({"kind": "Octonion"})
    with pytest.raises(SpecInvalid):
        build_model({"kind": "FiniteField", "q": 17, "m": 4, "colour": 3})


def test_element_op_rejects_unknown(ff17):
    with pytest.raises(SpecInvalid):
        element_op(ff17, "pow", 3, 2)
    with pytest.raises(SpecInvalid):
        element_op(ff17, "add", 3)


# Laurent series --------------------------------------------------------------
def test_laurent_basics(laurent):
    L = laurent
    t = L.parse("t")
    assert L.valuation_of(L.add(L.pow(t, 3), L.pow(t, 5)), "t") == 3
    assert L.contains(L.add(L.one(), t))
    for c in (1, 2, 3):
        assert L.residue(L.add(L.from_int(c) if c == 1 else L.monomial(c, 0), t), "t") == c
    assert L.index == 6
    table = L.coset_table()
    assert table.is_abelian()
    assert table.order_profile() == {1: 1, 2: 1, 3: 2, 6: 2}  # cyclic of order 6


def test_laurent_cancellation_is_reported(laurent):
    L = laurent
    x = L.add(L.one(), L.monomial(1, 8))
    with pytest.raises(PrecisionExhausted):
        L.sub(x, L.one())


def _series(L, val, coeffs):
    return L.series(val, coeffs)


laurent_elems = st.builds(lambda v, cs: (v, cs), st.integers(-4, 4),
                          st.lists(st.integers(0, 3), min_size=1, max_size=8).filter(lambda c: c[0] != 0))


@given(laurent_elems, laurent_elems)
@settings(max_examples=200, deadline=None)
def test_laurent_exact_division(a, b):
    L = LaurentLocal(4, 2, 8)
    x, y = L.series(*a), L.series(*b)
    assert L.eq(L.mul(L.mul(x, y), L.inv(y)), x)
    assert L.valuation_of(L.mul(x, y), "t") == a[0] + b[0]


# semi-local function field ------------------------------------------------------
def test_semilocal_uniformizer(semi):
    S = semi
    assert [S.valuation_of(S.pi, p) for p in S.places] == [1, 1]
    assert S.index == 36
    t = S.parse("t")
    assert [S.valuation_of(t, p) for p in S.places] == [1, 0]


@given(st.lists(st.integers(0, 3), min_size=1, max_size=5), st.lists(st.integers(0, 3), min_size=1, max_size=4))
@settings(max_examples=100, deadline=None)
def test_semilocal_valuation_multiplicative(num, den):
    S = FunctionFieldSemiLocal()
    if not any(num) or not any(den):
        return
    x = S.make(tuple(num), tuple(den))
    y = S.make((1, 1, 1), (0, 1))
    for p in S.places:
        assert S.valuation_of(S.mul(x, y), p) == S.valuation_of(x, p) + S.valuation_of(y, p)


def test_semilocal_galois_swap_exchanges_places(semi):
    S = semi
    t = S.parse("t")
    sw = S.galois_swap(t)
    assert [S.valuation_of(sw, p) for p in S.places] == [0, 1]


# quaternion ------------------------------------------------------------------------
def test_quaternion_identities(quat):
    Q = quat
    one = Q.one()
    assert Q.eq(Q.mul(Q.pi, Q.pi), Q.from_int(-2))
    assert Q.is_zero(Q.add(Q.add(Q.mul(Q.a, Q.a), Q.a), one))
    assert Q.nrd(Q.pi) == (2, 0)
    assert [Q.valuation_of(Q.pi, p) for p in Q.places] == [1, 1]
    assert [Q.valuation_of(Q.a, p) for p in Q.places] == [0, 0]
    assert Q.residue(one, 1) == 1
    r = Q.residue(Q.a, 1)
    F4 = Q.F4
    # a generator of F_4^x satisfies X^2 + X + 1 = 0 and is not in F_2
    assert r not in (0, 1)
    assert F4.add(F4.add(F4.mul(r, r), r), 1) == 0


def test_quaternion_commutator_is_unit_outside_u1(quat):
    Q = quat
    c = Q.mul(Q.mul(Q.pi, Q.a), Q.mul(Q.inv(Q.pi), Q.inv(Q.a)))
    assert not Q.contains(c)
    for p in Q.places:
        assert Q.valuation_of(c, p) == 0
        assert Q.residue(c, p) != 1


def test_quaternion_minus_one_in_n(quat):
    assert quat.contains(quat.from_int(-1))


def test_quaternion_residue_needs_unit(quat):
    with pytest.raises(NotAUnit):
        quat.residue(quat.pi, 1)


@pytest.mark.parametrize("d", [5, 9, 16])
def test_quaternion_rejects_bad_d(d):
    with pytest.raises(SpecInvalid):
        Quaternion(d)


q_coord = st.integers(-4, 4)
q_elems = st.tuples(*[q_coord] * 8).filter(any)


def _q(coords):
    return tuple(mpq(c) for c in coords)


@given(q_elems, q_elems)
@settings(max_examples=150, deadline=None)
def test_quaternion_valuation_multiplicative(a, b):
    Q = Quaternion(17)
    x, y = _q(a), _q(b)
    for p in Q.places:
        assert Q.valuation_of(Q.mul(x, y), p) == Q.valuation_of(x, p) + Q.valuation_of(y, p)
    assert Q.eq(Q.mul(Q.mul(x, y), Q.inv(y)), x)


@given(q_elems)
@settings(max_examples=100, deadline=None)
def test_quaternion_sigma_swaps_places(a):
    Q = Quaternion(17)
    x = _q(a)
    assert Q.valuation_of(x, 2) == Q.valuation_of(Q.sigma(x), 1)


@given(st.integers(-20, 20), st.integers(-20, 20))
@settings(max_examples=100, deadline=None)
def test_quaternion_centre_valuation_even(a, b):
    Q = Quaternion(17)
    if a == 0 and b == 0:
        return
    c = Q.f_elem(mpq(a), mpq(b))
    for p in Q.places:
        assert Q.valuation_of(c, p) == 2 * Q.valuation_f((a, b), p)


def test_quaternion_multiplicative_500_pairs(quat):
    import random
    rng = random.Random(7)
    Q = quat
    for _ in range(500):
        x = _q([rng.randint(-3, 3) for _ in range(8)])
        y = _q([rng.randint(-3, 3) for _ in range(8)])
        if Q.is_zero(x) or Q.is_zero(y):
            continue
        assert Q.valuation_of(Q.mul(x, y), 1) == Q.valuation_of(x, 1) + Q.valuation_of(y, 1)


# rationals --------------------------------------------------------------------------
def test_rational_l_power_in_n(rat):
    assert rat.contains(Fraction(7 ** 3))
    assert not rat.contains(Fraction(7))
    assert rat.index == 27


small_fractions = st.builds(Fraction, st.integers(-10**4, 10**4).filter(bool), st.integers(1, 10**3))


@given(small_fractions, small_fractions)
@settings(max_examples=200, deadline=None)
def test_rational_h_homomorphism(x, y):
    R = RationalCongruence(3, 7)
    assert R.h(x * y) == R.h(x) + R.h(y)


@pytest.mark.parametrize("m,l", [(2, 7), (3, 5), (3, 9)])
def test_rational_rejects_bad_parameters(m, l):
    with pytest.raises(SpecInvalid):
        RationalCongruence(m, l)


# helpers ----------------------------------------------------------------------------
def test_rank_exact():
    assert rank_exact([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
    assert rank_exact([[1, 2], [3, 4]], modulus=5) == 2
    assert rank_exact([[1, 2], [2, 4]], modulus=5) == 1
