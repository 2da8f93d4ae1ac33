# %% [markdown]
# # From leveled maps to valuations
#
# Congruence subgroups, generated rings, a = x b decompositions, bases
# inside N(a) and tame-symbol certificates. Every search is bounded and
# says so when it runs out.

# %%
from __future__ import annotations

from valgraph.errors import SearchExhausted
from valgraph.models import FiniteField, FunctionFieldSemiLocal, LaurentLocal, Quaternion, RationalCongruence
from valgraph.order import build_ordered_quotient
from valgraph.valuation import (basis_in_n_set, congruence_openness, decompose_ab_inverse,
                                escape_prime_search, generated_ring_window,
                                tame_symbol_certificate, turnwald_search)

# %%
L = LaurentLocal(4, 2, 8)
S = FunctionFieldSemiLocal(4, (0, 1), 2)
print("Laurent delta:", congruence_openness(L).delta, " semi-local delta:", congruence_openness(S).delta)
ref = congruence_openness(S, mode="refute-single-place", bound=3)
print("close to 1 at t = 0 but outside N:", ref.witnesses[0])

# %%
oq = build_ordered_quotient(L, L.parse("t"))
print("A ring:", generated_ring_window(oq, "A").summary())
print("R ring:", generated_ring_window(oq, "R").summary())
print("t^-1 =", decompose_ab_inverse(oq, L.parse("t^-1")).fmt(L))

# %%
F = FiniteField(17, 4)
try:
    turnwald_search(F, [3, 9])
except SearchExhausted as exc:
    print("F_17:", exc)
print("F_41:", turnwald_search(FiniteField(41, 4), [3, 9]))

# %%
Q = Quaternion(17)
for inverse in (False, True):
    cert = basis_in_n_set(Q, Q.pi, inverse=inverse)
    print("inverse" if inverse else "direct", "rank", cert.rank, "of", cert.dimension)

# %%
R = RationalCongruence(3, 7)
for a in (3, 8):
    print(tame_symbol_certificate(R, a).claim)
print(escape_prime_search(R, {2: 3, 5: 2}))
