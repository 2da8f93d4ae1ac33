# %% [markdown]
# # The preorder N(my) ⊆ N(ny) and its value group
#
# On finite fields everything is enumerated. On the Laurent and
# semi-local models the value group is read off from valuations and
# cross-checked against brute-force inclusion on a window.

# %%
from __future__ import annotations

from valgraph.models import FiniteField, FunctionFieldSemiLocal, LaurentLocal
from valgraph.order import (build_ordered_quotient, diagonal_subgroup, is_totally_ordered,
                            lemma34_crosscheck, n_set, p_set)

# %%
F = FiniteField(17, 4)
print("N(3) =", n_set(F, 3).members, " P =", sorted(p_set(F, 3).elements))
oq = build_ordered_quotient(F, 3)
print("Gamma has", len(oq.gamma), "classes; order matrix:\n", oq.leq_matrix().astype(int))
print("seven conditions at (m, n) = (1, 4):", lemma34_crosscheck(F, 3, 1, 4, oq=oq))

# %% [markdown]
# Laurent series over F_4: a totally ordered copy of Z.

# %%
L = LaurentLocal(4, 2, 8)
oql = build_ordered_quotient(L, L.parse("t"))
print(oql.closed_form, oql.tag, "total:", oql.is_total())

# %% [markdown]
# Two places give Z^2 with the product order, which is not total. The
# diagonal subgroup of rational functions is.

# %%
S = FunctionFieldSemiLocal(4, (0, 1), 2)
oqs = build_ordered_quotient(S, S.pi)
total, pair = is_totally_ordered(oqs)
print(oqs.closed_form, "total:", total, "incomparable pair:", pair)
print("diagonal total:", is_totally_ordered(oqs, diagonal_subgroup(S))[0])
