# %% [markdown]
# # Leveled maps and the distance-3 checks
#
# Classify the canonical map on three models, then check the
# distance-3 conclusions and the two-path property on the quaternion
# quotient.

# %%
from __future__ import annotations

import numpy as np

from valgraph.graphs import build_commuting_graph
from valgraph.levels import (EthConfig, SigmaAction, check_eth, classify_map, quotient_action,
                             verify_diameter_theorems)
from valgraph.models import FiniteField, FunctionFieldSemiLocal, LaurentLocal, Quaternion
from valgraph.order import build_ordered_quotient, diagonal_subgroup

# %%
L = LaurentLocal(4, 2, 8)
print("Laurent:", classify_map(build_ordered_quotient(L, L.parse("t"))).to_json())

S = FunctionFieldSemiLocal(4, (0, 1), 2)
oqs = build_ordered_quotient(S, S.pi)
print("semi-local, full N:", classify_map(oqs).to_json())
print("semi-local, diagonal:", classify_map(oqs, diagonal_subgroup(S)).to_json())

F = FiniteField(17, 4)
print("F_17, y = 3:", classify_map(build_ordered_quotient(F, 3)).to_json())

# %% [markdown]
# The quaternion pair (a, pi) sits at distance 3.

# %%
Q = Quaternion(17)
g = build_commuting_graph(Q.coset_table())
rep = verify_diameter_theorems(Q, g, Q.a, Q.pi)
for c in rep.checks:
    print(f"{c.name}: {'pass' if c.holds else 'FAIL'} ({c.checked} checked, {c.tag})")

# %%
sigma = [SigmaAction("id", np.arange(36)), SigmaAction("sigma", quotient_action(Q, Q.sigma), Q.sigma)]
eth = check_eth(Q, g, EthConfig(Q.coset_of(Q.pi), Q.coset_of(Q.a), sigma, diagonal_subgroup(Q)))
print("two-path property:", eth.holds, "paths:", len(eth.paths), "affine checks:", eth.affine_checked)
