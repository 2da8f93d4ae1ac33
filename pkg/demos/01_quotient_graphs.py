# %% [markdown]
# # Graphs on a finite quotient
#
# A division algebra over Q_2 with quotient S3 x S3, the abstract group
# S3 x S3, and a small Milnor graph over F_17. All distances are exact.

# %%
from __future__ import annotations

from valgraph.graphs import (KappaPresentation, build_commuting_graph, build_kappa_graph,
                             build_milnor_graph, check_vgraph_axioms, export_dot, kappa_swap,
                             is_automorphism)
from valgraph.groups import direct_product, find_isomorphism, symmetric_group
from valgraph.models import FiniteField, Quaternion

# %%
s3 = symmetric_group(3)
G = direct_product(s3, s3)
g = build_commuting_graph(G)
print("S3 x S3:", g.n_vertices, "vertices, diameter", g.diameter())

# %% [markdown]
# The quaternion model computes its own coset table. An explicit
# isomorphism to the abstract table transports the named path.

# %%
Q = Quaternion(17)
T = Q.coset_table()
gens = [G.names.index(x) for x in ("((12),1)", "((123),1)", "(1,(12))", "(1,(123))")]
phi = find_isomorphism(G, T, gens)
gq = build_commuting_graph(T)
path = [phi[G.names.index(x)] for x in ("((12),(12))", "(1,(12))", "((123),1)", "((123),(123))")]
print("quaternion quotient:", gq.n_vertices, "vertices, diameter", gq.diameter())
print("path valid:", gq.is_path(path), " end-to-end distance:", gq.distance(path[0], path[-1]))

# %% [markdown]
# Milnor graph of F_17 modulo fourth powers, with the axiom suite and a
# single-edge mutation that breaks it.

# %%
F = FiniteField(17, 4)
mg = build_milnor_graph(F)
print("Milnor edges:", mg.edges())
print("axioms:", check_vgraph_axioms(F, mg).verdicts)
broken = check_vgraph_axioms(F, mg.without_edge(*mg.edges()[0]))
print("after removing an edge, failing:", broken.failing())

# %% [markdown]
# The kappa graph: two length-3 geodesics exchanged by the swap.

# %%
p = KappaPresentation.standard(2)
kg = build_kappa_graph(p)
x, y = p.element("α+γ"), p.element("β+δ")
for path in kg.paths(x, y, 3):
    print(" -> ".join(kg.name(v) for v in path))
print("swap is an automorphism:", is_automorphism(kg, kappa_swap(p)))
print(export_dot(kg)[:200])
