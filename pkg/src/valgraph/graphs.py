"""Graphs on the nontrivial cosets of ``D^x/N``.

A :class:`QuotientGraph` stores a symmetric boolean adjacency matrix over
the non-identity elements of a finite group table.  The builders below
realise the edge rules used throughout the package; :func:`check_vgraph_axioms`
tests a graph against the V-graph axioms exhaustively.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .errors import (BadPresentation, ClosureEscapesCentralizer, NotEnumerable,
                     TableInconsistent, VertexMismatch)
from .groups import elementary_abelian_2
from .models.base import GroupTable, Model

INF = math.inf  # distance between components; compares above every int

EDGE_RULES = ("Commuting", "SteinbergBrute", "SteinbergClosure", "KappaPairing",
              "CentralizerClosure", "Explicit")


@dataclass
class QuotientGraph:
    """Undirected graph on the elements ``1..n-1`` of ``group``."""

    group: GroupTable
    adj: np.ndarray
    edge_rule: str
    self_relations: frozenset[int] = frozenset()
    _dist: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.adj = np.asarray(self.adj, dtype=bool)
        n = self.group.order - 1
        if self.adj.shape != (n, n):
            raise VertexMismatch(f"adjacency {self.adj.shape} does not match {n} vertices")
        if not np.array_equal(self.adj, self.adj.T):
            raise TableInconsistent("adjacency is not symmetric")
        if self.adj.diagonal().any():
            raise TableInconsistent("self-loops are not stored")
        if self.edge_rule not in EDGE_RULES:
            raise ValueError(f"unknown edge rule {self.edge_rule!r}")

    # vertices are group indices 1..n-1; row i of adj is vertex i+1
    @property
    def vertices(self) -> list[int]:
        return list(range(1, self.group.order))

    @property
    def n_vertices(self) -> int:
        return self.group.order - 1

    def name(self, v: int) -> str:
        return self.group.names[v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u - 1, v - 1])

    def neighbors(self, v: int) -> list[int]:
        return (np.nonzero(self.adj[v - 1])[0] + 1).tolist()

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adj, 1))
        return [(int(i) + 1, int(j) + 1) for i, j in zip(iu, ju)]

    def with_adjacency(self, adj: np.ndarray, edge_rule: str = "Explicit") -> "QuotientGraph":
        return QuotientGraph(self.group, adj, edge_rule)

    def without_edge(self, u: int, v: int) -> "QuotientGraph":
        adj = self.adj.copy()
        adj[u - 1, v - 1] = adj[v - 1, u - 1] = False
        return self.with_adjacency(adj)

    # metrics --------------------------------------------------------------
    def distances(self) -> np.ndarray:
        """All-pairs BFS distances as floats (``inf`` across components)."""
        if self._dist is None:
            self._dist = bfs_all_pairs(self.adj)
        return self._dist

    def distance(self, u: int, v: int):
        d = self.distances()[u - 1, v - 1]
        return INF if math.isinf(d) else int(d)

    def close(self, u: int, v: int) -> bool:
        """``d(u, v) <= 1``; the identity is close to nothing."""
        if u == 0 or v == 0:
            return False
        return u == v or bool(self.adj[u - 1, v - 1])

    def diameter(self):
        return _diameter(self.distances())

    def eccentricities(self) -> dict[int, float]:
        d = self.distances()
        return {v: (INF if math.isinf(x) else int(x)) for v, x in zip(self.vertices, d.max(axis=1, initial=0))}

    def is_path(self, seq) -> bool:
        return all(self.has_edge(a, b) for a, b in zip(seq, seq[1:]))

    def paths(self, u: int, v: int, length: int) -> list[tuple[int, ...]]:
        """All simple paths from ``u`` to ``v`` with exactly ``length`` edges."""
        if length > 6:
            raise ValueError("path enumeration is limited to length 6")
        out = []

        def walk(path):
            if len(path) == length + 1:
                if path[-1] == v:
                    out.append(tuple(path))
                return
            for w in self.neighbors(path[-1]):
                if w not in path:
                    walk(path + [w])

        walk([u])
        return sorted(out)

    def metrics(self, u: int | None = None, v: int | None = None, path_len: int | None = None) -> dict:
        out = {"vertices": self.n_vertices, "edges": len(self.edges()), "diameter": self.diameter()}
        if u is not None and v is not None:
            out["distance"] = self.distance(u, v)
            if path_len is not None:
                out["paths"] = self.paths(u, v, path_len)
        return out


def bfs_all_pairs(adj: np.ndarray) -> np.ndarray:
    """Level-synchronous BFS from every source at once using boolean matmuls."""
    n = adj.shape[0]
    dist = np.full((n, n), np.inf)
    if n == 0:
        return dist
    a = adj.astype(np.int64)
    reached = np.eye(n, dtype=bool)
    frontier = reached.copy()
    dist[reached] = 0
    step = 0
    while frontier.any():
        step += 1
        nxt = (frontier.astype(np.int64) @ a > 0) & ~reached
        dist[nxt] = step
        reached |= nxt
        frontier = nxt
    return dist


def floyd_warshall(adj: np.ndarray) -> np.ndarray:
    """Independent all-pairs oracle used to cross-check :func:`bfs_all_pairs`."""
    n = adj.shape[0]
    d = np.where(adj, 1.0, np.inf)
    np.fill_diagonal(d, 0.0)
    for k in range(n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


def _diameter(dist: np.ndarray):
    if dist.size == 0:
        return 0
    m = dist.max()
    return INF if math.isinf(m) else int(m)


# builders -----------------------------------------------------------------
def build_commuting_graph(table: GroupTable) -> QuotientGraph:
    """Edges join distinct commuting non-identity elements."""
    table.check_associative()
    comm = table.mul == table.mul.T
    adj = comm[1:, 1:].copy()
    np.fill_diagonal(adj, False)
    return QuotientGraph(table, adj, "Commuting")


def _steinberg_pairs(model: Model) -> set[tuple[int, int]]:
    """Coset pairs ``(i, j)`` with ``1 in a* + b*``, found by brute force."""
    if not model.enumerable:
        raise NotEnumerable(f"{model.kind} cannot be enumerated")
    one = model.one()
    pairs = set()
    for u in model.elements():
        v = model.sub(one, u)
        if model.is_zero(v):
            continue
        pairs.add((model.coset_of(u), model.coset_of(v)))
    return pairs


def build_milnor_graph(model: Model, closure: bool = False) -> QuotientGraph:
    """Milnor K-graph from Steinberg pairs, optionally closed under bilinearity.

    Raw mode joins ``a*`` and ``b*`` when ``1 in a* + b*``.  Closure mode
    (cyclic quotients only) joins them when the symbol ``{a, b}`` lies in the
    subgroup of ``Z/n`` spanned by the Steinberg symbols, identifying
    ``{g^i, g^j}`` with ``ij``.  Closure edges are a lower bound for the true
    vanishing locus of the relative ``K_2``.
    """
    table = model.coset_table()
    n = table.order
    pairs = _steinberg_pairs(model)
    if closure:
        cyc = _cyclic_labels(table)
        if cyc is None:
            raise NotEnumerable("closure mode needs a cyclic quotient")
        span = math.gcd(n, *(cyc[i] * cyc[j] % n for i, j in pairs)) if pairs else n
        adj = np.zeros((n - 1, n - 1), dtype=bool)
        for i, j in product(range(1, n), repeat=2):
            if i != j and (cyc[i] * cyc[j]) % span == 0:
                adj[i - 1, j - 1] = True
        selfs = frozenset(i for i in range(1, n) if (cyc[i] * cyc[i]) % span == 0)
        return QuotientGraph(table, adj, "SteinbergClosure", selfs)
    adj = np.zeros((n - 1, n - 1), dtype=bool)
    selfs = set()
    for i, j in pairs:
        if i == 0 or j == 0:
            continue
        if i == j:
            selfs.add(i)
        else:
            adj[i - 1, j - 1] = adj[j - 1, i - 1] = True
    return QuotientGraph(table, adj, "SteinbergBrute", frozenset(selfs))


def _cyclic_labels(table: GroupTable) -> list[int] | None:
    """Exponents ``k`` with ``x = g^k`` for some generator ``g``, or None."""
    n = table.order
    gen = next((g for g in range(n) if table.element_order(g) == n), None)
    if gen is None:
        return None
    exps, x = [0] * n, 0
    for k in range(n):
        exps[x] = k
        x = int(table.mul[x, gen])
    return exps


@dataclass(frozen=True)
class KappaPresentation:
    """Product of ``0[(Z/2)^2]`` factors, each with two named generators.

    The generators are tagged ``unit-residue`` or ``uniformizer``; the pairing
    on one factor vanishes iff one argument is 0 or both are equal.
    """

    factors: tuple[tuple[tuple[str, str], tuple[str, str]], ...]

    @classmethod
    def standard(cls, n_factors: int = 2) -> "KappaPresentation":
        letters = "αβγδεζηθ"
        if not 1 <= n_factors <= len(letters) // 2:
            raise BadPresentation("between 1 and 4 factors supported")
        return cls(tuple(((letters[2 * i], "unit-residue"), (letters[2 * i + 1], "uniformizer"))
                         for i in range(n_factors)))

    def validate(self) -> None:
        if not self.factors:
            raise BadPresentation("at least one factor is required")
        names = []
        for f in self.factors:
            if len(f) != 2:
                raise BadPresentation("each factor needs exactly two generators")
            for gname, tag in f:
                if tag not in ("unit-residue", "uniformizer"):
                    raise BadPresentation(f"unknown generator tag {tag!r}")
                names.append(gname)
        if len(set(names)) != len(names):
            raise BadPresentation("generator names must be distinct")

    @property
    def generators(self) -> list[str]:
        return [g for f in self.factors for g, _ in f]

    def element_name(self, mask: int) -> str:
        if mask == 0:
            return "0"
        return "+".join(g for k, g in enumerate(self.generators) if mask >> k & 1)

    def element(self, text: str) -> int:
        """Bitmask for a sum of generator names such as ``"α+γ"``."""
        gens = self.generators
        mask = 0
        for part in text.replace(" ", "").split("+"):
            if part not in gens:
                raise BadPresentation(f"unknown generator {part!r}")
            mask ^= 1 << gens.index(part)
        return mask

    def component(self, mask: int, i: int) -> int:
        return (mask >> (2 * i)) & 3

    def pairing_vanishes(self, x: int, y: int) -> bool:
        for i in range(len(self.factors)):
            a, b = self.component(x, i), self.component(y, i)
            if a and b and a != b:
                return False
        return True


def build_kappa_graph(pres: KappaPresentation) -> QuotientGraph:
    pres.validate()
    rank = 2 * len(pres.factors)
    table = elementary_abelian_2(rank, [pres.element_name(m) for m in range(1 << rank)])
    n = 1 << rank
    adj = np.zeros((n - 1, n - 1), dtype=bool)
    for x in range(1, n):
        for y in range(1, n):
            if x != y and pres.pairing_vanishes(x, y):
                adj[x - 1, y - 1] = True
    return QuotientGraph(table, adj, "KappaPairing")


def kappa_swap(pres: KappaPresentation) -> np.ndarray:
    """The involution exchanging factor 0 with factor 1 (``α<->γ``, ``β<->δ``)."""
    if len(pres.factors) < 2:
        raise BadPresentation("the swap needs two factors")
    n = 1 << (2 * len(pres.factors))
    perm = np.zeros(n, dtype=np.int64)
    for m in range(n):
        c0, c1 = m & 3, (m >> 2) & 3
        perm[m] = (m & ~15) | c1 | (c0 << 2)
    return perm


def seed_subgroups(model: Model) -> dict[int, frozenset[int]]:
    """``C_{a*} = <(a+n)*, (a^-1+n)* : n in N>`` for every nontrivial coset."""
    if not model.enumerable:
        raise NotEnumerable(f"{model.kind} cannot be enumerated")
    table = model.coset_table()
    nset = model.n_window()
    out = {}
    for a in model.elements():
        h = model.coset_of(a)
        if h == 0 or h in out:
            continue
        gens = set()
        for base in (a, model.inv(a)):
            for n in nset:
                s = model.add(base, n)
                if not model.is_zero(s):
                    gens.add(model.coset_of(s))
        out[h] = table.subgroup_closure(gens)
    return out


def build_min_centralizer_vgraph(model: Model) -> QuotientGraph:
    """Least centralizer-graph whose neighbourhoods contain the seed subgroups.

    Neighbourhoods are grown to subgroups, symmetrised and re-closed until
    nothing changes; any neighbourhood leaving the centralizer of its vertex
    raises :class:`ClosureEscapesCentralizer`.
    """
    table = model.coset_table()
    n = table.order
    seeds = seed_subgroups(model)
    delta = {h: set(seeds.get(h, {0})) for h in range(1, n)}
    while True:
        changed = False
        for h in range(1, n):
            sym = {g for g in range(1, n) if h in delta[g]}
            new = set(table.subgroup_closure(delta[h] | sym))
            if new != delta[h]:
                delta[h], changed = new, True
        for h in range(1, n):
            bad = delta[h] - table.centralizer(h)
            if bad:
                g = min(bad)
                raise ClosureEscapesCentralizer(
                    f"neighbourhood of {table.names[h]} contains non-commuting {table.names[g]}", (h, g))
        if not changed:
            break
    adj = np.zeros((n - 1, n - 1), dtype=bool)
    for h in range(1, n):
        for g in delta[h]:
            if g != 0 and g != h:
                adj[h - 1, g - 1] = adj[g - 1, h - 1] = True
    return QuotientGraph(table, adj, "CentralizerClosure")


# axioms -------------------------------------------------------------------
AXIOMS = ("V1", "V1'", "V2", "V3", "V3'", "V3''")


@dataclass
class AxiomReport:
    verdicts: dict[str, str]
    witnesses: dict[str, tuple | None]

    @property
    def passed(self) -> bool:
        return all(v != "fail" for v in self.verdicts.values())

    def failing(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if v == "fail"]

    def to_dict(self) -> dict:
        return {k: {"verdict": self.verdicts[k], "witness": self.witnesses[k]} for k in AXIOMS}


def _check_v1(model: Model, graph: QuotientGraph):
    """V1 over all element pairs: ``a - b in N`` forces ``d(a*, b*) <= 1``."""
    elems = [x for x in model.elements() if not model.contains(x)]
    labels = {x: model.coset_of(x) for x in elems}
    for a in elems:
        for b in elems:
            diff = model.sub(a, b)
            if not model.is_zero(diff) and model.contains(diff) and not graph.close(labels[a], labels[b]):
                return (model.fmt(a), model.fmt(b))
    return None


def _check_v1p(model: Model, graph: QuotientGraph):
    """V1': ``1 in a* + b*`` forces ``d(a*, b*) <= 1``."""
    for i, j in sorted(_steinberg_pairs(model)):
        if i and j and not graph.close(i, j):
            return (graph.name(i), graph.name(j))
    return None


def check_vgraph_axioms(model: Model | None, graph: QuotientGraph) -> AxiomReport:
    """Exhaustive check of V1, V1', V2, V3, V3', V3''.

    V1 and V1' need additive data and are ``not-applicable`` without an
    enumerable model; the rest use only the group table.
    """
    t = graph.group
    n = t.order
    if model is not None:
        mt = model.coset_table()
        if mt.order != n or not np.array_equal(mt.mul, t.mul):
            raise VertexMismatch("graph vertices do not match the model's cosets")
    verdicts: dict[str, str] = {}
    wit: dict[str, tuple | None] = {}

    def record(key, w):
        verdicts[key] = "pass" if w is None else "fail"
        wit[key] = w

    if model is not None and model.enumerable:
        record("V1", _check_v1(model, graph))
        record("V1'", _check_v1p(model, graph))
    else:
        for key in ("V1", "V1'"):
            verdicts[key], wit[key] = "not-applicable", None

    close = np.zeros((n, n), dtype=bool)
    close[1:, 1:] = graph.adj
    idx = np.arange(1, n)
    close[idx, idx] = True
    names = t.names
    inv, mul = t.inv, t.mul

    w = None
    for a, b in product(range(1, n), repeat=2):
        if close[a, b] and not close[inv[a], b]:
            w = (names[a], names[b])
            break
    record("V2", w)

    w = None
    for a, b in product(range(1, n), repeat=2):
        ab = mul[a, b]
        if ab == 0:
            continue
        # every c adjacent-or-equal to both a and ab must be close to b
        bad = close[a] & close[ab] & ~close[b]
        bad[0] = False
        if bad.any():
            c = int(np.argmax(bad))
            w = (names[a], names[b], names[c])
            break
    record("V3", w)

    dist = np.full((n, n), np.inf)
    dist[1:, 1:] = graph.distances()
    w = None
    for a, b in product(range(1, n), repeat=2):
        ab, ba = mul[a, b], mul[b, a]
        if ab == 0:
            continue
        if (dist[a, ab] <= 2 or dist[a, ba] <= 2) and not dist[a, b] <= 2:
            w = (names[a], names[b])
            break
    record("V3'", w)

    w = None
    for a, b in product(range(1, n), repeat=2):
        if a == b:
            continue
        q = mul[inv[a], b]
        bad = close[a] & close[b] & ~close[q]
        bad[0] = False
        if bad.any():
            c = int(np.argmax(bad))
            w = (names[a], names[b], names[c])
            break
    record("V3''", w)
    return AxiomReport(verdicts, wit)


def neighbourhood_subgroups(graph: QuotientGraph) -> dict[int, bool]:
    """Whether ``{a : d(a, c) <= 1} u {1}`` is a subgroup, for each vertex ``c``."""
    t = graph.group
    out = {}
    for c in graph.vertices:
        s = {0, c, *graph.neighbors(c)}
        out[c] = t.subgroup_closure(s) == frozenset(s)
    return out


def is_automorphism(graph: QuotientGraph, perm) -> bool:
    perm = np.asarray(perm)
    if perm[0] != 0:
        return False
    p = perm[1:] - 1
    return bool(np.array_equal(graph.adj[np.ix_(p, p)], graph.adj))


# export -------------------------------------------------------------------
def export_dot(graph: QuotientGraph, path: str | Path | None = None, name: str = "G") -> str:
    """Deterministic DOT text (vertices by ascending label); written if ``path``."""
    lines = [f"graph {name} {{"]
    for v in graph.vertices:
        label = graph.name(v).replace('"', r"\"")
        lines.append(f'  v{v} [label="{label}"];')
    for u, v in graph.edges():
        lines.append(f"  v{u} -- v{v};")
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def metrics_json(graph: QuotientGraph) -> str:
    data = {
        "edge_rule": graph.edge_rule,
        "vertices": [graph.name(v) for v in graph.vertices],
        "edges": [[graph.name(u), graph.name(v)] for u, v in graph.edges()],
        "diameter": _jsonable(graph.diameter()),
        "eccentricities": {graph.name(v): _jsonable(e) for v, e in graph.eccentricities().items()},
    }
    return json.dumps(data, ensure_ascii=False, sort_keys=True, indent=2)
