"""Small abstract groups given by multiplication tables."""

from __future__ import annotations

from itertools import permutations, product

import numpy as np

from .models.base import GroupTable


def _perm_name(p: tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = p[j]
        cycles.append("(" + "".join(map(str, cyc)) + ")")
    return "".join(cycles) or "1"


def symmetric_group(n: int = 3) -> GroupTable:
    """``S_n`` with identity first; ``(p*q)(i) = p(q(i))``."""
    ident = tuple(range(n))
    perms = [ident] + [p for p in permutations(range(n)) if p != ident]
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    mul = np.zeros((size, size), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mul[i, j] = index[tuple(p[q[k]] for k in range(n))]
    return GroupTable(mul=mul, names=[_perm_name(p) for p in perms])


def cyclic_group(n: int) -> GroupTable:
    idx = np.arange(n)
    return GroupTable(mul=(idx[:, None] + idx[None, :]) % n, names=[str(i) for i in range(n)])


def elementary_abelian_2(rank: int, names: list[str] | None = None) -> GroupTable:
    """``(Z/2)^rank`` as bitmasks under XOR."""
    idx = np.arange(1 << rank)
    if names is None:
        names = [format(i, f"0{rank}b") for i in range(1 << rank)]
    return GroupTable(mul=idx[:, None] ^ idx[None, :], names=names)


def direct_product(g: GroupTable, h: GroupTable) -> GroupTable:
    """``G x H`` with element ``(a, b)`` at index ``a * |H| + b``."""
    ng, nh = g.order, h.order
    mul = np.zeros((ng * nh, ng * nh), dtype=np.int64)
    for a1, b1, a2, b2 in product(range(ng), range(nh), range(ng), range(nh)):
        mul[a1 * nh + b1, a2 * nh + b2] = g.mul[a1, a2] * nh + h.mul[b1, b2]
    names = [f"({x},{y})" for x in g.names for y in h.names]
    return GroupTable(mul=mul, names=names)


def factor_swap(n: int) -> np.ndarray:
    """Permutation of ``G x G`` exchanging the factors, for ``|G| = n``."""
    return np.array([(i % n) * n + i // n for i in range(n * n)], dtype=np.int64)


def is_isomorphic_by_profile(a: GroupTable, b: GroupTable) -> bool:
    """Cheap invariant comparison: order profile, abelianness and class sizes."""
    return (a.order_profile() == b.order_profile()
            and a.is_abelian() == b.is_abelian()
            and sorted(len(a.centralizer(x)) for x in range(a.order))
            == sorted(len(b.centralizer(x)) for x in range(b.order)))


def find_isomorphism(a: GroupTable, b: GroupTable, gens_a: list[int]) -> dict[int, int] | None:
    """Search for an isomorphism determined by the images of ``gens_a``.

    Candidate images are restricted to elements of matching order; the map is
    extended along words in the generators and checked on the full table.
    """
    if a.order != b.order:
        return None
    orders_b = [b.element_order(x) for x in range(b.order)]
    choices = [[y for y in range(b.order) if orders_b[y] == a.element_order(g)] for g in gens_a]
    for images in product(*choices):
        phi = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, img in zip(gens_a, images):
                    y = int(a.mul[x, g])
                    val = int(b.mul[phi[x], img])
                    if y in phi:
                        if phi[y] != val:
                            ok = False
                            break
                    else:
                        phi[y] = val
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok or len(phi) != a.order or len(set(phi.values())) != a.order:
            continue
        if all(phi[int(a.mul[x, y])] == int(b.mul[phi[x], phi[y]])
               for x in range(a.order) for y in range(a.order)):
            return phi
    return None
