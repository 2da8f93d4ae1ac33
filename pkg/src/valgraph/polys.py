"""Dense univariate polynomials over a small field ``F_q``.

A polynomial is a tuple of coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is ``()``.
"""

from __future__ import annotations

from .gf import GF

Poly = tuple


def trim(c) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def add(F: GF, a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(out)


def neg(F: GF, a: Poly) -> Poly:
    return tuple(F.neg(c) for c in a)


def sub(F: GF, a: Poly, b: Poly) -> Poly:
    return add(F, a, neg(F, b))


def scale(F: GF, a: Poly, c: int) -> Poly:
    if c == 0:
        return ()
    return tuple(F.mul(x, c) for x in a)


def mul(F: GF, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def power(F: GF, a: Poly, n: int) -> Poly:
    r: Poly = (1,)
    while n:
        if n & 1:
            r = mul(F, r, a)
        a = mul(F, a, a)
        n >>= 1
    return r


def divmod_(F: GF, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    inv_lead = F.inv(b[-1])
    q = [0] * max(len(a) - len(b) + 1, 0)
    for shift in range(len(a) - len(b), -1, -1):
        c = rem[shift + len(b) - 1]
        if c:
            f = F.mul(c, inv_lead)
            q[shift] = f
            for i, y in enumerate(b):
                rem[shift + i] = F.sub(rem[shift + i], F.mul(f, y))
    return trim(q), trim(rem)


def monic(F: GF, a: Poly) -> tuple[Poly, int]:
    """Return ``(a / lead(a), lead(a))``."""
    lead = a[-1]
    return scale(F, a, F.inv(lead)), lead


def gcd(F: GF, a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)[0] if a else ()


def evaluate(F: GF, a: Poly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def order_at(F: GF, a: Poly, p: int) -> tuple[int, Poly]:
    """Multiplicity of the root ``p`` in ``a`` and the cofactor."""
    lin = (F.neg(p), 1)
    k = 0
    while a and evaluate(F, a, p) == 0:
        a = divmod_(F, a, lin)[0]
        k += 1
    return k, a


def compose_shift(F: GF, a: Poly, c: int) -> Poly:
    """``a(t + c)``."""
    out: Poly = ()
    lin = (c, 1)
    for coef in reversed(a):
        out = add(F, mul(F, out, lin), (coef,) if coef else ())
    return out


def interpolate(F: GF, points, values) -> Poly:
    """Lagrange interpolation through ``(points[i], values[i])``."""
    out: Poly = ()
    for i, (xi, yi) in enumerate(zip(points, values)):
        basis: Poly = (1,)
        denom = 1
        for j, xj in enumerate(points):
            if j != i:
                basis = mul(F, basis, (F.neg(xj), 1))
                denom = F.mul(denom, F.sub(xi, xj))
        out = add(F, out, scale(F, basis, F.mul(yi, F.inv(denom))))
    return out
