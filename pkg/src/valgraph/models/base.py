"""Common interface for the concrete pairs ``(D, N)``.

Every generic algorithm in the package talks to a model only through the
methods declared on :class:`Model`, so a new division ring can be plugged in
by implementing arithmetic, ``N``-membership and coset labelling.
"""

from __future__ import annotations

import ast
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from ..errors import NotEnumerable, SpecInvalid, TableInconsistent

Element = Any


@dataclass(frozen=True)
class CosetId:
    label: int

    @property
    def is_identity(self) -> bool:
        return self.label == 0


@dataclass
class GroupTable:
    """A finite group given by its multiplication table on ``0..n-1``.

    Index 0 is the identity.  ``names`` are display strings used in reports
    and DOT exports.
    """

    mul: np.ndarray
    names: list[str]
    inv: np.ndarray = field(init=False)

    def __post_init__(self):
        self.mul = np.asarray(self.mul, dtype=np.int64)
        n = self.mul.shape[0]
        if self.mul.shape != (n, n):
            raise TableInconsistent("multiplication table is not square")
        if len(self.names) != n:
            raise TableInconsistent("names do not match table size")
        if self.mul.min(initial=0) < 0 or self.mul.max(initial=0) >= n:
            raise TableInconsistent("table entries out of range")
        ident = np.arange(n)
        if not (np.array_equal(self.mul[0], ident) and np.array_equal(self.mul[:, 0], ident)):
            raise TableInconsistent("index 0 is not a two-sided identity")
        for row in self.mul:
            if len(set(row.tolist())) != n:
                raise TableInconsistent("table is not a Latin square")
        inv = np.argmax(self.mul == 0, axis=1)
        self.inv = inv.astype(np.int64)

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def check_associative(self) -> None:
        m = self.mul
        # (ab)c == a(bc) for all triples, vectorized over a, b
        left = m[m[:, :, None], np.arange(self.order)[None, None, :]]
        right = m[np.arange(self.order)[:, None, None], m[None, :, :]]
        if not np.array_equal(left, right):
            raise TableInconsistent("table is not associative")

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.mul[x, g])
            k += 1
        return k

    def order_profile(self) -> dict[int, int]:
        prof: dict[int, int] = {}
        for g in range(self.order):
            o = self.element_order(g)
            prof[o] = prof.get(o, 0) + 1
        return dict(sorted(prof.items()))

    def commutes(self, a: int, b: int) -> bool:
        return self.mul[a, b] == self.mul[b, a]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def subgroup_closure(self, gens) -> frozenset[int]:
        elems = {0}
        frontier = [0]
        gens = [int(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.mul[x, g])
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(elems)

    def centralizer(self, a: int) -> frozenset[int]:
        return frozenset(np.nonzero(self.mul[a] == self.mul[:, a])[0].tolist())


@dataclass
class CosetTable(GroupTable):
    """The quotient ``D^x/N`` with one representative per coset."""

    reps: list = field(default_factory=list)

    def coset_ids(self) -> list[CosetId]:
        return [CosetId(i) for i in range(self.order)]


@dataclass(frozen=True)
class Window:
    """Finite enumeration window for infinite models.

    ``val_min``/``val_max`` bound the valuations (per place) of generated
    elements and ``unit_depth`` bounds the length of the one-unit parts.
    """

    val_min: int = -8
    val_max: int = 8
    unit_depth: int = 1


class Model:
    """Base class for an exactly computable pair ``(D, N)``."""

    kind: str = "abstract"
    index: int = 0
    places: tuple = ()
    e: int = 1
    enumerable: bool = False
    local: bool = False  # valuation data available at every place

    def __init__(self):
        self._lock = threading.Lock()
        self._table: CosetTable | None = None

    # arithmetic -----------------------------------------------------------
    def zero(self) -> Element:
        raise NotImplementedError

    def one(self) -> Element:
        raise NotImplementedError

    def from_int(self, n: int) -> Element:
        raise NotImplementedError

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def eq(self, x, y) -> bool:
        return x == y

    def is_zero(self, x) -> bool:
        raise NotImplementedError

    def pow(self, x, n: int):
        if n < 0:
            x, n = self.inv(x), -n
        r = self.one()
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r

    def conj(self, y, x):
        """``y^x = x^-1 y x``."""
        return self.mul(self.mul(self.inv(x), y), x)

    # N and cosets ---------------------------------------------------------
    def contains(self, x) -> bool:
        raise NotImplementedError

    def coset_of(self, x) -> int:
        raise NotImplementedError

    def coset_id(self, x) -> CosetId:
        return CosetId(self.coset_of(x))

    def _coset_reps(self) -> list:
        raise NotImplementedError

    def coset_table(self) -> CosetTable:
        if self._table is None:
            with self._lock:
                if self._table is None:
                    self._table = self._build_table()
        return self._table

    def _build_table(self) -> CosetTable:
        reps = self._coset_reps()
        n = len(reps)
        if sorted(self.coset_of(r) for r in reps) != list(range(n)):
            raise TableInconsistent("representatives do not hit every label once")
        reps = sorted(reps, key=self.coset_of)
        mul = np.zeros((n, n), dtype=np.int64)
        for i, a in enumerate(reps):
            for j, b in enumerate(reps):
                mul[i, j] = self.coset_of(self.mul(a, b))
        return CosetTable(mul=mul, names=[self.fmt(r) for r in reps], reps=reps)

    # valuations -----------------------------------------------------------
    def valuation_of(self, x, place) -> int:
        raise NotImplementedError(f"{self.kind} has no valuations")

    def residue(self, x, place) -> int:
        raise NotImplementedError(f"{self.kind} has no residue maps")

    def value_vector(self, x) -> tuple[int, ...]:
        return tuple(self.valuation_of(x, p) for p in self.places)

    def closed_form_applies(self, y) -> bool:
        """True when ``y`` lies outside every local factor ``N_i``."""
        return False

    # windows --------------------------------------------------------------
    def elements(self) -> list:
        raise NotEnumerable(f"{self.kind} is not enumerable")

    def n_window(self, window: Window | None = None) -> list:
        raise NotImplementedError

    def d_window(self, window: Window | None = None) -> list:
        raise NotImplementedError

    def default_window(self) -> Window:
        return Window()

    # text -----------------------------------------------------------------
    def fmt(self, x) -> str:
        return repr(x)

    def symbols(self) -> dict[str, Element]:
        return {}

    def parse(self, text: str) -> Element:
        """Parse an arithmetic expression over the model's named constants."""
        try:
            tree = ast.parse(text.strip(), mode="eval")
        except SyntaxError as exc:
            raise SpecInvalid(f"cannot parse element {text!r}: {exc.msg}") from None
        return self._eval(tree.body, text)

    def _eval(self, node, text):
        syms = self.symbols()
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return self.from_int(node.value)
        if isinstance(node, ast.Name):
            if node.id not in syms:
                raise SpecInvalid(f"unknown symbol {node.id!r} in {text!r}")
            return syms[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval(node.operand, text)
            return self.neg(v) if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    exp = node.right
                    if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub) \
                            and isinstance(exp.operand, ast.Constant):
                        return self.pow(self._eval(node.left, text), -exp.operand.value)
                    raise SpecInvalid(f"exponent must be an integer in {text!r}")
                return self.pow(self._eval(node.left, text), node.right.value)
            a = self._eval(node.left, text)
            b = self._eval(node.right, text)
            if isinstance(node.op, ast.Add):
                return self.add(a, b)
            if isinstance(node.op, ast.Sub):
                return self.sub(a, b)
            if isinstance(node.op, ast.Mult):
                return self.mul(a, b)
            if isinstance(node.op, ast.Div):
                return self.mul(a, self.inv(b))
        raise SpecInvalid(f"unsupported syntax in {text!r}")

    # linear algebra over the base field k ---------------------------------
    def k_dimension(self) -> int:
        raise NotImplementedError

    def k_coordinates(self, x) -> Sequence:
        raise NotImplementedError

    def echo(self) -> dict:
        return {"kind": self.kind, "index": self.index}

    def __repr__(self):
        return f"<{self.kind} index={self.index}>"


def rank_exact(rows: Sequence[Sequence], modulus: int | None = None) -> int:
    """Rank of a matrix over ``Q`` (``Fraction`` entries) or ``F_p``."""
    mat = [list(r) for r in rows]
    if modulus is None:
        mat = [[Fraction(v) for v in r] for r in mat]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank][col]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                if modulus is None:
                    f = mat[i][col] / p
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
                else:
                    f = mat[i][col] * pow(p, -1, modulus) % modulus
                    mat[i] = [(a - f * b) % modulus for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def mixed_radix(digits: Sequence[int], radices: Sequence[int]) -> int:
    out, scale = 0, 1
    for d, r in zip(digits, radices):
        out += d * scale
        scale *= r
    return out


Predicate = Callable[[Element], bool]
