"""Concrete pairs ``(D, N)`` and the model factory."""

from __future__ import annotations

from ..errors import SpecInvalid
from ..padic import PrecisionPolicy
from .base import CosetId, CosetTable, GroupTable, Model, Window
from .finite_field import FiniteField
from .function_field import FunctionFieldSemiLocal
from .laurent import LaurentLocal
from .quaternion import Quaternion
from .rational import RationalCongruence

KINDS = {
    "FiniteField": FiniteField,
    "LaurentLocal": LaurentLocal,
    "FunctionFieldSemiLocal": FunctionFieldSemiLocal,
    "RationalCongruence": RationalCongruence,
    "Quaternion": Quaternion,
}


def build_model(spec: dict) -> Model:
    """Construct a model from a parameter dict with a ``kind`` key.

    >>> build_model({"kind": "FiniteField", "q": 17, "m": 4}).index
    4
    """
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind not in KINDS:
        raise SpecInvalid(f"unknown model kind {kind!r}")
    if kind == "Quaternion":
        pol = {k: spec.pop(k) for k in ("p0", "growth", "p_max", "guard") if k in spec}
        if pol:
            spec["policy"] = PrecisionPolicy(**pol)
    try:
        return KINDS[kind](**spec)
    except TypeError as exc:
        raise SpecInvalid(f"bad parameters for {kind}: {exc}") from None


def element_op(model: Model, op: str, x, y=None):
    """Apply ``add``, ``sub``, ``mul``, ``inv`` or ``neg`` to model elements."""
    if op in ("add", "sub", "mul"):
        if y is None:
            raise SpecInvalid(f"{op} needs two operands")
        return getattr(model, op)(x, y)
    if op in ("inv", "neg"):
        return getattr(model, op)(x)
    raise SpecInvalid(f"unknown operation {op!r}")


__all__ = [
    "CosetId", "CosetTable", "GroupTable", "Model", "Window", "FiniteField", "LaurentLocal",
    "FunctionFieldSemiLocal", "RationalCongruence", "Quaternion", "build_model", "element_op", "KINDS",
]
