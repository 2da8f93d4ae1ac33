"""Plain-text analysis specs for the batch runner.

A spec is a list of ``key = value`` lines; ``#`` starts a comment.  Model
parameters live under ``model.``, expectations under ``<analysis>.expect``::

    model.kind = FunctionFieldSemiLocal
    model.q = 4
    y = t
    classify.expect = not-valuation-like
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SpecInvalid

GRAPHS = ("commuting", "milnor", "milnor-closure", "min-centralizer", "kappa", "s3xs3")
SUBGROUPS = ("full", "diagonal")
EXPECT = {
    "graph.expect.diameter": None,  # an integer
    "axioms.expect": ("pass", "fail"),
    "order.expect": ("total", "not-total"),
    "classify.expect": ("valuation-like", "not-valuation-like", "strong-valuation-like",
                        "not-strong-valuation-like", "strongly-leveled", "not-strongly-leveled",
                        "s-level-zero"),
    "theorems.expect": ("pass", "fail"),
    "eth.expect": ("holds", "fails"),
}
PLAIN_KEYS = {"graph", "x", "y", "subgroup", "eth.sigma", "eth.M", "eth.samples", "window",
              "delta_bound", "valuation.tame", "valuation.samples",
              "valuation.escape", "name"}


def _value(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


@dataclass
class AnalysisSpec:
    model: dict
    options: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)
    source: str = "<string>"

    @property
    def abstract(self) -> bool:
        return self.model.get("kind") == "abstract"

    def get(self, key: str, default=None):
        return self.options.get(key, default)


def parse_spec(text: str, source: str = "<string>") -> AnalysisSpec:
    """Parse and type-check a spec; every problem is reported with its line number."""
    model, options, expect, errors = {}, {}, {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"{source}:{lineno}: expected 'key = value'")
            continue
        key, val = (s.strip() for s in line.split("=", 1))
        if not key or not val:
            errors.append(f"{source}:{lineno}: empty key or value")
            continue
        if key.startswith("model."):
            model[key[6:]] = _value(val) if key != "model.kind" else val
        elif key in EXPECT:
            allowed = EXPECT[key]
            v = _value(val)
            if allowed is None and not isinstance(v, int):
                errors.append(f"{source}:{lineno}: {key} needs an integer")
            elif allowed is not None and v not in allowed:
                errors.append(f"{source}:{lineno}: {key} must be one of {', '.join(allowed)}")
            else:
                expect[key] = v
        elif key in PLAIN_KEYS:
            options[key] = val if key in ("x", "y") else _value(val)
        else:
            errors.append(f"{source}:{lineno}: unknown key {key!r}")
    if "kind" not in model:
        errors.append(f"{source}: model.kind is required")
    g = options.get("graph")
    if g is not None and g not in GRAPHS:
        errors.append(f"{source}: graph must be one of {', '.join(GRAPHS)}")
    s = options.get("subgroup")
    if s is not None and s not in SUBGROUPS:
        errors.append(f"{source}: subgroup must be one of {', '.join(SUBGROUPS)}")
    for key in ("window", "delta_bound", "eth.samples", "valuation.samples"):
        v = options.get(key)
        if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
            errors.append(f"{source}: {key} must be a non-negative integer")
    if model.get("kind") == "abstract" and options.get("graph") not in ("kappa", "s3xs3"):
        errors.append(f"{source}: abstract specs need graph = kappa or graph = s3xs3")
    if errors:
        raise SpecInvalid("\n".join(errors))
    return AnalysisSpec(model, options, expect, source)


def load_spec(path: str | Path) -> AnalysisSpec:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecInvalid(f"cannot read {p}: {exc.strerror}") from None
    return parse_spec(text, str(p.name))
