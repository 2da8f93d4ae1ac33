"""Batch runner: ``valgraph <analysis> --spec FILE --out DIR``.

Exit codes: 0 every assertion passed with a certified or window-certified
tag, 1 some assertion failed (its witness is in the report), 2 nothing failed
but some verdict is inconclusive, 3 spec or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .errors import (HypothesisNotMet, PrecisionExhausted, SearchExhausted, SpecInvalid,
                     ValgraphError, WindowInconclusive)
from .graphs import (KappaPresentation, QuotientGraph, bfs_all_pairs, build_commuting_graph,
                     build_kappa_graph, build_milnor_graph, build_min_centralizer_vgraph,
                     check_vgraph_axioms, export_dot, floyd_warshall, kappa_swap)
from .groups import direct_product, factor_swap, symmetric_group
from .levels import (EthConfig, SigmaAction, check_eth, classify_map, quotient_action,
                     verify_diameter_theorems)
from .models import Model, Window, build_model
from .order import (CERTIFIED, INCONCLUSIVE, WINDOW, build_ordered_quotient, diagonal_subgroup,
                    full_n, has_closed_form, is_totally_ordered, lemma34_crosscheck, rel_P)
from .specfile import AnalysisSpec, load_spec
from .valuation import (basis_in_n_set, congruence_openness, decompose_ab_inverse, escape_prime_search,
                        generated_ring_window, tame_symbol_certificate, verify_decomposition)

SCHEMA_VERSION = 1
ANALYSES = ("graph", "axioms", "order", "classify", "theorems", "eth", "valuation")


class UsageError(ValgraphError):
    pass


def plain(x: Any):
    """JSON-safe, deterministic rendering of report values."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, float):
        return "inf" if x == float("inf") else x
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(plain(v) for v in x)
    if isinstance(x, np.ndarray):
        return plain(x.tolist())
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


@dataclass
class Assertion:
    name: str
    holds: bool | None  # None marks an inconclusive verdict
    tag: str
    witness: Any = None

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "tag": self.tag,
                "witness": plain(self.witness)}


class Run:
    """Lazily built objects shared by the analyses of one invocation."""

    def __init__(self, spec: AnalysisSpec, window: int | None = None, delta_bound: int | None = None):
        self.spec = spec
        self.model: Model | None = None
        self.pres = None
        if not spec.abstract:
            self.model = build_model(spec.model)
        w = window if window is not None else spec.get("window")
        self.window = Window(-w, w, 1) if w is not None else None
        self.delta_bound = delta_bound if delta_bound is not None else spec.get("delta_bound", 8)
        self._graph: QuotientGraph | None = None
        self._oq = None

    # element handling ---------------------------------------------------------
    def element(self, key: str):
        text = self.spec.get(key)
        if text is None:
            raise UsageError(f"analysis needs {key}")
        try:
            return self.model.parse(str(text))
        except ValgraphError:
            raise
        except Exception as exc:  # parse errors from the expression reader
            raise UsageError(f"cannot parse {key} = {text!r}: {exc}") from None

    def label(self, key: str) -> int:
        if self.model is not None:
            return self.model.coset_of(self.element(key))
        text = str(self.spec.get(key))
        if self.spec.get(key) is None:
            raise UsageError(f"analysis needs {key}")
        names = self.graph.group.names
        if self.pres is not None:
            return self.pres.element(text)
        if text not in names:
            raise UsageError(f"{key} = {text!r} is not a group element")
        return names.index(text)

    # shared objects ------------------------------------------------------------
    @property
    def graph(self) -> QuotientGraph:
        if self._graph is None:
            self._graph = self._build_graph()
        return self._graph

    def _build_graph(self) -> QuotientGraph:
        kind = self.spec.get("graph")
        if kind == "kappa":
            self.pres = KappaPresentation.standard(2)
            return build_kappa_graph(self.pres)
        if kind == "s3xs3":
            s3 = symmetric_group(3)
            return build_commuting_graph(direct_product(s3, s3))
        m = self.model
        if kind is None:
            kind = "milnor" if m.enumerable else "commuting"
        if kind == "commuting":
            return build_commuting_graph(m.coset_table())
        if kind in ("milnor", "milnor-closure"):
            return build_milnor_graph(m, closure=kind == "milnor-closure")
        return build_min_centralizer_vgraph(m)

    @property
    def oq(self):
        if self._oq is None:
            self._oq = build_ordered_quotient(self.model, self.element("y"), self.window)
        return self._oq

    def subgroup(self, key: str = "subgroup"):
        name = self.spec.get(key, "full")
        if name == "diagonal":
            return diagonal_subgroup(self.model, self.window)
        return None if key == "subgroup" else full_n(self.model, self.window)

    def need_model(self, analysis: str):
        if self.model is None:
            raise UsageError(f"{analysis} needs a concrete model")


def _expect(spec: AnalysisSpec, key: str, actual, tag, witness=None, name=None) -> list[Assertion]:
    if key not in spec.expect:
        return []
    want = spec.expect[key]
    return [Assertion(name or key, actual == want, tag, None if actual == want else
                      {"expected": want, "actual": actual, "detail": witness})]


# analyses ---------------------------------------------------------------------
def an_graph(run: Run):
    g = run.graph
    bfs = g.distances()
    fw = floyd_warshall(g.adj)
    same = bool(np.array_equal(bfs, fw)) and bool(np.array_equal(bfs, bfs_all_pairs(g.adj)))
    diam = g.diameter()
    res = {"edge_rule": g.edge_rule, "vertices": g.n_vertices, "edges": len(g.edges()),
           "diameter": diam}
    if run.spec.get("x") is not None and run.spec.get("y") is not None:
        u, v = run.label("x"), run.label("y")
        d = g.distance(u, v)
        res["distance"] = d
        if d != float("inf") and 0 < d <= 6:
            res["geodesics"] = [[g.name(w) for w in p] for p in g.paths(u, v, int(d))]
    out = [Assertion("bfs-equals-floyd-warshall", same, CERTIFIED)]
    out += _expect(run.spec, "graph.expect.diameter", diam, CERTIFIED)
    return res, out


def an_axioms(run: Run):
    rep = check_vgraph_axioms(run.model, run.graph)
    tag = CERTIFIED
    verdict = "pass" if rep.passed else "fail"
    res = {"verdicts": rep.to_dict(), "passed": rep.passed}
    if "axioms.expect" in run.spec.expect:
        return res, _expect(run.spec, "axioms.expect", verdict, tag, rep.failing())
    failing = rep.failing()
    return res, [Assertion("vgraph-axioms", rep.passed, tag,
                           {k: rep.witnesses[k] for k in failing} or None)]


def an_order(run: Run):
    run.need_model("order")
    oq, model = run.oq, run.model
    total, pair = is_totally_ordered(oq)
    res = {"kind": oq.kind, "tag": oq.tag, "closed_form": oq.closed_form,
           "gamma_size": len(oq.gamma), "total": total, "incomparable": pair}
    if oq.kind != "LocalZr" or len(oq.gamma) <= 40:
        res["detail"] = json.loads(oq.to_json())
    out = []
    y = run.element("y")
    reps = [oq.reps[g] for g in oq.gamma][:12 if model.enumerable else 6]
    if model.enumerable:
        bad = None
        for m in reps:
            for n in reps:
                c = lemma34_crosscheck(model, y, m, n, run.window, oq)
                if len(set(c.values())) != 1:
                    bad = {"m": model.fmt(m), "n": model.fmt(n), "conditions": c}
                    break
            if bad:
                break
        out.append(Assertion("conditions-agree", bad is None, CERTIFIED, bad))
    elif has_closed_form(model, y):
        bad = None
        for m in reps:
            for n in reps:
                try:
                    rel_P(model, y, m, n, "both", run.window)
                except ValgraphError as exc:
                    bad = {"m": model.fmt(m), "n": model.fmt(n), "error": str(exc)}
        out.append(Assertion("closed-form-equals-brute", bad is None, WINDOW, bad))
    out += _expect(run.spec, "order.expect", "total" if total else "not-total", oq.tag, pair)
    return res, out


def an_classify(run: Run):
    run.need_model("classify")
    rep = classify_map(run.oq, run.subgroup())
    res = rep.to_dict()
    out = [Assertion("SL-implies-L", True, rep.tag)]
    if "classify.expect" in run.spec.expect:
        want = run.spec.expect["classify.expect"]
        neg = want.startswith("not-")
        attr = {"valuation-like": "is_valuation_like",
                "strong-valuation-like": "is_strong_valuation_like",
                "strongly-leveled": "is_strongly_leveled",
                "s-level-zero": "s_level_zero"}[want[4:] if neg else want]
        holds = None if rep.tag == INCONCLUSIVE else getattr(rep, attr) != neg
        out.append(Assertion("classify.expect", holds, rep.tag,
                             rep.witnesses if holds else {"expected": want, "report": res}))
    return res, out


def an_theorems(run: Run):
    run.need_model("theorems")
    rep = verify_diameter_theorems(run.model, run.graph, run.element("x"), run.element("y"),
                                   run.window)
    res = rep.to_dict()
    out = [Assertion(c.name, c.holds, c.tag, c.witness) for c in rep.checks]
    if "theorems.expect" in run.spec.expect:
        out = _expect(run.spec, "theorems.expect", "pass" if rep.passed else "fail",
                      out[0].tag if out else CERTIFIED)
    return res, out


def an_eth(run: Run):
    spec = run.spec
    names = [s.strip() for s in str(spec.get("eth.sigma", "")).split(",") if s.strip()]
    if not names:
        raise UsageError("eth needs eth.sigma")
    g = run.graph
    sigma = [SigmaAction("id", np.arange(g.group.order))]
    for name in names:
        if name == "id":
            continue
        if run.model is None:
            if name != "swap":
                raise UsageError("abstract graphs only know the sigma 'swap'")
            perm = kappa_swap(run.pres) if run.pres is not None else factor_swap(6)
            sigma.append(SigmaAction(name, perm))
        else:
            fn = getattr(run.model, name, None)
            if not callable(fn):
                raise UsageError(f"{run.model.kind} has no map {name!r}")
            sigma.append(SigmaAction(name, quotient_action(run.model, fn), fn))
    M = None
    if run.model is not None and spec.get("eth.M") is not None:
        M = diagonal_subgroup(run.model) if spec.get("eth.M") == "diagonal" else full_n(run.model)
    cfg = EthConfig(run.label("x"), run.label("y"), sigma, M, spec.get("eth.samples", 8))
    rep = check_eth(run.model, g, cfg)
    res = rep.to_dict()
    if "eth.expect" in spec.expect:
        return res, _expect(spec, "eth.expect", "holds" if rep.holds else "fails", rep.tag,
                            rep.paths)
    unbroken = [p for p, w in zip(rep.paths, rep.witnesses) if w is None]
    return res, [Assertion("property-3.5", rep.holds, rep.tag, unbroken or None)]


def an_valuation(run: Run):
    run.need_model("valuation")
    model, res, out = run.model, {}, []
    if model.local:
        op = congruence_openness(model, bound=run.delta_bound)
        res["openness"] = op.to_dict()
        out.append(Assertion("congruence-open", op.delta is not None, op.tag, None))
        if hasattr(model, "make"):
            ref = congruence_openness(model, mode="refute-single-place", bound=run.delta_bound)
            res["single_place"] = ref.to_dict()
            out.append(Assertion("single-place-not-open", True, ref.tag, None))
        try:
            a = generated_ring_window(run.oq, "A")
        except HypothesisNotMet as exc:
            res["A"] = {"skipped": str(exc)}
        else:
            res["A"] = a.summary()
            out.append(Assertion("minus-one-not-in-A", not a.minus_one_found, a.tag, None))
        r = generated_ring_window(run.oq, "R")
        res["R"] = r.summary()
    if model.kind == "Quaternion":
        for inverse in (False, True):
            b = basis_in_n_set(model, model.pi, inverse=inverse)
            key = "basis_in_N(pi)^-1" if inverse else "basis_in_N(pi)"
            res[key] = {"rank": b.rank, "dimension": b.dimension, "c": model.fmt(b.c) if b.c is not None else None}
            out.append(Assertion(key, b.rank == b.dimension, CERTIFIED))
    if model.kind == "RationalCongruence":
        res["tame"] = []
        for a in spec_list(run.spec.get("valuation.tame", [3])):
            c = tame_symbol_certificate(model, int(a))
            res["tame"].append(plain(vars(c)))
        moduli = run.spec.get("valuation.escape")
        if moduli is not None:
            if not isinstance(moduli, dict):
                raise UsageError("valuation.escape must be a dict {prime: exponent}")
            esc = escape_prime_search(model, moduli)
            res["escape_prime"] = plain(vars(esc))
            out.append(Assertion("escape-prime", esc.in_W and not esc.in_H, CERTIFIED, esc.p))
    if run.spec.get("y") is not None and (model.enumerable or model.local):
        samples = _decomposition_samples(run)
        bad = None
        for x in samples:
            dec = decompose_ab_inverse(run.oq, x, run.window)
            if not verify_decomposition(run.oq, dec):
                bad = model.fmt(x)
                break
        res["decompositions"] = len(samples)
        out.append(Assertion("decomposition-round-trip", bad is None,
                             CERTIFIED if model.enumerable else WINDOW, bad))
    return res, out


def spec_list(v):
    return list(v) if isinstance(v, (list, tuple)) else [v]


def _decomposition_samples(run: Run) -> list:
    model = run.model
    if model.enumerable:
        return [x for x in model.elements() if not model.is_zero(x)]
    n = run.spec.get("valuation.samples", 20)
    pool = [x for x in model.d_window(Window(-2, 2, 1)) if not model.is_zero(x)]
    return pool[:n]


HANDLERS = {"graph": an_graph, "axioms": an_axioms, "order": an_order, "classify": an_classify,
            "theorems": an_theorems, "eth": an_eth, "valuation": an_valuation}


def _applicable(run: Run) -> list[str]:
    spec = run.spec
    if run.model is None:
        out = ["graph", "axioms"]
        if spec.get("eth.sigma") and spec.get("x") and spec.get("y"):
            out.append("eth")
        return out
    out = ["graph", "axioms"]
    if run.model.kind == "RationalCongruence":
        return out + ["valuation"]
    if spec.get("y"):
        out += ["order", "classify"]
        if spec.get("x"):
            out.append("theorems")
        if spec.get("eth.sigma") and spec.get("x"):
            out.append("eth")
        out.append("valuation")
    return out


def run_analyses(spec: AnalysisSpec, analysis: str, out_dir: Path | None = None,
                 window: int | None = None, delta_bound: int | None = None):
    """Run one analysis (or ``all``); returns ``(report, timings, exit_code)``."""
    if analysis != "all" and analysis not in HANDLERS:
        raise UsageError(f"unknown analysis {analysis!r}")
    run = Run(spec, window, delta_bound)
    names = _applicable(run) if analysis == "all" else [analysis]
    results, timings, assertions = {}, {}, []
    for name in names:
        t0 = time.perf_counter()
        try:
            res, checks = HANDLERS[name](run)
        except (SpecInvalid, HypothesisNotMet, UsageError):
            raise
        except (WindowInconclusive, PrecisionExhausted, SearchExhausted) as exc:
            res, checks = {"error": str(exc)}, [Assertion(name, None, INCONCLUSIVE, str(exc))]
        except ValgraphError as exc:
            res, checks = {"error": str(exc)}, [Assertion(name, False, CERTIFIED, str(exc))]
        timings[name] = round(time.perf_counter() - t0, 4)
        for c in checks:
            c.name = f"{name}:{c.name}"
        results[name] = {"result": plain(res), "assertions": [c.to_dict() for c in checks]}
        assertions += checks
    if any(a.holds is False for a in assertions):
        code = 1
    elif any(a.holds is None or a.tag == INCONCLUSIVE for a in assertions):
        code = 2
    else:
        code = 0
    report = {
        "schema_version": SCHEMA_VERSION,
        "valgraph_version": __version__,
        "spec": spec.source,
        "model": plain(run.model.echo()) if run.model is not None else {"kind": "abstract",
                                                                          "graph": spec.get("graph")},
        "analyses": results,
        "exit_code": code,
    }
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(dump(report), encoding="utf-8")
        (out_dir / "timings.json").write_text(json.dumps(timings, sort_keys=True, indent=2) + "\n",
                                              encoding="utf-8")
        if run._graph is not None:
            export_dot(run._graph, out_dir / "graph.dot", name=run._graph.edge_rule)
    return report, timings, code


def dump(report: dict) -> str:
    return json.dumps(report, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="valgraph", description="Valuation-graph analyses of D^x/N")
    p.add_argument("analysis", choices=ANALYSES + ("all",))
    p.add_argument("--spec", required=True, help="model spec file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--window", type=int, help="valuation window half-width")
    p.add_argument("--delta-bound", type=int, help="largest delta tried per place")
    p.add_argument("--y", help="coset representative y")
    p.add_argument("--x", help="coset representative x")
    p.add_argument("--version", action="version", version=f"valgraph {__version__}")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 3
    try:
        for name in ("window", "delta_bound"):
            v = getattr(args, name)
            if v is not None and v < 0:
                raise UsageError(f"--{name.replace('_', '-')} must be non-negative")
        spec = load_spec(args.spec)
        for key in ("x", "y"):
            if getattr(args, key) is not None:
                spec.options[key] = getattr(args, key)
        report, _, code = run_analyses(spec, args.analysis, Path(args.out), args.window,
                                       args.delta_bound)
    except (SpecInvalid, HypothesisNotMet, UsageError) as exc:
        print(f"valgraph: error: {exc}", file=sys.stderr)
        return 3
    for name, block in report["analyses"].items():
        for a in block["assertions"]:
            state = {True: "pass", False: "FAIL", None: "inconclusive"}[a["holds"]]
            print(f"{a['name']}: {state} [{a['tag']}]")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
