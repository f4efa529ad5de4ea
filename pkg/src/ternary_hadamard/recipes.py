"""Replayable experiment recipes.

A recipe is a plain key-value text file::

    name: nv5-full
    tier: fast
    step: code = nv_code p=5 a=1
    step: h = h_nv p=5 a=1
    expect: code.self_dual == true   # free-form comment
    expect: h.rank3 == 6

Each ``step`` binds a name to the result of a registered command; later
steps may pass earlier names as parameters (``code=code``).  ``expect``
lines compare a reported fact with a JSON literal.  Reports are JSON with
sorted keys, so two runs differ only in the ``seconds`` fields.
"""

from __future__ import annotations

import json
import re
import shlex
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Callable

import numpy as np

from . import constructions as cons
from . import equivalence as eq
from . import hadamard as hd
from . import search as se
from .gf3 import is_self_dual, is_self_orthogonal


class RecipeError(ValueError):
    pass


# ------------------------------------------------------------ commands

@dataclass
class StepValue:
    obj: Any
    facts: dict[str, Any]


def _code(obj, **facts) -> StepValue:
    base = {"n": obj.n, "k": obj.k, "self_dual": is_self_dual(obj)}
    base.update(facts)
    return StepValue(obj, base)


def _had(h: hd.HadamardMatrix, a: int = 1, **facts) -> StepValue:
    base = {"order": h.order, "hadamard": hd.is_hadamard(h),
            "skew_scaled": hd.is_skew(a * h.array), "rank3": hd.hadamard_rank3(h)}
    base.update(facts)
    return StepValue(h, base)


def cmd_nv_code(p: int, a: int = 1) -> StepValue:
    return _code(cons.build_nv_code(p, a))


def cmd_qr_code(p: int) -> StepValue:
    return _code(cons.build_extended_qr(p))


def cmd_pless_code(q: int) -> StepValue:
    return _code(cons.build_pless_symmetry(q))


def cmd_negacirculant_code(index: int) -> StepValue:
    c = cons.build_length60_negacirculant(index)
    src, sign = cons.quasi_negacyclic_shift(c.n)
    return _code(c, shift_invariant=cons.code_fixed_by(c, src, sign))


def cmd_code_facts(code) -> StepValue:
    return _code(code, self_orthogonal=is_self_orthogonal(code))


def cmd_min_weight(code, budget: int | None = None) -> StepValue:
    r = se.min_weight_bz(code, budget=budget)
    return StepValue(r, {"d": r.value, "exact": r.exact, "lower_bound": r.lower_bound,
                         "upper_bound": r.upper_bound})


def cmd_fullweight(code, threads: int | None = None) -> StepValue:
    r = se.enumerate_full_weight(code, threads=threads)
    return StepValue(r, {"count": r.count, "normalized": len(se.sign_normalize(r.words))})


def cmd_h_nv(p: int, a: int = 1) -> StepValue:
    h = hd.build_h_nv(p, a)
    return _had(h, a, rows_in_code=hd.rows_in_code(h, cons.build_nv_code(p, a)))


def cmd_h_sds(p: int, a: int = 1) -> StepValue:
    d1, d2 = hd.sds_for_theorem(p, a)
    return _had(hd.build_h_sds(d1, d2, v=p))


def cmd_paley(q: int, kind: str = "I") -> StepValue:
    return _had(hd.build_paley(q, kind))


def cmd_figure2() -> StepValue:
    b = hd.figure2_binary()
    h = hd.figure2_hadamard()
    zeros = np.flatnonzero(b[0] == 0)
    return _had(h, first_row_zeros=[int(z) + 1 for z in zeros])


def cmd_hadamard_facts(h, code=None) -> StepValue:
    facts = {"order": h.order, "hadamard": hd.is_hadamard(h), "rank3": hd.hadamard_rank3(h)}
    if code is not None:
        facts["rows_in_code"] = hd.rows_in_code(h, code)
    return StepValue(h, facts)


def cmd_clique(code, size: int, budget: int = 10**7, classify: bool = False) -> StepValue:
    fw = se.enumerate_full_weight(code)
    g = se.build_ortho_graph(se.sign_normalize(fw.words))
    r = se.find_cliques(g, size, budget=budget)
    facts = {"vertices": g.order, "found": r.total_found, "status": r.status}
    if classify:
        reps = {}
        for c in r.cliques:
            canon, _ = eq.canonical_form(se.clique_matrix(g, c))
            reps.setdefault(canon, se.clique_matrix(g, c))
        facts["classes"] = len(reps)
        return StepValue(list(reps.values()), facts)
    return StepValue(r, facts)


def cmd_equivalent(a, b) -> StepValue:
    a = _first_matrix(a)
    if isinstance(b, list):
        hits = [bool(eq.are_equivalent(a, x)) for x in b]
        return StepValue(hits, {"equivalent": any(hits), "matches": sum(hits)})
    r = eq.are_equivalent(a, b)
    return StepValue(r, {"equivalent": r.equivalent})


def cmd_aut_order(h) -> StepValue:
    r = eq.automorphism_group(h)
    return StepValue(r, {"order": r.order, "convention": r.convention})


def _first_matrix(x):
    return x[0] if isinstance(x, list) else x


COMMANDS: dict[str, Callable[..., StepValue]] = {
    "nv_code": cmd_nv_code,
    "qr_code": cmd_qr_code,
    "pless_code": cmd_pless_code,
    "negacirculant_code": cmd_negacirculant_code,
    "code_facts": cmd_code_facts,
    "min_weight": cmd_min_weight,
    "fullweight": cmd_fullweight,
    "h_nv": cmd_h_nv,
    "h_sds": cmd_h_sds,
    "paley": cmd_paley,
    "figure2": cmd_figure2,
    "hadamard_facts": cmd_hadamard_facts,
    "clique": cmd_clique,
    "equivalent": cmd_equivalent,
    "aut_order": cmd_aut_order,
}


# ------------------------------------------------------------ recipes

@dataclass
class Step:
    name: str
    command: str
    params: dict[str, str]


@dataclass
class Expectation:
    ref: str
    fact: str
    expected: Any
    comment: str = ""

    @property
    def text(self) -> str:
        return f"{self.ref}.{self.fact} == {json.dumps(self.expected)}"


@dataclass
class ExperimentRecipe:
    name: str
    steps: list[Step]
    expected: list[Expectation] = field(default_factory=list)
    tier: str = "fast"
    description: str = ""

    def validate(self) -> None:
        bound: set[str] = set()
        for s in self.steps:
            if s.command not in COMMANDS:
                raise RecipeError(f"unknown command {s.command!r} in step {s.name!r}")
            bound.add(s.name)
        for e in self.expected:
            if e.ref not in bound:
                raise RecipeError(f"expectation refers to undefined step {e.ref!r}")


_STEP_RE = re.compile(r"^(\w+)\s*=\s*(\w+)(.*)$")
_EXPECT_RE = re.compile(r"^(\w+)\.(\w+)\s*==\s*(.+)$")


def parse_recipe(text: str) -> ExperimentRecipe:
    name, tier, desc = None, "fast", ""
    steps: list[Step] = []
    expects: list[Expectation] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        value, _, comment = value.partition("#")
        key, value, comment = key.strip(), value.strip(), comment.strip()
        if key == "name":
            name = value
        elif key == "tier":
            tier = value
        elif key == "description":
            desc = value
        elif key == "step":
            m = _STEP_RE.match(value)
            if not m:
                raise RecipeError(f"line {lineno}: bad step {value!r}")
            params = {}
            for tok in shlex.split(m.group(3)):
                k, sep, v = tok.partition("=")
                if not sep:
                    raise RecipeError(f"line {lineno}: parameter {tok!r} lacks '='")
                params[k] = v
            steps.append(Step(m.group(1), m.group(2), params))
        elif key == "expect":
            m = _EXPECT_RE.match(value)
            if not m:
                raise RecipeError(f"line {lineno}: bad expectation {value!r}")
            expects.append(Expectation(m.group(1), m.group(2), json.loads(m.group(3)), comment))
        else:
            raise RecipeError(f"line {lineno}: unknown key {key!r}")
    if name is None:
        raise RecipeError("recipe has no name")
    r = ExperimentRecipe(name, steps, expects, tier, desc)
    r.validate()
    return r


def _recipe_files():
    return resources.files("ternary_hadamard").joinpath("data/recipes")


def bundled_recipes() -> dict[str, ExperimentRecipe]:
    out = {}
    for f in sorted(_recipe_files().iterdir(), key=lambda p: p.name):
        if f.name.endswith(".recipe"):
            r = parse_recipe(f.read_text())
            out[r.name] = r
    return out


def load_recipe(name_or_path: str) -> ExperimentRecipe:
    bundled = bundled_recipes()
    if name_or_path in bundled:
        return bundled[name_or_path]
    try:
        with open(name_or_path) as fh:
            return parse_recipe(fh.read())
    except FileNotFoundError:
        raise RecipeError(f"no bundled recipe or file named {name_or_path!r}") from None


def _convert(v: str, env: dict[str, StepValue]):
    if v in env:
        return env[v].obj
    try:
        return json.loads(v)
    except json.JSONDecodeError:
        return v


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def run_recipe(recipe: ExperimentRecipe, tier: str = "fast", threads: int | None = None) -> dict:
    """Execute the steps in order and check every expectation.

    Recipes marked ``tier: long`` are skipped (status "skipped") unless
    ``tier == "long"``.
    """
    recipe.validate()
    report: dict[str, Any] = {"recipe": recipe.name, "tier": recipe.tier,
                              "steps": [], "assertions": []}
    if recipe.tier == "long" and tier != "long":
        report["status"] = "skipped"
        report["passed"] = True
        return report
    env: dict[str, StepValue] = {}
    for s in recipe.steps:
        params = {k: _convert(v, env) for k, v in s.params.items()}
        if threads is not None and s.command == "fullweight":
            params.setdefault("threads", threads)
        t0 = time.perf_counter()
        val = COMMANDS[s.command](**params)
        env[s.name] = val
        report["steps"].append({"name": s.name, "command": s.command, "params": s.params,
                                "facts": _jsonable(val.facts),
                                "seconds": round(time.perf_counter() - t0, 3)})
    ok = True
    for e in recipe.expected:
        facts = env[e.ref].facts
        actual = _jsonable(facts.get(e.fact, "<missing>"))
        passed = actual == e.expected
        ok &= passed
        entry = {"expect": e.text, "actual": actual, "passed": passed}
        if e.comment:
            entry["comment"] = e.comment
        if not passed:
            entry["diff"] = f"expected {json.dumps(e.expected)}, got {json.dumps(actual)}"
        report["assertions"].append(entry)
    report["status"] = "pass" if ok else "fail"
    report["passed"] = ok
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def strip_timing(report: dict) -> dict:
    out = json.loads(json.dumps(report))
    for s in out.get("steps", []):
        s.pop("seconds", None)
    return out


# ------------------------------------------------------------ describe

@dataclass
class Check:
    label: str
    ok: bool
    basis: str


def _mark(ok: bool) -> str:
    return "ok" if ok else "FAILED"


_NAME_PATTERNS = [
    (re.compile(r"^NV\((\d+),\s*([+-]?1)\)$"), "nv"),
    (re.compile(r"^H_NV\((\d+),\s*([+-]?1)\)$"), "hnv"),
    (re.compile(r"^H_SDS\((\d+),\s*([+-]?1)\)$"), "hsds"),
    (re.compile(r"^QR\((\d+)\)$"), "qr"),
    (re.compile(r"^P\((\d+)\)$"), "pless"),
    (re.compile(r"^C_?(\d)$"), "nega"),
    (re.compile(r"^Paley_(I|II)\((\d+)\)$"), "paley"),
    (re.compile(r"^H_NV2$"), "fig2"),
]

REGISTERED_NAMES = ["NV(p,a)", "H_NV(p,a)", "H_SDS(p,a)", "QR(p)", "P(q)", "C1..C3",
                    "Paley_I(q)", "Paley_II(q)", "H_NV2"]


def describe(name: str) -> str:
    """Parameters and an invariant checklist for a registered construction."""
    for pat, kind in _NAME_PATTERNS:
        m = pat.match(name.strip())
        if m:
            break
    else:
        raise RecipeError(f"unknown object {name!r}; registered: {', '.join(REGISTERED_NAMES)}")
    lines = [name]
    checks: list[Check] = []
    if kind in ("nv", "qr", "pless", "nega"):
        if kind == "nv":
            p, a = int(m.group(1)), int(m.group(2))
            code = cons.build_nv_code(p, a)
            blocks = cons.build_blocks(p)
            checks.append(Check("block identities (X, Y skew, XY = YX, X^2+Y^2 = -pI) hold over Z",
                                all(blocks.identities().values()), "NV block identities"))
            basis = "NV self-duality theorem"
        elif kind == "qr":
            code = cons.build_extended_qr(int(m.group(1)))
            basis = "extended quadratic residue codes"
        elif kind == "pless":
            code = cons.build_pless_symmetry(int(m.group(1)))
            basis = "Pless symmetry codes"
        else:
            code = cons.build_length60_negacirculant(int(m.group(1)))
            src, sign = cons.quasi_negacyclic_shift(code.n)
            checks.append(Check("invariant under the quasi-negacyclic shift",
                                cons.code_fixed_by(code, src, sign), "four-negacirculant construction"))
            basis = "four-negacirculant codes"
        lines.append(f"  n = {code.n}, k = {code.k}")
        checks.insert(0, Check("self-dual", is_self_dual(code), basis))
        if code.k <= 14:
            d = se.min_weight_bz(code).value
            lines.append(f"  d = {d}")
            checks.append(Check(f"extremal (d = 3*floor(n/12)+3 = {3 * (code.n // 12) + 3})",
                                d == 3 * (code.n // 12) + 3, "extremal bound"))
    else:
        scale = 1
        if kind == "hnv":
            p, scale = int(m.group(1)), int(m.group(2))
            h = hd.build_h_nv(p, scale)
            basis = "Hadamard matrices from NV codes"
            code = cons.build_nv_code(p, scale)
            checks.append(Check(f"rows lie in NV({p},{scale:+d})", hd.rows_in_code(h, code), basis))
        elif kind == "hsds":
            p, a = int(m.group(1)), int(m.group(2))
            d1, d2 = hd.sds_for_theorem(p, a)
            h = hd.build_h_sds(d1, d2, v=p)
            basis = "SDS construction from cyclotomic classes"
        elif kind == "paley":
            q = int(m.group(2))
            h = hd.build_paley(q, m.group(1))
            basis = f"Paley type {m.group(1)}"
        else:
            h = hd.figure2_hadamard()
            basis = "octal listing of H_NV,2"
            checks.append(Check("rows lie in NV(29,+1)",
                                hd.rows_in_code(h, cons.build_nv_code(29, 1)), basis))
        lines.append(f"  order = {h.order}, rank over GF(3) = {hd.hadamard_rank3(h)}")
        checks.insert(0, Check("Hadamard (H H^T = nI)", hd.is_hadamard(h), basis))
        if kind == "hnv":
            checks.append(Check(f"skew after scaling by a = {scale:+d}", hd.is_skew(scale * h.array), basis))
        elif kind == "paley" and m.group(1) == "I":
            checks.append(Check("skew", hd.is_skew(h), basis))
    lines.append("  checks:")
    for c in checks:
        lines.append(f"    [{_mark(c.ok)}] {c.label}  ({c.basis})")
    return "\n".join(lines)
