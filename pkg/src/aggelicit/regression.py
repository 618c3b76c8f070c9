"""Embedded reference instances and their expected verdicts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .aggregate import mechanisms
from .cones import normalize_direction
from .documents import mechanisms_doc, parse_document, vector
from .elicit import ImprovingDirection, InfeasibleOutput, decide_elicitable
from .model import sufficient_statistic
from .power import decide_expansion_existential, expansion_fixed_alpha
from .rational import fmt_matrix, fmt_vector

DATA_VERSION = "v1"


def _data_dir():
    return resources.files("aggelicit").joinpath("data").joinpath("reference").joinpath(DATA_VERSION)


def load_document(filename: str) -> dict:
    return json.loads(_data_dir().joinpath(filename).read_text(encoding="utf-8"))


def load_case(filename: str):
    doc = load_document(filename)
    inst, op = parse_document(doc)
    return doc, inst, op


def expected_cases() -> list[dict]:
    return load_document("expected.json")["cases"]


@dataclass(frozen=True)
class CheckResult:
    case: str
    check: str
    passed: bool
    detail: str = ""


def run_case(case: dict) -> list[CheckResult]:
    name = case["file"].removesuffix(".json")
    doc, inst, op = load_case(case["file"])
    out: list[CheckResult] = []

    def record(check: str, passed: bool, detail: str = "") -> None:
        out.append(CheckResult(name, check, passed, detail))

    if "inputs_elicitable" in case:
        got = all(decide_elicitable(x, inst).elicitable for x in op.inputs)
        record("inputs elicitable", got == case["inputs_elicitable"], f"got {got}")
    if "aggregate" in case:
        v = decide_elicitable(op.aggregate, inst)
        if v.elicitable:
            kind = "elicitable"
        elif isinstance(v.reason, InfeasibleOutput):
            kind = "infeasible"
        else:
            kind = "inelicitable"
        record("aggregate verdict", kind == case["aggregate"], f"got {kind}")
        if "direction" in case:
            want = normalize_direction(vector(case["direction"], "direction"))
            got_d = v.reason.d if isinstance(v.reason, ImprovingDirection) else None
            record(
                "improving direction",
                got_d is not None and normalize_direction(got_d) == want,
                f"got {fmt_vector(got_d) if got_d else None}, want proportional to {case['direction']}",
            )
    if "fixed_expanding" in case:
        got = expansion_fixed_alpha(op, inst).expanding
        record("fixed-alpha expanding", got == case["fixed_expanding"], f"got {got}")
    if "existential_expanding" in case:
        verdict = decide_expansion_existential(op, inst)
        record("existential expanding", verdict.expanding == case["existential_expanding"], f"got {verdict.expanding}")
        if "existential_alpha" in case and verdict.expanding:
            got_a = fmt_matrix(verdict.alpha_witness)
            record("witness alpha", got_a == case["existential_alpha"], f"got {got_a}")
    if "binding_sets" in case:
        vecs = list(op.inputs) + [op.aggregate]
        got = [sorted(i + 1 for i in sufficient_statistic(x, inst).binding) for x in vecs]
        record("binding sets", got == case["binding_sets"], f"got {got}")
    rep = mechanisms(op, inst)
    if "mechanisms" in case:
        got = mechanisms_doc(rep)
        record("mechanisms", got == case["mechanisms"], f"got {got}")
    # rule capability spot checks: intersection never support-expands,
    # addition never feasibility-expands
    rule = doc.get("aggregation", {}).get("rule")
    if rule == "intersection":
        record("intersection: no support expansion", not any(rep.support_expansion))
    if rule == "addition":
        record("addition: no feasibility expansion", not rep.feasibility_expansion)
    return out


def run_all() -> list[CheckResult]:
    results = []
    for case in expected_cases():
        results.extend(run_case(case))
    return results
