"""JSON documents for instances, verdicts and certificates.

Rationals are written as strings ("p" or "p/q").  On input, JSON integers
are accepted too; JSON floats are refused.  Indices in documents (supports,
binding sets, branch coordinates, multiplier rows) are 1-based.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .aggregate import MechanismReport, apply_rule
from .elicit import (
    Elicitable,
    ImprovingDirection,
    Inelicitable,
    InfeasibleOutput,
    KKTCertificate,
)
from .errors import AggelicitError
from .linsys import MotzkinCertificate
from .model import AggregationOperation, Instance, LinearReward, OutputVector
from .power import (
    BindingBranch,
    DirectionRoute,
    FeasibilityRoute,
    FixedAlphaVerdict,
    SupportBranch,
)
from .rational import RationalParseError, fmt, fmt_matrix, fmt_vector, parse_rational


class ParseError(Exception):
    """Malformed input document (exit code 3)."""


class DocumentError(AggelicitError):
    """Well-formed document with inconsistent content."""


def rational(value: Any, where: str = "value") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"{where}: {value!r} is not an exact rational (use a string like \"3/5\")")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except RationalParseError as e:
            raise ParseError(f"{where}: {e}") from None
    raise ParseError(f"{where}: expected a rational string or integer, got {value!r}")


def vector(value: Any, where: str) -> tuple[Fraction, ...]:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected an array")
    return tuple(rational(v, f"{where}[{i}]") for i, v in enumerate(value))


def matrix(value: Any, where: str) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected an array of arrays")
    return tuple(vector(r, f"{where}[{i}]") for i, r in enumerate(value))


def parse_vector_text(text: str) -> tuple[Fraction, ...]:
    """Vector given on the command line: JSON array or comma-separated."""
    text = text.strip()
    if text.startswith("["):
        try:
            return vector(json.loads(text), "vector")
        except json.JSONDecodeError as e:
            raise ParseError(f"vector: {e}") from None
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ParseError("vector: empty")
    try:
        return tuple(parse_rational(p) for p in parts)
    except RationalParseError as e:
        raise ParseError(f"vector: {e}") from None


def load_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e})") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    return doc


def _integer(doc: dict, key: str) -> int:
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ParseError(f"{key}: expected an integer")
    return v


def parse_instance(doc: dict) -> Instance:
    M, N, L = _integer(doc, "M"), _integer(doc, "N"), _integer(doc, "L")
    if "C" not in doc or "alpha" not in doc:
        raise ParseError("missing field 'C' or 'alpha'")
    return Instance(M, N, L, matrix(doc["C"], "C"), matrix(doc["alpha"], "alpha"))


def parse_aggregation(doc: dict) -> AggregationOperation | None:
    block = doc.get("aggregation")
    if block is None:
        return None
    if not isinstance(block, dict) or "inputs" not in block:
        raise ParseError("aggregation: expected an object with 'inputs'")
    inputs = matrix(block["inputs"], "aggregation.inputs")
    rule = block.get("rule")
    weights = vector(block["weights"], "aggregation.weights") if "weights" in block else None
    if rule is not None and rule not in ("intersection", "addition"):
        raise ParseError(f"aggregation.rule: unknown rule {rule!r}")
    if "aggregate" in block:
        aggregate = vector(block["aggregate"], "aggregation.aggregate")
    elif rule is not None:
        aggregate = apply_rule(rule, inputs, weights).entries
    else:
        raise ParseError("aggregation: need 'aggregate' or 'rule'")
    op = AggregationOperation(tuple(OutputVector(x) for x in inputs), OutputVector(aggregate))
    if rule is not None:
        expected = apply_rule(rule, inputs, weights)
        if expected != op.aggregate:
            raise DocumentError(
                f"aggregate {fmt_vector(aggregate)} differs from the {rule} rule result {fmt_vector(expected.entries)}"
            )
    return op


def parse_document(doc: dict) -> tuple[Instance, AggregationOperation | None]:
    inst = parse_instance(doc)
    op = parse_aggregation(doc)
    if op is not None:
        op.check(inst)
    return inst, op


def instance_document(
    instance: Instance,
    op: AggregationOperation | None = None,
    rule: str | None = None,
    weights=None,
) -> dict:
    doc: dict = {
        "M": instance.M,
        "N": instance.N,
        "L": instance.L,
        "C": fmt_matrix(instance.C),
        "alpha": fmt_matrix(instance.alpha),
    }
    if op is not None:
        block: dict = {
            "inputs": [fmt_vector(x.entries) for x in op.inputs],
            "aggregate": fmt_vector(op.aggregate.entries),
        }
        if rule is not None:
            block["rule"] = rule
        if weights is not None:
            block["weights"] = fmt_vector(weights)
        doc["aggregation"] = block
    return doc


# -- certificates -----------------------------------------------------------


def one_based(indices) -> list[int]:
    return [i + 1 for i in sorted(indices)]


def reward_doc(reward: LinearReward) -> dict:
    return {"nu": fmt_vector(reward.nu), "budget": fmt(reward.budget)}


def parse_reward(doc: dict) -> LinearReward:
    return LinearReward(vector(doc["nu"], "nu"), rational(doc["budget"], "budget"))


def kkt_doc(kkt: KKTCertificate) -> dict:
    return {
        "tau": fmt(kkt.budget_multiplier),
        "lambda": {str(j + 1): fmt(v) for j, v in kkt.off_support_multipliers},
        "gamma": {str(l + 1): fmt(v) for l, v in kkt.binding_multipliers},
    }


def parse_kkt(doc: dict) -> KKTCertificate:
    return KKTCertificate(
        rational(doc["tau"], "tau"),
        tuple((int(j) - 1, rational(v, "lambda")) for j, v in doc.get("lambda", {}).items()),
        tuple((int(l) - 1, rational(v, "gamma")) for l, v in doc.get("gamma", {}).items()),
    )


def motzkin_doc(cert: MotzkinCertificate) -> dict:
    return {
        "weak_multipliers": fmt_vector(cert.weak_multipliers),
        "strict_multipliers": fmt_vector(cert.strict_multipliers),
    }


def parse_motzkin(doc: dict) -> MotzkinCertificate:
    return MotzkinCertificate(
        vector(doc["weak_multipliers"], "weak_multipliers"),
        vector(doc["strict_multipliers"], "strict_multipliers"),
    )


def elicit_doc(verdict) -> dict:
    if isinstance(verdict, Elicitable):
        return {
            "verdict": "elicitable",
            "reward": reward_doc(verdict.reward),
            "kkt": kkt_doc(verdict.kkt),
            "motzkin": motzkin_doc(verdict.emptiness.certificate),
        }
    reason = verdict.reason
    if isinstance(reason, InfeasibleOutput):
        return {"verdict": "infeasible"}
    assert isinstance(reason, ImprovingDirection)
    return {"verdict": "inelicitable", "direction": fmt_vector(reason.d)}


def mechanisms_doc(rep: MechanismReport) -> dict:
    return {
        "feasibility_expansion": rep.feasibility_expansion,
        "support_expansion": list(rep.support_expansion),
        "binding_contraction": list(rep.binding_contraction),
    }


def fixed_doc(v: FixedAlphaVerdict) -> dict:
    return {
        "expanding": v.expanding,
        "per_input_elicitable": list(v.per_input_elicitable),
        "aggregate_elicitable": v.aggregate_elicitable,
        "inputs": [elicit_doc(x) for x in v.input_verdicts],
        "aggregate": elicit_doc(v.aggregate_verdict),
    }


def witness_doc(w) -> dict | None:
    if w is None:
        return None
    if isinstance(w, FeasibilityRoute):
        return {"route": "feasibility"}
    branches = []
    for b in w.per_k:
        if isinstance(b, SupportBranch):
            branches.append({"support": b.j + 1})
        else:
            branches.append({"binding": {str(l + 1): fmt(g) for l, g in b.gamma}})
    return {"route": "direction", "d": fmt_vector(w.d), "per_k": branches}


def parse_witness(doc: dict):
    if doc["route"] == "feasibility":
        return FeasibilityRoute()
    per_k = []
    for b in doc["per_k"]:
        if "support" in b:
            per_k.append(SupportBranch(int(b["support"]) - 1))
        else:
            per_k.append(
                BindingBranch(tuple((int(l) - 1, rational(g, "gamma")) for l, g in b["binding"].items()))
            )
    return DirectionRoute(vector(doc["d"], "d"), tuple(per_k))
