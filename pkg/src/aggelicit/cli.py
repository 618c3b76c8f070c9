"""Command-line interface.

Exit codes: 0 positive verdict or success, 1 negative verdict, 2 domain
error, 3 parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from typing import Callable

from . import documents as D
from .aggregate import mechanisms
from .elicit import (
    Elicitable,
    ImprovingDirection,
    InfeasibleOutput,
    decide_elicitable,
    elicitability_system,
    is_best_response,
    verify_improving_direction,
    verify_kkt,
)
from .errors import AggelicitError, MissingAggregation
from .linsys import verify_certificate
from .model import Instance, OutputVector, is_feasible
from .oracle import (
    InstanceGenerator,
    cross_check,
    elicitability_consistency,
    random_instance,
)
from .power import (
    Expanding,
    construct_separating_alpha,
    decide_expansion_existential,
    decide_power_alternate,
    expansion_fixed_alpha,
    verify_power_witness,
)
from .rational import fmt_matrix, fmt_vector
from .regression import run_all

EXIT_POSITIVE, EXIT_NEGATIVE, EXIT_DOMAIN, EXIT_PARSE = 0, 1, 2, 3


class Outcome:
    """A report plus the exit code it maps to."""

    def __init__(self, report: dict, code: int, lines: list[str]):
        self.report, self.code, self.lines = report, code, lines


# -- helpers ----------------------------------------------------------------


def _load(path: str, need_op: bool = False):
    doc = D.load_json(path)
    inst, op = D.parse_document(doc)
    if need_op and op is None:
        raise MissingAggregation(f"{path} has no 'aggregation' block")
    return inst, op


def _vector_for(inst: Instance, text: str) -> OutputVector:
    v = D.parse_vector_text(text)
    if len(v) != inst.M:
        raise D.DocumentError(f"vector has {len(v)} entries, instance has M = {inst.M}")
    return OutputVector(v)


def _show(obj) -> str:
    """Compact text for nested lists/dicts of rational strings."""
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_show(x) for x in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{k}: {_show(v)}" for k, v in obj.items()) + "}"
    return str(obj)


def _elicit_lines(v) -> list[str]:
    doc = D.elicit_doc(v)
    lines = [f"verdict: {doc['verdict']}"]
    if "reward" in doc:
        lines.append(f"reward: nu = {_show(doc['reward']['nu'])}, budget = {doc['reward']['budget']}")
        lines.append(f"kkt: {_show(doc['kkt'])}")
    if "direction" in doc:
        lines.append(f"improving direction: {_show(doc['direction'])}")
    return lines


def _elicit_code(v) -> int:
    if v.elicitable:
        return EXIT_POSITIVE
    return EXIT_DOMAIN if isinstance(v.reason, InfeasibleOutput) else EXIT_NEGATIVE


# -- commands ---------------------------------------------------------------


def cmd_validate(args) -> Outcome:
    inst, op = _load(args.path)
    report = {"verdict": "valid", "instance": D.instance_document(inst, op)}
    lines = [f"valid: M={inst.M} N={inst.N} L={inst.L}" + (f" K={op.K}" if op else "")]
    return Outcome(report, EXIT_POSITIVE, lines)


def cmd_elicit(args) -> Outcome:
    inst, op = _load(args.path)
    x = _vector_for(inst, args.vector)
    v = decide_elicitable(x, inst)
    report = {
        "instance": D.instance_document(inst, op),
        "query": {"x": fmt_vector(x.entries)},
        "certificates": D.elicit_doc(v),
    }
    report["verdict"] = report["certificates"]["verdict"]
    return Outcome(report, _elicit_code(v), _elicit_lines(v))


cmd_construct_reward = cmd_elicit


def cmd_mechanisms(args) -> Outcome:
    inst, op = _load(args.path, need_op=True)
    rep = mechanisms(op, inst)
    m = D.mechanisms_doc(rep)
    any_fired = rep.feasibility_expansion or any(rep.support_expansion) or any(rep.binding_contraction)
    report = {
        "verdict": "mechanism" if any_fired else "none",
        "instance": D.instance_document(inst, op),
        "mechanisms": m,
        "weak_necessity": rep.weak_necessity(),
    }
    lines = [f"{k}: {v}" for k, v in m.items()] + [f"weak necessity predicate: {rep.weak_necessity()}"]
    return Outcome(report, EXIT_POSITIVE if any_fired else EXIT_NEGATIVE, lines)


def cmd_expand(args) -> Outcome:
    inst, op = _load(args.path, need_op=True)
    base = {"instance": D.instance_document(inst, op), "mechanisms": D.mechanisms_doc(mechanisms(op, inst))}
    if args.fixed_alpha:
        v = expansion_fixed_alpha(op, inst)
        report = {**base, "mode": "fixed-alpha", "verdict": "expanding" if v.expanding else "not-expanding",
                  "certificates": D.fixed_doc(v)}
        lines = [f"verdict: {report['verdict']}",
                 f"inputs elicitable: {list(v.per_input_elicitable)}",
                 f"aggregate elicitable: {v.aggregate_elicitable}"]
        return Outcome(report, EXIT_POSITIVE if v.expanding else EXIT_NEGATIVE, lines)
    v = decide_expansion_existential(op, inst)
    report = {**base, "mode": "existential"}
    if isinstance(v, Expanding):
        report["verdict"] = "expanding"
        report["certificates"] = {
            "route": v.alternate.route,
            "direction": fmt_vector(v.alternate.d) if v.alternate.d else None,
            "alpha": fmt_matrix(v.alpha_witness),
            "power_witness": D.witness_doc(v.witness),
            "fixed_check": D.fixed_doc(v.fixed_check),
        }
        lines = ["verdict: expanding", f"route: {v.alternate.route}",
                 f"witness alpha: {_show(fmt_matrix(v.alpha_witness))}"]
        if v.alternate.d:
            lines.insert(2, f"direction: {_show(fmt_vector(v.alternate.d))}")
        return Outcome(report, EXIT_POSITIVE, lines)
    report["verdict"] = "not-expanding"
    report["evidence"] = {"systems_solved": v.evidence.combinations,
                          "reachable_cone_rows": list(v.evidence.cone_rows)}
    lines = ["verdict: not-expanding",
             f"every complement combination infeasible ({v.evidence.combinations} systems solved)"]
    return Outcome(report, EXIT_NEGATIVE, lines)


def cmd_construct_alpha(args) -> Outcome:
    if args.direction is not None:
        d = D.parse_vector_text(args.direction)
        if sum(d, Fraction(0)) >= 0:
            raise D.DocumentError("direction must have a negative coordinate sum")
        alpha = construct_separating_alpha(d)
        report = {"verdict": "constructed", "query": {"d": fmt_vector(d)}, "certificates": {"alpha": fmt_matrix(alpha)}}
        return Outcome(report, EXIT_POSITIVE, [f"alpha: {_show(fmt_matrix(alpha))}"])
    if args.path is None:
        raise D.ParseError("construct-alpha needs an instance file or --direction")
    out = cmd_expand(argparse.Namespace(path=args.path, fixed_alpha=False))
    if out.code == EXIT_POSITIVE:
        alpha = out.report["certificates"]["alpha"]
        out.lines = [f"alpha: {_show(alpha)}"]
    return out


def cmd_oracle(args) -> Outcome:
    violations: list[dict] = []
    stats = {"operations": 0, "vectors": 0, "expanding": 0, "boundary_ambiguous": 0}
    den = args.grid_denominator

    def run(inst, op, seed):
        rep = cross_check(op, inst, trials=20, seed=seed)
        stats["operations"] += 1
        stats["expanding"] += rep.verdict == "expanding"
        stats["boundary_ambiguous"] += rep.boundary_ambiguous
        violations.extend(rep.violations)
        for x in list(op.inputs) + [op.aggregate]:
            if is_feasible(x, inst) and inst.M <= 4:
                stats["vectors"] += 1
                violations.extend(elicitability_consistency(x, inst, den))

    if args.path:
        inst, op = _load(args.path, need_op=True)
        run(inst, op, args.seed)
    else:
        rng = random.Random(args.seed)
        for _ in range(args.trials):
            gen = InstanceGenerator(
                seed=rng.getrandbits(64), M=rng.randint(2, 4), N=rng.randint(1, 3),
                L=rng.randint(0, 3), K=rng.randint(1, 3),
            )
            inst, op = random_instance(gen)
            run(inst, op, gen.seed)
    report = {"verdict": "consistent" if not violations else "violations",
              "stats": stats, "violations": violations,
              "query": {"seed": args.seed, "trials": args.trials, "grid_denominator": den}}
    lines = [f"operations: {stats['operations']}, vectors: {stats['vectors']}, "
             f"expanding: {stats['expanding']}, boundary-ambiguous: {stats['boundary_ambiguous']}",
             f"violations: {len(violations)}"]
    lines += [json.dumps(v) for v in violations[:10]]
    return Outcome(report, EXIT_POSITIVE if not violations else EXIT_NEGATIVE, lines)


def cmd_paper_examples(args) -> Outcome:
    results = run_all()
    ok = all(r.passed for r in results)
    report = {"verdict": "pass" if ok else "fail",
              "checks": [{"case": r.case, "check": r.check, "passed": r.passed, "detail": r.detail} for r in results]}
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.case}: {r.check}" + ("" if r.passed else f" ({r.detail})")
             for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return Outcome(report, EXIT_POSITIVE if ok else EXIT_NEGATIVE, lines)


# -- offline verification ---------------------------------------------------


def _verify_elicit(inst: Instance, x: OutputVector, cert: dict) -> list[str]:
    """Problems found with an elicitability certificate (empty if sound)."""
    kind = cert["verdict"]
    if kind == "infeasible":
        return [] if not is_feasible(x, inst) else ["x is feasible"]
    if kind == "inelicitable":
        check = verify_improving_direction(x, D.vector(cert["direction"], "direction"), inst)
        return [] if check else [f"direction rejected: {check.reason}"]
    problems = []
    reward = D.parse_reward(cert["reward"])
    if not verify_kkt(x, reward, D.parse_kkt(cert["kkt"]), inst):
        problems.append("KKT conditions fail")
    if reward.budget != x.l1:
        problems.append("budget differs from the l1 norm of x")
    if not is_best_response(x, reward, inst):
        problems.append("x is not a best response to the reward")
    if "motzkin" in cert and not verify_certificate(elicitability_system(x, inst), D.parse_motzkin(cert["motzkin"])):
        problems.append("Motzkin certificate fails")
    return problems


def _verify_fixed(inst: Instance, op, cert: dict) -> list[str]:
    problems = []
    for k, (x, c) in enumerate(zip(op.inputs, cert["inputs"])):
        problems += [f"input {k + 1}: {p}" for p in _verify_elicit(inst, x, c)]
    problems += [f"aggregate: {p}" for p in _verify_elicit(inst, op.aggregate, cert["aggregate"])]
    claimed = all(c["verdict"] == "elicitable" for c in cert["inputs"]) and cert["aggregate"]["verdict"] != "elicitable"
    if claimed != cert["expanding"]:
        problems.append("expanding flag inconsistent with the per-vector verdicts")
    return problems


def verify_report(report: dict) -> list[str]:
    cmd = report.get("command")
    if cmd in ("elicit", "construct-reward"):
        inst, _ = D.parse_document(report["instance"])
        x = OutputVector(D.vector(report["query"]["x"], "x"))
        return _verify_elicit(inst, x, report["certificates"])
    if cmd in ("expand", "construct-alpha") and "instance" in report:
        inst, op = D.parse_document(report["instance"])
        if report.get("mode") == "fixed-alpha":
            return _verify_fixed(inst, op, report["certificates"])
        if report["verdict"] == "expanding":
            cert = report["certificates"]
            problems = _verify_fixed(inst.with_alpha(D.matrix(cert["alpha"], "alpha")), op, cert["fixed_check"])
            if not cert["fixed_check"]["expanding"]:
                problems.append("witness alpha does not expand")
            w = cert.get("power_witness")
            if w is not None and not verify_power_witness(op, inst, D.parse_witness(w)):
                problems.append("margin-form witness fails")
            return problems
        # no certificate exists for a negative existential verdict; recompute
        again = decide_power_alternate(op, inst)
        return [] if not getattr(again, "route", None) else ["recomputed decision is expanding"]
    if cmd == "construct-alpha":
        d = D.vector(report["query"]["d"], "d")
        alpha = D.matrix(report["certificates"]["alpha"], "alpha")
        return [] if fmt_matrix(construct_separating_alpha(d)) == fmt_matrix(alpha) else ["alpha differs"]
    if cmd == "mechanisms":
        inst, op = D.parse_document(report["instance"])
        got = D.mechanisms_doc(mechanisms(op, inst))
        return [] if got == report["mechanisms"] else ["mechanism flags differ"]
    if cmd == "validate":
        D.parse_document(report["instance"])
        return []
    if cmd == "oracle":
        return [f"violation: {v['property']}" for v in report.get("violations", [])]
    if cmd == "paper-examples":
        return [f"failed: {c['case']} {c['check']}" for c in report.get("checks", []) if not c["passed"]]
    raise D.ParseError(f"report has unknown command {cmd!r}")


def cmd_verify(args) -> Outcome:
    report = D.load_json(args.report)
    problems = verify_report(report)
    out = {"verdict": "verified" if not problems else "rejected", "problems": problems,
           "checked_command": report.get("command")}
    lines = [f"{out['verdict']}: {report.get('command')} report"] + [f"  {p}" for p in problems]
    return Outcome(out, EXIT_POSITIVE if not problems else EXIT_NEGATIVE, lines)


# -- argument parsing -------------------------------------------------------

COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "elicit": cmd_elicit,
    "mechanisms": cmd_mechanisms,
    "expand": cmd_expand,
    "construct-reward": cmd_construct_reward,
    "construct-alpha": cmd_construct_alpha,
    "oracle": cmd_oracle,
    "paper-examples": cmd_paper_examples,
    "verify": cmd_verify,
}


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(v):
        return argparse.SUPPRESS if suppress else v

    parser.add_argument("--json", action="store_true", default=default(False), help="print the JSON report")
    parser.add_argument("--quiet", action="store_true", default=default(False), help="print nothing; use the exit code")
    parser.add_argument("--seed", type=int, default=default(0), help="random seed (oracle)")
    parser.add_argument("--trials", type=int, default=default(100), help="random operations to test (oracle)")
    parser.add_argument("--grid-denominator", type=int, default=default(5), help="grid resolution (oracle)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aggelicit",
        description="Exact elicitability and aggregation analysis with checkable certificates.",
    )
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _global_flags(p, suppress=True)
        return p

    add("validate", "check an instance file").add_argument("path")
    p = add("elicit", "decide elicitability of an output vector")
    p.add_argument("path")
    p.add_argument("vector", help='e.g. "1/2,1/2,0" or \'["1/2","1/2","0"]\'')
    add("mechanisms", "report the three aggregation mechanisms").add_argument("path")
    p = add("expand", "decide elicitability expansion")
    p.add_argument("path")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--fixed-alpha", action="store_true", help="use the instance's alpha")
    mode.add_argument("--existential", action="store_true", help="over all feature maps (default)")
    p = add("construct-reward", "eliciting linear reward with KKT certificate")
    p.add_argument("path")
    p.add_argument("vector")
    p = add("construct-alpha", "witness feature map for a direction or an instance")
    p.add_argument("path", nargs="?")
    p.add_argument("--direction", help="direction d with a positive coordinate and negative sum")
    add("oracle", "grid oracles and property battery").add_argument("path", nargs="?")
    add("paper-examples", "run the embedded reference suite")
    add("verify", "re-check a saved JSON report offline").add_argument("report")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else 0
    start = time.perf_counter()
    try:
        outcome = COMMANDS[args.command](args)
    except D.ParseError as e:
        if not args.quiet:
            print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (AggelicitError, OSError) as e:
        if not args.quiet:
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    report = {"command": args.command, **outcome.report}
    report["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    if not args.quiet:
        if args.json:
            print(json.dumps(report, indent=2))
        else:
            print("\n".join(outcome.lines))
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
