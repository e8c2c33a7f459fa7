"""Command-line entry point: ``python -m app.cli <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, Optional, Sequence

from .action import act
from .config import configure_logging, get_settings
from .diagram import canonical_form, classify, generator, to_dict as diagram_to_dict, validate as validate_diagram
from .errors import InputError, SchordError
from .frobenius import resolve, validate as validate_algebra
from .hochschild import Variant, cohomology, from_dict as cochain_from_dict
from .linalg import field_from_spec
from .prop import DiagramSum, as_sum, boundary, compose, sum_from_dict
from .schemas import ACCEPTANCE, SuiteConfig, dump_json, load_model, read_json
from .verify import format_report, run_suite

LOGGER = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schord", description="Chord diagram operations on Hochschild cochains")
    parser.add_argument("--json", action="store_true", help="emit canonical JSON")
    parser.add_argument("--field", help="scalar field: q or p:<prime>")
    parser.add_argument("--seed", type=int, help="random seed (overrides SCHORD_SEED)")
    parser.add_argument("--log-level", help="logging level (overrides SCHORD_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    algebra = commands.add_parser("algebra", help="Frobenius algebra files")
    algebra_cmd = algebra.add_subparsers(dest="action", required=True)
    check = algebra_cmd.add_parser("validate")
    check.add_argument("target", help="algebra file or builtin name")

    diagram = commands.add_parser("diagram", help="single diagrams")
    diagram_cmd = diagram.add_subparsers(dest="action", required=True)
    for name in ("classify", "boundary", "canonical"):
        sub = diagram_cmd.add_parser(name)
        sub.add_argument("target", help="diagram file or generator name")

    comp = commands.add_parser("compose", help="first after second")
    comp.add_argument("first")
    comp.add_argument("second")

    hh = commands.add_parser("hh", help="Hochschild cohomology")
    hh.add_argument("--algebra", required=True)
    hh.add_argument("--degree", type=int, required=True)
    hh.add_argument("--max-degree", type=int)
    hh.add_argument("--full", action="store_true", help="use the unnormalized complex")

    action = commands.add_parser("act", help="apply a diagram to cochains")
    action.add_argument("diagram")
    action.add_argument("--inputs", nargs="+", required=True, help="cochain files, one per input circle")

    suite = commands.add_parser("verify", help="run the identity suite")
    suite.add_argument("--config", help="suite configuration file")
    suite.add_argument("--checks", nargs="+", help="restrict to these check groups")
    suite.add_argument("--acceptance", action="store_true", help="use the full acceptance sample counts")
    return parser


def _is_file(target: str) -> bool:
    return os.path.exists(target) or target.endswith(".json")


def load_sum(target: str) -> DiagramSum:
    if _is_file(target):
        return sum_from_dict(read_json(target), target)
    return as_sum(generator(target))


def load_algebra(target: str, field_spec_text: str):
    field = field_from_spec(field_spec_text)
    if _is_file(target):
        return resolve(read_json(target), field, target)
    return resolve(target, field)


def _sum_text(s: DiagramSum) -> str:
    if s.is_zero():
        return "0"
    return "\n".join(f"{c} * {dump_json(diagram_to_dict(d))}" for d, c in s.items())


def _cmd_algebra(args: argparse.Namespace, field: str) -> Dict[str, Any]:
    report = validate_algebra(load_algebra(args.target, field))
    lines = [f"{'valid' if report['valid'] else 'INVALID'}: {args.target}"]
    lines.extend(f"  error: {e}" for e in report["errors"])
    lines.extend(f"  warning: {w}" for w in report["warnings"])
    return {"payload": report, "text": "\n".join(lines), "ok": report["valid"]}


def _cmd_diagram(args: argparse.Namespace, field: str) -> Dict[str, Any]:
    s = load_sum(args.target)
    if args.action == "boundary":
        result = boundary(s)
        return {"payload": result.to_dict(), "text": _sum_text(result), "ok": True}
    if len(s) != 1:
        raise InputError(f"{args.action} needs a single diagram, got {len(s)} terms", args.target)
    d, _ = next(s.items())
    report = validate_diagram(d)
    if not report["valid"]:
        return {"payload": report, "text": "\n".join(["INVALID"] + report["errors"]), "ok": False}
    if args.action == "classify":
        c = classify(d)
        genus = "n/a" if c.genus is None else c.genus
        return {"payload": c.to_dict(), "text": f"(g={genus}, n={c.n}, m={c.m})", "ok": True}
    data = diagram_to_dict(canonical_form(d))
    return {"payload": data, "text": dump_json(data), "ok": True}


def _cmd_compose(args: argparse.Namespace, field: str) -> Dict[str, Any]:
    result = compose(load_sum(args.first), load_sum(args.second))
    return {"payload": result.to_dict(), "text": _sum_text(result), "ok": True}


def _cmd_hh(args: argparse.Namespace, field: str) -> Dict[str, Any]:
    alg = load_algebra(args.algebra, field)
    top = args.max_degree or max(get_settings().max_degree, args.degree + 1)
    variant = Variant.FULL if args.full else Variant.NORMALIZED
    group = cohomology(alg, args.degree, top, variant)
    return {"payload": group.to_dict(),
            "text": f"dim HH^{args.degree}({alg.name}) = {group.dimension}", "ok": True}


def _cmd_act(args: argparse.Namespace, field: str) -> Dict[str, Any]:
    s = load_sum(args.diagram)
    files = [read_json(path) for path in args.inputs]
    first = files[0]
    if not isinstance(first, dict) or "algebra" not in first:
        raise InputError("cochain file must name its algebra", f"{args.inputs[0]}.algebra")
    alg = resolve(first["algebra"], field_from_spec(field), f"{args.inputs[0]}.algebra")
    cochains = [cochain_from_dict(data, alg, path) for data, path in zip(files, args.inputs)]
    result = act(s, cochains)
    payload = result.to_dict()
    return {"payload": payload, "text": json.dumps(payload, indent=2, sort_keys=True), "ok": True}


def _cmd_verify(args: argparse.Namespace, field: str) -> Dict[str, Any]:
    data = read_json(args.config) if args.config else {}
    if args.acceptance and isinstance(data, dict):
        data = {**ACCEPTANCE, **data}
    cfg = load_model(SuiteConfig, data, args.config or "")
    overrides: Dict[str, Any] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.field:
        overrides["field"] = args.field
    if args.checks:
        overrides["checks"] = args.checks
    if overrides:
        cfg = cfg.model_copy(update=overrides)
    report = run_suite(cfg)
    return {"payload": report, "text": format_report(report), "ok": report["passed"]}


COMMANDS = {
    "algebra": _cmd_algebra,
    "diagram": _cmd_diagram,
    "compose": _cmd_compose,
    "hh": _cmd_hh,
    "act": _cmd_act,
    "verify": _cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return int(exc.code or 0)
    configure_logging(args.log_level)
    field = args.field or get_settings().field
    try:
        result = COMMANDS[args.command](args, field)
    except SchordError as exc:
        LOGGER.debug("command failed", exc_info=True)
        if args.json:
            print(dump_json(exc.to_dict()))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    print(dump_json(result["payload"]) if args.json else result["text"])
    return 0 if result["ok"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
