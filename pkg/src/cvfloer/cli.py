"""
``cvf``: command-line front end.

Every command builds one JSON-serialisable report.  ``--json`` prints it
with sorted keys; otherwise a short human summary of the same report is
printed.  Exit codes: 0 success, 1 invalid field, 2 I/O or parse failure,
3 input refused by the Floer construction (exclusions, twisted orbits),
4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import fixtures
from .cell_complex import ADJACENCY_MODES, ComplexError, UnknownCell
from .dynamics import (
    DEFAULT_CYCLE_BUDGET,
    CycleBudgetExceeded,
    NonterminatingPathFamily,
    chain_recurrent_set,
    closed_orbits,
)
from .floer import DSquaredNonzero, ExclusionsViolated, TWISTED, build_floer_complex, check_exclusions
from .homology_z2 import betti_cellular
from .surgery import (
    ChainMapMismatch,
    IllegalSplitPosition,
    NotAnOrbitCell,
    is_gradient,
    morse_boundary,
    morse_inequalities,
    replace_all_orbits,
    replace_orbit,
    select_orbit,
    surgery_census,
    vanishing_coefficients,
    verify_chain_map,
)
from .vector_field import DuplicateTail, VectorField, parse_fixture, rest_counts, validate_field

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_REFUSED, EXIT_INTERNAL = 0, 1, 2, 3, 4
METHODS = ("floer", "oracle", "surgery")
FIXTURE_PREFIX = "fixture:"


class CliError(Exception):
    def __init__(self, code: int, message: str, detail: dict | None = None):
        super().__init__(message)
        self.code = code
        self.detail = detail or {}


@dataclass
class RunReport:
    command: list[str]
    input: dict
    body: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK
    seconds: float = 0.0

    def to_dict(self) -> dict:
        d = {"command": self.command, "input": self.input, "exit_code": self.exit_code, "timing": {"seconds": self.seconds}}
        d.update(self.body)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


# -- input -------------------------------------------------------------------


def read_input(ref: str) -> tuple[str, dict]:
    """Fixture text plus a provenance record with its sha256 digest."""
    if ref.startswith(FIXTURE_PREFIX):
        name = ref[len(FIXTURE_PREFIX):]
        try:
            text = fixtures.text(name)
        except KeyError as exc:
            raise CliError(EXIT_IO, str(exc.args[0])) from None
    else:
        try:
            text = Path(ref).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise CliError(EXIT_IO, f"cannot read {ref}: {exc}") from None
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return text, {"path": ref, "sha256": digest}


def load_field(text: str) -> VectorField:
    try:
        return parse_fixture(text)
    except DuplicateTail as exc:
        violation = {"clause": exc.clause, "cells": [exc.cell, *exc.heads]}
        raise CliError(EXIT_INVALID, str(exc), {"validation": {"valid": False, "violations": [violation]}}) from None
    except (ComplexError, UnknownCell) as exc:
        raise CliError(EXIT_IO, f"parse error: {exc}") from None


def require_valid(v: VectorField) -> None:
    report = validate_field(v)
    if not report.valid:
        raise CliError(EXIT_INVALID, "invalid vector field", {"validation": report.to_dict()})


def _refusal(exc: ExclusionsViolated) -> CliError:
    detail = {"exclusions": exc.report.to_dict()}
    msg = f"Floer construction refused: {', '.join(sorted(exc.report.kinds()))}"
    if TWISTED in exc.report.kinds():
        detail["hint"] = "twisted orbit present; use --method surgery"
        msg += " (twisted orbit present; use --method surgery)"
    return CliError(EXIT_REFUSED, msg, detail)


# -- commands ----------------------------------------------------------------


def cmd_validate(args, v: VectorField) -> dict:
    report = validate_field(v)
    body = {"validation": report.to_dict(), "rest_counts": rest_counts(v)}
    if not report.valid:
        raise CliError(EXIT_INVALID, "invalid vector field", body)
    return body


def cmd_analyze(args, v: VectorField) -> dict:
    require_valid(v)
    rec = chain_recurrent_set(v, args.cycle_budget)
    excl = check_exclusions(v, rec.orbits)
    return {
        "recurrence": rec.to_dict(),
        "rest_counts": rest_counts(v),
        "exclusions": excl.to_dict(),
        "gradient": not rec.orbits,
    }


def _floer(args, v: VectorField) -> dict:
    try:
        fc = build_floer_complex(v, args.adjacency, args.cycle_budget)
    except ExclusionsViolated as exc:
        raise _refusal(exc) from None
    d = fc.to_dict()
    d["census"] = fc.dims()
    d["orbits"] = [o.to_dict() for o in fc.orbits]
    return d


def _surgery(args, v: VectorField) -> dict:
    v2, records = replace_all_orbits(v, cycle_budget=args.cycle_budget)
    mc = morse_boundary(v2)
    return {
        "betti": mc.betti(),
        "records": [r.to_dict() for r in records],
        "census": surgery_census(v, records),
        "rest_counts_after": rest_counts(v2),
    }


def cmd_homology(args, v: VectorField) -> dict:
    require_valid(v)
    methods = METHODS if args.method == "all" else (args.method,)
    results: dict[str, dict] = {}
    refused: CliError | None = None
    for m in methods:
        if m == "oracle":
            results[m] = {"betti": betti_cellular(v.complex)}
        elif m == "surgery":
            results[m] = _surgery(args, v)
        else:
            try:
                results[m] = _floer(args, v)
            except CliError as exc:
                refused = exc
                results[m] = {"refused": True, **exc.detail}
    body = {"methods": results, "betti": {m: r["betti"] for m, r in results.items() if "betti" in r}}
    if len(methods) > 1:
        body["agree"] = len({tuple(b) for b in body["betti"].values()}) == 1 and refused is None
    if refused is not None:
        raise CliError(refused.code, str(refused), {**refused.detail, **body})
    return body


def cmd_surgery(args, v: VectorField) -> dict:
    require_valid(v)
    if args.orbit is None:
        if args.tau is not None:
            raise CliError(EXIT_INVALID, "--tau needs --orbit")
        v2, records = replace_all_orbits(v, cycle_budget=args.cycle_budget)
    else:
        try:
            o = select_orbit(v, args.orbit)
            v2, rec = replace_orbit(v, o, args.tau)
        except (NotAnOrbitCell, IllegalSplitPosition) as exc:
            raise CliError(EXIT_INVALID, str(exc)) from None
        records = [rec]
    text = v2.to_text()
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {args.output}: {exc}") from None
    body = {
        "records": [r.to_dict() for r in records],
        "census": surgery_census(v, records),
        "rest_counts_after": rest_counts(v2),
        "gradient": is_gradient(v2, args.cycle_budget),
        "output": args.output,
    }
    if not args.output:
        body["field"] = text
    return body


def cmd_check(args, v: VectorField) -> dict:
    require_valid(v)
    orbits = closed_orbits(v, args.cycle_budget)
    excl = check_exclusions(v, orbits)
    body: dict = {"exclusions": excl.to_dict()}
    ineq = morse_inequalities(v, cycle_budget=args.cycle_budget, strict=False)
    body["morse_inequalities"] = ineq.to_dict()
    v2, records = replace_all_orbits(v, cycle_budget=args.cycle_budget)
    mc = morse_boundary(v2)
    vanishing = vanishing_coefficients(v, records, mc)
    body["vanishing"] = vanishing
    failed = [] if ineq.ok else ["morse-inequalities"]
    if any(x["value"] for x in vanishing):
        failed.append("vanishing-coefficients")
    if excl.ok:
        rep = verify_chain_map(v, args.adjacency, args.cycle_budget, strict=False)
        body["chain_map"] = rep.to_dict()
        if not rep.ok:
            failed.append("chain-map")
    else:
        body["chain_map"] = None
    body["failed"] = failed
    if failed:
        raise CliError(EXIT_INTERNAL, f"checks failed: {', '.join(failed)}", body)
    if not excl.ok:
        raise CliError(EXIT_REFUSED, "chain map skipped: " + ", ".join(sorted(excl.kinds())), body)
    return body


PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def export_dot(v: VectorField, cycle_budget: int = DEFAULT_CYCLE_BUDGET) -> str:
    """Hasse diagram; matched pairs drawn as arrows tail -> head."""
    cx = v.complex
    colour: dict[str, str] = {}
    for i, o in enumerate(closed_orbits(v, cycle_budget)):
        for c in o.cells:
            colour.setdefault(c, PALETTE[i % len(PALETTE)])
    lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    for k in range(cx.max_dim + 1):
        ids = " ".join(f'"{c}"' for c in cx.cells_of_dim(k))
        lines.append(f"  {{ rank=same; {ids} }}")
    for c in cx:
        attrs = []
        if v.is_rest(c):
            attrs += ["style=filled", 'fillcolor="#ffd700"', "penwidth=2"]
        elif c in colour:
            attrs += ["style=filled", f'fillcolor="{colour[c]}"', 'fontcolor="white"']
        lines.append(f'  "{c}" [{", ".join(attrs)}];' if attrs else f'  "{c}";')
    for c in cx:
        for f in cx.sorted(cx.faces(c)):
            if v.head(f) != c:
                lines.append(f'  "{f}" -> "{c}" [dir=none, color=gray];')
    for a, b in v.pairs.items():
        lines.append(f'  "{a}" -> "{b}" [color=black, penwidth=2];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(args, v: VectorField) -> dict:
    require_valid(v)
    return {"dot": export_dot(v, args.cycle_budget), "nodes": len(v.complex), "arrows": len(v.pairs)}


COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "homology": cmd_homology,
    "surgery": cmd_surgery,
    "check": cmd_check,
    "export-dot": cmd_export_dot,
}


# -- formatting --------------------------------------------------------------


def _human(cmd: str, body: dict) -> str:
    if cmd == "export-dot" and "dot" in body:
        return body["dot"].rstrip("\n")
    out: list[str] = []
    if "validation" in body:
        val = body["validation"]
        out.append("valid" if val["valid"] else "invalid")
        out += [f"  {x['clause']}: {' '.join(x['cells'])}" for x in val["violations"]]
    if "rest_counts" in body:
        out.append(f"rest cells by dimension: {body['rest_counts']}")
    if "recurrence" in body:
        for o in body["recurrence"]["orbits"]:
            tw = " (twisted)" if o["twisted"] else ""
            out.append(f"orbit {o['name']}: index {o['index']}, length {len(o['sigmas'])}{tw}")
    if "exclusions" in body and body["exclusions"]["violations"]:
        for x in body["exclusions"]["violations"]:
            out.append(f"exclusion {x['kind']}: {x['source']} -> {x['target']}")
    if "hint" in body:
        out.append(f"hint: {body['hint']}")
    if cmd == "homology":
        for m, b in body.get("betti", {}).items():
            out.append(f"{m}: betti {b}")
        for m, r in body.get("methods", {}).items():
            if r.get("refused"):
                out.append(f"{m}: refused")
    if "records" in body:
        for r in body["records"]:
            out.append(f"split {r['orbit']} at {r['q_up']}: new rest cells {r['q_down']}, {r['q_up']}")
        if body.get("output"):
            out.append(f"wrote {body['output']}")
        elif "field" in body:
            out.append(body["field"].rstrip("\n"))
    if "morse_inequalities" in body:
        mi = body["morse_inequalities"]
        out.append(f"morse inequalities: lhs {mi['lhs']} rhs {mi['rhs']} ({'ok' if mi['ok'] else 'FAIL'})")
    if "chain_map" in body:
        cm = body["chain_map"]
        out.append("chain map: skipped" if cm is None else f"chain map: {'ok' if cm['ok'] else 'FAIL'}")
    if "failed" in body and body["failed"]:
        out.append(f"failed: {', '.join(body['failed'])}")
    return "\n".join(out)


# -- entry point -------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda x: argparse.SUPPRESS) if suppress else (lambda x: x)
    p.add_argument("--json", action="store_true", default=default(False), help="print the full JSON report")
    p.add_argument("--adjacency", choices=ADJACENCY_MODES, default=default("codim1"), help="face sharing used by the class relations")
    p.add_argument("--cycle-budget", type=int, default=default(DEFAULT_CYCLE_BUDGET), metavar="N", help="cap on enumerated elementary cycles")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvf", description="Floer-type Z2 homology of combinatorial vector fields.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "validate": "check the vector field clauses",
        "analyze": "rest cells, closed orbits and exclusions",
        "homology": "Betti numbers by the Floer, oracle or surgery method",
        "surgery": "replace closed orbits by pairs of rest cells",
        "check": "chain map and Morse inequality reports",
        "export-dot": "Hasse diagram in Graphviz DOT",
    }
    for name, help_ in specs.items():
        p = sub.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        p.add_argument("file", help=f"fixture path, or {FIXTURE_PREFIX}NAME for a bundled one")
        if name == "homology":
            p.add_argument("--method", choices=METHODS + ("all",), default="all")
        if name == "surgery":
            p.add_argument("--orbit", help="orbit name or any of its cells")
            p.add_argument("--tau", help="top cell to split at")
            p.add_argument("-o", "--output", help="write the new fixture here")
    return parser


def run(argv: list[str]) -> tuple[RunReport, str]:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    report = RunReport(command=["cvf", *argv], input={"path": args.file})
    try:
        text, report.input = read_input(args.file)
        v = load_field(text)
        report.body = COMMANDS[args.command](args, v)
    except CliError as exc:
        report.exit_code = exc.code
        report.body = {**exc.detail, "error": str(exc)}
    except ExclusionsViolated as exc:
        err = _refusal(exc)
        report.exit_code, report.body = err.code, {**err.detail, "error": str(err)}
    except CycleBudgetExceeded as exc:
        report.exit_code, report.body = EXIT_IO, {"error": f"cycle budget exceeded: {exc}"}
    except (DSquaredNonzero, ChainMapMismatch, NonterminatingPathFamily) as exc:
        report.exit_code, report.body = EXIT_INTERNAL, {"error": f"{type(exc).__name__}: {exc}"}
    report.seconds = round(time.perf_counter() - t0, 6)
    if args.json:
        return report, report.to_json()
    human = _human(args.command, report.body)
    if report.exit_code and "error" in report.body:
        human = (human + "\n" if human else "") + f"error: {report.body['error']}"
    return report, human


def main(argv: list[str] | None = None) -> int:
    report, text = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if report.exit_code and text.startswith("error") else sys.stdout
    print(text, file=stream)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
