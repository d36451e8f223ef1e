"""Command-line front end.

Every subcommand prints one RunReport as JSON (``--pretty`` renders the same
report as text).  Exit codes: 0 true/exists, 1 false/does not exist,
2 usage or input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .decide import (
    definition_exists, implicitly_definable, interpolant_exists,
    nonprojective_definition_exists, referring_expression_exists,
)
from .dlcore import (
    EMPTY, DialectError, Dialect, Ontology, ParseError, Signature, concept_size,
    ontology_to_text, parse_concept, parse_ontology, role_depth, signature, to_text,
    validate_dialect,
)
from .mosaic import validate_witness
from .oracles import SearchBudget, bounded_joint_consistency, enumerate_definitions
from .satcheck import entails_ci, find_model
from .semantics import (
    Interpretation, eval_concept, is_bisimulation, is_model, largest_bisimulation,
)
from .typespace import BudgetExceeded

__all__ = ["main", "run", "build_parser", "EXIT_TRUE", "EXIT_FALSE", "EXIT_ERROR", "EXIT_BUDGET"]

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3
EXIT_CLASS = {EXIT_TRUE: "true", EXIT_FALSE: "false", EXIT_ERROR: "error",
              EXIT_BUDGET: "budget"}
SCHEMA_VERSION = 1


class UsageError(ValueError):
    pass


class _Budget(Exception):
    """Raised by handlers when an oracle runs out of room."""


# ---------------------------------------------------------------- argument parsing


def _shared(p: argparse.ArgumentParser):
    p.add_argument("--dialect", default="alco",
                   choices=["alco", "alch", "alcho", "alcio", "alchio", "alchi"])
    p.add_argument("--universal", action="store_true", help="admit the universal role u")
    p.add_argument("--budget-types", type=int, metavar="N", help="cap on enumerated types")
    p.add_argument("--budget-mosaics", type=int, metavar="N", help="cap on antichain size")
    p.add_argument("--budget-closure", type=int, metavar="N", help="cap on closure size")
    p.add_argument("--witness", metavar="OUT.json", help="write the witness bundle here")
    p.add_argument("--pretty", action="store_true", help="human-readable report")
    p.add_argument("--seed", type=int, help="elimination order seed")
    p.add_argument("--engine", default="lazy", choices=["lazy", "explicit"])
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock timing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dlnom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _shared(p)
        return p

    p = add("parse", "parse and validate an ontology or concept, optionally model-check")
    p.add_argument("--onto")
    p.add_argument("--concept")
    p.add_argument("--model", help="interpretation JSON to check against the input")

    p = add("sat", "concept satisfiability under an ontology")
    p.add_argument("--onto")
    p.add_argument("--concept", required=True)

    p = add("entails", "concept inclusion entailment")
    p.add_argument("--onto")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)

    p = add("bisim", "are two pointed interpretations Σ-bisimilar?")
    p.add_argument("--bundle", help="witness bundle JSON (replaces the other inputs)")
    p.add_argument("--i1")
    p.add_argument("--i2")
    p.add_argument("--d1")
    p.add_argument("--d2")
    p.add_argument("--sigma", default="")

    p = add("interpolant-exists", "does an interpolant for C1 ⊑ C2 exist?")
    p.add_argument("--o1")
    p.add_argument("--c1", required=True)
    p.add_argument("--o2")
    p.add_argument("--c2", required=True)

    for name, help_text in (("definition-exists", "is C explicitly Σ-definable?"),
                            ("implicit", "is C implicitly Σ-definable?")):
        p = add(name, help_text)
        p.add_argument("--onto")
        p.add_argument("--concept", required=True)
        p.add_argument("--sigma", required=True)

    p = add("referring-exists", "does a referring expression for an individual exist?")
    p.add_argument("--onto", required=True)
    p.add_argument("--individual", required=True)
    p.add_argument("--sigma", help="defaults to the ontology signature minus the individual")

    p = add("nonprojective-exists", "is a concept name definable from all other symbols?")
    p.add_argument("--onto", required=True)
    p.add_argument("--name", required=True)
    p.add_argument("--route", default="auto", choices=["auto", "mosaic"])

    p = add("oracle-joint", "bounded search for a joint-consistency witness")
    p.add_argument("--o1")
    p.add_argument("--c1", required=True)
    p.add_argument("--o2")
    p.add_argument("--c2", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--max-domain", type=int, default=3)
    p.add_argument("--max-seconds", type=float)

    p = add("oracle-enumdef", "enumerate Σ-concepts looking for a definition")
    p.add_argument("--onto")
    p.add_argument("--concept", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--max-size", type=int, default=12)
    p.add_argument("--max-candidates", type=int, default=200_000)
    p.add_argument("--max-seconds", type=float)
    return parser


# ---------------------------------------------------------------- input helpers


def _dialect(args) -> Dialect:
    return Dialect.from_name(args.dialect, universal=args.universal)


def _ontology(path, dialect) -> Ontology:
    if not path:
        return EMPTY
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return parse_ontology(text, dialect)


def _json_file(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def _budgets(args) -> dict:
    out = {}
    if args.budget_types is not None:
        out["max_types"] = args.budget_types
    if args.budget_mosaics is not None:
        out["max_mosaics"] = args.budget_mosaics
    if args.budget_closure is not None:
        out["max_closure"] = args.budget_closure
    return out


def _closure_budget(args) -> dict:
    return {"max_closure": args.budget_closure} if args.budget_closure is not None else {}


def _write_bundle(path, witness, sigma, dialect, o1, c1, o2, c2):
    bundle = {
        "dialect": dialect.name, "sigma": sigma.to_text(),
        "o1": ontology_to_text(o1), "c1": to_text(c1),
        "o2": ontology_to_text(o2), "c2": to_text(c2),
        **witness.to_json(),
    }
    Path(path).write_text(json.dumps(bundle, indent=2, sort_keys=True) + "\n")


def _echo(args) -> dict:
    skip = {"pretty", "seed", "witness", "no_timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


# ---------------------------------------------------------------- handlers
# Each handler returns (answer, report fields).


def _decision_fields(d, args) -> dict:
    fields = {"sigma": d.sigma.to_json(), "verdict": {"kind": d.kind, "route": d.route}}
    if d.details:
        fields["verdict"]["details"] = d.details
    if d.verdict is not None:
        body = d.verdict.to_json(d.problem)
        body.pop("witness", None)
        fields["verdict"]["joint"] = body
        fields["budget"] = dict(d.verdict.stats)
        w = d.verdict.witness
        if w is not None:
            problems = validate_witness(d.problem, w)
            fields["verdict"]["witness_problems"] = problems
            if args.witness:
                _write_bundle(args.witness, w, d.sigma, d.problem.dialect,
                              d.problem.o[1], d.problem.c[1], d.problem.o[2], d.problem.c[2])
                fields["witness"] = args.witness
    return fields


def cmd_parse(args, dialect):
    if not args.onto and not args.concept:
        raise UsageError("parse needs --onto or --concept")
    o = _ontology(args.onto, None)
    fields = {"verdict": {}}
    v = fields["verdict"]
    items = [o]
    if args.onto:
        v["ontology"] = ontology_to_text(o)
        v["axioms"] = len(o)
    c = None
    if args.concept:
        c = parse_concept(args.concept)
        items.append(c)
        v["concept"] = to_text(c)
        v["size"] = concept_size(c)
        v["depth"] = role_depth(c)
    fields["sigma"] = signature(*items).to_json()
    violations = [str(x) for it in items for x in validate_dialect(it, dialect)]
    v["dialect_violations"] = violations
    ok = not violations
    if args.model:
        model = Interpretation.from_json(_json_file(args.model))
        good, failing = is_model(model, o)
        v["is_model"] = good
        v["failing_axioms"] = [str(a) for a in failing]
        ok = ok and good
        if c is not None:
            v["extension"] = sorted(str(x) for x in eval_concept(model, c))
    return ok, fields


def cmd_sat(args, dialect):
    o = _ontology(args.onto, dialect)
    c = parse_concept(args.concept, dialect)
    found = find_model(c, o, dialect, **_closure_budget(args))
    fields = {"verdict": {"satisfiable": found is not None}}
    if found is not None:
        fields["verdict"]["model"] = found[0].to_json()
        fields["verdict"]["point"] = found[1]
    return found is not None, fields


def cmd_entails(args, dialect):
    o = _ontology(args.onto, dialect)
    lhs = parse_concept(args.lhs, dialect)
    rhs = parse_concept(args.rhs, dialect)
    ok = entails_ci(o, lhs, rhs, dialect, **_closure_budget(args))
    return ok, {"verdict": {"entailed": ok}}


def cmd_bisim(args, dialect):
    checks = {}
    if args.bundle:
        b = _json_file(args.bundle)
        dialect = Dialect.from_name(b["dialect"])
        sigma = Signature.parse(b["sigma"])
        i1, i2 = Interpretation.from_json(b["model1"]), Interpretation.from_json(b["model2"])
        d1, d2 = b["point1"], b["point2"]
        o1, o2 = parse_ontology(b["o1"], dialect), parse_ontology(b["o2"], dialect)
        c1, c2 = parse_concept(b["c1"], dialect), parse_concept(b["c2"], dialect)
        pairs = {tuple(p) for p in b["relation"]}
        checks["model1"] = is_model(i1, o1)[0]
        checks["model2"] = is_model(i2, o2)[0]
        checks["point1_in_c1"] = d1 in eval_concept(i1, c1)
        checks["point2_in_c2"] = d2 in eval_concept(i2, c2)
        checks["relation_is_bisimulation"] = is_bisimulation(i1, i2, pairs, sigma, dialect)
        checks["points_related"] = (d1, d2) in pairs
    else:
        if not (args.i1 and args.i2 and args.d1 and args.d2):
            raise UsageError("bisim needs --bundle or all of --i1 --i2 --d1 --d2")
        sigma = Signature.parse(args.sigma)
        i1 = Interpretation.from_json(_json_file(args.i1))
        i2 = Interpretation.from_json(_json_file(args.i2))
        d1, d2 = args.d1, args.d2
        for d, i in ((d1, i1), (d2, i2)):
            if d not in i.domain:
                raise UsageError(f"element {d} is not in the domain")
    largest = largest_bisimulation(i1, i2, sigma, dialect)
    checks["bisimilar"] = (d1, d2) in largest
    fields = {"dialect": dialect.name, "sigma": sigma.to_json(),
              "verdict": {"checks": checks, "largest": largest.to_json()}}
    return all(checks.values()), fields


def cmd_interpolant(args, dialect):
    o1, o2 = _ontology(args.o1, dialect), _ontology(args.o2, dialect)
    c1, c2 = parse_concept(args.c1, dialect), parse_concept(args.c2, dialect)
    d = interpolant_exists(o1, c1, o2, c2, dialect, engine=args.engine,
                           order_seed=args.seed, **_budgets(args))
    return d.answer, _decision_fields(d, args)


def cmd_definition(args, dialect):
    o = _ontology(args.onto, dialect)
    c = parse_concept(args.concept, dialect)
    d = definition_exists(o, c, Signature.parse(args.sigma), dialect, engine=args.engine,
                          order_seed=args.seed, **_budgets(args))
    return d.answer, _decision_fields(d, args)


def cmd_referring(args, dialect):
    o = _ontology(args.onto, dialect)
    sigma = Signature.parse(args.sigma) if args.sigma is not None else None
    d = referring_expression_exists(o, args.individual, sigma, dialect, engine=args.engine,
                                    order_seed=args.seed, **_budgets(args))
    return d.answer, _decision_fields(d, args)


def cmd_nonprojective(args, dialect):
    o = _ontology(args.onto, dialect)
    d = nonprojective_definition_exists(o, args.name, dialect, route=args.route,
                                        engine=args.engine, **_budgets(args))
    return d.answer, _decision_fields(d, args)


def cmd_implicit(args, dialect):
    o = _ontology(args.onto, dialect)
    c = parse_concept(args.concept, dialect)
    d = implicitly_definable(o, c, Signature.parse(args.sigma), dialect, **_closure_budget(args))
    return d.answer, _decision_fields(d, args)


def cmd_oracle_joint(args, dialect):
    o1, o2 = _ontology(args.o1, dialect), _ontology(args.o2, dialect)
    c1, c2 = parse_concept(args.c1, dialect), parse_concept(args.c2, dialect)
    sigma = Signature.parse(args.sigma)
    budget = SearchBudget(max_domain=args.max_domain, max_seconds=args.max_seconds)
    r = bounded_joint_consistency(o1, c1, o2, c2, sigma, dialect, budget)
    fields = {"sigma": sigma.to_json(), "budget": dict(r.stats),
              "verdict": {"found": r.found, "exhausted": r.exhausted or None,
                          "sizes": list(r.sizes) if r.sizes else None}}
    if not r.found:
        raise _Budget(fields)
    if args.witness:
        _write_bundle(args.witness, r.witness, sigma, dialect, o1, c1, o2, c2)
        fields["witness"] = args.witness
    return True, fields


def cmd_oracle_enumdef(args, dialect):
    o = _ontology(args.onto, dialect)
    c = parse_concept(args.concept, dialect)
    sigma = Signature.parse(args.sigma)
    budget = SearchBudget(max_depth=args.depth, max_candidates=args.max_candidates,
                          max_seconds=args.max_seconds)
    r = enumerate_definitions(o, c, sigma, dialect, budget, max_size=args.max_size)
    fields = {"sigma": sigma.to_json(), "budget": {"tried": r.tried, **r.stats},
              "verdict": {"found": r.found, "exhausted": r.exhausted or None,
                          "definition": to_text(r.concept) if r.concept is not None else None}}
    if not r.found:
        raise _Budget(fields)
    return True, fields


HANDLERS = {
    "parse": cmd_parse, "sat": cmd_sat, "entails": cmd_entails, "bisim": cmd_bisim,
    "interpolant-exists": cmd_interpolant, "definition-exists": cmd_definition,
    "referring-exists": cmd_referring, "nonprojective-exists": cmd_nonprojective,
    "implicit": cmd_implicit, "oracle-joint": cmd_oracle_joint,
    "oracle-enumdef": cmd_oracle_enumdef,
}


# ---------------------------------------------------------------- reports


def run(argv=None) -> tuple:
    """Execute one command; returns ``(exit code, report, pretty)``.

    The report is None when argument parsing already printed its own message.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (EXIT_TRUE if e.code == 0 else EXIT_ERROR), None, False
    report = {"schema": SCHEMA_VERSION, "command": {"name": args.command, "args": _echo(args)}}
    start = time.perf_counter()
    fields: dict = {}
    try:
        dialect = _dialect(args)
        report["dialect"] = dialect.name
        answer, fields = HANDLERS[args.command](args, dialect)
        code = EXIT_TRUE if answer else EXIT_FALSE
    except _Budget as e:
        fields = e.args[0]
        code = EXIT_BUDGET
    except BudgetExceeded as e:
        fields = {"error": str(e)}
        code = EXIT_BUDGET
    except (ParseError, DialectError, UsageError, ValueError, KeyError) as e:
        fields = {"error": f"{type(e).__name__}: {e}"}
        code = EXIT_ERROR
    report.update(fields)
    report.setdefault("sigma", None)
    report["answer"] = {EXIT_TRUE: True, EXIT_FALSE: False}.get(code)
    report["exit"] = {"code": code, "class": EXIT_CLASS[code]}
    if not args.no_timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report, args.pretty


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']['name']}"]
    if "dialect" in report:
        lines.append(f"dialect: {report['dialect']}")
    sigma = report.get("sigma")
    if sigma:
        sig = Signature(sigma["concepts"], sigma["roles"], sigma["individuals"])
        lines.append(f"signature: {sig.to_text() or '(empty)'}")
    if "error" in report:
        lines.append(f"error: {report['error']}")
    verdict = report.get("verdict", {})
    for key in sorted(verdict):
        value = verdict[key]
        if isinstance(value, (dict, list)) and len(json.dumps(value)) > 100:
            lines.append(f"{key}: ({len(value)} entries, see JSON output)")
        else:
            lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
    if report.get("budget"):
        lines.append("counters: " + ", ".join(f"{k}={v}" for k, v in
                                              sorted(report["budget"].items())))
    if "witness" in report:
        lines.append(f"witness bundle: {report['witness']}")
    if "timing" in report:
        lines.append(f"time: {report['timing']['seconds']:.3f}s")
    lines.append(f"result: {report['exit']['class']} (exit {report['exit']['code']})")
    return "\n".join(lines)


def main(argv=None) -> int:
    code, report, pretty = run(argv)
    if report is None:
        return code
    if pretty:
        print(render_text(report))
    else:
        print(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
    return code


if __name__ == "__main__":
    sys.exit(main())
