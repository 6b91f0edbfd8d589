"""Command-line front end.

Subcommands: prove, refute, reduce, ci, recognize, corpus, secret-share,
check-dist.  Reports are canonical JSON by default (``--text`` for a
human-readable digest).  Exit codes:

    0  conclusive positive (proved / realized)
    1  conclusive negative (refuted / rejected)
    2  inconclusive or budget exhausted
    3  usage or input error

"Not proved" never claims invalidity: it means the search concluded
nothing at the configured generator set, schedule, and budgets.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .apps import corpus, fixture, secret_sharing_constraint
from .ci import CIStatement, build_delta, ci_prove, export_delta, falsify, parse_ci, to_clause
from .core import BooleanConstraint, Clause
from .parser import (ParseError, format_clause, format_constraint, parse_constraint,
                     parse_expr, scan_variables)
from .recognizer import CandidateRepr, check_candidate
from .reductions import (MaxReduction, Schedule, SlackReduction, TightReduction,
                         group_balance, max_to_linear, prepare_antecedents,
                         slack_reduction, tight_reduction)
from .refuter import Budget, refute_parallel
from .shannon import GeneratorSet, TIGHT, classify_tight, elemental, joint_slack, prove, verify

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


def parse_schedule(text: str) -> Schedule:
    """Parse 'p=1,2,4,8 qmax=64' style schedule strings."""
    p_values = (1, 2, 4, 8)
    q_max = 64
    for item in text.split():
        if item.startswith("p="):
            p_values = tuple(int(v) for v in item[2:].split(",") if v)
        elif item.startswith("qmax="):
            q_max = int(item[5:])
        else:
            raise ValueError(f"unknown schedule item {item!r}")
    return Schedule(p_values, q_max)


def load_generators(n: int, extra_files: list[str]) -> GeneratorSet:
    gens = elemental(n)
    for path in extra_files:
        text = Path(path).read_text()
        constraint = parse_constraint(text)
        if constraint.n != n:
            raise ValueError(f"extra generator file {path} has {constraint.n} variables, expected {n}")
        for i, clause in enumerate(constraint.clauses):
            if clause.antecedents or len(clause.consequents) != 1:
                raise ValueError(f"extra generators must be plain inequalities: {path}")
            name = Path(path).stem if len(constraint.clauses) == 1 else f"{Path(path).stem}#{i}"
            gens = gens.with_user(clause.consequents[0], name,
                                  f"user-supplied valid inequality from {path}")
    return gens


# ---------------------------------------------------------------------------
# Clause-level proving pipeline
# ---------------------------------------------------------------------------

@dataclass
class ClauseOutcome:
    status: str  # "proved" | "refuted" | "inconclusive"
    method: str
    detail: dict


def decide_clause(clause: Clause, gens: GeneratorSet, budget: Budget,
                  schedule: Schedule, lambda_max: int) -> ClauseOutcome:
    """Route one clause through the reduction toolbox.

    Unconditional single inequalities go straight to the generator-cone
    LP.  Max clauses race the multiplier search against refutation.
    Conditional clauses first try the direct multiplier reduction (sound
    in every regime), then the (p, q) schedule when every surviving
    antecedent is tight.
    """
    prep = prepare_antecedents(clause.antecedents, gens)
    if not prep.kept and len(clause.consequents) == 1:
        cert = prove(clause.consequents[0], gens)
        if cert is not None:
            return ClauseOutcome("proved", "generator-cone", {
                "certificate": cert.to_json(gens)})
        result = max_to_linear(Clause(clause.n, (), clause.consequents), gens, budget,
                               lambda_sum_max=0)
        if result.status == "invalid":
            return ClauseOutcome("refuted", "counterexample-search", {
                "counterexample": result.counterexample.to_json()})
        return ClauseOutcome("inconclusive", "generator-cone", {
            "note": "not provable at this generator set; no counterexample in budget"})
    if len(clause.consequents) > 1:
        result = max_to_linear(clause, gens, budget, lambda_sum_max=lambda_max)
        if result.status == "valid":
            return ClauseOutcome("proved", "max-to-linear", {
                "lambdas": [str(v) for v in result.lambdas],
                "certificate": result.certificate.to_json(gens)})
        if result.status == "invalid":
            return ClauseOutcome("refuted", "counterexample-search", {
                "counterexample": result.counterexample.to_json()})
        tight_outcome = _try_tight(clause, gens, schedule, prep)
        if tight_outcome is not None:
            return tight_outcome
        return ClauseOutcome("inconclusive", "max-to-linear", {
            "note": "lambda search and counterexample search both exhausted"})
    # conditional, single consequent
    cert = prove(clause.consequents[0], gens, antecedents=prep.kept,
                 minimize_antecedent_use=True)
    if cert is not None:
        witness = joint_slack(prep.kept, budget.max_support, budget.max_denominator)
        method = "slack-reduction" if witness is not None else "direct-lambda"
        detail = {"lambdas": [str(m) for m in cert.antecedent_multipliers],
                  "certificate": cert.to_json(gens)}
        if witness is not None:
            detail["slack_witness"] = witness.describe()
        return ClauseOutcome("proved", method, detail)
    tight_outcome = _try_tight(clause, gens, schedule, prep)
    if tight_outcome is not None:
        return tight_outcome
    result = refute_parallel(clause, budget)
    if result.found:
        return ClauseOutcome("refuted", "counterexample-search", {
            "counterexample": result.counterexample.to_json()})
    return ClauseOutcome("inconclusive", "conditional", {
        "note": "no multiplier reduction at this generator set; no counterexample in budget"})


def _try_tight(clause: Clause, gens: GeneratorSet, schedule: Schedule,
               prep) -> "ClauseOutcome | None":
    if not prep.kept:
        return None
    if not all(classify_tight(a, gens).verdict == TIGHT for a in prep.kept):
        return None
    reduction = tight_reduction(clause, gens, schedule)
    if reduction.proved:
        return ClauseOutcome("proved", "tight-schedule", {
            "consequent_index": reduction.consequent_index,
            "steps": [{"p": s.p, "q": s.q, "certificate": s.certificate.to_json(gens)}
                      for s in reduction.steps]})
    return None


def decide_constraint(constraint: BooleanConstraint, gens: GeneratorSet, budget: Budget,
                      schedule: Schedule, lambda_max: int) -> tuple[str, list[ClauseOutcome]]:
    outcomes = [decide_clause(c, gens, budget, schedule, lambda_max)
                for c in constraint.clauses]
    if any(o.status == "refuted" for o in outcomes):
        return "refuted", outcomes
    if all(o.status == "proved" for o in outcomes):
        return "proved", outcomes
    return "inconclusive", outcomes


# ---------------------------------------------------------------------------
# Reporting
# ---------------------------------------------------------------------------

def emit(report: dict, as_text: bool) -> None:
    if as_text:
        _emit_text(report)
    else:
        print(json.dumps(report, sort_keys=True, indent=2))


def _emit_text(report: dict, indent: int = 0) -> None:
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            print(f"{pad}{key}:")
            _emit_text(value, indent + 1)
        elif isinstance(value, list):
            print(f"{pad}{key}: {json.dumps(value)}")
        else:
            print(f"{pad}{key}: {value}")


_STATUS_EXIT = {"proved": EXIT_POSITIVE, "realized": EXIT_POSITIVE,
                "refuted": EXIT_NEGATIVE, "rejected": EXIT_NEGATIVE,
                "inconclusive": EXIT_INCONCLUSIVE}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_prove(args) -> int:
    constraint = parse_constraint(Path(args.file).read_text())
    gens = load_generators(constraint.n, args.extra_gens)
    schedule = parse_schedule(args.schedule)
    budget = Budget.parse(args.budget)
    status, outcomes = decide_constraint(constraint, gens, budget, schedule, args.lambda_max)
    report = {
        "command": "prove",
        "constraint": format_constraint(constraint),
        "status": status,
        "clauses": [{"clause": format_clause(c), "status": o.status,
                     "method": o.method, **o.detail}
                    for c, o in zip(constraint.clauses, outcomes)],
    }
    emit(report, args.text)
    return _STATUS_EXIT[status]


def cmd_refute(args) -> int:
    constraint = parse_constraint(Path(args.file).read_text())
    budget = Budget.parse(args.budget)
    result = refute_parallel(constraint, budget, workers=args.workers)
    report = {"command": "refute", "constraint": format_constraint(constraint),
              **result.to_json()}
    if result.found and args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        witness_path = out / ("counterexample." +
                              ("dist" if result.counterexample.distribution else "vs"))
        witness_path.write_text(result.counterexample.witness_file_text())
        report["witness_file"] = str(witness_path)
    emit(report, args.text)
    return EXIT_NEGATIVE if result.found else EXIT_INCONCLUSIVE


def cmd_reduce(args) -> int:
    constraint = parse_constraint(Path(args.file).read_text())
    gens = load_generators(constraint.n, args.extra_gens)
    budget = Budget.parse(args.budget)
    schedule = parse_schedule(args.schedule)
    reports = []
    exit_code = EXIT_POSITIVE
    for clause in constraint.clauses:
        if args.regime == "max" or (args.regime == "auto" and len(clause.consequents) > 1):
            result = max_to_linear(clause, gens, budget, lambda_sum_max=args.lambda_max)
            entry = {"regime": "max", "status": result.status,
                     "parameters": {"lambda_sum_max": args.lambda_max,
                                    "budget": budget.describe()}}
            if result.status == "valid":
                entry["lambdas"] = [str(v) for v in result.lambdas]
                entry["certificate"] = result.certificate.to_json(gens)
            elif result.status == "invalid":
                entry["counterexample"] = result.counterexample.to_json()
                exit_code = EXIT_NEGATIVE
            else:
                exit_code = max(exit_code, EXIT_INCONCLUSIVE)
        else:
            prep = prepare_antecedents(clause.antecedents, gens)
            slack = joint_slack(prep.kept, budget.max_support, budget.max_denominator)
            use_slack = args.regime == "slack" or (args.regime == "auto" and slack is not None)
            if use_slack:
                reduction = slack_reduction(clause, gens, budget.max_support,
                                            budget.max_denominator)
                entry = {"regime": "slack",
                         "status": "proved" if reduction.proved else "inconclusive",
                         "parameters": {"budget": budget.describe()}}
                if reduction.witness is not None:
                    entry["slack_witness"] = reduction.witness.describe()
                if reduction.proved:
                    entry["lambdas"] = [str(v) for v in reduction.lambdas]
                    entry["certificate"] = reduction.certificate.to_json(gens)
                else:
                    exit_code = max(exit_code, EXIT_INCONCLUSIVE)
            else:
                reduction = tight_reduction(clause, gens, schedule)
                entry = {"regime": "tight",
                         "status": "proved" if reduction.proved else "inconclusive",
                         "parameters": {"p_values": list(schedule.p_values),
                                        "q_max": schedule.q_max}}
                if reduction.proved:
                    entry["consequent_index"] = reduction.consequent_index
                    entry["steps"] = [{"p": s.p, "q": s.q,
                                       "certificate": s.certificate.to_json(gens)}
                                      for s in reduction.steps]
                else:
                    entry["failed_p"] = reduction.failed_p
                    exit_code = max(exit_code, EXIT_INCONCLUSIVE)
        entry["clause"] = format_clause(clause)
        reports.append(entry)
    emit({"command": "reduce", "clauses": reports}, args.text)
    return exit_code


def _ci_parts(args) -> tuple[list[CIStatement], CIStatement, int, list[str]]:
    names = args.vars.split()
    if not names:
        raise ValueError("--vars must list the variable names")
    antecedents = [parse_ci(a, names) for a in args.ante]
    consequent = parse_ci(args.cons, names)
    return antecedents, consequent, len(names), names


def cmd_ci(args) -> int:
    antecedents, consequent, n, names = _ci_parts(args)
    if args.verb == "prove":
        gens = load_generators(n, args.extra_gens)
        cert = ci_prove(antecedents, consequent, n, gens)
        status = "proved" if cert is not None else "inconclusive"
        report = {"command": "ci prove", "status": status,
                  "implication": " and ".join(a.label(tuple(names)) + " = 0" for a in antecedents)
                  + " => " + consequent.label(tuple(names)) + " = 0"}
        if cert is not None:
            report["certificate"] = cert.to_json(gens)
        emit(report, args.text)
        return _STATUS_EXIT[status]
    if args.verb == "falsify":
        result = falsify(antecedents, consequent, n,
                         max_domain=args.domain, max_denominator=args.denominator,
                         workers=args.workers)
        report = {"command": "ci falsify", **result.to_json()}
        emit(report, args.text)
        return EXIT_NEGATIVE if result.found else EXIT_INCONCLUSIVE
    system = build_delta(antecedents, consequent, n, args.domain)
    sys.stdout.write(export_delta(system))
    return EXIT_POSITIVE


def cmd_recognize(args) -> int:
    repr_ = CandidateRepr.from_file_text(Path(args.file).read_text())
    gens = load_generators(repr_.n, args.extra_gens)
    budget = Budget.parse(args.budget)
    result = check_candidate(repr_, gens, budget.max_support, budget.max_denominator)
    report = {"command": "recognize", **result.to_json()}
    emit(report, args.text)
    return _STATUS_EXIT[{"realized": "realized", "rejected": "rejected",
                         "inconclusive": "inconclusive"}[result.verdict]]


def cmd_corpus(args) -> int:
    if args.show:
        fx = fixture(args.show)
        emit({"command": "corpus", "name": fx.name, "file": str(fx.path),
              "expected_verdict": fx.expected_verdict, "notes": fx.notes,
              "source": fx.source, "parsed": format_constraint(fx.constraint)}, args.text)
        return EXIT_POSITIVE
    emit({"command": "corpus",
          "fixtures": [{"name": f.name, "expected_verdict": f.expected_verdict,
                        "file": f.path.name} for f in corpus()]}, args.text)
    return EXIT_POSITIVE


def cmd_secret_share(args) -> int:
    access = []
    for part in args.access.split(";"):
        part = part.strip()
        if part:
            access.append([int(v) for v in part.replace(",", " ").split()])
    # close upward for convenience; the library validates closedness
    universe = set(range(1, args.participants + 1))
    family = {frozenset(f) for f in access}
    closed = set(family)
    for f in family:
        _close_up(f, universe, closed)
    constraint = secret_sharing_constraint(args.participants, closed, Fraction(args.ratio))
    report = {"command": "secret-share",
              "participants": args.participants,
              "ratio": args.ratio,
              "access_structure": sorted(sorted(f) for f in closed),
              "constraint": format_constraint(constraint)}
    exit_code = EXIT_POSITIVE
    if args.prove:
        gens = elemental(constraint.n)
        schedule = parse_schedule(args.schedule)
        reduction = tight_reduction(constraint.clauses[0], gens, schedule)
        report["status"] = "proved" if reduction.proved else "inconclusive"
        if reduction.proved:
            report["consequent_index"] = reduction.consequent_index
            report["steps"] = [{"p": s.p, "q": s.q} for s in reduction.steps]
        exit_code = _STATUS_EXIT[report["status"]]
    emit(report, args.text)
    return exit_code


def _close_up(f: frozenset, universe: set, closed: set) -> None:
    for extra in universe - f:
        g = f | {extra}
        if g not in closed:
            closed.add(g)
            _close_up(g, universe, closed)


def cmd_check_dist(args) -> int:
    from .distributions import Distribution
    dist = Distribution.from_file_text(Path(args.file).read_text())
    h = dist.entropic_vector()
    names = None
    report = {"command": "check-dist", "n": dist.n,
              "entropies": {f"h({mask})": str(h.value(mask)) for mask in range(1, 1 << dist.n)}}
    exit_code = EXIT_POSITIVE
    if args.constraint:
        constraint = parse_constraint(Path(args.constraint).read_text())
        if constraint.n != dist.n:
            raise ValueError("constraint and distribution disagree on variable count")
        clause_reports = []
        all_hold = True
        for clause in constraint.clauses:
            ok = clause.holds(h)
            all_hold = all_hold and ok
            clause_reports.append({"clause": format_clause(clause), "holds": ok})
        report["clauses"] = clause_reports
        report["holds"] = all_hold
        exit_code = EXIT_POSITIVE if all_hold else EXIT_NEGATIVE
    emit(report, args.text)
    return exit_code


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infoineq",
        description="prove, refute, and transform Boolean constraints on entropic vectors")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, budget_default="s=2,D=4"):
        p.add_argument("--text", action="store_true", help="human-readable output")
        p.add_argument("--json", dest="text", action="store_false", help="JSON output (default)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized helpers")
        p.add_argument("--budget", default=budget_default,
                       help="search budget, e.g. s=3,D=6,vsdim=3,vsq=2,3")
        p.add_argument("--workers", type=int, default=1, help="parallel workers")

    p = sub.add_parser("prove", help="prove a constraint file")
    common(p)
    p.add_argument("--file", required=True)
    p.add_argument("--extra-gens", action="append", default=[],
                   help="file with additional trusted valid inequalities")
    p.add_argument("--schedule", default="p=1,2,4,8 qmax=64")
    p.add_argument("--lambda-max", type=int, default=8)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("refute", help="search for a counterexample")
    common(p)
    p.add_argument("--file", required=True)
    p.add_argument("--out", help="directory for the counterexample witness file")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("reduce", help="run a conditional/max reduction and report it")
    common(p)
    p.add_argument("--file", required=True)
    p.add_argument("--regime", choices=["auto", "tight", "slack", "max"], default="auto")
    p.add_argument("--extra-gens", action="append", default=[])
    p.add_argument("--schedule", default="p=1,2,4,8 qmax=64")
    p.add_argument("--lambda-max", type=int, default=8)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("ci", help="conditional-independence implication tools")
    common(p)
    p.add_argument("verb", choices=["prove", "falsify", "export"])
    p.add_argument("--vars", required=True, help="variable names, e.g. 'X Y Z'")
    p.add_argument("--ante", action="append", default=[],
                   help="antecedent statement 'Y;Z|X' (repeatable)")
    p.add_argument("--cons", required=True, help="consequent statement")
    p.add_argument("--extra-gens", action="append", default=[])
    p.add_argument("--domain", type=int, default=2, help="domain size per variable")
    p.add_argument("--denominator", type=int, default=4, help="probability denominator cap")
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("recognize", help="recognize a candidate vector file")
    common(p)
    p.add_argument("--file", required=True)
    p.add_argument("--extra-gens", action="append", default=[])
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("corpus", help="list or show bundled fixtures")
    common(p)
    p.add_argument("--show", help="fixture name to display")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("secret-share", help="emit the information-ratio constraint")
    common(p)
    p.add_argument("--participants", type=int, required=True)
    p.add_argument("--access", required=True,
                   help="qualified sets, e.g. '1,2;1,3' (closed upward automatically)")
    p.add_argument("--ratio", default="1", help="claimed information-ratio lower bound")
    p.add_argument("--prove", action="store_true", help="run the schedule prover")
    p.add_argument("--schedule", default="p=1,2,4,8 qmax=64")
    p.set_defaults(func=cmd_secret_share)

    p = sub.add_parser("check-dist", help="entropies of a distribution file")
    common(p)
    p.add_argument("--file", required=True)
    p.add_argument("--constraint", help="optional constraint file to evaluate")
    p.set_defaults(func=cmd_check_dist)
    return parser


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(json.dumps({"error": exc.message,
                          "line": exc.span.line, "column": exc.span.column}),
              file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, KeyError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
