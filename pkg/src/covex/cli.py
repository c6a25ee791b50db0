"""Command line front end.

Four commands:

* ``explain``: compute one explanation of a requested kind for one instance.
* ``enumerate``: list complete explanation sets, kind by kind.
* ``properties``: check the built-in and randomly generated scenarios
  against the documented property profile.
* ``bench``: growth measurements over a scenario family.

Exit codes: 0 success; 1 usage or other errors; 2 infeasible instance (it
violates a nogood, or a dataset kind was asked about an unsampled instance);
3 capacity budget exceeded; 4 unparsable input; 5 the observed property
profile diverges from the documented one.

Results go to stdout, diagnostics to stderr. For fixed inputs and budgets the
output of explain, enumerate and properties is byte-identical across runs;
bench reports wall-clock times and is exempt.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time

from .coverage import cov
from .datasets import D_KINDS, Dataset, DatasetEngine
from .errors import (
    CapacityError,
    ExplanationError,
    InfeasibleInstanceError,
    ParseError,
)
from .exact import KINDS as EXACT_KINDS
from .exact import ExactEngine, ExplanationResult
from .formats import (
    load_classifier,
    load_constraints,
    load_dataset,
    load_theory,
    parse_instance_spec,
    render_assignment,
    render_instance,
)
from .properties import EXPECTED_PROFILE, MATRIX_KINDS, PROPERTIES, compute_matrix
from .scenarios import (
    BUILTIN_SCENARIOS,
    builtin_scenario,
    majority_scenario,
    random_scenario,
)
from .theory import Budgets, Instance

ALL_KINDS = EXACT_KINDS + D_KINDS


class _Parser(argparse.ArgumentParser):
    """argparse with usage problems mapped to exit code 1 (2 is taken)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="covex", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    files = argparse.ArgumentParser(add_help=False)
    files.add_argument("--theory", required=True, help="theory JSON file")
    files.add_argument("--classifier", help="classifier JSON file")
    files.add_argument("--constraints", help="constraints JSON file")
    files.add_argument("--dataset", help="dataset CSV file")

    budgets = argparse.ArgumentParser(add_help=False)
    budgets.add_argument(
        "--budget-space",
        type=int,
        default=Budgets().space,
        help="largest instance space that may be enumerated",
    )
    budgets.add_argument(
        "--budget-subsets",
        type=int,
        default=Budgets().subsets,
        help="most literals whose subsets may be enumerated",
    )

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument(
        "--format", choices=("text", "json", "csv"), default="text", help="output format"
    )

    p = sub.add_parser(
        "explain",
        parents=[files, budgets, fmt],
        help="compute one explanation of one kind",
        description="Compute one explanation for an instance. Weak kinds "
        "(waxp, waxpc, d-waxp) return the instance's own literals, the only "
        "canonical answer that involves no minimization bias.",
    )
    p.add_argument("--instance", required=True, help="total assignment, e.g. f1=1,f2=0")
    p.add_argument("--kind", required=True, choices=ALL_KINDS)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser(
        "enumerate",
        parents=[files, budgets, fmt],
        help="list complete explanation sets",
    )
    p.add_argument("--instance", required=True, help="total assignment, e.g. f1=1,f2=0")
    p.add_argument(
        "--kind",
        choices=ALL_KINDS,
        help="one kind only (default: every kind the inputs support)",
    )
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser(
        "properties",
        parents=[budgets, fmt],
        help="check scenarios against the documented property profile",
    )
    p.add_argument(
        "--fixtures",
        default="all",
        help="comma-separated built-in scenario names, or 'all' (default)",
    )
    p.add_argument(
        "--random",
        type=int,
        default=50,
        metavar="N",
        help="number of random scenarios to add (default 50)",
    )
    p.add_argument("--seed", type=int, default=0, help="random scenario seed")
    p.set_defaults(func=cmd_properties)

    p = sub.add_parser(
        "bench",
        parents=[budgets, fmt],
        help="explanation growth measurements over a scenario family",
    )
    p.add_argument("--family", choices=("majority", "random"), default="majority")
    p.add_argument("--n", default="3..7", help="feature counts: '5', '3..7' or '3,5,7'")
    p.add_argument("--seed", type=int, default=0, help="seed for the random family")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"covex: parse error: {exc}", file=sys.stderr)
        return 4
    except InfeasibleInstanceError as exc:
        print(f"covex: infeasible instance: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"covex: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except ExplanationError as exc:
        print(f"covex: error: {exc}", file=sys.stderr)
        return 1


# ----------------------------------------------------------------------
# shared plumbing


def _budgets(args) -> Budgets:
    return Budgets(space=args.budget_space, subsets=args.budget_subsets)


def _load_inputs(args, budgets: Budgets):
    theory = load_theory(args.theory)
    constraints = (
        load_constraints(theory, args.constraints, budgets) if args.constraints else None
    )
    classifier = (
        load_classifier(theory, args.classifier, budgets) if args.classifier else None
    )
    dataset = (
        load_dataset(theory, args.dataset, constraints, classifier)
        if args.dataset
        else None
    )
    return theory, classifier, constraints, dataset


def _usage_error(message: str) -> int:
    print(f"covex: error: {message}", file=sys.stderr)
    return 1


def _result_dict(result: ExplanationResult, theory, class_token: str, x) -> dict:
    return {
        "kind": result.kind,
        "instance": render_instance(x),
        "class": class_token,
        "literals": [theory.render_literal(l) for l in result.assignment.literals],
        "coverage": result.coverage.size,
        "space": len(result.coverage.space),
        "oracle_calls": result.oracle_calls,
        "iterations": result.iterations,
    }


# ----------------------------------------------------------------------
# explain


def _explain_exact(engine: ExactEngine, kind: str, x) -> ExplanationResult:
    if kind == "waxp":
        a = x.as_assignment()
        return ExplanationResult("waxp", a, cov(a, engine.full_space), 0, 0)
    if kind == "axp":
        return engine.find_axp(x)
    if kind == "waxpc":
        engine.require_feasible(x)
        a = x.as_assignment()
        return ExplanationResult("waxpc", a, cov(a, engine.feasible_space), 0, 0)
    if kind == "axpc":
        return engine.find_axpc(x)
    if kind == "cpi":
        return engine.find_cpi_xp(x)
    if kind == "mcpi":
        found = engine.find_cpi_xp(x)
        minimal = engine.minimize_cpi(x, found.assignment)
        return ExplanationResult(
            "mcpi",
            minimal.assignment,
            minimal.coverage,
            found.oracle_calls + minimal.oracle_calls,
            found.iterations,
        )
    if kind == "pcpi":
        return engine.find_pcpi_xp(x)
    raise ExplanationError(f"unhandled kind {kind!r}")


def _explain_dataset(engine: DatasetEngine, kind: str, x) -> ExplanationResult:
    if kind == "d-waxp":
        engine.dataset.label_of(x)  # enforces membership
        a = x.as_assignment()
        return ExplanationResult("d-waxp", a, cov(a, engine.rows_space), 0, 0)
    if kind == "d-axp":
        return engine.find_d_axp(x)
    if kind == "d-cpi":
        return engine.find_d_cpi_xp(x)
    if kind == "d-mcpi":
        found = engine.find_d_cpi_xp(x)
        minimal = engine.minimize_d_cpi(x, found.assignment)
        return ExplanationResult(
            "d-mcpi",
            minimal.assignment,
            minimal.coverage,
            found.oracle_calls + minimal.oracle_calls,
            found.iterations,
        )
    if kind == "d-pcpi":
        return engine.find_d_pcpi(x)
    raise ExplanationError(f"unhandled kind {kind!r}")


def cmd_explain(args) -> int:
    budgets = _budgets(args)
    theory, classifier, constraints, dataset = _load_inputs(args, budgets)
    x = parse_instance_spec(theory, args.instance)
    if constraints is not None:
        ng = constraints.violated_nogood(x.as_assignment())
        if ng is not None:
            raise InfeasibleInstanceError(
                f"instance {x!r} violates nogood {ng!r}", nogood=ng
            )
    kind = args.kind
    if kind in D_KINDS:
        if dataset is None:
            return _usage_error(f"kind {kind} needs --dataset")
        engine = DatasetEngine(dataset, budgets)
        class_token = theory.classes[dataset.label_of(x)]
        result = _explain_dataset(engine, kind, x)
    else:
        if classifier is None:
            return _usage_error(f"kind {kind} needs --classifier")
        engine = ExactEngine(theory, classifier, constraints, budgets)
        class_token = theory.classes[engine.predict(x)]
        result = _explain_exact(engine, kind, x)

    if args.format == "json":
        print(json.dumps({"command": "explain", **_result_dict(result, theory, class_token, x)}, indent=2))
    elif args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["kind", "instance", "class", "literals", "coverage", "space", "oracle_calls", "iterations"]
        )
        d = _result_dict(result, theory, class_token, x)
        writer.writerow(
            [d["kind"], d["instance"], d["class"], ";".join(d["literals"]),
             d["coverage"], d["space"], d["oracle_calls"], d["iterations"]]
        )
        sys.stdout.write(out.getvalue())
    else:
        print(
            f"{render_assignment(result.assignment)} "
            f"coverage={result.coverage.size}/{len(result.coverage.space)} "
            f"oracle_calls={result.oracle_calls} iterations={result.iterations}"
        )
    return 0


# ----------------------------------------------------------------------
# enumerate


def cmd_enumerate(args) -> int:
    budgets = _budgets(args)
    theory, classifier, constraints, dataset = _load_inputs(args, budgets)
    x = parse_instance_spec(theory, args.instance)
    if constraints is not None:
        ng = constraints.violated_nogood(x.as_assignment())
        if ng is not None:
            raise InfeasibleInstanceError(
                f"instance {x!r} violates nogood {ng!r}", nogood=ng
            )
    if args.kind:
        kinds = [args.kind]
    else:
        kinds = list(EXACT_KINDS) if classifier is not None else []
        if dataset is not None:
            kinds.extend(D_KINDS)
    if not kinds:
        return _usage_error("no kinds to enumerate (give --classifier or --dataset)")

    exact_engine = None
    d_engine = None
    sections = []
    for kind in kinds:
        if kind in D_KINDS:
            if dataset is None:
                return _usage_error(f"kind {kind} needs --dataset")
            if d_engine is None:
                d_engine = DatasetEngine(dataset, budgets)
            explanations = d_engine.enumerate_all_d(kind, x)
            space = d_engine.rows_space
            class_token = theory.classes[dataset.label_of(x)]
        else:
            if classifier is None:
                return _usage_error(f"kind {kind} needs --classifier")
            if exact_engine is None:
                exact_engine = ExactEngine(theory, classifier, constraints, budgets)
            explanations = exact_engine.enumerate_all(kind, x)
            space = exact_engine.reference_space(kind)
            class_token = theory.classes[exact_engine.predict(x)]
        sections.append((kind, class_token, space, explanations))

    if args.format == "json":
        payload = {
            "command": "enumerate",
            "instance": render_instance(x),
            "kinds": {
                kind: {
                    "class": class_token,
                    "count": len(explanations),
                    "explanations": [
                        {
                            "literals": [theory.render_literal(l) for l in e.literals],
                            "coverage": cov(e, space).size,
                            "space": len(space),
                        }
                        for e in explanations
                    ],
                }
                for kind, class_token, space, explanations in sections
            },
        }
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["kind", "class", "literals", "coverage", "space"])
        for kind, class_token, space, explanations in sections:
            for e in explanations:
                writer.writerow(
                    [
                        kind,
                        class_token,
                        ";".join(theory.render_literal(l) for l in e.literals),
                        cov(e, space).size,
                        len(space),
                    ]
                )
        sys.stdout.write(out.getvalue())
    else:
        for kind, class_token, space, explanations in sections:
            print(f"{kind} ({len(explanations)}):")
            for e in explanations:
                print(
                    f"  {render_assignment(e)} coverage={cov(e, space).size}/{len(space)}"
                )
    return 0


# ----------------------------------------------------------------------
# properties


def cmd_properties(args) -> int:
    budgets = _budgets(args)
    if args.fixtures == "all":
        names = list(BUILTIN_SCENARIOS)
    else:
        names = [n.strip() for n in args.fixtures.split(",") if n.strip()]
    bundles = [builtin_scenario(name) for name in names]
    rng = random.Random(args.seed)
    for i in range(args.random):
        bundles.append(random_scenario(rng, name=f"random-{i:03d}"))
    matrix = compute_matrix(bundles, budgets)
    divergences = matrix.divergences()

    if args.format == "json":
        payload = {
            "command": "properties",
            "scenarios": len(bundles),
            "cells": {
                prop: {kind: matrix.cells[(prop, kind)] for kind in MATRIX_KINDS}
                for prop in PROPERTIES
            },
            "expected": {
                prop: {kind: EXPECTED_PROFILE[prop][kind] for kind in MATRIX_KINDS}
                for prop in PROPERTIES
            },
            "divergences": divergences,
            "matches": not divergences,
        }
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["property", "kind", "observed", "expected"])
        for prop in PROPERTIES:
            for kind in MATRIX_KINDS:
                writer.writerow(
                    [
                        prop,
                        kind,
                        "+" if matrix.cells[(prop, kind)] else "x",
                        "+" if EXPECTED_PROFILE[prop][kind] else "x",
                    ]
                )
        sys.stdout.write(out.getvalue())
    else:
        width = max(len(p) for p in PROPERTIES)
        header = "property".ljust(width) + "  " + "  ".join(MATRIX_KINDS)
        print(header)
        for prop in PROPERTIES:
            row = [prop.ljust(width)]
            for kind in MATRIX_KINDS:
                cell = "+" if matrix.cells[(prop, kind)] else "x"
                row.append(cell.center(len(kind)))
            print("  ".join(row).rstrip())
        if divergences:
            print(f"profile: MISMATCH ({len(bundles)} scenarios)")
            for line in divergences:
                print(f"  {line}")
        else:
            print(f"profile: MATCH ({len(bundles)} scenarios)")
    return 5 if divergences else 0


# ----------------------------------------------------------------------
# bench


def _parse_counts(spec: str) -> list[int]:
    spec = spec.strip()
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            counts = list(range(int(lo), int(hi) + 1))
        elif "," in spec:
            counts = [int(p) for p in spec.split(",")]
        else:
            counts = [int(spec)]
    except ValueError:
        raise ParseError(f"cannot parse feature counts {spec!r}", source="--n") from None
    if not counts or any(c < 2 for c in counts):
        raise ParseError(f"feature counts must be at least 2: {spec!r}", source="--n")
    return counts


def cmd_bench(args) -> int:
    budgets = _budgets(args)
    rng = random.Random(args.seed)
    rows = []
    for n in _parse_counts(args.n):
        if args.family == "majority":
            bundle = majority_scenario(n)
            engine = bundle.exact_engine(budgets)
            x = Instance(bundle.theory, [1] * n)  # the all-ones instance
        else:
            bundle = random_scenario(
                rng, name=f"random-n{n}", min_features=n, max_features=n,
                with_dataset=False,
            )
            engine = bundle.exact_engine(budgets)
            x = engine.feasible_space.instances[0]
        t0 = time.perf_counter()
        found = engine.find_cpi_xp(x)
        elapsed = time.perf_counter() - t0
        axpc_count = len(engine.enumerate_all("axpc", x))
        cpi_count = len(engine.enumerate_all("cpi", x))
        rows.append(
            {
                "family": args.family,
                "n": n,
                "seed": args.seed,
                "axpc_count": axpc_count,
                "cpi_count": cpi_count,
                "find_cpi_iterations": found.iterations,
                "runtime_seconds": f"{elapsed:.6f}",
            }
        )

    fields = ["family", "n", "seed", "axpc_count", "cpi_count", "find_cpi_iterations", "runtime_seconds"]
    if args.format == "json":
        print(json.dumps({"command": "bench", "rows": rows}, indent=2))
    elif args.format == "text":
        print("  ".join(fields))
        for row in rows:
            print("  ".join(str(row[f]) for f in fields))
    else:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([row[f] for f in fields])
        sys.stdout.write(out.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
