#!/usr/bin/env python3
"""
lipext: monotone Lipschitz extensions on finite partially ordered metric spaces.

Subcommands:
    check        radial convexity and radiality of an instance
    extend       extend a partial function (constructive, optional oracle cross-check)
    represent    representing family of a radial order, or one strict monotone map
    remetrize    extension of a scalar function with no Lipschitz budget
    generate     write a generated instance (and optionally a random function)
    search-trees look for rooted trees whose path-metric poset is not radial

Exit codes: 0 success, 1 semantic negative (not radial, infeasible,
disagreement, failed certificate), 2 usage, I/O or validation error.
"""

import argparse
import json
import logging
import sys
from typing import Optional

import numpy as np

from config import CONFIG, load_config, reset_config
from extension import ExtensionPolicy, compare_with_oracle, extend, oracle_solve
from generators import (
    EXAMPLE1,
    EXAMPLE2,
    EXAMPLE3,
    EXAMPLE4,
    KINDS,
    GeneratorSpec,
    generate,
    random_function,
    search_nonradial_trees,
)
from instance_io import (
    function_to_dict,
    instance_to_dict,
    load_function,
    load_instance,
    load_spec,
    oracle_to_dict,
    outcome_to_dict,
    write_function_tsv,
    write_json,
)
from radiality import NotRadial, check_radiality
from representation import representing_family, strict_monotone_map, verify_representation
from uc_extension import extend_uniform

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

DEFAULT_SEED = 0


def parse_point_order(text: str):
    """"ascending", "descending", or a comma-separated permutation."""
    if text in ("ascending", "descending"):
        return text
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"point order must be ascending, descending or e.g. 2,0,1; got {text!r}"
        )


def parse_vertex(text: Optional[str]):
    """A tree vertex given on the command line: JSON if it parses, else the raw string."""
    if text is None:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def emit(result: dict, args, labels=None, table=None) -> None:
    """Write a result as JSON (or a TSV function table) to --output or stdout."""
    if CONFIG["format"] == "tsv" and table is not None:
        write_function_tsv(table, args.output, labels, stream=sys.stdout)
    else:
        if CONFIG["format"] == "tsv":
            logger.warning(f"{args.command} has no table to write as TSV; writing JSON")
        text = write_json(result, args.output)
        if not args.output:
            sys.stdout.write(text)

    if args.report:
        from report import generate_report
        generate_report(args.command, result, args.report)
        logger.info(f"Report: {args.report}")


# =============================================================================
# Subcommands
# =============================================================================

def cmd_check(args) -> int:
    poset = load_instance(args.instance)
    report = check_radiality(poset, limit=args.limit)
    result = {"instance": args.instance, "n": poset.n, **report.to_dict()}
    if poset.labels is not None:
        result["labels"] = list(poset.labels)
    emit(result, args)

    if report.radial:
        logger.info(f"{args.instance}: radial")
        return EXIT_OK
    logger.info(f"{args.instance}: not radial ({report.counts})")
    return EXIT_NEGATIVE


def cmd_extend(args) -> int:
    poset = load_instance(args.instance)
    f = load_function(args.function, poset.n)
    policy = ExtensionPolicy(
        args.policy or CONFIG["policy"],
        args.point_order or CONFIG["point_order"],
    )
    outcome = extend(poset, f, policy)
    result = outcome_to_dict(outcome, intervals=args.intervals)

    agree = True
    if args.oracle_check:
        oracle = oracle_solve(poset, f)
        problems = compare_with_oracle(outcome, oracle)
        agree = not problems
        result["oracle"] = {**oracle_to_dict(oracle), "agrees": agree, "problems": problems}
        for problem in problems:
            logger.error(f"Oracle disagreement: {problem}")

    emit(result, args, labels=poset.labels, table=outcome.values)
    return EXIT_OK if outcome.feasible and agree else EXIT_NEGATIVE


def cmd_represent(args) -> int:
    poset = load_instance(args.instance)
    try:
        family = representing_family(poset)
    except NotRadial as e:
        logger.error(str(e))
        return EXIT_NEGATIVE

    if args.strict:
        strict = strict_monotone_map(poset, normalized=args.normalized, family=family)
        result = strict.to_dict()
        emit(result, args, labels=poset.labels, table=strict.values)
        return EXIT_OK

    verified, failure = verify_representation(poset, family)
    result = {**family.to_dict(), "verified": verified, "failure": failure}
    emit(result, args, labels=poset.labels, table=family.as_matrix(poset.n).T)
    return EXIT_OK if verified else EXIT_NEGATIVE


def cmd_remetrize(args) -> int:
    poset = load_instance(args.instance)
    f = load_function(args.function, poset.n)
    try:
        run = extend_uniform(poset, f)
    except NotRadial as e:
        logger.error(str(e))
        return EXIT_NEGATIVE

    D = run.remetrized.dist if run.remetrized is not None else run.majorant(poset.dist)
    artifacts = {
        "omega": run.modulus.to_dict() if run.modulus is not None else None,
        "phi": run.majorant.to_dict(),
        "D": [[float(v) for v in row] for row in D],
        "F": outcome_to_dict(run.outcome),
        "certificate": run.certificate,
    }

    if args.output:
        for name, data in artifacts.items():
            if name == "F" and CONFIG["format"] == "tsv":
                write_function_tsv(run.outcome.values, f"{args.output}_F.tsv", poset.labels)
            else:
                write_json(data, f"{args.output}_{name}.json")
    else:
        sys.stdout.write(write_json(artifacts))

    if args.report:
        from report import generate_report
        generate_report(args.command, artifacts, args.report)

    ok = run.outcome.feasible and run.certificate["passed"]
    return EXIT_OK if ok else EXIT_NEGATIVE


def spec_from_args(args) -> tuple[GeneratorSpec, Optional[int]]:
    """Generator spec from --spec FILE or from the inline kind flags."""
    if args.spec:
        spec, seed = load_spec(args.spec)
        return spec, args.seed if args.seed is not None else seed
    if not args.kind:
        raise argparse.ArgumentTypeError("generate needs --spec FILE or a kind")

    kind = args.kind
    params = {}
    if kind == EXAMPLE1:
        params = {"a": args.a, "b": args.b}
    elif kind == EXAMPLE2:
        edges = json.loads(args.edges) if args.edges else []
        params = {"edges": edges, "root": parse_vertex(args.root), "variant": args.variant}
    elif kind == EXAMPLE3:
        params = {"A_points": args.a_points, "B_points": args.b_points, "theta": args.theta}
    elif kind == EXAMPLE4:
        params = {"samples": args.samples, "antichain_size": args.antichain_size}
    else:
        params = {"n": args.n}
        for key in ("density", "dim", "metric"):
            value = getattr(args, key)
            if value is not None:
                params[key] = value
    missing = [k for k, v in params.items() if v is None]
    if missing:
        raise argparse.ArgumentTypeError(f"{kind} needs --{', --'.join(m.replace('_', '-') for m in missing)}")
    return GeneratorSpec(kind, params), args.seed


def cmd_generate(args) -> int:
    spec, seed = spec_from_args(args)
    if seed is None:
        seed = DEFAULT_SEED
        logger.info(f"No --seed given; using {DEFAULT_SEED}")
    poset = generate(spec, seed)
    emit(instance_to_dict(poset), args)

    if args.function_output:
        rng = np.random.default_rng(seed)
        f = random_function(poset, rng, K=args.K, width=args.width,
                            domain_size=args.domain_size)
        write_json(function_to_dict(f), args.function_output)
    return EXIT_OK


def cmd_search_trees(args) -> int:
    findings = search_nonradial_trees(args.max_vertices)
    emit(findings, args)
    return EXIT_OK


# =============================================================================
# Entry point
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Monotone Lipschitz extensions on finite partially ordered metric spaces"
    )
    parser.add_argument(
        "--epsilon", type=float,
        help="Comparison tolerance (default: from config, 1e-9)"
    )
    parser.add_argument(
        "--format", choices=["json", "tsv"],
        help="Output format; tsv flattens function tables (default: json)"
    )
    parser.add_argument(
        "--output",
        help="Output file (remetrize: base name for the artifact files)"
    )
    parser.add_argument(
        "--report",
        help="Also write a Markdown summary to this file"
    )
    parser.add_argument(
        "--config", default="config.yaml",
        help="Path to config.yaml (default: config.yaml)"
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true",
        help="Enable verbose logging"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="Radial convexity and radiality scan")
    p.add_argument("instance", help="Instance JSON file")
    p.add_argument("--limit", type=int, help="Max violations listed (default: from config)")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("extend", help="Extend a partial function")
    p.add_argument("instance", help="Instance JSON file")
    p.add_argument("function", help="Partial function JSON file")
    p.add_argument("--policy", choices=["min", "max", "mid"], help="Value selector")
    p.add_argument("--point-order", type=parse_point_order,
                   help="ascending, descending or a comma-separated permutation")
    p.add_argument("--oracle-check", action="store_true",
                   help="Cross-check against the shortest-path oracle")
    p.add_argument("--intervals", action="store_true",
                   help="Include every admissible interval in the output")
    p.set_defaults(handler=cmd_extend)

    p = sub.add_parser("represent", help="Representing family or strict monotone map")
    p.add_argument("instance", help="Instance JSON file")
    p.add_argument("--strict", action="store_true", help="Output one strictly increasing map")
    p.add_argument("--normalized", action="store_true",
                   help="With --strict: normalize members first ((1/diam)-Lipschitz map)")
    p.set_defaults(handler=cmd_represent)

    p = sub.add_parser("remetrize", help="Extension through the concave modulus envelope")
    p.add_argument("instance", help="Instance JSON file")
    p.add_argument("function", help="Scalar partial function JSON file")
    p.set_defaults(handler=cmd_remetrize)

    p = sub.add_parser("generate", help="Write a generated instance")
    p.add_argument("kind", nargs="?", choices=KINDS, help="Generator kind (or use --spec)")
    p.add_argument("--spec", help="Generator spec JSON file")
    p.add_argument("--seed", type=int, help="Random seed (default: from --spec, else 0)")
    p.add_argument("--a", type=float, help="example1: a in (0, 1)")
    p.add_argument("--b", type=float, help="example1: b in (0, 1)")
    p.add_argument("--edges", help='example2: JSON edge list, e.g. [[0,1],[1,2]]')
    p.add_argument("--root", help="example2: root vertex as JSON, e.g. 0")
    p.add_argument("--variant", default="dT", choices=["dT", "rho"], help="example2 metric")
    p.add_argument("--a-points", type=float, nargs="+", help="example3: points of A")
    p.add_argument("--b-points", type=float, nargs="+", help="example3: points of B")
    p.add_argument("--theta", type=float, help="example3: cross-distance scale")
    p.add_argument("--samples", type=float, nargs="+", help="example4: interval samples")
    p.add_argument("--antichain-size", type=int, default=0, help="example4: size of J")
    p.add_argument("--n", type=int, default=6, help="random kinds: point count")
    p.add_argument("--density", type=float, help="random_discrete: edge probability")
    p.add_argument("--dim", type=int, help="random_euclidean: dimension")
    p.add_argument("--metric", choices=["line", "random"], help="random_loset: metric")
    p.add_argument("--function-output", help="Also write a random partial function here")
    p.add_argument("--K", type=float, default=1.0, help="Lipschitz budget of the random function")
    p.add_argument("--width", type=int, default=1, help="Value width of the random function")
    p.add_argument("--domain-size", type=int, help="Domain size of the random function")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("search-trees", help="Search small rooted trees for non-radial path metrics")
    p.add_argument("--max-vertices", type=int, default=7, help="Largest tree size (default: 7)")
    p.set_defaults(handler=cmd_search_trees)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        reset_config()
        load_config(args.config)
        if args.epsilon is not None:
            if args.epsilon <= 0:
                raise ValueError(f"epsilon must be positive, got {args.epsilon}")
            CONFIG["epsilon"] = args.epsilon
        if args.format:
            CONFIG["format"] = args.format

        return args.handler(args)

    except (ValueError, TypeError, KeyError, OSError, argparse.ArgumentTypeError) as e:
        kind = "Malformed JSON" if isinstance(e, json.JSONDecodeError) else type(e).__name__
        logger.error(f"{kind}: {e}")
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
