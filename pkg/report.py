#!/usr/bin/env python3
"""
Generate Markdown reports from lipext JSON results.

Usage:
    # CLI: generate report from JSON file
    python report.py check_result.json

    # Module: generate report from dict
    from report import generate_report
    generate_report("check", result_dict, "output.md")
"""

import argparse
import json
import os
import sys


def _num(value, digits: int = 6) -> str:
    if isinstance(value, str):
        return value
    if value is None:
        return "-"
    return f"{value:.{digits}g}"


def _verdict(flag: bool) -> str:
    return "yes" if flag else "**no**"


def _check_section(result: dict) -> str:
    counts = result.get("counts", {})
    labels = result.get("labels")

    def name(i):
        return labels[i] if labels else str(i)

    rows = []
    for w in result.get("violations", []):
        x, y, z = w["triple"]
        rows.append(
            f"| {w['kind']} | {name(x)}, {name(y)}, {name(z)} | {_num(w['lhs'])} | {_num(w['rhs'])} |"
        )
    table = "\n".join(rows) if rows else "| - | _(none)_ | | |"

    return f"""## Radiality

| Condition | Holds | Violations |
|-----------|-------|------------|
| Radially convex | {_verdict(result['radially_convex'])} | {counts.get('RC', 0)} |
| (d1) | {_verdict(result['d1'])} | {counts.get('D1', 0)} |
| (d2) | {_verdict(result['d2'])} | {counts.get('D2', 0)} |

Radial: {_verdict(result['radial'])} ({result.get('n', '?')} points)

## Violating Triples

| Kind | (x, y, z) | d(x,z) | Bound |
|------|-----------|--------|-------|
{table}
"""


def _function_rows(F: list) -> str:
    rows = []
    for i, row in enumerate(F):
        rows.append(f"| {i} | " + " | ".join(_num(v) for v in row) + " |")
    return "\n".join(rows)


def _extend_section(result: dict) -> str:
    F = result.get("F", [])
    width = len(F[0]) if F else 0
    header = "| Point | " + " | ".join(f"F{t}" for t in range(width)) + " |"
    rule = "|-------|" + "----|" * width
    policy = result.get("policy", {})
    infeasible = sorted({p for p, _ in result.get("infeasible_points", [])})

    md = f"""## Extension

- Status: **{result['status']}**
- Selector: {policy.get('selector', '?')}, point order: {policy.get('point_order', '?')}
- Infeasible points: {', '.join(map(str, infeasible)) if infeasible else '_(none)_'}

{header}
{rule}
{_function_rows(F)}
"""
    oracle = result.get("oracle")
    if oracle is not None:
        problems = oracle.get("problems", [])
        md += f"""
## Oracle Cross-check

- Oracle feasible: {_verdict(oracle['feasible'])}
- Agrees with extension: {_verdict(oracle['agrees'])}
"""
        for problem in problems:
            md += f"- ⚠ {problem}\n"
    return md


def _represent_section(result: dict) -> str:
    if "weights" in result:
        return f"""## Strict Monotone Map

- Members summed: {len(result['weights'])}
- Margin: {_num(result['margin'])}
- Smallest gap over strict pairs: {_num(result['min_gap'])}

| Point | G |
|-------|---|
{_function_rows([[v] for v in result['values']])}
"""
    tags = result.get("tags", [])
    return f"""## Representing Family

- Members: {len(tags)}
- Verified: {_verdict(result.get('verified', False))}
- Generating pairs: {', '.join(f'({x}, {y})' for x, y in tags) if tags else '_(none)_'}
"""


def _remetrize_section(result: dict) -> str:
    phi = result["phi"]
    cert = result["certificate"]
    vertices = "\n".join(f"| {_num(t)} | {_num(p)} |" for t, p in phi["vertices"])
    return f"""## Concave Majorant

Degenerate: {'yes' if phi['degenerate'] else 'no'}

| t | phi(t) |
|---|--------|
{vertices}

## Modulus Certificate

- Passed: {_verdict(cert['passed'])}
- Largest excess |F(x) - F(y)| - phi(d(x,y)): {_num(cert['max_violation'])}
- At pair: {cert['argmax_pair']}

{_extend_section(result['F'])}"""


SECTIONS = {
    "check": _check_section,
    "extend": _extend_section,
    "represent": _represent_section,
    "remetrize": _remetrize_section,
}


def infer_command(result: dict) -> str:
    """Guess the producing subcommand from the result's keys."""
    if "radial" in result and "violations" in result:
        return "check"
    if "phi" in result and "certificate" in result:
        return "remetrize"
    if "status" in result and "F" in result:
        return "extend"
    if "members" in result or "weights" in result:
        return "represent"
    raise ValueError("Cannot tell which command produced this result")


def generate_report(command: str, result: dict, md_file: str) -> None:
    """
    Generate a Markdown report from a result dict.

    Args:
        command: The subcommand that produced the result (check, extend, represent, remetrize)
        result: The result dict as written by lipext
        md_file: Output markdown file path
    """
    if command not in SECTIONS:
        raise ValueError(f"No report format for command '{command}'")

    md = f"""# lipext {command}

{SECTIONS[command](result)}"""

    with open(md_file, 'w') as f:
        f.write(md)


def main():
    parser = argparse.ArgumentParser(
        description="Generate Markdown report from lipext JSON results"
    )
    parser.add_argument(
        "json_file",
        help="Path to the JSON result file"
    )
    parser.add_argument(
        "-o", "--output",
        help="Output markdown file (default: same name with .md extension)"
    )
    parser.add_argument(
        "--command",
        choices=sorted(SECTIONS),
        help="Producing subcommand (inferred from the JSON if not provided)"
    )

    args = parser.parse_args()

    # Load JSON
    with open(args.json_file) as f:
        result = json.load(f)

    # Determine output file
    if args.output:
        md_file = args.output
    else:
        md_file = os.path.splitext(args.json_file)[0] + ".md"

    command = args.command or infer_command(result)
    generate_report(command, result, md_file)
    print(f"Report: {md_file}")

    return 0


if __name__ == "__main__":
    sys.exit(main())
