"""
File formats for instances, partial functions, generator specs and results.

Instance JSON:
    {"labels": [...], "dist": [[...]], "order": {"pairs": [[i, j], ...], "closure": true}}
    "pairs" lists i ≽ j assertions (Hasse pairs are enough with closure on).

Function JSON:
    {"domain": [i, ...], "values": [[...], ...] or [...], "K": 1.0}

Infinite numbers are written as the strings "+inf" / "-inf" so files stay
strict JSON.
"""

import csv
import json
import logging
import math
from typing import Any, Optional

import numpy as np

from config import CONFIG, get_epsilon
from extension import (
    AdmissibleInterval,
    ExtensionOutcome,
    OracleResult,
    PartialFunction,
    WidthMismatch,
)
from generators import GeneratorSpec
from poset import LipextError, MetricPoset, PointSet, make_poset, strict_relation

logger = logging.getLogger(__name__)


def encode_number(x: float):
    x = float(x)
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


def decode_number(x) -> float:
    if isinstance(x, str):
        if x in ("+inf", "inf"):
            return math.inf
        if x == "-inf":
            return -math.inf
        raise LipextError(f"Unrecognized number {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float, np.number)):
        raise LipextError(f"Expected a number, got {x!r}")
    return float(x)


def _table(values) -> list:
    return [[encode_number(v) for v in row] for row in np.atleast_2d(values)]


def read_json(path: str) -> Any:
    with open(path) as f:
        return json.load(f)


def write_json(data: Any, path: Optional[str] = None, indent: Optional[int] = None) -> str:
    """Serialize with a trailing newline; write to path when given. Returns the text."""
    indent = CONFIG["indent"] if indent is None else indent
    text = json.dumps(data, indent=indent) + "\n"
    if path:
        with open(path, "w") as f:
            f.write(text)
        logger.info(f"Wrote {path}")
    return text


# =============================================================================
# Instances
# =============================================================================

def hasse_pairs(poset: MetricPoset) -> list[list[int]]:
    """Covering pairs of the order: x ≻ y with nothing strictly between."""
    strict = strict_relation(poset.order)
    between = (strict.astype(int) @ strict.astype(int)) > 0
    return [[int(i), int(j)] for i, j in np.argwhere(strict & ~between)]


def instance_to_dict(poset: MetricPoset) -> dict:
    data = {}
    if poset.labels is not None:
        data["labels"] = list(poset.labels)
    data["dist"] = [[float(v) for v in row] for row in poset.dist]
    data["order"] = {"pairs": hasse_pairs(poset), "closure": True}
    return data


def _is_index(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _require_object(data, what: str, keys: tuple[str, ...]) -> None:
    if not isinstance(data, dict):
        raise LipextError(f"{what} JSON must be an object, got {type(data).__name__}")
    missing = [k for k in keys if k not in data]
    if missing:
        raise LipextError(f"{what} JSON is missing {missing}")


def instance_from_dict(data: dict, eps: float | None = None) -> MetricPoset:
    """Also accepts "order": {"geq": [[...]]} with a full boolean matrix."""
    _require_object(data, "Instance", ("dist",))
    if not isinstance(data["dist"], list):
        raise LipextError("Instance \"dist\" must be a list of rows")
    dist = np.asarray(data["dist"], dtype=float)
    n = dist.shape[0] if dist.ndim == 2 else 0
    order = data.get("order", {})
    if not isinstance(order, dict):
        raise LipextError("Instance \"order\" must be an object")

    if "geq" in order:
        if not isinstance(order["geq"], list):
            raise LipextError("Instance \"order.geq\" must be a list of rows")
        geq = np.asarray(order["geq"], dtype=bool)
    else:
        geq = np.eye(n, dtype=bool)
        for pair in order.get("pairs", []):
            if not (isinstance(pair, list) and len(pair) == 2 and all(map(_is_index, pair))):
                raise LipextError(f"Order pair {pair!r} must be two integer indices")
            i, j = pair
            if not (0 <= i < n and 0 <= j < n):
                raise LipextError(f"Order pair ({i}, {j}) outside [0, {n})")
            geq[i, j] = True
    closure = bool(order.get("closure", True))
    return make_poset(dist, geq, data.get("labels"), eps=get_epsilon(eps), closure=closure)


def load_instance(path: str, eps: float | None = None) -> MetricPoset:
    poset = instance_from_dict(read_json(path), eps)
    logger.debug(f"Loaded {poset.n}-point instance from {path}")
    return poset


# =============================================================================
# Functions
# =============================================================================

def function_to_dict(f: PartialFunction) -> dict:
    return {
        "domain": list(f.domain),
        "values": _table(f.values),
        "K": f.K,
    }


def function_from_dict(data: dict, n: Optional[int] = None) -> PartialFunction:
    """Rows follow the listed domain order; they are re-sorted to match PointSet."""
    _require_object(data, "Function", ("domain", "values"))
    if not (isinstance(data["domain"], list) and all(map(_is_index, data["domain"]))):
        raise LipextError("Function \"domain\" must be a list of integer indices")
    if not isinstance(data["values"], list):
        raise LipextError("Function \"values\" must be a list of rows")
    domain = list(data["domain"])
    if len(set(domain)) != len(domain):
        raise LipextError(f"Repeated points in function domain {domain}")
    rows = [np.array([decode_number(v) for v in (row if isinstance(row, list) else [row])])
            for row in data["values"]]
    if len(rows) != len(domain):
        raise LipextError(f"{len(domain)} domain points but {len(rows)} value rows")
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise WidthMismatch(f"Value rows have different widths: {sorted(widths)}")

    S = PointSet.of(domain, n)
    by_point = dict(zip(domain, rows))
    values = np.vstack([by_point[i] for i in S]) if rows else np.zeros((0, 1))
    return PartialFunction(S, values, float(data.get("K", 1.0)))


def load_function(path: str, n: Optional[int] = None) -> PartialFunction:
    return function_from_dict(read_json(path), n)


# =============================================================================
# Results
# =============================================================================

def interval_to_dict(interval: AdmissibleInterval) -> dict:
    return {
        "point": interval.point,
        "coord": interval.coord,
        "a": encode_number(interval.a),
        "b": encode_number(interval.b),
        "alpha": encode_number(interval.alpha),
        "beta": encode_number(interval.beta),
        "lo": encode_number(interval.lo),
        "hi": encode_number(interval.hi),
    }


def outcome_to_dict(outcome: ExtensionOutcome, intervals: bool = False) -> dict:
    data = {
        "status": outcome.status,
        "F": _table(outcome.values),
        "infeasible_points": [[int(p), int(t)] for p, t in outcome.infeasible_points],
        "policy": outcome.policy_used.to_dict(),
        "permutation": [int(i) for i in outcome.permutation],
    }
    if intervals:
        data["intervals"] = [interval_to_dict(iv) for iv in outcome.intervals]
    return data


def oracle_to_dict(oracle: OracleResult) -> dict:
    return {
        "feasible": oracle.feasible,
        "Fmin": _table(oracle.Fmin),
        "Fmax": _table(oracle.Fmax),
    }


# =============================================================================
# Generator specs
# =============================================================================

def spec_from_dict(data: dict) -> tuple[GeneratorSpec, Optional[int]]:
    """{"kind", "params", "seed"}; nested instances under params A/B are parsed."""
    params = dict(data.get("params", {}))
    for key in ("A", "B"):
        if isinstance(params.get(key), dict):
            params[key] = instance_from_dict(params[key])
    seed = data.get("seed")
    return GeneratorSpec(data["kind"], params), (int(seed) if seed is not None else None)


def load_spec(path: str) -> tuple[GeneratorSpec, Optional[int]]:
    return spec_from_dict(read_json(path))


# =============================================================================
# TSV
# =============================================================================

def write_function_tsv(values, path: Optional[str] = None,
                       labels: Optional[list] = None, stream=None) -> None:
    """One row per point: index, label, then one column per coordinate."""
    table = np.asarray(values, dtype=float)
    if table.ndim == 1:
        table = table[:, None]

    def emit(handle):
        writer = csv.writer(handle, delimiter="\t", lineterminator="\n")
        writer.writerow(["point", "label"] + [f"v{t}" for t in range(table.shape[1])])
        for i, row in enumerate(table):
            label = labels[i] if labels is not None else str(i)
            writer.writerow([i, label] + [encode_number(v) for v in row])

    if path:
        with open(path, "w", newline="") as f:
            emit(f)
        logger.info(f"Wrote {path}")
    else:
        emit(stream)
