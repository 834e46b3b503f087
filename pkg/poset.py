"""
Finite metric spaces, partial orders and the metric posets built from them.

Points are indexed 0..n-1. Labels are cosmetic. Validated objects hold
read-only numpy arrays and are safe to share.
"""

from dataclasses import dataclass
import logging
from typing import Iterable, Optional, Sequence

import numpy as np

from config import get_epsilon

logger = logging.getLogger(__name__)


# =============================================================================
# Errors
# =============================================================================

class LipextError(ValueError):
    """Base class for every validation and precondition failure."""


class MetricValidationError(LipextError):
    """A distance matrix failed one or more metric axioms."""

    def __init__(self, violations: list[dict]):
        self.violations = violations
        kinds = sorted({v["kind"] for v in violations})
        super().__init__(
            f"{len(violations)} metric axiom violation(s): {', '.join(kinds)}"
        )


class OrderValidationError(LipextError):
    """A relation matrix is not a partial order."""

    def __init__(self, violations: list[dict]):
        self.violations = violations
        kinds = sorted({v["kind"] for v in violations})
        super().__init__(
            f"{len(violations)} order axiom violation(s): {', '.join(kinds)}"
        )


class IndexOutOfRange(LipextError):
    pass


class EmptySubset(LipextError):
    pass


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


# =============================================================================
# Types
# =============================================================================

@dataclass(frozen=True)
class FiniteMetric:
    dist: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.shape[0]


@dataclass(frozen=True)
class OrderRelation:
    """geq[i][j] means point i ≽ point j."""

    geq: np.ndarray

    @property
    def n(self) -> int:
        return self.geq.shape[0]


@dataclass(frozen=True)
class PointSet:
    """Sorted, duplicate-free point indices."""

    members: tuple[int, ...] = ()

    @classmethod
    def of(cls, indices: Iterable[int], n: Optional[int] = None) -> "PointSet":
        members = tuple(sorted({int(i) for i in indices}))
        if n is not None:
            for i in members:
                if i < 0 or i >= n:
                    raise IndexOutOfRange(f"Point index {i} outside [0, {n})")
        return cls(members)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "PointSet":
        return cls(tuple(int(i) for i in np.flatnonzero(mask)))

    def mask(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=bool)
        out[list(self.members)] = True
        return out

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i) -> bool:
        return i in self.members


@dataclass(frozen=True)
class MetricPoset:
    metric: FiniteMetric
    order: OrderRelation
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.metric.n != self.order.n:
            raise LipextError(
                f"Metric has {self.metric.n} points but order has {self.order.n}"
            )
        if self.labels is not None and len(self.labels) != self.metric.n:
            raise LipextError(
                f"Got {len(self.labels)} labels for {self.metric.n} points"
            )

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def dist(self) -> np.ndarray:
        return self.metric.dist

    @property
    def geq(self) -> np.ndarray:
        return self.order.geq

    def label(self, i: int) -> str:
        if self.labels is None:
            return str(i)
        return self.labels[i]

    def check_index(self, x: int) -> int:
        if not 0 <= x < self.n:
            raise IndexOutOfRange(f"Point index {x} outside [0, {self.n})")
        return int(x)


# =============================================================================
# Metric validation
# =============================================================================

def metric_violations(dist, eps: float | None = None) -> list[dict]:
    """
    List every metric axiom violation of a distance matrix.

    Each entry is {"kind": ..., "indices": [...]}. Triangle violations are
    reported as (i, k, j) with i < k: d(i,k) > d(i,j) + d(j,k) + eps.
    """
    eps = get_epsilon(eps)
    d = np.asarray(dist, dtype=float)

    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        return [{"kind": "non_square", "indices": list(d.shape)}]

    # NaN or infinite entries are reported alone
    bad = np.argwhere(~np.isfinite(d))
    if len(bad):
        return [{"kind": "non_finite", "indices": [int(i), int(j)]} for i, j in bad]

    n = d.shape[0]
    violations = []

    for i, j in np.argwhere(d < 0):
        violations.append({"kind": "negative_entry", "indices": [int(i), int(j)]})

    for i in np.flatnonzero(np.abs(np.diag(d)) > eps):
        violations.append({"kind": "nonzero_diagonal", "indices": [int(i)]})

    off_diagonal = ~np.eye(n, dtype=bool)
    for i, j in np.argwhere(off_diagonal & (d <= eps) & (d >= 0)):
        if i < j:
            violations.append({"kind": "zero_distance", "indices": [int(i), int(j)]})

    for i, j in np.argwhere(np.abs(d - d.T) > eps):
        if i < j:
            violations.append({"kind": "asymmetric", "indices": [int(i), int(j)]})

    triangles = []
    for j in range(n):
        via = d[:, j][:, None] + d[j, :][None, :]
        for i, k in np.argwhere(np.triu(d > via + eps, k=1)):
            triangles.append((int(i), int(k), j))
    for i, k, j in sorted(triangles):
        violations.append({"kind": "triangle_violation", "indices": [i, k, j]})

    return violations


def validate_metric(dist, eps: float | None = None) -> FiniteMetric:
    """Return a FiniteMetric or raise MetricValidationError listing every violation."""
    violations = metric_violations(dist, eps)
    if violations:
        logger.debug(f"Metric rejected: {violations[:5]}")
        raise MetricValidationError(violations)
    return FiniteMetric(_readonly(np.array(dist, dtype=float)))


def diameter(metric: FiniteMetric) -> float:
    if metric.n == 0:
        return 0.0
    return float(metric.dist.max())


# =============================================================================
# Order validation
# =============================================================================

def reflexive_transitive_closure(geq) -> np.ndarray:
    """Warshall closure of a boolean relation, with the diagonal set."""
    closed = np.array(geq, dtype=bool)
    np.fill_diagonal(closed, True)
    for k in range(closed.shape[0]):
        closed |= closed[:, k][:, None] & closed[k, :][None, :]
    return closed


def order_violations(geq) -> list[dict]:
    """List reflexivity, antisymmetry and transitivity failures of a relation."""
    g = np.asarray(geq, dtype=bool)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        return [{"kind": "non_square", "indices": list(g.shape)}]

    n = g.shape[0]
    violations = []

    for i in np.flatnonzero(~np.diag(g)):
        violations.append({"kind": "not_reflexive", "indices": [int(i)]})

    both = g & g.T & ~np.eye(n, dtype=bool)
    for i, j in np.argwhere(np.triu(both, k=1)):
        violations.append({"kind": "not_antisymmetric", "indices": [int(i), int(j)]})

    for j in range(n):
        chained = g[:, j][:, None] & g[j, :][None, :] & ~g
        for i, k in np.argwhere(chained):
            violations.append({"kind": "not_transitive", "indices": [int(i), j, int(k)]})

    return violations


def validate_order(geq, closure: bool = False) -> OrderRelation:
    """
    Return an OrderRelation or raise OrderValidationError.

    With closure=True the reflexive-transitive closure is taken first, so only
    antisymmetry can still fail.
    """
    g = np.array(geq, dtype=bool)
    if closure and g.ndim == 2 and g.shape[0] == g.shape[1]:
        g = reflexive_transitive_closure(g)
    violations = order_violations(g)
    if violations:
        logger.debug(f"Order rejected: {violations[:5]}")
        raise OrderValidationError(violations)
    return OrderRelation(_readonly(g))


def order_from_pairs(n: int, pairs: Sequence[Sequence[int]], closure: bool = True) -> OrderRelation:
    """Build an order from "i ≽ j" pairs (e.g. Hasse covering pairs)."""
    g = np.eye(n, dtype=bool)
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"Order pair ({i}, {j}) outside [0, {n})")
        g[i, j] = True
    return validate_order(g, closure=closure)


def make_poset(dist, geq, labels: Optional[Sequence[str]] = None,
               eps: float | None = None, closure: bool = False) -> MetricPoset:
    """Validate both structures and assemble a MetricPoset."""
    metric = validate_metric(dist, eps)
    order = validate_order(geq, closure=closure)
    return MetricPoset(metric, order, tuple(labels) if labels is not None else None)


# =============================================================================
# Derived relations
# =============================================================================

def bullet_relation(order: OrderRelation) -> np.ndarray:
    """x ≽• y iff not y ≽ x. Irreflexive for any partial order."""
    return ~order.geq.T


def strict_relation(order: OrderRelation) -> np.ndarray:
    """x ≻ y iff x ≽ y and not y ≽ x."""
    return order.geq & ~order.geq.T


def is_total(order: OrderRelation) -> bool:
    return bool(np.all(order.geq | order.geq.T))


def principal_sets(poset: MetricPoset, x: int) -> tuple[PointSet, PointSet]:
    """Return (x↓, x↑); both contain x."""
    x = poset.check_index(x)
    down = PointSet.from_mask(poset.geq[x, :])
    up = PointSet.from_mask(poset.geq[:, x])
    return down, up


def monotone_closure(poset: MetricPoset, S: PointSet, direction: str = "down") -> PointSet:
    """Union of principal down-sets (direction="down") or up-sets ("up") over S."""
    if direction not in ("down", "up"):
        raise LipextError(f"direction must be 'down' or 'up', got {direction!r}")
    members = list(S)
    if not members:
        return PointSet()
    if direction == "down":
        mask = poset.geq[members, :].any(axis=0)
    else:
        mask = poset.geq[:, members].any(axis=1)
    return PointSet.from_mask(mask)


def restrict(poset: MetricPoset, S: PointSet) -> MetricPoset:
    """Sub-poset on S with the induced metric and order."""
    members = list(S)
    if not members:
        raise EmptySubset("Cannot restrict a poset to an empty subset")
    for i in members:
        poset.check_index(i)
    idx = np.ix_(members, members)
    labels = None
    if poset.labels is not None:
        labels = tuple(poset.labels[i] for i in members)
    return MetricPoset(
        FiniteMetric(_readonly(poset.dist[idx].copy())),
        OrderRelation(_readonly(poset.geq[idx].copy())),
        labels,
    )
