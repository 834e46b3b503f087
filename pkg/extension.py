"""
Order-preserving K-Lipschitz extensions of partial functions.

Values are finite vectors (width m >= 1) compared coordinatewise, with the
sup-norm on differences. Because ||u||_inf <= c iff |u(t)| <= c for every t,
every bound below is computed per coordinate.

The constructive extension visits the points outside the domain one by one.
At each point x and coordinate t the admissible values form the interval

    [max{a_x(t), alpha_x(t)}, min{b_x(t), beta_x(t)}]

where a/b come from the domain points below/above x and alpha/beta are the
McShane/Whitney bounds. The chosen value joins the working domain before the
next point is visited.

oracle_solve is an independent check: it solves the same problem as a
difference-constraint system with all-pairs shortest paths.
"""

from dataclasses import dataclass, field
import logging
from typing import Optional, Sequence, Union

import numpy as np

from config import CONFIG, get_epsilon
from poset import IndexOutOfRange, LipextError, MetricPoset, PointSet

logger = logging.getLogger(__name__)

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"

SELECTORS = ("min", "max", "mid")
POINT_ORDERS = ("ascending", "descending")


class EmptyDomain(LipextError):
    pass


class NegativeK(LipextError):
    pass


class WidthMismatch(LipextError):
    pass


class PointInDomain(LipextError):
    pass


class InvertedRange(LipextError):
    pass


class FunctionValidationError(LipextError):
    """A partial function is not order-preserving and K-Lipschitz."""

    def __init__(self, report: dict):
        self.report = report
        super().__init__(
            f"Function invalid: {len(report['monotonicity'])} monotonicity and "
            f"{len(report['lipschitz'])} Lipschitz violation(s)"
        )


# =============================================================================
# Types
# =============================================================================

@dataclass(frozen=True)
class PartialFunction:
    """Values on the domain S, one row per domain point in sorted order."""

    domain: PointSet
    values: np.ndarray
    K: float = 1.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "K", float(self.K))

    @property
    def width(self) -> int:
        return self.values.shape[1] if self.values.ndim == 2 else 0

    def value_of(self, x: int) -> np.ndarray:
        return self.values[self.domain.members.index(x)]

    def scaled(self, factor: float) -> "PartialFunction":
        """factor * f, with the budget scaled along."""
        return PartialFunction(self.domain, self.values * factor, self.K * factor)


@dataclass(frozen=True)
class AdmissibleInterval:
    point: int
    coord: int
    a: float
    b: float
    alpha: float
    beta: float

    @property
    def lo(self) -> float:
        return max(self.a, self.alpha)

    @property
    def hi(self) -> float:
        return min(self.b, self.beta)

    def is_empty(self, eps: float | None = None) -> bool:
        return self.lo > self.hi + get_epsilon(eps)


@dataclass(frozen=True)
class ExtensionPolicy:
    """selector: min|max|mid. point_order: ascending|descending or a permutation."""

    selector: str = "min"
    point_order: Union[str, tuple[int, ...]] = "ascending"

    def __post_init__(self):
        if self.selector not in SELECTORS:
            raise LipextError(f"Unknown selector {self.selector!r}; expected one of {SELECTORS}")
        if isinstance(self.point_order, str):
            if self.point_order not in POINT_ORDERS:
                raise LipextError(
                    f"Unknown point order {self.point_order!r}; expected one of "
                    f"{POINT_ORDERS} or a permutation"
                )
        else:
            object.__setattr__(self, "point_order", tuple(int(i) for i in self.point_order))

    @classmethod
    def from_config(cls) -> "ExtensionPolicy":
        return cls(CONFIG["policy"], CONFIG["point_order"])

    def to_dict(self) -> dict:
        order = self.point_order if isinstance(self.point_order, str) else list(self.point_order)
        return {"selector": self.selector, "point_order": order}


@dataclass
class ExtensionOutcome:
    status: str
    values: np.ndarray
    infeasible_points: list[tuple[int, int]] = field(default_factory=list)
    policy_used: ExtensionPolicy = field(default_factory=ExtensionPolicy)
    permutation: tuple[int, ...] = ()
    intervals: list[AdmissibleInterval] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


@dataclass
class OracleResult:
    feasible: bool
    Fmin: np.ndarray
    Fmax: np.ndarray


# =============================================================================
# Validation
# =============================================================================

def _check_shape(poset: MetricPoset, f: PartialFunction) -> None:
    if len(f.domain) == 0:
        raise EmptyDomain("Partial function has an empty domain")
    if f.K < 0:
        raise NegativeK(f"Lipschitz budget must be nonnegative, got {f.K}")
    if f.values.ndim != 2 or f.values.shape[0] != len(f.domain) or f.width < 1:
        raise WidthMismatch(
            f"Expected {len(f.domain)} value rows of equal width, got shape {f.values.shape}"
        )
    for i in f.domain:
        if not 0 <= i < poset.n:
            raise IndexOutOfRange(f"Domain point {i} outside [0, {poset.n})")
    if not np.all(np.isfinite(f.values)):
        bad = sorted({f.domain.members[r] for r in np.argwhere(~np.isfinite(f.values))[:, 0]})
        raise LipextError(f"Function values must be finite; non-finite at point(s) {bad}")
    if not np.isfinite(f.K):
        raise LipextError(f"Lipschitz budget must be finite, got {f.K}")


def validate_input_function(poset: MetricPoset, f: PartialFunction,
                            eps: float | None = None) -> dict:
    """
    Report every monotonicity and Lipschitz violation of f on its domain.

    Returns {"valid", "monotonicity": [{"pair", "coord"}],
    "lipschitz": [{"pair", "coord", "ratio"}]}.
    """
    eps = get_epsilon(eps)
    _check_shape(poset, f)

    dom = list(f.domain)
    vals = f.values
    d = poset.dist[np.ix_(dom, dom)]
    geq = poset.geq[np.ix_(dom, dom)]

    monotonicity = []
    lipschitz = []
    for t in range(f.width):
        v = vals[:, t]
        diff = v[:, None] - v[None, :]

        for i, j in np.argwhere(geq & (diff < -eps)):
            monotonicity.append({"pair": [dom[i], dom[j]], "coord": t})

        too_steep = np.triu(np.abs(diff) > f.K * d + eps, k=1)
        for i, j in np.argwhere(too_steep):
            ratio = abs(diff[i, j]) / d[i, j] if d[i, j] > 0 else float("inf")
            lipschitz.append({"pair": [dom[i], dom[j]], "coord": t, "ratio": float(ratio)})

    return {
        "valid": not monotonicity and not lipschitz,
        "monotonicity": monotonicity,
        "lipschitz": lipschitz,
    }


def check_input_function(poset: MetricPoset, f: PartialFunction, eps: float | None = None) -> None:
    report = validate_input_function(poset, f, eps)
    if not report["valid"]:
        raise FunctionValidationError(report)


def lipschitz_constant(poset: MetricPoset, values: np.ndarray,
                       domain: Optional[PointSet] = None) -> float:
    """Smallest K with sup-norm |values(x) - values(y)| <= K d(x,y) on the domain."""
    dom = list(domain) if domain is not None else list(range(poset.n))
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if len(dom) < 2:
        return 0.0
    d = poset.dist[np.ix_(dom, dom)]
    gaps = np.abs(v[:, None, :] - v[None, :, :]).max(axis=2)
    mask = d > 0
    return float((gaps[mask] / d[mask]).max())


# =============================================================================
# Constructive extension
# =============================================================================

def _bounds(poset: MetricPoset, x: int, idx: np.ndarray, vals: np.ndarray, K: float):
    """Vectorized a, b, alpha, beta at point x against domain rows idx."""
    width = vals.shape[1]
    below = poset.geq[x, idx]
    above = poset.geq[idx, x]
    reach = K * poset.dist[x, idx][:, None]

    a = vals[below].max(axis=0) if below.any() else np.full(width, -np.inf)
    b = vals[above].min(axis=0) if above.any() else np.full(width, np.inf)
    alpha = (vals - reach).max(axis=0)
    beta = (vals + reach).min(axis=0)
    return a, b, alpha, beta


def admissible_interval(poset: MetricPoset, f: PartialFunction, x: int, t: int) -> AdmissibleInterval:
    """
    The interval of values at x (coordinate t) compatible with f.

    sup of an empty set is -inf and inf of an empty set is +inf. Using K*d
    directly equals applying the K=1 formulas to f/K and rescaling.
    """
    _check_shape(poset, f)
    x = poset.check_index(x)
    if x in f.domain:
        raise PointInDomain(f"Point {x} is already in the domain")
    if not 0 <= t < f.width:
        raise WidthMismatch(f"Coordinate {t} outside [0, {f.width})")

    idx = np.array(f.domain.members)
    a, b, alpha, beta = _bounds(poset, x, idx, f.values, f.K)
    return AdmissibleInterval(x, t, float(a[t]), float(b[t]), float(alpha[t]), float(beta[t]))


def _midpoint(lo: float, hi: float) -> float:
    if np.isinf(lo) and np.isinf(hi):
        return 0.0
    if np.isinf(lo):
        return hi - 1.0
    if np.isinf(hi):
        return lo + 1.0
    return (lo + hi) / 2.0


def _select(selector: str, lo: float, hi: float) -> float:
    if selector == "min" and np.isfinite(lo):
        return lo
    if selector == "max" and np.isfinite(hi):
        return hi
    return _midpoint(lo, hi)


def visiting_order(n: int, domain: PointSet, point_order) -> tuple[int, ...]:
    """Points of X minus the domain, in policy order."""
    outside = [i for i in range(n) if i not in domain]
    if point_order == "ascending":
        return tuple(outside)
    if point_order == "descending":
        return tuple(reversed(outside))

    perm = [int(i) for i in point_order if int(i) not in domain]
    if sorted(perm) != outside:
        raise LipextError(
            "Custom point order must list every point outside the domain exactly once"
        )
    return tuple(perm)


def extend(poset: MetricPoset, f: PartialFunction,
           policy: Optional[ExtensionPolicy] = None,
           eps: float | None = None) -> ExtensionOutcome:
    """
    Extend f to every point of the poset, one point at a time.

    Feasible iff every admissible interval met along the way is nonempty. An
    empty interval does not stop the run: the point gets the midpoint of
    [min(lo,hi), max(lo,hi)] and is reported in infeasible_points.
    """
    eps = get_epsilon(eps)
    policy = policy or ExtensionPolicy.from_config()
    check_input_function(poset, f, eps)

    n, width = poset.n, f.width
    table = np.zeros((n, width))
    assigned = np.zeros(n, dtype=bool)
    dom = list(f.domain)
    table[dom] = f.values
    assigned[dom] = True

    permutation = visiting_order(n, f.domain, policy.point_order)
    infeasible = []
    intervals = []

    for x in permutation:
        idx = np.flatnonzero(assigned)
        a, b, alpha, beta = _bounds(poset, x, idx, table[idx], f.K)
        for t in range(width):
            interval = AdmissibleInterval(x, t, float(a[t]), float(b[t]),
                                          float(alpha[t]), float(beta[t]))
            intervals.append(interval)
            lo, hi = interval.lo, interval.hi
            if interval.is_empty(eps):
                infeasible.append((x, t))
                table[x, t] = _midpoint(min(lo, hi), max(lo, hi))
                logger.debug(f"Empty interval at point {x} coord {t}: [{lo}, {hi}]")
            else:
                table[x, t] = _select(policy.selector, lo, hi)
        assigned[x] = True

    # Values on the domain are copied, never recomputed
    table[dom] = f.values

    status = INFEASIBLE if infeasible else FEASIBLE
    if infeasible:
        points = sorted({p for p, _ in infeasible})
        logger.info(f"Extension infeasible at {len(points)} point(s): {points}")
    else:
        logger.debug(f"Extended {len(permutation)} point(s) with {policy.selector} policy")

    return ExtensionOutcome(
        status=status,
        values=table,
        infeasible_points=infeasible,
        policy_used=policy,
        permutation=permutation,
        intervals=intervals,
    )


# =============================================================================
# Difference-constraint oracle
# =============================================================================

def constraint_distances(poset: MetricPoset, K: float) -> np.ndarray:
    """
    All-pairs shortest paths of the constraint graph.

    Arc u -> v with cost c encodes F(v) <= F(u) + c: cost K*d(u,v) for the
    Lipschitz bound, cost 0 when u ≽ v. All costs are nonnegative, so there
    are no negative cycles. sp[u, v] bounds F(v) - F(u) from above.
    """
    sp = K * np.array(poset.dist, dtype=float)
    sp[poset.geq] = 0.0
    for k in range(poset.n):
        sp = np.minimum(sp, sp[:, k][:, None] + sp[k, :][None, :])
    return sp


def lower_envelope(sp: np.ndarray, seeds: Sequence[int], seed_values: np.ndarray) -> np.ndarray:
    """F(x) = max_s g(s) - sp[x, s]: the least solution above the seeds."""
    cols = list(seeds)
    return (seed_values[None, :, :] - sp[:, cols][:, :, None]).max(axis=1)


def upper_envelope(sp: np.ndarray, seeds: Sequence[int], seed_values: np.ndarray) -> np.ndarray:
    """F(x) = min_s g(s) + sp[s, x]: the greatest solution below the seeds."""
    rows = list(seeds)
    return (seed_values[:, None, :] + sp[rows, :][:, :, None]).min(axis=0)


def oracle_solve(poset: MetricPoset, f: PartialFunction, eps: float | None = None) -> OracleResult:
    """
    Exact smallest and largest increasing K-Lipschitz extensions, if any.

    Feasible iff both envelopes reproduce f on its domain and Fmin <= Fmax.
    """
    eps = get_epsilon(eps)
    _check_shape(poset, f)

    sp = constraint_distances(poset, f.K)
    dom = list(f.domain)
    Fmin = lower_envelope(sp, dom, f.values)
    Fmax = upper_envelope(sp, dom, f.values)

    feasible = bool(
        np.all(np.abs(Fmin[dom] - f.values) <= eps)
        and np.all(np.abs(Fmax[dom] - f.values) <= eps)
        and np.all(Fmin <= Fmax + eps)
    )
    logger.debug(f"Oracle on {poset.n} points, |S|={len(dom)}: feasible={feasible}")
    return OracleResult(feasible, Fmin, Fmax)


def compare_with_oracle(outcome: ExtensionOutcome, oracle: OracleResult,
                        eps: float | None = None) -> list[str]:
    """
    Disagreements between a constructive outcome and the oracle.

    Checks feasibility agreement, the sandwich Fmin <= F <= Fmax, and exact
    agreement with Fmin/Fmax for the min/max selectors.
    """
    eps = get_epsilon(eps)
    problems = []
    if outcome.feasible != oracle.feasible:
        problems.append(
            f"status {outcome.status} but oracle feasible={oracle.feasible}"
        )
        return problems
    if not outcome.feasible:
        return problems

    F = outcome.values
    if np.any(F < oracle.Fmin - eps) or np.any(F > oracle.Fmax + eps):
        problems.append("extension leaves the oracle sandwich [Fmin, Fmax]")
    selector = outcome.policy_used.selector
    if selector == "min" and not np.allclose(F, oracle.Fmin, rtol=0, atol=eps):
        gap = float(np.abs(F - oracle.Fmin).max())
        problems.append(f"min extension differs from oracle Fmin by {gap}")
    if selector == "max" and not np.allclose(F, oracle.Fmax, rtol=0, atol=eps):
        gap = float(np.abs(F - oracle.Fmax).max())
        problems.append(f"max extension differs from oracle Fmax by {gap}")
    return problems


# =============================================================================
# Range clamping
# =============================================================================

def clamp_to_range(F: np.ndarray, m, M) -> np.ndarray:
    """G = max{min{F, M}, m}, pointwise. m and M may be scalars or per-coordinate."""
    m = np.asarray(m, dtype=float)
    M = np.asarray(M, dtype=float)
    if np.any(m > M):
        raise InvertedRange(f"Lower bound {m} exceeds upper bound {M}")
    return np.maximum(np.minimum(np.asarray(F, dtype=float), M), m)


def range_clamp_extension(outcome: ExtensionOutcome, f: PartialFunction) -> np.ndarray:
    """Clamp an extension into the per-coordinate range of f; F|_S is unchanged."""
    return clamp_to_range(outcome.values, f.values.min(axis=0), f.values.max(axis=0))
