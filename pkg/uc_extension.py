"""
Monotone extension of scalar functions with no Lipschitz budget.

Pipeline:
    1. sample the modulus of continuity omega of f at every realized distance
    2. take the least nondecreasing concave majorant phi of omega (phi(0) = 0)
    3. remetrize: D = phi o d
    4. extend f with K = 1 in (X, D, ≽)

The result F satisfies |F(x) - F(y)| <= phi(d(x, y)) on every pair.
"""

from dataclasses import dataclass, field
import logging
from typing import Optional

import numpy as np

from config import get_epsilon
from extension import (
    FEASIBLE,
    ExtensionOutcome,
    ExtensionPolicy,
    PartialFunction,
    extend,
    visiting_order,
)
from poset import LipextError, MetricPoset, diameter, validate_metric
from radiality import require_radial

logger = logging.getLogger(__name__)


class TooFewPoints(LipextError):
    pass


class VectorNotSupported(LipextError):
    pass


class DegenerateMajorant(LipextError):
    pass


# =============================================================================
# Types
# =============================================================================

@dataclass
class ModulusSample:
    """omega[i] = max |f(x) - f(y)| over domain pairs with d(x, y) <= breakpoints[i]."""

    breakpoints: np.ndarray
    omega: np.ndarray

    def to_dict(self) -> dict:
        return {
            "breakpoints": [float(t) for t in self.breakpoints],
            "omega": [float(w) for w in self.omega],
        }


@dataclass
class ConcaveMajorant:
    """
    Piecewise-linear phi through sorted vertices (t, phi(t)), starting at (0, 0).

    Beyond the last vertex phi continues with its final slope.
    """

    vertices: np.ndarray
    degenerate: bool = False

    @property
    def knots(self) -> np.ndarray:
        return self.vertices[:, 0]

    @property
    def heights(self) -> np.ndarray:
        return self.vertices[:, 1]

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.heights) / np.diff(self.knots)

    @property
    def final_slope(self) -> float:
        slopes = self.slopes
        return float(slopes[-1]) if slopes.size else 0.0

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        inside = np.interp(t, self.knots, self.heights)
        beyond = self.heights[-1] + self.final_slope * (t - self.knots[-1])
        return np.where(t > self.knots[-1], beyond, inside)

    __call__ = evaluate

    def to_dict(self) -> dict:
        return {
            "vertices": [[float(t), float(p)] for t, p in self.vertices],
            "degenerate": self.degenerate,
        }


@dataclass
class UniformExtension:
    outcome: ExtensionOutcome
    majorant: ConcaveMajorant
    certificate: dict
    modulus: Optional[ModulusSample] = None
    remetrized: Optional[MetricPoset] = None
    constant: bool = field(default=False)


# =============================================================================
# Modulus and envelope
# =============================================================================

def _require_scalar(f: PartialFunction) -> None:
    if f.width != 1:
        raise VectorNotSupported(
            f"Uniform extension is scalar only, got width {f.width}"
        )


def modulus_of_continuity(poset: MetricPoset, f: PartialFunction) -> ModulusSample:
    """omega_f at 0 and at every distinct distance realized on X."""
    _require_scalar(f)
    if len(f.domain) < 2:
        raise TooFewPoints(f"Need at least two domain points, got {len(f.domain)}")

    d = poset.dist
    iu = np.triu_indices(poset.n, k=1)
    breakpoints = np.unique(np.concatenate([[0.0], d[iu]]))

    dom = list(f.domain)
    v = f.values[:, 0]
    pairs = np.triu_indices(len(dom), k=1)
    pair_dist = d[np.ix_(dom, dom)][pairs]
    pair_gap = np.abs(v[:, None] - v[None, :])[pairs]

    order = np.argsort(pair_dist, kind="stable")
    running = np.maximum.accumulate(pair_gap[order])
    reached = np.searchsorted(pair_dist[order], breakpoints, side="right")
    omega = np.where(reached > 0, running[np.maximum(reached - 1, 0)], 0.0)

    return ModulusSample(breakpoints, omega)


def concave_affine_envelope(ms: ModulusSample) -> ConcaveMajorant:
    """
    Upper concave hull of (0, 0) and every (t_i, omega_i).

    This is the pointwise infimum of the nondecreasing affine functions that
    dominate omega. omega is nondecreasing, so the hull is too. Collinear
    middle points are dropped.
    """
    ts = np.asarray(ms.breakpoints, dtype=float)
    ws = np.asarray(ms.omega, dtype=float)
    if ts.size == 0 or ts[0] != 0.0:
        ts = np.concatenate([[0.0], ts])
        ws = np.concatenate([[0.0], ws])
    ws = ws.copy()
    ws[0] = 0.0

    hull: list[tuple[float, float]] = []
    for point in zip(ts, ws):
        while len(hull) >= 2:
            (ox, oy), (bx, by) = hull[-2], hull[-1]
            cross = (bx - ox) * (point[1] - oy) - (by - oy) * (point[0] - ox)
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append((float(point[0]), float(point[1])))

    degenerate = bool(np.all(ws == 0))
    logger.debug(f"Envelope over {ts.size} breakpoint(s): {len(hull)} vertices")
    return ConcaveMajorant(np.array(hull, dtype=float), degenerate)


def affine_majorant(phi: ConcaveMajorant) -> tuple[float, float]:
    """(a, b) of the final envelope segment: omega(t) <= a t + b for all t >= 0."""
    a = phi.final_slope
    b = float(phi.heights[-1] - a * phi.knots[-1])
    return a, b


def large_distance_constant(phi: ConcaveMajorant, delta: float) -> float:
    """K_delta = a + b / delta bounds |f(x) - f(y)| / d(x, y) whenever d(x, y) >= delta."""
    if delta <= 0:
        raise LipextError(f"delta must be positive, got {delta}")
    a, b = affine_majorant(phi)
    return a + b / delta


def supporting_lines(phi: ConcaveMajorant) -> list[tuple[float, float]]:
    """
    For each vertex, (slope, intercept) of a nondecreasing affine h >= phi
    touching phi at that vertex. The outgoing segment's slope is used; the
    last vertex takes the final slope.
    """
    slopes = phi.slopes
    lines = []
    for i, (t, p) in enumerate(phi.vertices):
        s = float(slopes[i]) if i < slopes.size else phi.final_slope
        lines.append((s, float(p - s * t)))
    return lines


# =============================================================================
# Remetrization and extension
# =============================================================================

def remetrize(poset: MetricPoset, phi: ConcaveMajorant, eps: float | None = None) -> MetricPoset:
    """Same order and labels, distances D = phi(d)."""
    if phi.degenerate:
        raise DegenerateMajorant("A zero majorant does not give a metric")
    D = phi(poset.dist)
    np.fill_diagonal(D, 0.0)
    metric = validate_metric(D, eps)
    return MetricPoset(metric, poset.order, poset.labels)


def modulus_certificate(poset: MetricPoset, F, phi: ConcaveMajorant,
                        eps: float | None = None) -> dict:
    """Largest |F(x) - F(y)| - phi(d(x, y)) over all pairs, and whether it is <= eps."""
    eps = get_epsilon(eps)
    v = np.asarray(F, dtype=float).reshape(poset.n, -1)[:, 0]
    if poset.n < 2:
        return {"max_violation": 0.0, "argmax_pair": None, "passed": True}

    excess = np.abs(v[:, None] - v[None, :]) - phi(poset.dist)
    iu = np.triu_indices(poset.n, k=1)
    k = int(np.argmax(excess[iu]))
    worst = float(excess[iu][k])
    return {
        "max_violation": worst,
        "argmax_pair": [int(iu[0][k]), int(iu[1][k])],
        "passed": worst <= eps,
    }


def _constant_extension(poset: MetricPoset, f: PartialFunction,
                        policy: ExtensionPolicy) -> ExtensionOutcome:
    values = np.full((poset.n, 1), f.values[0, 0])
    values[list(f.domain)] = f.values
    return ExtensionOutcome(
        status=FEASIBLE,
        values=values,
        policy_used=policy,
        permutation=visiting_order(poset.n, f.domain, policy.point_order),
    )


def extend_uniform(poset: MetricPoset, f: PartialFunction,
                   policy: Optional[ExtensionPolicy] = None,
                   eps: float | None = None) -> UniformExtension:
    """
    Increasing extension of a scalar f with |F(x) - F(y)| <= phi(d(x, y)).

    f.K is ignored. A constant f is extended by the same constant.
    """
    eps = get_epsilon(eps)
    policy = policy or ExtensionPolicy.from_config()
    _require_scalar(f)
    require_radial(poset, eps)

    if np.ptp(f.values) == 0:
        modulus = modulus_of_continuity(poset, f) if len(f.domain) >= 2 else None
        top = diameter(poset.metric)
        knots = [[0.0, 0.0], [top, 0.0]] if top > 0 else [[0.0, 0.0]]
        phi = ConcaveMajorant(np.array(knots), degenerate=True)
        outcome = _constant_extension(poset, f, policy)
        logger.info("Constant function: skipping remetrization")
        return UniformExtension(
            outcome=outcome,
            majorant=phi,
            certificate=modulus_certificate(poset, outcome.values, phi, eps),
            modulus=modulus,
            constant=True,
        )

    modulus = modulus_of_continuity(poset, f)
    phi = concave_affine_envelope(modulus)
    remetrized = remetrize(poset, phi, eps)

    unit = PartialFunction(f.domain, f.values, K=1.0)
    outcome = extend(remetrized, unit, policy, eps)
    certificate = modulus_certificate(poset, outcome.values, phi, eps)
    logger.info(
        f"Uniform extension: {outcome.status}, envelope with {len(phi.vertices)} "
        f"vertices, certificate {'passed' if certificate['passed'] else 'FAILED'}"
    )
    return UniformExtension(
        outcome=outcome,
        majorant=phi,
        certificate=certificate,
        modulus=modulus,
        remetrized=remetrized,
    )
