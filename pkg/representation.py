"""
Families of increasing 1-Lipschitz functions that represent a radial order.

For every pair x ≽• y the two-point function f(x) = d(x,y), f(y) = 0 is
extended with the min policy; the resulting family F satisfies

    x ≽ y  iff  F(x) >= F(y) for every F in the family.

A geometric sum of the members gives a single strictly increasing map.
"""

from dataclasses import dataclass, field
import logging
from typing import Optional

import numpy as np

from config import get_epsilon
from extension import ExtensionPolicy, PartialFunction, extend
from poset import LipextError, MetricPoset, PointSet, bullet_relation, diameter, strict_relation
from radiality import NotRadial, require_radial

logger = logging.getLogger(__name__)


class DegenerateDiameter(LipextError):
    pass


@dataclass
class FunctionFamily:
    """members[k] is a total function (n-vector); tags[k] its generating pair."""

    members: list[np.ndarray] = field(default_factory=list)
    tags: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)

    def as_matrix(self, n: int) -> np.ndarray:
        if not self.members:
            return np.zeros((0, n))
        return np.vstack(self.members)

    def to_dict(self) -> dict:
        return {
            "members": [[float(v) for v in m] for m in self.members],
            "tags": [list(t) for t in self.tags],
        }


@dataclass
class StrictMap:
    values: np.ndarray
    weights: np.ndarray
    margin: float
    min_gap: Optional[float]

    def to_dict(self) -> dict:
        return {
            "values": [float(v) for v in self.values],
            "weights": [float(w) for w in self.weights],
            "margin": self.margin,
            "min_gap": self.min_gap,
        }


def representing_family(poset: MetricPoset, eps: float | None = None) -> FunctionFamily:
    """One min-policy extension per ordered pair x ≽• y, lexicographic in (x, y)."""
    eps = get_epsilon(eps)
    require_radial(poset, eps)

    bullet = bullet_relation(poset.order)
    policy = ExtensionPolicy("min", "ascending")
    family = FunctionFamily()

    for x, y in np.argwhere(bullet):
        x, y = int(x), int(y)
        f = PartialFunction(PointSet.of([x, y]),
                            np.array([[poset.dist[x, y]] if i == x else [0.0]
                                      for i in sorted((x, y))]),
                            K=1.0)
        outcome = extend(poset, f, policy, eps)
        if not outcome.feasible:
            # Cannot happen on a radial poset
            raise NotRadial(f"Pair ({x}, {y}) could not be extended")
        family.members.append(outcome.values[:, 0].copy())
        family.tags.append((x, y))

    logger.info(f"Built representing family of {len(family)} member(s) on {poset.n} points")
    return family


def verify_representation(poset: MetricPoset, fam: FunctionFamily,
                          eps: float | None = None) -> tuple[bool, Optional[dict]]:
    """
    Check x ≽ y  iff  every member has F(x) >= F(y) - eps, for all pairs.

    On failure returns the first offending pair and which way it fails:
    "missed" (x ≽ y but a member decreases) or "wrongly_comparable"
    (the family says x ≽ y but the order does not).
    """
    eps = get_epsilon(eps)
    M = fam.as_matrix(poset.n)
    if len(M):
        weakly_above = np.all(M[:, :, None] >= M[:, None, :] - eps, axis=0)
    else:
        weakly_above = np.ones((poset.n, poset.n), dtype=bool)

    mismatch = weakly_above != poset.geq
    if not mismatch.any():
        return True, None

    x, y = (int(i) for i in np.argwhere(mismatch)[0])
    direction = "missed" if poset.geq[x, y] else "wrongly_comparable"
    return False, {"pair": [x, y], "direction": direction}


def normalize_family(poset: MetricPoset, fam: FunctionFamily, e: int = 0,
                     rescale: bool = True) -> FunctionFamily:
    """
    G = (F - F(e)) / diam(X) for each member, then H = diam(X) * G.

    rescale=False returns G itself (sup-norm <= 1, (1/diam)-Lipschitz);
    the default returns H (sup-norm <= diam, 1-Lipschitz).
    """
    e = poset.check_index(e)
    K = diameter(poset.metric)
    if poset.n < 2 or K <= 0:
        raise DegenerateDiameter("Normalization needs at least two points")

    out = FunctionFamily()
    for member, tag in zip(fam.members, fam.tags):
        G = (member - member[e]) / K
        out.members.append(K * G if rescale else G)
        out.tags.append(tag)
    return out


def strict_monotone_map(poset: MetricPoset, eps: float | None = None,
                        normalized: bool = False,
                        family: Optional[FunctionFamily] = None) -> StrictMap:
    """
    G = sum_k 2^-k F_k over the representing family, k = 1..N.

    G is 1-Lipschitz and G(x) > G(y) whenever x ≻ y. With normalized=True the
    members are normalized first and the sum is divided by diam(X), so G is
    (1/diam)-Lipschitz with sup-norm at most 1.

    margin is 2^-N times the smallest positive member gap over strict pairs;
    min_gap is the smallest realized G(x) - G(y) over strict pairs.
    """
    eps = get_epsilon(eps)
    fam = family if family is not None else representing_family(poset, eps)
    if normalized and poset.n > 1:
        fam = normalize_family(poset, fam)

    N = len(fam)
    weights = 0.5 ** np.arange(1, N + 1)
    M = fam.as_matrix(poset.n)
    G = weights @ M if N else np.zeros(poset.n)
    if normalized and poset.n > 1:
        G = G / diameter(poset.metric)
        weights = weights / diameter(poset.metric)

    strict = strict_relation(poset.order)
    pairs = np.argwhere(strict)
    margin = 0.0
    min_gap = None
    if len(pairs) and N:
        gaps = M[:, pairs[:, 0]] - M[:, pairs[:, 1]]
        positive = gaps[gaps > eps]
        if positive.size:
            margin = float(weights[-1] * positive.min())
        min_gap = float((G[pairs[:, 0]] - G[pairs[:, 1]]).min())

    logger.debug(f"Strict map over {N} member(s): margin={margin}, min_gap={min_gap}")
    return StrictMap(G, weights, margin, min_gap)
