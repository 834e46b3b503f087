"""
Radial convexity and radiality checks for finite metric posets.

Radially convex: x ≻ y ≻ z implies d(x,z) >= max{d(x,y), d(y,z)}.
Radial:          (d1) x ≽• y ≻ z implies d(x,z) >= d(x,y)
                 (d2) x ≻ y ≽• z implies d(x,z) >= d(y,z)

A violation needs lhs < rhs - eps, so equality counts as satisfied.
"""

from dataclasses import dataclass, field
import logging
from typing import Optional

import numpy as np

from config import CONFIG, get_epsilon
from extension import PartialFunction
from poset import (
    LipextError,
    MetricPoset,
    PointSet,
    bullet_relation,
    strict_relation,
)

logger = logging.getLogger(__name__)

RC = "RC"
D1 = "D1"
D2 = "D2"


class NotAViolation(LipextError):
    pass


class NotRadial(LipextError):
    pass


@dataclass(frozen=True)
class ViolationWitness:
    kind: str
    triple: tuple[int, int, int]
    lhs: float
    rhs: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "triple": list(self.triple),
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass
class RadialityReport:
    radially_convex: bool
    d1_holds: bool
    d2_holds: bool
    violations: list[ViolationWitness] = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def radial(self) -> bool:
        return self.d1_holds and self.d2_holds

    def to_dict(self) -> dict:
        return {
            "radially_convex": self.radially_convex,
            "d1": self.d1_holds,
            "d2": self.d2_holds,
            "radial": self.radial,
            "violations": [v.to_dict() for v in self.violations],
            "counts": dict(self.counts),
        }


def _scan(poset: MetricPoset, kind: str, eps: float, limit: int) -> tuple[int, list[ViolationWitness]]:
    """
    Scan all triples (x, y, z) for one condition, middle point y outermost.

    Returns the total violation count and the first `limit` witnesses.
    """
    d = poset.dist
    strict = strict_relation(poset.order)
    bullet = bullet_relation(poset.order)

    total = 0
    found = []
    for y in range(poset.n):
        if kind == RC:
            pattern = strict[:, y][:, None] & strict[y, :][None, :]
            rhs = np.maximum(d[:, y][:, None], d[y, :][None, :])
        elif kind == D1:
            pattern = bullet[:, y][:, None] & strict[y, :][None, :]
            rhs = np.broadcast_to(d[:, y][:, None], d.shape)
        else:
            pattern = strict[:, y][:, None] & bullet[y, :][None, :]
            rhs = np.broadcast_to(d[y, :][None, :], d.shape)

        bad = pattern & (d < rhs - eps)
        hits = np.argwhere(bad)
        total += len(hits)
        for x, z in hits:
            if len(found) >= limit:
                break
            found.append(ViolationWitness(
                kind=kind,
                triple=(int(x), y, int(z)),
                lhs=float(d[x, z]),
                rhs=float(rhs[x, z]),
            ))

    return total, found


def check_radial_convexity(poset: MetricPoset, eps: float | None = None,
                           limit: Optional[int] = None) -> tuple[bool, list[ViolationWitness]]:
    """True iff every strict chain x ≻ y ≻ z has d(x,z) >= max{d(x,y), d(y,z)}."""
    eps = get_epsilon(eps)
    limit = CONFIG["max_violations"] if limit is None else limit
    total, found = _scan(poset, RC, eps, limit)
    return total == 0, found


def check_radiality(poset: MetricPoset, eps: float | None = None,
                    limit: Optional[int] = None) -> RadialityReport:
    """Exhaustive scan of radial convexity, (d1) and (d2)."""
    eps = get_epsilon(eps)
    limit = CONFIG["max_violations"] if limit is None else limit

    counts = {}
    violations = []
    for kind in (RC, D1, D2):
        total, found = _scan(poset, kind, eps, max(limit - len(violations), 0))
        counts[kind] = total
        violations.extend(found)

    report = RadialityReport(
        radially_convex=counts[RC] == 0,
        d1_holds=counts[D1] == 0,
        d2_holds=counts[D2] == 0,
        violations=violations,
        counts=counts,
    )
    logger.debug(
        f"Radiality scan over {poset.n} points: RC={counts[RC]} "
        f"D1={counts[D1]} D2={counts[D2]}"
    )
    return report


def is_radial(poset: MetricPoset, eps: float | None = None) -> bool:
    return check_radiality(poset, eps, limit=0).radial


def first_radiality_violation(poset: MetricPoset, eps: float | None = None) -> Optional[ViolationWitness]:
    """The first D1 or D2 witness, or None if the poset is radial."""
    eps = get_epsilon(eps)
    for kind in (D1, D2):
        _, found = _scan(poset, kind, eps, 1)
        if found:
            return found[0]
    return None


def inextensible_instance(poset: MetricPoset, w: ViolationWitness, eps: float | None = None):
    """
    Build an increasing 1-Lipschitz partial function with no increasing
    1-Lipschitz extension to the whole poset.

    D1 (x ≽• y ≻ z, d(x,z) < d(x,y)): S = {x, y}, f(x) = d(x,y), f(y) = 0.
    D2 (x ≻ y ≽• z, d(x,z) < d(y,z)): S = {y, z}, f(y) = d(y,z), f(z) = 0.
    """
    eps = get_epsilon(eps)
    x, y, z = (poset.check_index(i) for i in w.triple)
    d = poset.dist
    strict = strict_relation(poset.order)
    bullet = bullet_relation(poset.order)

    if w.kind == D1:
        holds = bullet[x, y] and strict[y, z] and d[x, z] < d[x, y] - eps
        top, bottom = x, y
    elif w.kind == D2:
        holds = strict[x, y] and bullet[y, z] and d[x, z] < d[y, z] - eps
        top, bottom = y, z
    else:
        holds = False
    if not holds:
        raise NotAViolation(f"{w.kind} triple {w.triple} is not a radiality violation")

    S = PointSet.of([top, bottom])
    values = {top: [float(d[top, bottom])], bottom: [0.0]}
    f = PartialFunction(
        domain=S,
        values=np.array([values[i] for i in S], dtype=float),
        K=1.0,
    )
    logger.debug(f"Inextensible instance from {w.kind} {w.triple}: S={S.members}")
    return S, f


def require_radial(poset: MetricPoset, eps: float | None = None) -> None:
    """Raise NotRadial naming the first (d1)/(d2) witness, if any."""
    w = first_radiality_violation(poset, eps)
    if w is not None:
        raise NotRadial(f"Poset is not radial: {w.kind} at {w.triple}")
