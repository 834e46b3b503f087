"""
Instance generators: the four worked example families and seeded random
instances for property tests.

Every generator returns validated MetricPoset objects. Random generators
take an explicit seed and use numpy's default_rng, so output is
deterministic per (spec, seed).
"""

from dataclasses import dataclass, field
import logging
from typing import Optional, Sequence

import networkx as nx
import numpy as np
from scipy.spatial.distance import pdist, squareform

from config import get_epsilon
from extension import PartialFunction, constraint_distances, lower_envelope
from poset import (
    LipextError,
    MetricPoset,
    PointSet,
    diameter,
    is_total,
    make_poset,
    order_from_pairs,
    reflexive_transitive_closure,
)
from radiality import check_radial_convexity, check_radiality

logger = logging.getLogger(__name__)

EXAMPLE1 = "example1"
EXAMPLE2 = "example2"
EXAMPLE3 = "example3"
EXAMPLE4 = "example4"
RANDOM_DISCRETE = "random_discrete"
RANDOM_EUCLIDEAN = "random_euclidean"
RANDOM_LOSET = "random_loset"

KINDS = (EXAMPLE1, EXAMPLE2, EXAMPLE3, EXAMPLE4,
         RANDOM_DISCRETE, RANDOM_EUCLIDEAN, RANDOM_LOSET)
RANDOM_KINDS = (RANDOM_DISCRETE, RANDOM_EUCLIDEAN, RANDOM_LOSET)


class InvalidMetricParams(LipextError):
    pass


class NotATree(LipextError):
    pass


class RootMissing(LipextError):
    pass


class NotRadiallyConvex(LipextError):
    pass


class ThetaTooSmall(LipextError):
    pass


class DuplicateSamples(LipextError):
    pass


@dataclass
class GeneratorSpec:
    """kind is one of KINDS; params are kind-specific (see generate)."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise LipextError(f"Unknown generator kind {self.kind!r}; expected one of {KINDS}")


# =============================================================================
# example1: four-point diamond
# =============================================================================

# x1 ≻ x2 ≻ x4, x1 ≻ x3 ≻ x4, x2 and x3 incomparable
DIAMOND_PAIRS = [(0, 1), (0, 2), (1, 3), (2, 3)]


def example1_matrix(a: float, b: float) -> np.ndarray:
    """The raw diamond distance matrix, not validated."""
    return np.array([
        [0.0, a, a, 1.0],
        [a, 0.0, b, 1.0 - a],
        [a, b, 0.0, 1.0 - a],
        [1.0, 1.0 - a, 1.0 - a, 0.0],
    ])


def gen_example1(a: float, b: float, eps: float | None = None) -> MetricPoset:
    """Metric iff min{a, 1-a} >= b/2; radial iff min{a, 1-a} >= b."""
    eps = get_epsilon(eps)
    if not (0 < a < 1 and 0 < b < 1):
        raise InvalidMetricParams(f"a and b must lie in (0, 1), got a={a}, b={b}")
    if min(a, 1 - a) < b / 2 - eps:
        raise InvalidMetricParams(
            f"min(a, 1-a) = {min(a, 1 - a)} < b/2 = {b / 2}: not a metric"
        )
    order = order_from_pairs(4, DIAMOND_PAIRS)
    return make_poset(example1_matrix(a, b), order.geq,
                      labels=["x1", "x2", "x3", "x4"], eps=eps)


# =============================================================================
# example2: rooted trees
# =============================================================================

def _tree_graph(edges: Sequence[Sequence], root) -> nx.Graph:
    G = nx.Graph()
    G.add_edges_from(tuple(e) for e in edges)
    if G.number_of_nodes() == 0:
        G.add_node(root)
    if root not in G:
        raise RootMissing(f"Root {root!r} is not a vertex of the tree")
    if not nx.is_tree(G):
        raise NotATree(f"Edge list with {G.number_of_edges()} edge(s) is not a tree")
    return G


def gen_example2(tree: Sequence[Sequence], root) -> tuple[MetricPoset, MetricPoset]:
    """
    (rho_poset, dT_poset) on the tree's vertices, root first, BFS order.

    x ≽ y iff y lies on the path from the root to x. rho is the path-length
    metric; dT is min{rho, 2} on comparable pairs and 1 otherwise.
    """
    G = _tree_graph(tree, root)
    nodes = list(nx.bfs_tree(G, root).nodes)
    n = len(nodes)
    lengths = dict(nx.shortest_path_length(G))

    rho = np.array([[lengths[u][v] for v in nodes] for u in nodes], dtype=float)
    depth = rho[0]
    # y is an ancestor of x iff it sits on the root-to-x path
    geq = depth[:, None] == depth[None, :] + rho
    comparable = geq | geq.T
    dT = np.where(comparable, np.minimum(rho, 2.0), 1.0)
    np.fill_diagonal(dT, 0.0)

    labels = [str(v) for v in nodes]
    logger.debug(f"Tree with {n} vertices rooted at {root!r}")
    return make_poset(rho, geq, labels), make_poset(dT, geq, labels)


def random_tree(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Edge list of a uniformly random labeled tree on 0..n-1."""
    if n <= 1:
        return []
    if n == 2:
        return [(0, 1)]
    prufer = [int(v) for v in rng.integers(0, n, size=n - 2)]
    return [tuple(int(v) for v in e) for e in nx.from_prufer_sequence(prufer).edges]


def search_nonradial_trees(max_vertices: int = 7, eps: float | None = None) -> dict:
    """
    Scan every non-isomorphic tree with 2..max_vertices vertices, every
    vertex taken as root, for a rho-poset that is not radial.

    Also records whether every dT-poset was radial and every rho-poset
    radially convex.
    """
    eps = get_epsilon(eps)
    findings = {
        "found": False,
        "first": None,
        "nonradial_count": 0,
        "rooted_trees_checked": 0,
        "dT_all_radial": True,
        "rho_all_radially_convex": True,
    }
    for n in range(2, max_vertices + 1):
        for T in nx.nonisomorphic_trees(n):
            edges = [tuple(e) for e in T.edges]
            for root in T.nodes:
                rho_poset, dT_poset = gen_example2(edges, root)
                findings["rooted_trees_checked"] += 1

                report = check_radiality(rho_poset, eps, limit=1)
                if not report.radially_convex:
                    findings["rho_all_radially_convex"] = False
                if not check_radiality(dT_poset, eps, limit=0).radial:
                    findings["dT_all_radial"] = False
                if report.radial:
                    continue

                findings["nonradial_count"] += 1
                if not findings["found"]:
                    findings["found"] = True
                    findings["first"] = {
                        "vertices": n,
                        "edges": [list(e) for e in edges],
                        "root": root,
                        "labels": list(rho_poset.labels),
                        "witness": report.violations[0].to_dict(),
                    }

    logger.info(
        f"Checked {findings['rooted_trees_checked']} rooted trees: "
        f"{findings['nonradial_count']} non-radial under the path metric"
    )
    return findings


# =============================================================================
# example3: disjoint sum of two losets
# =============================================================================

def line_loset(points: Sequence[float], prefix: str = "p") -> MetricPoset:
    """Reals with the usual order and |x - y|."""
    p = np.asarray(points, dtype=float)
    if len(np.unique(p)) != len(p):
        raise DuplicateSamples(f"Repeated points in {list(points)}")
    dist = np.abs(p[:, None] - p[None, :])
    geq = p[:, None] >= p[None, :]
    return make_poset(dist, geq, labels=[f"{prefix}{i}" for i in range(len(p))])


def gen_example3(A: MetricPoset, B: MetricPoset, theta: float,
                 eps: float | None = None) -> MetricPoset:
    """Disjoint sum of two radially convex losets, cross distance theta/2."""
    eps = get_epsilon(eps)
    for name, part in (("A", A), ("B", B)):
        if not is_total(part.order):
            raise NotRadiallyConvex(f"{name} is not linearly ordered")
        ok, found = check_radial_convexity(part, eps, limit=1)
        if not ok:
            raise NotRadiallyConvex(f"{name} is not radially convex: {found[0].triple}")

    widest = max(diameter(A.metric), diameter(B.metric))
    if theta < widest - eps:
        raise ThetaTooSmall(f"theta={theta} is below max diameter {widest}")

    n = A.n + B.n
    dist = np.full((n, n), theta / 2.0)
    dist[:A.n, :A.n] = A.dist
    dist[A.n:, A.n:] = B.dist
    geq = np.zeros((n, n), dtype=bool)
    geq[:A.n, :A.n] = A.geq
    geq[A.n:, A.n:] = B.geq

    labels = [f"A:{A.label(i)}" for i in range(A.n)] + [f"B:{B.label(i)}" for i in range(B.n)]
    return make_poset(dist, geq, labels, eps=eps)


# =============================================================================
# example4: sampled interval with an antichain on top
# =============================================================================

def gen_example4(interval_samples: Sequence[float], antichain_size: int,
                 interval_order: str = "reversed",
                 eps: float | None = None) -> MetricPoset:
    """
    Interval points first (|x - y|), then the antichain J.

    J points sit above every interval point, are pairwise at distance 1,
    and d(j, y) = 1 + y for interval points y.

    With d(j, y) = 1 + y the chain j ≻ y ≻ z needs d(j, z) >= d(j, y), so
    the interval is ordered by x ≽ y iff x <= y ("reversed", the default):
    0 sits directly below J. interval_order="usual" keeps x ≽ y iff x >= y,
    which is not radially convex once the interval has two points.
    """
    if interval_order not in ("reversed", "usual"):
        raise InvalidMetricParams(
            f"interval_order must be 'reversed' or 'usual', got {interval_order!r}"
        )
    samples = np.asarray(interval_samples, dtype=float)
    k, m = len(samples), int(antichain_size)
    if k < 1:
        raise InvalidMetricParams("Need at least one interval sample")
    if m < 0:
        raise InvalidMetricParams(f"Antichain size must be nonnegative, got {m}")
    if np.any(samples < 0) or np.any(samples > 1):
        raise InvalidMetricParams("Interval samples must lie in [0, 1]")
    if len(np.unique(samples)) != k:
        raise DuplicateSamples(f"Repeated interval samples in {list(interval_samples)}")

    n = k + m
    dist = np.ones((n, n))
    dist[:k, :k] = np.abs(samples[:, None] - samples[None, :])
    dist[k:, :k] = 1.0 + samples[None, :]
    dist[:k, k:] = 1.0 + samples[:, None]
    np.fill_diagonal(dist, 0.0)

    geq = np.eye(n, dtype=bool)
    if interval_order == "reversed":
        geq[:k, :k] = samples[:, None] <= samples[None, :]
    else:
        geq[:k, :k] = samples[:, None] >= samples[None, :]
    geq[k:, :k] = True

    labels = [f"i{s:g}" for s in samples] + [f"j{i}" for i in range(m)]
    return make_poset(dist, geq, labels, eps=eps)


# =============================================================================
# Random instances
# =============================================================================

def _random_order(n: int, rng: np.random.Generator, density: float) -> np.ndarray:
    """Closure of a random DAG laid out along a random permutation."""
    perm = rng.permutation(n)
    upper = np.triu(rng.random((n, n)) < density, k=1)
    geq = np.zeros((n, n), dtype=bool)
    geq[np.ix_(perm, perm)] = upper
    return reflexive_transitive_closure(geq)


def _random_metric(n: int, rng: np.random.Generator, low: float, high: float) -> np.ndarray:
    """Shortest-path closure of random complete-graph weights."""
    w = rng.uniform(low, high, size=(n, n))
    d = np.triu(w, k=1)
    d = d + d.T
    for k in range(n):
        d = np.minimum(d, d[:, k][:, None] + d[k, :][None, :])
    return d


def random_instance(spec: GeneratorSpec, seed: Optional[int] = None) -> MetricPoset:
    """
    random_discrete:  n, density (0.3), distance (1.0)
    random_euclidean: n, dim (2), scale (1.0); coordinatewise order
    random_loset:     n, metric "line" (random reals, |x - y|) or "random"
                      (random metric, random total order)
    """
    if spec.kind not in RANDOM_KINDS:
        raise LipextError(f"{spec.kind!r} is not a random generator kind")
    if seed is None:
        logger.warning(f"No seed given for {spec.kind}; output is not reproducible")
    rng = np.random.default_rng(seed)
    p = spec.params
    n = int(p.get("n", 6))
    if n < 1:
        raise InvalidMetricParams(f"n must be positive, got {n}")

    if spec.kind == RANDOM_DISCRETE:
        geq = _random_order(n, rng, float(p.get("density", 0.3)))
        dist = float(p.get("distance", 1.0)) * (1.0 - np.eye(n))
        return make_poset(dist, geq)

    if spec.kind == RANDOM_EUCLIDEAN:
        dim = int(p.get("dim", 2))
        points = rng.random((n, dim)) * float(p.get("scale", 1.0))
        dist = squareform(pdist(points, metric="euclidean")) if n > 1 else np.zeros((1, 1))
        geq = np.all(points[:, None, :] >= points[None, :, :], axis=2)
        labels = ["(" + ", ".join(f"{c:.3f}" for c in pt) + ")" for pt in points]
        return make_poset(dist, geq, labels)

    if p.get("metric", "line") == "random":
        dist = _random_metric(n, rng, float(p.get("low", 0.5)), float(p.get("high", 1.5)))
        rank = rng.permutation(n)
        geq = rank[:, None] >= rank[None, :]
        return make_poset(dist, geq)

    reals = rng.random(n)
    dist = np.abs(reals[:, None] - reals[None, :])
    geq = reals[:, None] >= reals[None, :]
    return make_poset(dist, geq)


def random_function(poset: MetricPoset, rng: np.random.Generator, K: float = 1.0,
                    width: int = 1, domain_size: Optional[int] = None) -> PartialFunction:
    """
    A random increasing K-Lipschitz partial function.

    Random seed values are pushed through the least solution of the
    monotone K-Lipschitz constraints, which is valid everywhere, and then
    restricted to a random domain.
    """
    n = poset.n
    sp = constraint_distances(poset, K)
    seeds = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
    scale = max(K * diameter(poset.metric), 1.0)
    seed_values = rng.uniform(-scale, scale, size=(len(seeds), width))
    total = lower_envelope(sp, seeds, seed_values)

    size = int(domain_size) if domain_size is not None else int(rng.integers(1, n + 1))
    size = min(max(size, 1), n)
    domain = PointSet.of(rng.choice(n, size=size, replace=False))
    return PartialFunction(domain, total[list(domain)], K)


# =============================================================================
# Dispatch
# =============================================================================

def generate(spec: GeneratorSpec, seed: Optional[int] = None) -> MetricPoset:
    """
    Build the instance a spec describes.

    example1: a, b
    example2: edges, root; variant "dT" (default) or "rho"
    example3: A, B (MetricPoset) or A_points, B_points (line losets); theta
    example4: samples, antichain_size
    """
    p = spec.params
    if spec.kind == EXAMPLE1:
        return gen_example1(float(p["a"]), float(p["b"]))
    if spec.kind == EXAMPLE2:
        rho_poset, dT_poset = gen_example2(p.get("edges", []), p["root"])
        variant = p.get("variant", "dT")
        if variant not in ("dT", "rho"):
            raise LipextError(f"example2 variant must be 'dT' or 'rho', got {variant!r}")
        return dT_poset if variant == "dT" else rho_poset
    if spec.kind == EXAMPLE3:
        A = p["A"] if "A" in p else line_loset(p["A_points"], "a")
        B = p["B"] if "B" in p else line_loset(p["B_points"], "b")
        return gen_example3(A, B, float(p["theta"]))
    if spec.kind == EXAMPLE4:
        return gen_example4(p["samples"], int(p.get("antichain_size", 0)),
                            p.get("interval_order", "reversed"))
    return random_instance(spec, seed if seed is not None else p.get("seed"))
