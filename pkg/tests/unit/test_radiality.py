"""
Unit tests for radiality.py - radial convexity, (d1)/(d2) scans and
inextensible instances.
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

import config
from extension import oracle_solve, validate_input_function
from generators import RANDOM_DISCRETE, GeneratorSpec, gen_example1, random_instance
from poset import make_poset
from radiality import (
    D1,
    D2,
    RC,
    NotAViolation,
    NotRadial,
    ViolationWitness,
    check_radial_convexity,
    check_radiality,
    first_radiality_violation,
    inextensible_instance,
    is_radial,
    require_radial,
)


def plane_poset(points):
    """Points of R^2 with the coordinatewise order and the Euclidean metric."""
    p = np.asarray(points, dtype=float)
    dist = np.sqrt(((p[:, None, :] - p[None, :, :]) ** 2).sum(axis=2))
    geq = np.all(p[:, None, :] >= p[None, :, :], axis=2)
    return make_poset(dist, geq)


# x = (1,-1), y = (0,0), z = (0,-1): x ≽• y ≻ z with d(x,z) = 1 < d(x,y) = √2
WITNESS_POINTS = [(1, -1), (0, 0), (0, -1)]


@pytest.fixture(autouse=True)
def default_config():
    config.reset_config()
    yield
    config.reset_config()


class TestRadialConvexity:
    """Tests for check_radial_convexity."""

    def test_equality_order_is_vacuous(self):
        """No strict chains means nothing to violate."""
        poset = make_poset([[0, 1, 3], [1, 0, 2], [3, 2, 0]], np.eye(3, dtype=bool))
        ok, violations = check_radial_convexity(poset)
        assert ok and violations == []

    def test_example1_metric_regime(self):
        """Every metric diamond is radially convex."""
        for a, b in [(0.6, 0.3), (0.7, 0.4), (0.3, 0.4), (0.5, 0.9)]:
            ok, _ = check_radial_convexity(gen_example1(a, b))
            assert ok, (a, b)

    def test_vertical_line_in_plane(self):
        """(0,0), (0,1), (0,2) with the coordinatewise order."""
        ok, _ = check_radial_convexity(plane_poset([(0, 0), (0, 1), (0, 2)]))
        assert ok

    def test_chain_shortcut_is_reported(self):
        """x ≻ y ≻ z with d(x,z) < d(x,y) is an RC violation."""
        geq = np.array([[1, 1, 1], [0, 1, 1], [0, 0, 1]], dtype=bool)
        poset = make_poset([[0, 2, 1], [2, 0, 2], [1, 2, 0]], geq)
        ok, violations = check_radial_convexity(poset)
        assert not ok
        assert violations[0].kind == RC
        assert violations[0].triple == (0, 1, 2)


class TestCheckRadiality:
    """Tests for check_radiality."""

    def test_example1_radial(self):
        """a=0.6, b=0.3: min{a,1-a} = 0.4 >= b."""
        report = check_radiality(gen_example1(0.6, 0.3))
        assert report.radial and report.d1_holds and report.d2_holds
        assert report.violations == []

    def test_example1_d2_only(self):
        """a=0.7, b=0.4 (1-a < b < a) satisfies (d2) but not (d1)."""
        report = check_radiality(gen_example1(0.7, 0.4))
        assert report.d2_holds
        assert not report.d1_holds
        assert not report.radial
        assert report.radially_convex
        assert {w.kind for w in report.violations} == {D1}

    def test_example1_d1_only(self):
        """a=0.3, b=0.4 (a < b < 1-a) satisfies (d1) but not (d2)."""
        report = check_radiality(gen_example1(0.3, 0.4))
        assert report.d1_holds and not report.d2_holds

    def test_plane_witness(self):
        """The R^2 triple violates (d1) with lhs 1 and rhs √2."""
        report = check_radiality(plane_poset(WITNESS_POINTS))
        assert not report.d1_holds
        w = next(v for v in report.violations if v.triple == (0, 1, 2))
        assert w.kind == D1
        assert w.lhs == pytest.approx(1.0)
        assert w.rhs == pytest.approx(math.sqrt(2))

    def test_equality_order_is_radial(self):
        """The equality relation is radial on any metric."""
        poset = make_poset([[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]], np.eye(3, dtype=bool))
        assert check_radiality(poset).radial

    def test_discrete_metric_is_radial(self):
        """Partially ordered discrete spaces are radial."""
        for seed in range(10):
            spec = GeneratorSpec(RANDOM_DISCRETE, {"n": 7, "density": 0.4})
            assert check_radiality(random_instance(spec, seed)).radial

    def test_radial_implies_radially_convex(self):
        """Whenever (d1) and (d2) hold, RC holds."""
        for a in np.arange(1, 20) / 20:
            for b in np.arange(1, 20) / 20:
                if min(a, 1 - a) < b / 2:
                    continue
                report = check_radiality(gen_example1(a, b))
                if report.radial:
                    assert report.radially_convex

    def test_violation_limit(self):
        """The witness list is capped by max_violations; counts are not."""
        config.CONFIG["max_violations"] = 1
        report = check_radiality(gen_example1(0.7, 0.4))
        assert len(report.violations) == 1
        assert report.counts[D1] == 2

    def test_equality_counts_as_satisfied(self):
        """b = 1 - a makes (d1) hold with equality."""
        report = check_radiality(gen_example1(0.75, 0.25))
        assert report.d1_holds

    def test_report_to_dict(self):
        """Serialized keys follow the report format."""
        data = check_radiality(gen_example1(0.7, 0.4)).to_dict()
        assert set(data) >= {"radially_convex", "d1", "d2", "radial", "violations"}
        assert data["violations"][0]["kind"] == "D1"
        assert len(data["violations"][0]["triple"]) == 3

    def test_is_radial_and_first_violation(self):
        """Convenience wrappers agree with the full report."""
        assert is_radial(gen_example1(0.6, 0.3))
        assert first_radiality_violation(gen_example1(0.6, 0.3)) is None
        w = first_radiality_violation(gen_example1(0.3, 0.4))
        assert w.kind == D2

    def test_require_radial(self):
        """require_radial raises NotRadial naming the witness."""
        require_radial(gen_example1(0.6, 0.3))
        with pytest.raises(NotRadial, match="D1"):
            require_radial(gen_example1(0.7, 0.4))


class TestInextensibleInstance:
    """Tests for inextensible_instance."""

    def test_plane_witness_function(self):
        """S = {x, y}, f(x) = √2, f(y) = 0; the oracle finds no extension."""
        poset = plane_poset(WITNESS_POINTS)
        w = next(v for v in check_radiality(poset).violations if v.triple == (0, 1, 2))
        S, f = inextensible_instance(poset, w)
        assert S.members == (0, 1)
        assert f.value_of(0)[0] == pytest.approx(math.sqrt(2))
        assert f.value_of(1)[0] == 0.0
        assert validate_input_function(poset, f)["valid"]
        assert not oracle_solve(poset, f).feasible

    def test_d2_witness_function(self):
        """A (d2) witness puts S on its lower pair."""
        poset = gen_example1(0.3, 0.4)
        w = first_radiality_violation(poset)
        S, f = inextensible_instance(poset, w)
        assert S.members == tuple(sorted(w.triple[1:]))
        assert validate_input_function(poset, f)["valid"]
        assert not oracle_solve(poset, f).feasible

    def test_example1_d1_triple(self):
        """The d2-only diamond's (d1) triple converts to an infeasible instance."""
        poset = gen_example1(0.7, 0.4)
        for w in check_radiality(poset).violations:
            _, f = inextensible_instance(poset, w)
            assert not oracle_solve(poset, f).feasible

    def test_radial_poset_rejects(self):
        """A triple that is not a violation raises NotAViolation."""
        poset = gen_example1(0.6, 0.3)
        with pytest.raises(NotAViolation):
            inextensible_instance(poset, ViolationWitness(D1, (1, 2, 3), 0.4, 0.3))

    def test_rc_kind_rejected(self):
        """Only D1 and D2 witnesses convert."""
        poset = gen_example1(0.7, 0.4)
        with pytest.raises(NotAViolation):
            inextensible_instance(poset, ViolationWitness(RC, (0, 1, 3), 0.0, 1.0))
