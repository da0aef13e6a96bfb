"""Decoration blocks: metrics, slots, masses, kits."""

import numpy as np
import pytest

from treeglue.decorations import (
    CircleLimit,
    CycleDecoration,
    PointDecoration,
    SegmentDecoration,
    SegmentLimit,
    TreeDecoration,
    bgw_kit,
    cycle_kit,
    segment_kit,
)
from treeglue.errors import InvalidPoint, ParamOutOfRange, ZeroMass
from treeglue.laws import OffspringLaw
from treeglue.trees import PlaneTree


# == 1. Concrete blocks ==


class TestCycle:
    def test_metric(self):
        c = CycleDecoration(5)
        assert int(c.dist(0, 2)) == 2
        assert int(c.dist(0, 3)) == 2
        assert int(c.dist(1, 4)) == 2
        assert int(c.dist(2, 2)) == 0
        np.testing.assert_array_equal(c.dist(np.array([0, 0]), np.array([1, 4])), [1, 1])
        assert c.diam() == 2
        assert CycleDecoration(6).diam() == 3

    def test_slots_and_mass(self):
        c = CycleDecoration(4)
        assert c.degree == 4
        assert c.slot_point(1) == 0  # first child shares the root point
        assert c.slot_point(4) == 3
        assert c.mass == 4.0
        with pytest.raises(InvalidPoint):
            c.slot_point(5)
        with pytest.raises(InvalidPoint):
            c.dist(0, 4)

    def test_edges(self):
        assert CycleDecoration(1).edges() == []
        assert CycleDecoration(2).edges() == [(0, 1)]
        assert len(CycleDecoration(5).edges()) == 5
        with pytest.raises(ParamOutOfRange):
            CycleDecoration(0)

    def test_sampling(self):
        c = CycleDecoration(3)
        rng = np.random.default_rng(1)
        pts = c.sample_nu(rng, size=3000)
        for p in range(3):
            assert abs((pts == p).mean() - 1 / 3) < 0.04
        assert c.sample_mu(rng) in (0, 1, 2)


class TestSegmentAndPoint:
    def test_segment(self):
        s = SegmentDecoration(3)
        assert s.n_points == 2
        assert int(s.dist(0, 1)) == 1
        assert s.slot_point(1) == s.slot_point(3) == 1
        assert s.mass == 1.0
        assert s.diam() == 1
        assert s.edges() == [(0, 1)]
        rng = np.random.default_rng(2)
        assert s.sample_nu(rng) == 1
        assert s.sample_mu(rng) == 1

    def test_segment_leaf(self):
        s = SegmentDecoration(0)
        assert s.degree == 0
        assert s.mass == 1.0
        with pytest.raises(ZeroMass):
            s.sample_mu(np.random.default_rng(0))

    def test_point(self):
        p = PointDecoration()
        assert p.mass == 0.0
        assert p.diam() == 0
        assert int(p.dist(0, 0)) == 0
        with pytest.raises(ZeroMass):
            p.sample_nu(np.random.default_rng(0))


class TestTreeDecoration:
    def test_metric_and_slots(self):
        # tree [2,2,0,0,0]: v2 has children v3,v4; v5 is the root's 2nd child
        t = PlaneTree.from_outdegrees([2, 2, 0, 0, 0])
        d = TreeDecoration(t)
        np.testing.assert_array_equal(d.slots, [2, 3, 4])  # leaves v3,v4,v5 0-based
        assert int(d.dist(2, 3)) == 2  # v3 - v2 - v4
        assert int(d.dist(2, 4)) == 3  # v3 - v2 - v1 - v5
        assert int(d.dist_to_root(2)) == 2
        assert d.diam() == 3
        assert d.mass == 4.0  # non-root counting
        assert set(d.edges()) == {(0, 1), (1, 2), (1, 3), (0, 4)}


# == 2. Continuum blocks ==


class TestLimits:
    def test_circle(self):
        c = CircleLimit()
        assert c.dist(0.1, 0.9) == pytest.approx(0.2)
        assert c.dist(0.25, 0.75) == pytest.approx(0.5)
        assert float(c.dist_to_root(0.6)) == pytest.approx(0.4)
        rng = np.random.default_rng(3)
        x = c.sample_point(rng, size=5000)
        assert 0.0 <= x.min() and x.max() < 1.0
        assert abs(x.mean() - 0.5) < 0.02

    def test_segment(self):
        s = SegmentLimit()
        assert s.sample_point(np.random.default_rng(0)) == 1.0
        assert s.dist(0.2, 0.9) == pytest.approx(0.7)
        assert float(s.dist_to_root(0.3)) == pytest.approx(0.3)


# == 3. Kits ==


class TestKits:
    def test_cycle_kit(self):
        kit = cycle_kit()
        rng = np.random.default_rng(4)
        assert isinstance(kit(0, rng), PointDecoration)
        c = kit(7, rng)
        assert isinstance(c, CycleDecoration)
        assert c.degree == 7
        assert kit.limit.diam == 0.5
        assert kit.graph

    def test_segment_kit(self):
        kit = segment_kit()
        rng = np.random.default_rng(5)
        s = kit(4, rng)
        assert s.degree == 4
        assert isinstance(kit.limit, SegmentLimit)

    def test_bgw_kit(self):
        law = OffspringLaw.power(1.5)
        kit = bgw_kit(law)
        rng = np.random.default_rng(6)
        d = kit(7, rng)
        assert isinstance(d, TreeDecoration)
        assert d.degree == 7
        assert d.mass == d.n_points - 1
        assert isinstance(kit(0, rng), PointDecoration)
        with pytest.raises(ParamOutOfRange):
            bgw_kit(OffspringLaw.geometric())
