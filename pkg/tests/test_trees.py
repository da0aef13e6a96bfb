import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treeglue.errors import IndexOutOfRange, InvalidPath
from treeglue.trees import (
    LukasiewiczPath,
    PlaneTree,
    ancestors,
    from_lukasiewicz,
    lca,
    lca_by_walk,
    lukasiewicz,
)


def _random_tree(rng, n_max=40):
    # cycle lemma: any increment sequence summing to -1 has exactly one
    # rotation that is a valid walk, so rotate at the first minimum
    while True:
        n = rng.integers(1, n_max + 1)
        inc = rng.integers(0, 4, size=n) - 1
        if inc.sum() == -1:
            break
    w = np.cumsum(inc)
    u = int(np.argmin(w)) + 1
    inc = np.roll(inc, -u)
    return PlaneTree.from_outdegrees(inc + 1)


# == 1. Encoding round trips and frozen examples ==


class TestEncoding:
    def test_cherry_walk(self):
        t = PlaneTree.from_outdegrees([2, 0, 0])
        assert lukasiewicz(t).values.tolist() == [0, 1, 0, -1]

    def test_spec_example_walk(self):
        t = PlaneTree.from_outdegrees([3, 0, 2, 0, 0, 0])
        assert lukasiewicz(t).values.tolist() == [0, 2, 1, 2, 1, 0, -1]

    def test_singleton(self):
        t = PlaneTree.from_outdegrees([0])
        assert t.size == 1
        assert lukasiewicz(t).values.tolist() == [0, -1]

    def test_round_trip_small(self):
        for out in ([0], [1, 0], [2, 0, 0], [3, 0, 2, 0, 0, 0], [1, 1, 1, 0]):
            t = PlaneTree.from_outdegrees(out)
            t2 = from_lukasiewicz(lukasiewicz(t))
            assert t2.outdeg.tolist() == t.outdeg.tolist()

    def test_invalid_rejected(self):
        with pytest.raises(InvalidPath):
            PlaneTree.from_outdegrees([])
        with pytest.raises(InvalidPath):
            PlaneTree.from_outdegrees([2, 0])  # walk ends at 0
        with pytest.raises(InvalidPath):
            PlaneTree.from_outdegrees([0, 0])  # dips then continues
        with pytest.raises(InvalidPath):
            PlaneTree.from_outdegrees([2, -1, 0])
        with pytest.raises(InvalidPath):
            LukasiewiczPath(np.array([0, 1, -1]))  # -2 increment
        with pytest.raises(InvalidPath):
            LukasiewiczPath(np.array([1, 0, -1]))  # wrong start

    def test_path_object_invariants(self):
        p = LukasiewiczPath.from_increments([2, -1, 1, -1, -1, -1])
        assert p.values[0] == 0 and p.values[-1] == -1
        assert len(p) == 6

    def test_leaf_count_is_down_steps(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            t = _random_tree(rng)
            downs = int((lukasiewicz(t).increments == -1).sum())
            assert t.leaves().shape[0] == downs == int((t.outdeg[1:] == 0).sum())


# == 2. Structure tables ==


class TestStructure:
    def test_spec_example_structure(self):
        # v1 has children v2, v3, v6; v3 has children v4, v5
        t = PlaneTree.from_outdegrees([3, 0, 2, 0, 0, 0])
        assert t.children(1).tolist() == [2, 3, 6]
        assert t.children(3).tolist() == [4, 5]
        assert t.parent[4] == 3 and t.parent[6] == 1
        assert t.child_rank[6] == 3 and t.child_rank[5] == 2
        assert t.depth.tolist()[1:] == [0, 1, 1, 2, 2, 1]

    def test_ulam_labels(self):
        t = PlaneTree.from_outdegrees([3, 0, 2, 0, 0, 0])
        assert t.ulam_label(1) == ()
        assert t.ulam_label(5) == (2, 2)
        assert t.vertex_at((2, 2)) == 5
        assert t.vertex_at(()) == 1
        with pytest.raises(IndexOutOfRange):
            t.vertex_at((4,))
        with pytest.raises(IndexOutOfRange):
            t.ulam_label(7)

    def test_subtree_sizes(self):
        t = PlaneTree.from_outdegrees([3, 0, 2, 0, 0, 0])
        assert t.subtree_sizes().tolist()[1:] == [6, 1, 3, 1, 1, 1]

    def test_serialization_round_trip(self):
        t = PlaneTree.from_outdegrees([3, 0, 2, 0, 0, 0])
        assert PlaneTree.from_json(t.to_json()).outdeg.tolist() == t.outdeg.tolist()
        s = '{"increments": [2, -1, 1, -1, -1, -1]}'
        assert PlaneTree.from_json(s).size == 6
        with pytest.raises(InvalidPath):
            PlaneTree.from_json('{"nodes": []}')


# == 3. Ancestry queries against the brute-force oracle ==


class TestAncestry:
    def test_spec_example_lca(self):
        t = PlaneTree.from_outdegrees([3, 0, 2, 0, 0, 0])
        assert lca(t, 4, 5) == 3
        assert lca(t, 2, 4) == 1
        assert lca(t, 3, 4) == 3  # ancestor case
        assert lca(t, 6, 6) == 6

    def test_out_of_range(self):
        t = PlaneTree.from_outdegrees([2, 0, 0])
        with pytest.raises(IndexOutOfRange):
            lca(t, 0, 1)
        with pytest.raises(IndexOutOfRange):
            ancestors(t, 4)

    def test_ancestors_chain(self):
        t = PlaneTree.from_outdegrees([3, 0, 2, 0, 0, 0])
        assert ancestors(t, 5) == [1, 3, 5]
        assert ancestors(t, 1) == [1]

    def test_lca_matches_oracle_random(self):
        rng = np.random.default_rng(123)
        for _ in range(30):
            t = _random_tree(rng, n_max=120)
            n = t.size
            for _ in range(40):
                u = int(rng.integers(1, n + 1))
                v = int(rng.integers(1, n + 1))
                assert lca(t, u, v) == lca_by_walk(t, u, v)

    def test_deep_chain(self):
        # depth equals size-1, exercises every lifting level
        t = PlaneTree.from_outdegrees([1] * 200 + [0])
        assert lca(t, 201, 150) == 150
        assert ancestors(t, 3) == [1, 2, 3]


# == 4. Properties on generated trees ==


@st.composite
def walk_trees(draw):
    incs = draw(
        st.lists(st.integers(min_value=-1, max_value=3), min_size=1, max_size=60)
    )
    total = sum(incs)
    if total >= 0:
        incs = incs + [-1] * (total + 1)
    elif total < -1:
        incs = incs + [1] * (-1 - total)
    w = np.cumsum(incs)
    u = int(np.argmin(w)) + 1
    rolled = np.roll(np.asarray(incs, dtype=np.int64), -u)
    return PlaneTree.from_outdegrees(rolled + 1)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(walk_trees())
    def test_round_trip(self, t):
        assert from_lukasiewicz(lukasiewicz(t)).outdeg.tolist() == t.outdeg.tolist()

    @settings(max_examples=60, deadline=None)
    @given(walk_trees(), st.data())
    def test_lca_is_common_ancestor(self, t, data):
        u = data.draw(st.integers(min_value=1, max_value=t.size))
        v = data.draw(st.integers(min_value=1, max_value=t.size))
        a = lca(t, u, v)
        au, av = ancestors(t, u), ancestors(t, v)
        assert a in au and a in av
        # deepest common vertex of the two root paths
        common = [x for x, y in zip(au, av) if x == y]
        assert a == common[-1]

    @settings(max_examples=40, deadline=None)
    @given(walk_trees())
    def test_parent_child_tables_agree(self, t):
        for v in range(1, t.size + 1):
            for j, c in enumerate(t.children(v), start=1):
                assert t.parent[c] == v
                assert t.child_rank[c] == j
