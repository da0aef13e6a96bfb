"""Rooted plane trees in depth-first order, and the walk encoding.

Vertices are addressed by their 1-based depth-first (lexicographic) index
v_1 .. v_n, root first.  The walk value after k vertices is
W_k = sum_{j<=k} (outdeg(v_j) - 1); a sequence of outdegrees encodes a tree
iff W_n = -1 and every proper prefix stays >= 0.  Leaves are exactly the
down-steps of the walk.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOutOfRange, InvalidPath

__all__ = [
    "PlaneTree",
    "LukasiewiczPath",
    "lukasiewicz",
    "from_lukasiewicz",
    "lca",
    "lca_by_walk",
    "ancestors",
]


def _validate_walk(outdeg: np.ndarray) -> None:
    # outdeg is the 1-based array, slot 0 unused
    n = outdeg.shape[0] - 1
    if n < 1:
        raise InvalidPath("empty outdegree sequence")
    if (outdeg[1:] < 0).any():
        raise InvalidPath("negative outdegree")
    walk = np.cumsum(outdeg[1:] - 1)
    if walk[-1] != -1:
        raise InvalidPath(f"walk ends at {walk[-1]}, expected -1")
    if n > 1 and (walk[:-1] < 0).any():
        k = int(np.argmax(walk[:-1] < 0)) + 1
        raise InvalidPath(f"walk dips below 0 after {k} vertices")


@dataclass(eq=False)
class PlaneTree:
    """Plane tree with O(1) parent/child lookups and lazy lifted-ancestor tables.

    All arrays are 1-based (slot 0 is a sentinel).  child_rank[v] is the
    position of v among its siblings, 1-based; children of v sit at
    child_list[child_offset[v] : child_offset[v+1]] in sibling order.
    """

    outdeg: np.ndarray
    parent: np.ndarray
    child_rank: np.ndarray
    depth: np.ndarray
    child_offset: np.ndarray
    child_list: np.ndarray
    _up: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_outdegrees(cls, seq) -> "PlaneTree":
        out = np.asarray(seq, dtype=np.int64)
        if out.ndim != 1:
            raise InvalidPath("outdegrees must be a flat sequence")
        n = out.shape[0]
        outdeg = np.empty(n + 1, dtype=np.int64)
        outdeg[0] = -1
        outdeg[1:] = out
        _validate_walk(outdeg)

        parent = np.zeros(n + 1, dtype=np.int64)
        child_rank = np.zeros(n + 1, dtype=np.int64)
        depth = np.zeros(n + 1, dtype=np.int64)
        # stack of vertices on the rightmost path with open child slots
        stack_v = [1]
        stack_s = [int(outdeg[1])]
        for i in range(2, n + 1):
            while stack_s[-1] == 0:
                stack_v.pop()
                stack_s.pop()
            p = stack_v[-1]
            parent[i] = p
            child_rank[i] = outdeg[p] - stack_s[-1] + 1
            depth[i] = depth[p] + 1
            stack_s[-1] -= 1
            stack_v.append(i)
            stack_s.append(int(outdeg[i]))

        child_offset = np.zeros(n + 2, dtype=np.int64)
        np.cumsum(outdeg[1:], out=child_offset[2:])
        child_list = np.zeros(n, dtype=np.int64)
        if n > 1:
            idx = np.arange(2, n + 1, dtype=np.int64)
            child_list[child_offset[parent[idx]] + child_rank[idx] - 1] = idx
        return cls(outdeg, parent, child_rank, depth, child_offset, child_list)

    @property
    def size(self) -> int:
        return self.outdeg.shape[0] - 1

    def __len__(self) -> int:
        return self.size

    def _check_vertex(self, v: int) -> int:
        v = int(v)
        if not 1 <= v <= self.size:
            raise IndexOutOfRange(f"vertex {v} not in 1..{self.size}")
        return v

    def children(self, v: int) -> np.ndarray:
        v = self._check_vertex(v)
        return self.child_list[self.child_offset[v] : self.child_offset[v + 1]]

    def leaves(self) -> np.ndarray:
        return np.nonzero(self.outdeg[1:] == 0)[0] + 1

    def subtree_sizes(self) -> np.ndarray:
        """sizes[v] = number of vertices in the subtree rooted at v (1-based)."""
        n = self.size
        sizes = np.ones(n + 1, dtype=np.int64)
        sizes[0] = 0
        par = self.parent
        for i in range(n, 1, -1):
            sizes[par[i]] += sizes[i]
        return sizes

    def _lifting(self) -> np.ndarray:
        if self._up is None:
            levels = max(1, int(self.depth.max()).bit_length())
            up = np.zeros((levels, self.size + 1), dtype=np.int64)
            up[0] = self.parent
            for k in range(1, levels):
                up[k] = up[k - 1][up[k - 1]]
            self._up = up
        return self._up

    def ulam_label(self, v: int) -> tuple:
        """Sequence of sibling ranks along the path from the root, () for the root."""
        v = self._check_vertex(v)
        out = []
        while v != 1:
            out.append(int(self.child_rank[v]))
            v = int(self.parent[v])
        return tuple(reversed(out))

    def vertex_at(self, label) -> int:
        v = 1
        for r in label:
            kids = self.children(v)
            if not 1 <= r <= kids.shape[0]:
                raise IndexOutOfRange(f"no child {r} under vertex {v}")
            v = int(kids[r - 1])
        return v

    def to_json(self) -> str:
        return json.dumps(self.outdeg[1:].tolist(), separators=(",", ":"))

    @classmethod
    def from_json(cls, s: str) -> "PlaneTree":
        obj = json.loads(s)
        if isinstance(obj, dict):
            if "outdegrees" in obj:
                return cls.from_outdegrees(obj["outdegrees"])
            if "increments" in obj:
                return cls.from_outdegrees(np.asarray(obj["increments"]) + 1)
            raise InvalidPath("expected 'outdegrees' or 'increments' key")
        return cls.from_outdegrees(obj)


@dataclass(frozen=True)
class LukasiewiczPath:
    """Walk values W_0 = 0, ..., W_n = -1 of a plane tree, validated."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.shape[0] < 2:
            raise InvalidPath("need at least W_0 and W_1")
        if vals[0] != 0:
            raise InvalidPath("walk must start at 0")
        inc = np.diff(vals)
        if (inc < -1).any():
            raise InvalidPath("increments below -1")
        if vals[-1] != -1:
            raise InvalidPath("walk must end at -1")
        if (vals[1:-1] < 0).any():
            raise InvalidPath("proper prefix dips below 0")

    @classmethod
    def from_increments(cls, inc) -> "LukasiewiczPath":
        inc = np.asarray(inc, dtype=np.int64)
        return cls(np.concatenate([[0], np.cumsum(inc)]))

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values)

    def __len__(self) -> int:
        return self.values.shape[0] - 1


def lukasiewicz(tree: PlaneTree) -> LukasiewiczPath:
    vals = np.concatenate([[0], np.cumsum(tree.outdeg[1:] - 1)])
    return LukasiewiczPath(vals)


def from_lukasiewicz(path) -> PlaneTree:
    if not isinstance(path, LukasiewiczPath):
        path = LukasiewiczPath(np.asarray(path, dtype=np.int64))
    return PlaneTree.from_outdegrees(path.increments + 1)


def lca(tree: PlaneTree, u: int, v: int) -> int:
    """Lowest common ancestor by binary lifting, O(log depth) per query."""
    u = tree._check_vertex(u)
    v = tree._check_vertex(v)
    if u == v:
        return u
    up = tree._lifting()
    depth = tree.depth
    if depth[u] < depth[v]:
        u, v = v, u
    diff = int(depth[u] - depth[v])
    k = 0
    while diff:
        if diff & 1:
            u = int(up[k][u])
        diff >>= 1
        k += 1
    if u == v:
        return u
    for k in range(up.shape[0] - 1, -1, -1):
        if up[k][u] != up[k][v]:
            u = int(up[k][u])
            v = int(up[k][v])
    return int(tree.parent[u])


def lca_by_walk(tree: PlaneTree, u: int, v: int) -> int:
    """Brute-force ancestor-set walk, kept as the oracle for lca()."""
    u = tree._check_vertex(u)
    v = tree._check_vertex(v)
    seen = set()
    while u != 0:
        seen.add(u)
        u = int(tree.parent[u])
    while v not in seen:
        v = int(tree.parent[v])
    return v


def ancestors(tree: PlaneTree, v: int) -> list:
    """Path from the root to v, both endpoints included."""
    v = tree._check_vertex(v)
    chain = []
    while v != 0:
        chain.append(v)
        v = int(tree.parent[v])
    return chain[::-1]
