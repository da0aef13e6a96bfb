"""Pointed metric blocks that replace tree vertices, and kits of them.

A decoration for an outdegree-k vertex is a finite pointed metric space
with an internal root, an ordered list of k attachment slots (children glue
their roots there; repeats allowed), and a nonnegative mass on its points.
All kits here produce graph metrics with unit edges, so glued distances
stay integers and can be checked against breadth-first search.

Conventions pinned per kit:

* cycle: outdegree k becomes the k-cycle (a point for k <= 1, a single
  edge for k = 2), root at vertex 0, slot j at vertex j - 1 (the first
  child shares the root point), counting mass on all k vertices;
* segment: every vertex becomes a unit edge, root at one end, all slots
  and a unit of mass at the other end, so the glued complex contains the
  original tree isometrically on the far endpoints;
* leaf tree: outdegree k becomes an independent tree conditioned on k
  leaves, slots are the leaves in depth-first order, counting mass on
  non-root vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPoint, NonGraphDecoration, ParamOutOfRange, ZeroMass
from .laws import OffspringLaw
from .bgw import sample_leaf_conditioned_tree
from .trees import PlaneTree, lca

__all__ = [
    "Decoration",
    "CycleDecoration",
    "SegmentDecoration",
    "PointDecoration",
    "TreeDecoration",
    "CircleLimit",
    "SegmentLimit",
    "DecorationKit",
    "cycle_kit",
    "segment_kit",
    "bgw_kit",
]


class Decoration:
    """Shared behavior; concrete classes fill n_points, root, slots, nu."""

    n_points: int
    root: int
    slots: np.ndarray
    nu: np.ndarray

    def _check(self, i):
        i = np.asarray(i, dtype=np.int64)
        if i.size and (int(i.min()) < 0 or int(i.max()) >= self.n_points):
            raise InvalidPoint(f"point index out of range 0..{self.n_points - 1}")
        return i

    def dist(self, i, j) -> np.ndarray:
        raise NotImplementedError

    def dist_to_root(self, i) -> np.ndarray:
        return self.dist(i, np.full_like(np.asarray(i, dtype=np.int64), self.root))

    def diam(self) -> int:
        raise NotImplementedError

    def edges(self) -> list[tuple[int, int]]:
        raise NonGraphDecoration(f"{type(self).__name__} has no edge structure")

    @property
    def degree(self) -> int:
        return int(self.slots.shape[0])

    @property
    def mass(self) -> float:
        return float(self.nu.sum())

    def slot_point(self, j: int) -> int:
        """Attachment point of child j (1-based)."""
        if not 1 <= j <= self.degree:
            raise InvalidPoint(f"slot {j} not in 1..{self.degree}")
        return int(self.slots[j - 1])

    def sample_nu(self, rng, size=None):
        """Point index with probability proportional to its mass."""
        tot = self.nu.sum()
        if tot <= 0:
            raise ZeroMass("decoration carries no mass")
        cdf = np.cumsum(self.nu / tot)
        cdf[-1] = 1.0
        out = np.searchsorted(cdf, rng.random(size if size is not None else 1), side="right")
        return int(out[0]) if size is None else out.astype(np.int64)

    def sample_mu(self, rng, size=None):
        """Point index under the slot-sampling measure (uniform over slots)."""
        if self.degree == 0:
            raise ZeroMass("decoration has no slots to sample")
        idx = rng.integers(0, self.degree, size=size)
        return int(self.slots[idx]) if size is None else self.slots[idx]


@dataclass(frozen=True)
class CycleDecoration(Decoration):
    k: int
    n_points: int = field(init=False)
    root: int = field(init=False, default=0)
    slots: np.ndarray = field(init=False)
    nu: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise ParamOutOfRange("cycle needs k >= 1; use PointDecoration for leaves")
        object.__setattr__(self, "n_points", self.k)
        object.__setattr__(self, "slots", np.arange(self.k, dtype=np.int64))
        object.__setattr__(self, "nu", np.ones(self.k))

    def dist(self, i, j):
        i, j = self._check(i), self._check(j)
        d = np.abs(i - j)
        return np.minimum(d, self.k - d)

    def diam(self):
        return self.k // 2

    def edges(self):
        if self.k == 1:
            return []
        if self.k == 2:
            return [(0, 1)]
        return [(i, (i + 1) % self.k) for i in range(self.k)]


@dataclass(frozen=True)
class SegmentDecoration(Decoration):
    k: int
    n_points: int = field(init=False, default=2)
    root: int = field(init=False, default=0)
    slots: np.ndarray = field(init=False)
    nu: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.k < 0:
            raise ParamOutOfRange("slot count must be >= 0")
        object.__setattr__(self, "slots", np.full(self.k, 1, dtype=np.int64))
        object.__setattr__(self, "nu", np.array([0.0, 1.0]))

    def dist(self, i, j):
        i, j = self._check(i), self._check(j)
        return np.abs(i - j)

    def diam(self):
        return 1

    def edges(self):
        return [(0, 1)]


@dataclass(frozen=True)
class PointDecoration(Decoration):
    n_points: int = field(init=False, default=1)
    root: int = field(init=False, default=0)
    slots: np.ndarray = field(init=False)
    nu: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "slots", np.zeros(0, dtype=np.int64))
        object.__setattr__(self, "nu", np.zeros(1))

    def dist(self, i, j):
        i, j = self._check(i), self._check(j)
        return np.zeros(np.broadcast(i, j).shape, dtype=np.int64)

    def diam(self):
        return 0

    def edges(self):
        return []


class TreeDecoration(Decoration):
    """A plane tree as a decoration; points are vertices shifted to 0-based.

    Slots default to the leaves in depth-first order."""

    def __init__(self, tree: PlaneTree, slot_vertices=None):
        self.tree = tree
        self.n_points = tree.size
        self.root = 0
        if slot_vertices is None:
            slot_vertices = tree.leaves()
        self.slots = np.asarray(slot_vertices, dtype=np.int64) - 1
        nu = np.ones(tree.size)
        nu[0] = 0.0  # counting mass on non-root vertices
        self.nu = nu

    def dist(self, i, j):
        i, j = self._check(i), self._check(j)
        i1 = np.atleast_1d(i) + 1
        j1 = np.atleast_1d(j) + 1
        out = np.empty(i1.shape[0], dtype=np.int64)
        for t in range(i1.shape[0]):
            a = lca(self.tree, int(i1[t]), int(j1[t]))
            out[t] = (
                self.tree.depth[i1[t]] + self.tree.depth[j1[t]] - 2 * self.tree.depth[a]
            )
        return out if np.asarray(i).ndim else np.int64(out[0])

    def diam(self):
        # two-sweep: farthest vertex from the root, then farthest from it
        far = int(np.argmax(self.tree.depth[1:])) + 1
        d = self.dist(np.arange(self.n_points), np.full(self.n_points, far - 1))
        return int(np.max(d))

    def edges(self):
        return [(int(self.tree.parent[v]) - 1, v - 1) for v in range(2, self.tree.size + 1)]


# ---------------------------------------------------------------------------
# continuum blocks


class CircleLimit:
    """Circumference-one circle; points are positions in [0, 1)."""

    root = 0.0
    diam = 0.5
    mass = 1.0

    def sample_point(self, rng, size=None):
        return rng.random() if size is None else rng.random(size)

    def dist(self, x, y):
        d = np.abs(np.asarray(x) - np.asarray(y))
        return np.minimum(d, 1.0 - d)

    def dist_to_root(self, x):
        return self.dist(x, 0.0)


class SegmentLimit:
    """Unit segment rooted at 0 with sampling mass at the far end."""

    root = 0.0
    diam = 1.0
    mass = 1.0

    def sample_point(self, rng, size=None):
        return 1.0 if size is None else np.ones(size)

    def dist(self, x, y):
        return np.abs(np.asarray(x) - np.asarray(y))

    def dist_to_root(self, x):
        return np.abs(np.asarray(x))


# ---------------------------------------------------------------------------
# kits


@dataclass(frozen=True)
class DecorationKit:
    """Factory of decorations per outdegree plus the matching continuum block."""

    name: str
    make: object  # callable (k, rng) -> Decoration
    limit: object | None = None
    graph: bool = True

    def __call__(self, k: int, rng) -> Decoration:
        return self.make(k, rng)


def cycle_kit() -> DecorationKit:
    def make(k, rng):
        return PointDecoration() if k == 0 else CycleDecoration(k)

    return DecorationKit(name="cycle", make=make, limit=CircleLimit())


def segment_kit() -> DecorationKit:
    def make(k, rng):
        return SegmentDecoration(k)

    return DecorationKit(name="segment", make=make, limit=SegmentLimit())


def bgw_kit(law: OffspringLaw, max_tries: int = 2_000_000) -> DecorationKit:
    if float(law.pmf(np.int64(1))) != 0.0:
        raise ParamOutOfRange("leaf-tree decorations need mu(1) = 0")

    def make(k, rng):
        if k == 0:
            return PointDecoration()
        return TreeDecoration(sample_leaf_conditioned_tree(law, k, rng, max_tries))

    return DecorationKit(name="bgw", make=make, limit=None)
