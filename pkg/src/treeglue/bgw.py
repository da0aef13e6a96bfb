"""Conditioned branching-tree samplers and the size-biased cut construction.

Conditioning on exact size is done without any approximation: offspring
counts are drawn as a multinomial over a head/tail split of the law,
accepted when the increments sum to -1, uniformly arranged (exchangeability
makes any uniform arrangement of the accepted multiset exact), and rotated
at the first minimum of the walk, which by the cycle lemma is the unique
rotation giving a valid depth-first path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    InfeasibleConditioning,
    ParamOutOfRange,
    RetriesExhausted,
    SizeLimit,
)
from .laws import OffspringLaw, _hurwitz_tail_quantile
from .trees import PlaneTree, ancestors

__all__ = [
    "sample_conditioned_tree",
    "sample_leaf_conditioned_tree",
    "sample_cut_tree",
    "verify_spine_identity",
    "CutTree",
    "MarkKernel",
    "SpineCheck",
]


# ---------------------------------------------------------------------------
# size-conditioned sampling


def _positive_support_gcd(law: OffspringLaw) -> int:
    if law.kind == "finite":
        ks = [k for k in range(1, law.probs.shape[0]) if law.probs[k] > 0]
        if not ks:
            return 0
        return math.gcd(*ks) if len(ks) > 1 else ks[0]
    return 1  # both infinite-support kinds contain coprime degrees


def _head_pvec(law: OffspringLaw):
    """(head probabilities, lumped tail mass, head size); head covers all of
    a finite support, so the lump is zero there."""
    if law.kind == "finite":
        p = law.probs / law.probs.sum()
        return p, 0.0, p.shape[0]
    head = 4096
    p = law.pmf(np.arange(head))
    lump = max(0.0, 1.0 - float(p.sum()))
    return p, lump, head


def _tail_values(law: OffspringLaw, count: int, rng) -> np.ndarray:
    if law.kind == "geometric":
        # conditioned on >= head the law is head + geometric by memorylessness
        head = 4096
        return head + (rng.geometric(1.0 - law.r, size=count).astype(np.int64) - 1)
    return law._power_tail_values(count, rng)


def _vervaat(degs: np.ndarray) -> np.ndarray:
    walk = np.cumsum(degs.astype(np.int64) - 1)
    i = int(np.argmin(walk))  # first minimum
    return np.concatenate([degs[i + 1 :], degs[: i + 1]])


def sample_conditioned_tree(
    law: OffspringLaw, n: int, rng, max_tries: int = 2_000_000
) -> PlaneTree:
    """Branching tree with offspring law `law` conditioned on n vertices."""
    if not law.is_critical():
        raise ParamOutOfRange(f"law has mean {law.mean()}, conditioning wants 1")
    if n < 1:
        raise ParamOutOfRange("tree size must be >= 1")
    if float(law.pmf(np.int64(0))) == 0.0:
        raise InfeasibleConditioning("no leaves: mu(0) = 0 admits no finite tree")
    if n == 1:
        return PlaneTree.from_outdegrees([0])
    g = _positive_support_gcd(law)
    if g == 0 or (n - 1) % g != 0:
        raise InfeasibleConditioning(
            f"size {n} unreachable: positive support has lattice span {g}"
        )
    p_head, lump, head = _head_pvec(law)
    pvec = np.concatenate([p_head, [lump]])
    ks = np.arange(head, dtype=np.int64)
    chunk = max(16, min(1024, 8_000_000 // (head + 1)))
    tries = 0
    while tries < max_tries:
        t = min(chunk, max_tries - tries)
        tries += t
        counts = rng.multinomial(n, pvec, size=t)
        head_counts = counts[:, :head]
        n_tail = counts[:, head]
        head_sum = head_counts @ ks
        row = -1
        tvals_row = None
        if lump == 0.0:
            hits = np.nonzero((n_tail == 0) & (head_sum == n - 1))[0]
            if hits.shape[0]:
                row = int(hits[0])
        else:
            rows_t = np.nonzero(n_tail > 0)[0]
            tvals = _tail_values(law, int(n_tail[rows_t].sum()), rng) if rows_t.shape[0] else None
            offs = np.concatenate([[0], np.cumsum(n_tail[rows_t])]) if rows_t.shape[0] else None
            target = np.int64(n - 1)
            ok = (n_tail == 0) & (head_sum == target)
            if rows_t.shape[0]:
                seg = np.add.reduceat(tvals, offs[:-1]) if tvals.shape[0] else None
                ok[rows_t] = head_sum[rows_t] + seg == target
            hits = np.nonzero(ok)[0]
            if hits.shape[0]:
                row = int(hits[0])
                j = np.searchsorted(rows_t, row)
                if j < rows_t.shape[0] and rows_t[j] == row:
                    tvals_row = tvals[offs[j] : offs[j + 1]]
        if row >= 0:
            degs = np.repeat(ks, head_counts[row])
            if tvals_row is not None:
                degs = np.concatenate([degs, tvals_row])
            degs = rng.permutation(degs)
            return PlaneTree.from_outdegrees(_vervaat(degs))
    raise RetriesExhausted(f"no size-{n} tree in {max_tries} tries")


def sample_leaf_conditioned_tree(
    law: OffspringLaw, k: int, rng, max_tries: int = 2_000_000
) -> PlaneTree:
    """Branching tree conditioned on exactly k leaves.

    Requires mu(1) = 0, which caps the tree at 2k - 1 vertices: with no
    unary vertices, internals number at most k - 1, so a walk that has not
    died by then already holds more than k leaves and the try is rejected.
    """
    if not law.is_critical():
        raise ParamOutOfRange(f"law has mean {law.mean()}, conditioning wants 1")
    if k < 1:
        raise ParamOutOfRange("leaf count must be >= 1")
    if float(law.pmf(np.int64(1))) != 0.0:
        raise ParamOutOfRange("leaf conditioning needs mu(1) = 0")
    if float(law.pmf(np.int64(0))) == 0.0:
        raise InfeasibleConditioning("no leaves: mu(0) = 0 admits no finite tree")
    cap = 2 * k - 1
    rows_max = max(1, min(4096, 400_000 // cap))
    rows = min(32, rows_max)
    tries = 0
    while tries < max_tries:
        t = min(rows, max_tries - tries)
        tries += t
        rows = min(2 * rows, rows_max)
        degs = law.sample(t * cap, rng).reshape(t, cap)
        walk = np.cumsum(degs - 1, axis=1)
        died = walk == -1
        has = died.any(axis=1)
        for r in np.nonzero(has)[0]:
            size = int(died[r].argmax()) + 1
            row = degs[r, :size]
            if int((row == 0).sum()) == k:
                return PlaneTree.from_outdegrees(row)
    raise RetriesExhausted(f"no {k}-leaf tree in {max_tries} tries")


# ---------------------------------------------------------------------------
# size-biased cut construction


@dataclass(frozen=True)
class MarkKernel:
    """Per-vertex mark law depending on the vertex outdegree.

    table maps outdegree -> (values, probabilities); probabilities are
    Fractions summing to one so exact verification can reuse the kernel.
    """

    table: dict

    def __post_init__(self):
        for d, (vals, probs) in self.table.items():
            probs = tuple(Fraction(p) for p in probs)
            if sum(probs) != 1:
                raise ParamOutOfRange(f"mark probabilities for degree {d} do not sum to 1")
            if len(vals) != len(probs):
                raise ParamOutOfRange("values/probabilities length mismatch")
            self.table[d] = (tuple(vals), probs)

    def entry(self, d: int):
        if d not in self.table:
            raise ParamOutOfRange(f"no mark law for outdegree {d}")
        return self.table[d]

    def sample(self, outdegs: np.ndarray, rng) -> np.ndarray:
        out = np.zeros(outdegs.shape[0], dtype=np.int64)
        for d in np.unique(outdegs):
            vals, probs = self.entry(int(d))
            sel = outdegs == d
            cdf = np.cumsum([float(p) for p in probs])
            cdf[-1] = 1.0
            idx = np.searchsorted(cdf, rng.random(int(sel.sum())), side="right")
            out[sel] = np.asarray(vals, dtype=np.int64)[idx]
        return out


@dataclass(frozen=True)
class CutTree:
    """Tree from the size-biased spine construction, with the spine explicit.

    spine[i] is the 1-based vertex at spine depth i (spine[0] is the root);
    the last spine vertex roots an unconditioned graft. marks is a 1-based
    per-vertex array (slot 0 unused) or None.
    """

    tree: PlaneTree
    spine: np.ndarray
    marks: np.ndarray | None = None


def _size_biased_sample(law: OffspringLaw, rng) -> int:
    if law.kind == "finite":
        ks = np.arange(law.probs.shape[0], dtype=np.float64)
        sb = ks * law.probs
        cdf = np.cumsum(sb / sb.sum())
        cdf[-1] = 1.0
        return int(np.searchsorted(cdf, rng.random(), side="right"))
    if law.kind == "geometric":
        # j mu(j)/mean = j (1-r)^2 r^(j-1), a shifted negative binomial
        return int(rng.negative_binomial(2, 1.0 - law.r)) + 1
    head = 8192
    ks = np.arange(head, dtype=np.float64)
    sb = ks * law.pmf(np.arange(head))  # mean is exactly 1, no normalizer
    tail_mass = max(0.0, 1.0 - float(sb.sum()))
    u = rng.random()
    cdf = np.cumsum(sb)
    if u < cdf[-1]:
        return int(np.searchsorted(cdf, u, side="right"))
    w, z1 = law._power_consts()
    g = max(tail_mass * (1.0 - rng.random()), 1e-300)
    return int(_hurwitz_tail_quantile(w / z1, law.alpha, head, np.array([g]))[0])


def sample_cut_tree(
    law: OffspringLaw,
    k: int,
    rng,
    mark_kernel: MarkKernel | None = None,
    size_cap: int = 1_000_000,
) -> CutTree:
    """Size-biased construction cut at spine depth k.

    Spine vertices 0..k-1 get size-biased outdegrees with a uniformly
    chosen continuation slot; every off-spine child roots an independent
    unconditioned tree, and the spine tip is the root of one more
    unconditioned graft (its outdegree is the graft root's outdegree).
    """
    if not law.is_critical():
        raise ParamOutOfRange(f"law has mean {law.mean()}, construction wants 1")
    if k < 0:
        raise ParamOutOfRange("spine depth must be >= 0")
    degs: list[int] = []
    spine_pos: list[int] = []

    def bush():
        # first-passage walk emitted in blocks; unused block suffix is
        # discarded, which does not disturb the law (stopping time)
        pending = 1
        block = 64
        while pending > 0:
            draw = law.sample(block, rng)
            walk = pending + np.cumsum(draw.astype(np.int64) - 1)
            dead = np.nonzero(walk == 0)[0]
            if dead.shape[0]:
                degs.extend(draw[: int(dead[0]) + 1].tolist())
                pending = 0
            else:
                degs.extend(draw.tolist())
                pending = int(walk[-1])
                block = min(2 * block, 65536)
            if len(degs) > size_cap:
                raise SizeLimit(f"construction exceeded {size_cap} vertices")

    stack: list[tuple[str, int]] = [("spine", 0)]
    while stack:
        op, level = stack.pop()
        if op == "bush":
            bush()
            continue
        if level == k:
            spine_pos.append(len(degs))
            bush()  # the tip graft, rooted at the spine tip
            continue
        d = _size_biased_sample(law, rng)
        slot = int(rng.integers(1, d + 1))
        spine_pos.append(len(degs))
        degs.append(d)
        if len(degs) > size_cap:
            raise SizeLimit(f"construction exceeded {size_cap} vertices")
        for j in range(d, 0, -1):  # reversed so the stack pops slots in order
            stack.append(("spine", level + 1) if j == slot else ("bush", 0))
    tree = PlaneTree.from_outdegrees(degs)
    spine = np.asarray(spine_pos, dtype=np.int64) + 1
    marks = None
    if mark_kernel is not None:
        marks = np.zeros(tree.size + 1, dtype=np.int64)
        marks[1:] = mark_kernel.sample(tree.outdeg[1:], rng)
    return CutTree(tree=tree, spine=spine, marks=marks)


# ---------------------------------------------------------------------------
# exact spine identity


@dataclass(frozen=True)
class SpineCheck:
    lhs: Fraction
    rhs: Fraction
    pointwise_ok: bool
    n_pointed: int

    @property
    def ok(self) -> bool:
        return self.pointwise_ok and self.lhs == self.rhs


def _enum_trees(supp, n_max):
    out = []
    seq: list[int] = []

    def rec(open_):
        if open_ == 0:
            out.append(tuple(seq))
            return
        if len(seq) + open_ > n_max:
            return
        for d in supp:
            seq.append(d)
            rec(open_ - 1 + d)
            seq.pop()

    rec(1)
    return out


def _line_weight(line_degs, marks_kernel, predicate):
    """Sum over mark assignments on the line of prod pi(x|d) * f(line)."""
    if marks_kernel is None:
        return Fraction(predicate(tuple((d, None) for d in line_degs)))
    total = Fraction(0)
    entries = [marks_kernel.entry(d) for d in line_degs]
    for combo in itertools.product(*(range(len(v)) for v, _ in entries)):
        wt = Fraction(1)
        line = []
        for (vals, probs), i, d in zip(entries, combo, line_degs):
            wt *= probs[i]
            line.append((d, vals[i]))
        total += wt * Fraction(predicate(tuple(line)))
    return total


def verify_spine_identity(
    law: OffspringLaw,
    k: int,
    predicate,
    n_max: int,
    mark_kernel: MarkKernel | None = None,
) -> SpineCheck:
    """Exact rational check of the size-biased spine identity, truncated to
    trees with at most n_max vertices.

    Left side: direct enumeration, sum over trees t and vertices v at depth
    k of P(T = t) times the mark-averaged predicate of the ancestral line.
    Right side: the same sum with each pointed probability recomputed from
    the cut construction's own steps (size-biased spine degree, uniform
    slot, independent bushes and graft), which must reproduce P(T = t)
    pointed at v exactly.
    """
    if law.exact_mean() is None:
        raise ParamOutOfRange("exact verification needs a law with rational pmf")
    mean = law.exact_mean()
    if mean != 1:
        raise ParamOutOfRange(f"law mean is {mean}, identity wants exactly 1")
    if law.kind == "finite":
        supp = [j for j in range(law.probs.shape[0]) if law.exact_pmf(j) > 0]
    else:
        supp = [j for j in range(n_max) if law.exact_pmf(j) > 0]
    lhs = Fraction(0)
    rhs = Fraction(0)
    pointwise_ok = True
    n_pointed = 0
    for seq in _enum_trees(supp, n_max):
        tree = PlaneTree.from_outdegrees(seq)
        p_tree = Fraction(1)
        for d in seq:
            p_tree *= law.exact_pmf(d)
        sizes = tree.subtree_sizes()

        def subtree_prob(w):
            p = Fraction(1)
            for u in range(w, w + int(sizes[w])):
                p *= law.exact_pmf(int(tree.outdeg[u]))
            return p

        for v in range(1, tree.size + 1):
            if int(tree.depth[v]) != k:
                continue
            n_pointed += 1
            line = ancestors(tree, v)
            line_degs = [int(tree.outdeg[u]) for u in line]
            # construction probability of this pointed tree
            p_point = Fraction(1)
            for i in range(k):
                u = int(line[i])
                d = int(tree.outdeg[u])
                p_point *= Fraction(d) * law.exact_pmf(d) / mean  # size-biased degree
                p_point *= Fraction(1, d)  # uniform continuation slot
                for ch in tree.children(u):
                    if int(ch) != int(line[i + 1]):
                        p_point *= subtree_prob(int(ch))
            p_point *= subtree_prob(v)  # the tip graft
            if p_point != p_tree:
                pointwise_ok = False
            wf = _line_weight(line_degs, mark_kernel, predicate)
            lhs += p_tree * wf
            rhs += p_point * wf
    return SpineCheck(lhs=lhs, rhs=rhs, pointwise_ok=pointwise_ok, n_pointed=n_pointed)
