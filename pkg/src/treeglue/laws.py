"""Offspring laws, stable and Mittag-Leffler variates, stick-breaking weights.

Conventions pinned here and relied on everywhere else:

* the one-sided stable variable S_a (0 < a < 1) has Laplace transform
  exp(-lambda^a), so E[S_a^-q] = Gamma(q/a + 1)/Gamma(q + 1);
* ML(eta, theta) is the law with p-th moment
  Gamma(theta+1) Gamma(theta/eta + p + 1) /
  (Gamma(theta/eta + 1) Gamma(theta + p eta + 1)), and ML(eta, 0) = S_eta^-eta;
* GEM(xi, theta) sticks are W_i ~ Beta(1 - xi, theta + i xi), i >= 1,
  P_k = W_k prod_{i<k} (1 - W_i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import gammaln, zeta

from .errors import (
    DegenerateBeta,
    InsufficientAtoms,
    ParamOutOfRange,
    RetriesExhausted,
    TailNotRegular,
    TruncationBudgetExceeded,
)

__all__ = [
    "OffspringLaw",
    "GemWeights",
    "MlmcState",
    "DiversityEstimate",
    "sample_positive_stable",
    "ml_moment",
    "sample_ml",
    "sample_gem",
    "sample_mlmc",
    "sample_mlmc_block",
    "diversity_estimate",
    "bn_normalizer",
    "bn_from_tail",
]

_CRIT_TOL = 1e-9


# ---------------------------------------------------------------------------
# offspring laws


@dataclass(eq=False)
class OffspringLaw:
    """Reproduction law on {0, 1, 2, ...}.

    kind "finite": explicit probabilities 0..K.
    kind "power": exactly critical family with tail index -alpha,
        mu(1) = 1 - c,  mu(k) = w k^(-1-alpha) / (zeta(1+alpha) - 1) for k >= 2,
        w = c (zeta(1+alpha) - 1) / (zeta(alpha) - 1),  mu(0) = c - w.
        c in (0, 1] tunes how much mass sits in the heavy tail; c = 1 kills
        outdegree 1, which leaf-counted models need.
    kind "geometric": mu(k) = (1 - r) r^k; critical iff r = 1/2.
    """

    kind: str
    probs: np.ndarray | None = None
    alpha: float | None = None
    c: float = 1.0
    r: float | None = None
    _exact: tuple | None = field(default=None, repr=False)
    _tables: tuple | None = field(default=None, repr=False)

    # -- constructors

    @classmethod
    def finite(cls, probs) -> "OffspringLaw":
        exact = tuple(Fraction(p) for p in probs)
        if any(p < 0 for p in exact):
            raise ParamOutOfRange("negative probability")
        if sum(exact) != 1 and abs(float(sum(exact)) - 1.0) > 1e-12:
            raise ParamOutOfRange(f"probabilities sum to {float(sum(exact))}")
        arr = np.array([float(p) for p in exact], dtype=np.float64)
        return cls(kind="finite", probs=arr, _exact=exact)

    @classmethod
    def power(cls, alpha: float, c: float = 1.0) -> "OffspringLaw":
        if not 1.0 < alpha < 2.0:
            raise ParamOutOfRange(f"power law needs alpha in (1,2), got {alpha}")
        if not 0.0 < c <= 1.0:
            raise ParamOutOfRange(f"power law needs c in (0,1], got {c}")
        return cls(kind="power", alpha=float(alpha), c=float(c))

    @classmethod
    def geometric(cls, r=Fraction(1, 2)) -> "OffspringLaw":
        rf = Fraction(r)
        if not 0 < rf < 1:
            raise ParamOutOfRange("geometric ratio must lie in (0,1)")
        return cls(kind="geometric", r=float(rf), _exact=(rf,))

    @classmethod
    def from_config(cls, cfg: dict) -> "OffspringLaw":
        t = cfg.get("type")
        if t == "finite":
            return cls.finite(cfg["p"])
        if t == "power":
            return cls.power(cfg["alpha"], cfg.get("c", 1.0))
        if t == "geometric":
            return cls.geometric(cfg.get("r", Fraction(1, 2)))
        raise ParamOutOfRange(f"unknown offspring law type {t!r}")

    def to_config(self) -> dict:
        if self.kind == "finite":
            return {"type": "finite", "p": self.probs.tolist()}
        if self.kind == "power":
            return {"type": "power", "alpha": self.alpha, "c": self.c}
        return {"type": "geometric", "r": self.r}

    # -- power-family constants

    def _power_consts(self):
        a, c = self.alpha, self.c
        z1 = float(zeta(1.0 + a)) - 1.0  # sum_{k>=2} k^(-1-a)
        za = float(zeta(a)) - 1.0  # sum_{k>=2} k^(-a)
        w = c * z1 / za
        return w, z1

    # -- basic functionals

    def pmf(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=np.int64)
        if self.kind == "finite":
            out = np.zeros(k.shape, dtype=np.float64)
            ok = (k >= 0) & (k < self.probs.shape[0])
            out[ok] = self.probs[k[ok]]
            return out
        if self.kind == "geometric":
            out = np.where(k >= 0, (1.0 - self.r) * self.r ** np.maximum(k, 0), 0.0)
            return out
        w, z1 = self._power_consts()
        out = np.zeros(k.shape, dtype=np.float64)
        out[k == 0] = self.c - w
        out[k == 1] = 1.0 - self.c
        big = k >= 2
        out[big] = w * k[big].astype(np.float64) ** (-1.0 - self.alpha) / z1
        return out

    def exact_pmf(self, k: int) -> Fraction | None:
        """Exact rational mu(k) when the kind supports it, else None."""
        if self.kind == "finite":
            return self._exact[k] if 0 <= k < len(self._exact) else Fraction(0)
        if self.kind == "geometric":
            r = self._exact[0]
            return (1 - r) * r**k if k >= 0 else Fraction(0)
        return None

    def mean(self) -> float:
        if self.kind == "finite":
            return float(np.arange(self.probs.shape[0]) @ self.probs)
        if self.kind == "geometric":
            return self.r / (1.0 - self.r)
        return 1.0  # exactly critical by construction

    def exact_mean(self) -> Fraction | None:
        """Exact rational mean when the kind supports it, else None."""
        if self.kind == "finite":
            return sum(k * p for k, p in enumerate(self._exact))
        if self.kind == "geometric":
            r = self._exact[0]
            return r / (1 - r)
        return None

    def is_critical(self) -> bool:
        return abs(self.mean() - 1.0) <= _CRIT_TOL

    def max_degree(self) -> int | None:
        if self.kind == "finite":
            return int(np.nonzero(self.probs > 0)[0].max())
        return None

    def tail(self, x) -> np.ndarray:
        """P(offspring >= x) for real x, exact up to float evaluation."""
        x = np.asarray(x, dtype=np.float64)
        m = np.ceil(np.maximum(x, 0.0)).astype(np.int64)  # P(xi >= x) = P(xi >= ceil x)
        if self.kind == "finite":
            rev = np.concatenate([np.cumsum(self.probs[::-1])[::-1], [0.0]])
            mm = np.minimum(m, self.probs.shape[0])
            return rev[mm]
        if self.kind == "geometric":
            return self.r ** m.astype(np.float64)
        w, z1 = self._power_consts()
        out = np.ones(m.shape, dtype=np.float64)
        out[m == 1] = 1.0 - (self.c - w)
        out[m == 2] = (1.0 - self.c) + w
        big = m >= 3
        if big.any():
            out[big] = w * zeta(1.0 + self.alpha, m[big].astype(np.float64)) / z1
        return out

    def increment_tail(self, x) -> np.ndarray:
        """P(|xi - 1| >= x) for x > 0, the walk-increment tail."""
        x = np.asarray(x, dtype=np.float64)
        up = self.tail(x + 1.0)
        down = np.where(x <= 1.0, self.pmf(np.zeros(x.shape, dtype=np.int64)), 0.0)
        return up + down

    # -- sampling

    def _sampling_tables(self, head: int = 4096):
        if self._tables is None:
            if self.kind == "finite":
                cdf = np.cumsum(self.probs)
                cdf[-1] = 1.0
                self._tables = ("finite", cdf)
            elif self.kind == "geometric":
                self._tables = ("geometric",)
            else:
                ks = np.arange(head, dtype=np.int64)
                cdf = np.cumsum(self.pmf(ks))
                p_tail = float(self.tail(np.float64(head)))
                self._tables = ("power", cdf, p_tail, head)
        return self._tables

    def _power_tail_values(self, count: int, rng) -> np.ndarray:
        """Draw from the law conditioned on >= head, by vectorized bisection."""
        _, _, p_tail, head = self._sampling_tables()
        w, z1 = self._power_consts()
        # target: smallest k with tail(k+1) <= g; 1 - U keeps g > 0 so the
        # doubling search below always terminates
        g = p_tail * (1.0 - rng.random(count))
        return _hurwitz_tail_quantile(w / z1, 1.0 + self.alpha, head, g)

    def sample(self, size: int, rng) -> np.ndarray:
        t = self._sampling_tables()
        if t[0] == "finite":
            return np.searchsorted(t[1], rng.random(size), side="right").astype(np.int64)
        if t[0] == "geometric":
            return rng.geometric(1.0 - self.r, size=size).astype(np.int64) - 1
        _, cdf, p_tail, head = t
        u = rng.random(size)
        out = np.searchsorted(cdf, u, side="right").astype(np.int64)
        in_tail = out >= head
        n_tail = int(in_tail.sum())
        if n_tail:
            out[in_tail] = self._power_tail_values(n_tail, rng)
        return out


def _hurwitz_tail_quantile(coef, s, base, g) -> np.ndarray:
    """Smallest integer j >= base with coef * zeta(s, j + 1) <= g, per entry.

    Inverts tails of the form coef * sum_{i > j} i^(-s); g must be positive.
    """
    g = np.asarray(g, dtype=np.float64)
    lo = np.full(g.shape, base, dtype=np.int64)
    hi = np.full(g.shape, 2 * base, dtype=np.int64)
    while True:
        need = coef * zeta(s, (hi + 1).astype(np.float64)) > g
        if not need.any():
            break
        lo[need] = hi[need]
        hi[need] = hi[need] * 2
    while (hi > lo).any():
        mid = (lo + hi) // 2
        go_up = coef * zeta(s, (mid + 1).astype(np.float64)) > g
        lo = np.where(go_up, mid + 1, lo)
        hi = np.where(go_up, hi, mid)
    return lo


# ---------------------------------------------------------------------------
# one-sided stable and generalized Mittag-Leffler


def _log_zolotarev(u, eta):
    # A(u) = [sin(eta u)^eta sin((1-eta)u)^(1-eta) / sin(u)]^(1/(1-eta));
    # endpoint evaluations may hit log(0) and are rejected by the callers
    with np.errstate(divide="ignore", invalid="ignore"):
        return (
            eta * np.log(np.sin(eta * u))
            + (1.0 - eta) * np.log(np.sin((1.0 - eta) * u))
            - np.log(np.sin(u))
        ) / (1.0 - eta)


def _log_zolotarev_at_zero(eta):
    return (eta * math.log(eta) + (1.0 - eta) * math.log1p(-eta)) / (1.0 - eta)


def sample_positive_stable(alpha: float, rng, size=None):
    """One-sided stable with Laplace transform exp(-lambda^alpha), 0<alpha<1.

    Kanter's representation: S = (A(U)/E)^((1-alpha)/alpha) with U uniform
    on (0, pi) and E a unit exponential.
    """
    if not 0.0 < alpha < 1.0:
        raise ParamOutOfRange(f"stable index must lie in (0,1), got {alpha}")
    scalar = size is None
    m = 1 if scalar else int(size)
    u = rng.uniform(0.0, np.pi, size=m)
    e = rng.exponential(1.0, size=m)
    s = np.exp(((1.0 - alpha) / alpha) * (_log_zolotarev(u, alpha) - np.log(e)))
    return float(s[0]) if scalar else s


def ml_moment(eta: float, theta: float, p: float) -> float:
    """p-th moment of ML(eta, theta) from the Gamma-ratio formula."""
    if not 0.0 < eta < 1.0:
        raise ParamOutOfRange(f"eta must lie in (0,1), got {eta}")
    if theta <= -eta:
        raise ParamOutOfRange(f"theta must exceed -eta, got {theta}")
    if p < 0:
        raise ParamOutOfRange("moment order must be >= 0")
    toe = theta / eta
    return float(
        np.exp(
            gammaln(theta + 1.0)
            + gammaln(toe + p + 1.0)
            - gammaln(toe + 1.0)
            - gammaln(theta + p * eta + 1.0)
        )
    )


def _ml_angles(eta: float, theta: float, m: int, rng) -> np.ndarray:
    """Angles with density prop. to A(u)^(-(1-eta)theta/eta) on (0, pi)."""
    b = (1.0 - eta) * theta / eta
    if theta == 0.0:
        return rng.uniform(0.0, np.pi, size=m)
    la0 = _log_zolotarev_at_zero(eta)
    out = np.empty(m)
    have = 0
    rounds = 0
    if theta > 0.0:
        # A is minimized at 0+, so uniform proposals with weight
        # (A(0)/A(u))^b stay below 1
        while have < m:
            rounds += 1
            if rounds > 10_000:
                raise RetriesExhausted("angle sampler stalled")
            batch = max(1024, 2 * (m - have))
            u = rng.uniform(0.0, np.pi, size=batch)
            acc = np.log(rng.random(batch)) < -b * (_log_zolotarev(u, eta) - la0)
            got = u[acc]
            take = min(got.shape[0], m - have)
            out[have : have + take] = got[:take]
            have += take
        return out
    # theta in (-eta, 0): density prop. to A(u)^|b| blows up at pi like
    # sin(pi-u)^(-q), q = |theta|/eta < 1; propose v = pi - u from the
    # integrable envelope (pi/2)^q min(v, pi-v)^(-q) (valid since every
    # sine in A's numerator is <= 1 and sin v >= (2/pi) min(v, pi-v))
    q = -theta / eta
    while have < m:
        rounds += 1
        if rounds > 10_000:
            raise RetriesExhausted("angle sampler stalled")
        batch = max(1024, 2 * (m - have))
        side = rng.random(batch) < 0.5
        v = (np.pi / 2.0) * rng.random(batch) ** (1.0 / (1.0 - q))
        v = np.where(side, v, np.pi - v)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_env = q * (math.log(np.pi / 2.0)) - q * np.log(np.minimum(v, np.pi - v))
            acc = np.log(rng.random(batch)) < -b * _log_zolotarev(np.pi - v, eta) - log_env
        got = np.pi - v[acc]
        take = min(got.shape[0], m - have)
        out[have : have + take] = got[:take]
        have += take
    return out


def sample_ml(eta: float, theta: float, rng, size=None):
    """Exact generalized Mittag-Leffler sampler.

    Writes the density of ML(eta, theta) jointly with a Zolotarev angle:
    given U = u, W = M^(1/(1-eta)) is Gamma((1-eta)theta/eta + 1) with rate
    A(u), and U has marginal density prop. to A(u)^(-(1-eta)theta/eta).
    Sampling the angle, then the Gamma, is exact; no series truncation.
    At theta = 0 the angle is uniform and this is Kanter's stable sampler
    pushed through x -> x^(-eta).
    """
    if not 0.0 < eta < 1.0:
        raise ParamOutOfRange(f"eta must lie in (0,1), got {eta}")
    if theta <= -eta:
        raise ParamOutOfRange(f"theta must exceed -eta, got {theta}")
    scalar = size is None
    m = 1 if scalar else int(size)
    b = (1.0 - eta) * theta / eta
    u = _ml_angles(eta, theta, m, rng)
    g = rng.gamma(b + 1.0, 1.0, size=m)
    with np.errstate(divide="ignore"):
        vals = np.exp((1.0 - eta) * (np.log(g) - _log_zolotarev(u, eta)))
    return float(vals[0]) if scalar else vals


# ---------------------------------------------------------------------------
# stick breaking


@dataclass
class GemWeights:
    """Stick-breaking atoms in break order plus the unbroken residual."""

    atoms: np.ndarray
    residual: float
    xi: float
    theta: float
    partial: bool = False

    def __post_init__(self):
        s = float(self.atoms.sum()) + self.residual
        if abs(s - 1.0) > 1e-12:
            raise ParamOutOfRange(f"atoms + residual = {s}, expected 1")

    def ranked(self) -> np.ndarray:
        return np.sort(self.atoms)[::-1]

    def __len__(self) -> int:
        return self.atoms.shape[0]


def _stick_matrix(xi, theta, n_rows, n_sticks, rng):
    """n_rows independent GEM(xi, theta) prefixes of fixed length, vectorized.

    Returns (P, residual) with P of shape (n_rows, n_sticks).
    """
    idx = np.arange(1, n_sticks + 1, dtype=np.float64)
    w = rng.beta(1.0 - xi, theta + xi * idx, size=(n_rows, n_sticks))
    keep = np.cumprod(1.0 - w, axis=1)
    p = w.copy()
    p[:, 1:] *= keep[:, :-1]
    return p, keep[:, -1]


def sample_gem(
    xi: float,
    theta: float,
    rng,
    trunc_eps: float = 1e-8,
    max_atoms: int = 2_000_000,
    allow_partial: bool = False,
    ranked: bool = False,
) -> GemWeights:
    """Stick-break GEM(xi, theta) until the residual drops below trunc_eps.

    The residual decays like (atom count)^(-(1-xi)/xi), so tight thresholds
    are exponentially costly in xi; the max_atoms guard raises
    TruncationBudgetExceeded unless allow_partial is set, in which case the
    realized residual is surfaced on the result.
    """
    if not 0.0 < xi < 1.0:
        raise ParamOutOfRange(f"xi must lie in (0,1), got {xi}")
    if theta <= -xi:
        raise ParamOutOfRange(f"theta must exceed -xi, got {theta}")
    if not 0.0 < trunc_eps < 1.0:
        raise ParamOutOfRange("trunc_eps must lie in (0,1)")
    chunks = []
    residual = 1.0
    count = 0
    block = 4096
    while residual >= trunc_eps and count < max_atoms:
        take = min(block, max_atoms - count)
        idx = np.arange(count + 1, count + take + 1, dtype=np.float64)
        w = rng.beta(1.0 - xi, theta + xi * idx, size=take)
        p = residual * w
        np.multiply.accumulate(1.0 - w, out=w)
        p[1:] *= w[:-1]
        chunks.append(p)
        residual *= float(w[-1])
        count += take
        block = min(2 * block, 1 << 20)
        cut = np.nonzero(np.cumsum(p[::-1])[::-1] + residual < trunc_eps)[0]
        if cut.shape[0]:
            # the threshold was crossed inside this chunk; trim back
            k = int(cut[0])
            extra = float(chunks[-1][k:].sum())
            chunks[-1] = chunks[-1][:k]
            residual += extra
            break
    if residual >= trunc_eps and not allow_partial:
        raise TruncationBudgetExceeded(
            f"residual {residual:.3g} after {count} atoms (target {trunc_eps:g}); "
            "raise max_atoms, loosen trunc_eps, or pass allow_partial=True"
        )
    atoms = np.concatenate(chunks) if chunks else np.zeros(0)
    if ranked:
        atoms = np.sort(atoms)[::-1]
    return GemWeights(
        atoms=atoms,
        residual=residual,
        xi=xi,
        theta=theta,
        partial=residual >= trunc_eps,
    )


# ---------------------------------------------------------------------------
# Mittag-Leffler Markov chain


@dataclass(frozen=True)
class MlmcState:
    """First k values of the chain; values[n-1] ~ ML(eta, theta + n - 1)."""

    eta: float
    theta: float
    values: np.ndarray

    def increments(self) -> np.ndarray:
        out = np.empty_like(self.values)
        out[0] = self.values[0]
        out[1:] = np.diff(self.values)
        return out

    def __len__(self) -> int:
        return self.values.shape[0]


def sample_mlmc(eta: float, theta: float, k: int, rng) -> MlmcState:
    """Sample (M_1, ..., M_k) backward from M_k.

    M_k ~ ML(eta, theta + k - 1); then M_n = beta_n M_{n+1} with independent
    beta_n ~ Beta((theta + n - 1)/eta + 1, 1/eta - 1), which telescopes the
    Gamma-ratio moments exactly.
    """
    if eta == 1.0:
        raise DegenerateBeta("eta = 1 makes the Beta second parameter 0")
    if not 0.0 < eta < 1.0:
        raise ParamOutOfRange(f"eta must lie in (0,1), got {eta}")
    if theta <= -eta:
        raise ParamOutOfRange(f"theta must exceed -eta, got {theta}")
    if k < 1:
        raise ParamOutOfRange("chain length must be >= 1")
    vals = sample_mlmc_block(eta, theta, k, 1, rng)[0]
    return MlmcState(eta=eta, theta=theta, values=vals)


def sample_mlmc_block(eta: float, theta: float, k: int, n_chains: int, rng) -> np.ndarray:
    """n_chains independent chain prefixes, shape (n_chains, k)."""
    if eta == 1.0:
        raise DegenerateBeta("eta = 1 makes the Beta second parameter 0")
    if not 0.0 < eta < 1.0:
        raise ParamOutOfRange(f"eta must lie in (0,1), got {eta}")
    if theta <= -eta:
        raise ParamOutOfRange(f"theta must exceed -eta, got {theta}")
    if k < 1:
        raise ParamOutOfRange("chain length must be >= 1")
    vals = np.empty((n_chains, k), dtype=np.float64)
    vals[:, k - 1] = sample_ml(eta, theta + k - 1.0, rng, size=n_chains)
    for n in range(k - 1, 0, -1):
        beta_n = rng.beta((theta + n - 1.0) / eta + 1.0, 1.0 / eta - 1.0, size=n_chains)
        vals[:, n - 1] = beta_n * vals[:, n]
    return vals


# ---------------------------------------------------------------------------
# diversity


@dataclass(frozen=True)
class DiversityEstimate:
    value: float
    spread: float
    n_atoms: int  # deepest trusted rank, not the raw atom count


def diversity_estimate(weights: GemWeights) -> DiversityEstimate:
    """Truncation estimate of the xi-diversity lim Gamma(1-xi) k P_(k)^xi.

    Stick breaking retains atoms in break order, so the ranked list is only
    complete down to sizes well above the largest atom hiding in the
    residual (about residual / atom count). Ranks below that floor mix
    retained and missing atoms and are discarded; the estimator is the
    median over the last trusted octave of ranks, and the spread is the
    max-min range over the last trusted decade.
    """
    n = len(weights)
    if n < 50:
        raise InsufficientAtoms(f"need >= 50 atoms, have {n}")
    xi = weights.xi
    ranked = weights.ranked()
    floor = 10.0 * weights.residual / n
    k_star = int(np.count_nonzero(ranked >= floor))
    # small-diversity draws legitimately leave few trusted ranks; censoring
    # them would bias the estimator's law, so only refuse the unusable case
    if k_star < 8:
        raise InsufficientAtoms(
            f"only {k_star} atoms above the truncation floor; tighten trunc_eps"
        )
    ks = np.arange(1, k_star + 1, dtype=np.float64)
    est = math.gamma(1.0 - xi) * ks * ranked[:k_star] ** xi
    value = float(np.median(est[k_star // 2 :]))
    window = est[max(k_star // 10, 1) - 1 :]
    return DiversityEstimate(
        value=value, spread=float(window.max() - window.min()), n_atoms=k_star
    )


# ---------------------------------------------------------------------------
# tail normalizer


def bn_from_tail(tail_fn, alpha: float, n: float) -> float:
    """|(1-alpha)/Gamma(2-alpha)|^(-1/alpha) * inf{y >= 0 : tail(y) <= 1/n}.

    tail_fn must be nonincreasing; the generalized inverse is located by
    doubling and bisection, so step tails resolve to their jump points.
    """
    if not 1.0 < alpha < 2.0:
        raise ParamOutOfRange(f"alpha must lie in (1,2), got {alpha}")
    if n <= 1:
        raise ParamOutOfRange("n must exceed 1")
    target = 1.0 / float(n)
    pref = abs((1.0 - alpha) / math.gamma(2.0 - alpha)) ** (-1.0 / alpha)
    if tail_fn(0.0) <= target:
        return 0.0
    hi = 1.0
    steps = 0
    while tail_fn(hi) > target:
        hi *= 2.0
        steps += 1
        if steps > 200:
            raise TailNotRegular("tail does not reach 1/n within 2^200")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if tail_fn(mid) <= target:
            hi = mid
        else:
            lo = mid
    return pref * hi


def bn_normalizer(law: OffspringLaw, n: float, conditioning: str = "vertices") -> float:
    """Scaling constant b_n for a heavy-tailed offspring law.

    conditioning "vertices": inverts the walk-increment tail P(|xi - 1| >= y).
    conditioning "leaves": (|Gamma(1-alpha)| / mu(0))^(1/alpha) times
    inf{y >= 0 : P(xi > y) <= 1/n}.
    """
    if law.kind != "power":
        raise TailNotRegular(
            f"b_n needs a regularly varying tail with index in (-2,-1); "
            f"law kind {law.kind!r} does not have one"
        )
    alpha = law.alpha
    if conditioning == "vertices":
        return bn_from_tail(lambda y: float(law.increment_tail(y)), alpha, n)
    if conditioning != "leaves":
        raise ParamOutOfRange(f"unknown conditioning {conditioning!r}")
    p0 = float(law.pmf(np.int64(0)))
    if p0 <= 0.0:
        raise ParamOutOfRange("leaf normalization needs mu(0) > 0")
    if n <= 1:
        raise ParamOutOfRange("n must exceed 1")
    target = 1.0 / float(n)
    # strict tail P(xi > y) = P(xi >= floor(y) + 1)
    tail_strict = lambda y: float(law.tail(math.floor(y) + 1.0))
    if tail_strict(0.0) <= target:
        inv = 0.0
    else:
        hi = 1.0
        steps = 0
        while tail_strict(hi) > target:
            hi *= 2.0
            steps += 1
            if steps > 200:
                raise TailNotRegular("tail does not reach 1/n within 2^200")
        lo = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if tail_strict(mid) <= target:
                hi = mid
            else:
                lo = mid
        inv = hi
    pref = (abs(math.gamma(1.0 - alpha)) / p0) ** (1.0 / alpha)
    return pref * inv
