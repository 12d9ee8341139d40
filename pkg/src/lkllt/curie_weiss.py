"""Mean-field Ising (Curie-Weiss) magnetization machinery.

The magnetization W of n two-valued spins under the complete-graph Gibbs
measure has an exactly computable law (one weight per spin-down count), an
attracting mean-field magnetization m0 solving m = tanh(beta*m + h), and a
single-site heat-bath chain whose +-2 jump probabilities are closed-form
functions of W alone.  Everything here is exact except the optional Monte
Carlo sampling of W, which draws from the exact law (no burn-in error).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NumericalFailure
from .lattice import LatticeDist, dist_from_weights
from .metrics import KOLMOGOROV, LOCAL, TOTAL_VARIATION, WASSERSTEIN, distance
from .report import RateTable
from .smoothing import PairModel, exact_pair_stats, pair_bound_d1, pair_bound_d2
from .tp import tp_dist, tp_params


@dataclass(frozen=True)
class CWParams:
    n: int
    beta: float
    h: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter("n must be a positive integer")
        if self.beta < 0:
            raise InvalidParameter("beta must be nonnegative")


@dataclass(frozen=True)
class CWState:
    n: int
    w: int

    def __post_init__(self):
        if abs(self.w) > self.n or (self.w - self.n) % 2 != 0:
            raise InvalidParameter("magnetization must satisfy |w| <= n, w = n mod 2")


def parity_shift(n: int) -> int:
    """0 for even n, 1 for odd n: (W + shift)/2 lives on the unit lattice."""
    return (1 - (-1) ** n) // 2


def cw_exact_pmf(params: CWParams, half_lattice: bool = False) -> LatticeDist:
    """Exact law of the magnetization W (or of (W + parity)/2).

    Weights binom(n, k) * exp(beta*(w^2 - n)/(2n) + h*w) over the spin-down
    count k (w = n - 2k), accumulated in log space with max subtraction.
    The full-lattice law has span 2 (interior zeros); the half-lattice law is
    the unit-span law of (W + parity_shift(n)) / 2.
    """
    n, beta, h = params.n, params.beta, params.h
    k = np.arange(n + 1)
    w = n - 2 * k
    logw = (
        np.array([math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1) for i in k])
        + beta * (w.astype(float) ** 2 - n) / (2.0 * n)
        + h * w
    )
    weights = np.exp(logw - logw.max())
    # index by w increasing: k = n..0
    weights = weights[::-1]
    if half_lattice:
        delta = parity_shift(n)
        return dist_from_weights((-n + delta) // 2, weights)
    full = np.zeros(2 * n + 1)
    full[::2] = weights
    return dist_from_weights(-n, full)


def cw_m0(beta: float, h: float) -> float:
    """The mean-field magnetization: root of m = tanh(beta*m + h).

    Unique for beta < 1.  For h = 0 and beta >= 1 the equation has symmetric
    solutions +-m*; the nonnegative one is returned (its square, which is all
    the smoothing bounds use, is the same for either branch).
    """
    if beta < 0:
        raise InvalidParameter("beta must be nonnegative")

    def f(m: float) -> float:
        return math.tanh(beta * m + h) - m

    if h == 0.0 and beta <= 1.0:
        return 0.0
    if h == 0.0:
        lo, hi = 1e-8, 1.0
    else:
        if beta >= 1.0:
            raise InvalidParameter("beta must be < 1 when h != 0")
        lo, hi = -1.0, 1.0
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    if abs(f(root)) >= 1e-14:
        raise NumericalFailure(f"fixed point residual {f(root)!r} too large")
    return root


def _q_arrays(w: np.ndarray, params: CWParams):
    """Vectorized closed-form jump probabilities of the heat-bath chain.

    All spin-down sites see the leave-one-out magnetization (w+1)/n and all
    spin-up sites see (w-1)/n, so every quantity is a function of w alone.
    Returns (q2, q_neg2, q22, q_neg2_neg2).
    """
    n, beta, h = params.n, params.beta, params.h
    w = np.asarray(w, dtype=float)
    down = (n - w) / 2.0
    up = (n + w) / 2.0
    p_up_after_down = 0.5 * (1.0 + np.tanh(beta * (w + 1) / n + h))
    p_dn_after_up = 0.5 * (1.0 - np.tanh(beta * (w - 1) / n + h))
    q2 = down / n * p_up_after_down
    qn2 = up / n * p_dn_after_up
    # second +2 step starts from w+2 with one fewer down spin
    p_up_2 = 0.5 * (1.0 + np.tanh(beta * (w + 3) / n + h))
    q22 = q2 * (down - 1) / n * p_up_2
    p_dn_2 = 0.5 * (1.0 - np.tanh(beta * (w - 3) / n + h))
    qn2n2 = qn2 * (up - 1) / n * p_dn_2
    return q2, qn2, q22, qn2n2


def cw_q(state: CWState, params: CWParams) -> tuple[float, float, float, float]:
    """Exact (Q(+2), Q(-2), Q(+2,+2), Q(-2,-2)) at one magnetization value."""
    if state.n != params.n:
        raise InvalidParameter("state and params disagree on n")
    q2, qn2, q22, qn2n2 = _q_arrays(np.array([state.w]), params)
    return float(q2[0]), float(qn2[0]), float(q22[0]), float(qn2n2[0])


class CWPairModel(PairModel):
    """Stationary magnetization sampler with exact jump evaluators.

    States are drawn directly from the exact magnetization law, so there is
    no mixing error; only the jump size m = 2 is meaningful (W moves by 0 or
    +-2 per heat-bath step).
    """

    def __init__(self, params: CWParams):
        self.params = params
        law = cw_exact_pmf(params)
        support = np.arange(law.offset, law.support_end)
        keep = law.pmf > 0
        self.values = support[keep]
        self.probs = law.pmf[keep] / law.pmf[keep].sum()

    def q_block(self, rng: np.random.Generator, count: int, m: int):
        if m != 2:
            raise InvalidParameter("the magnetization chain jumps by +-2 only")
        w = rng.choice(self.values, size=count, p=self.probs)
        return _q_arrays(w, self.params)

    def exact_stats(self):
        qp, qm, qpp, qmm = _q_arrays(self.values, self.params)
        return exact_pair_stats(self.probs, qp, qm, qpp, qmm, m=2)


def cw_pair_model(params: CWParams, seed: int = 0) -> CWPairModel:
    return CWPairModel(params)


CW_RATE_COLUMNS = [
    "n", "dloc", "dtv", "dk", "dw", "d1_pair_bound", "d2_pair_bound",
]


def cw_rate_experiment(beta: float, h: float, n_grid) -> RateTable:
    """Exact-law convergence rates against the matched translated Poisson.

    For each n the half-lattice law of (W + parity)/2 is compared to
    TP(n*m0/2, n*(1-m0^2)/(4*(1-beta+beta*m0^2))) (which for h = 0 reduces to
    TP(0, n/(4*(1-beta)))) in the local, total variation, Kolmogorov and
    Wasserstein metrics.  The two pair-chain smoothness bounds for the span-2
    magnetization jumps are evaluated exactly from the stationary law, so
    every row is deterministic.
    """
    if not 0 < beta < 1:
        raise InvalidParameter("rate experiment requires 0 < beta < 1")
    m0 = cw_m0(beta, h)
    table = RateTable(
        CW_RATE_COLUMNS,
        metadata={"experiment": "cw_rate", "beta": beta, "h": h, "m0": m0},
    )
    for n in n_grid:
        params = CWParams(int(n), beta, h)
        law = cw_exact_pmf(params, half_lattice=True)
        mu = n * m0 / 2.0
        sigma2 = n * (1.0 - m0 ** 2) / (4.0 * (1.0 - beta + beta * m0 ** 2))
        target = tp_dist(tp_params(mu, sigma2))
        stats = CWPairModel(params).exact_stats()
        table.add(
            int(n),
            distance(law, target, LOCAL),
            distance(law, target, TOTAL_VARIATION),
            distance(law, target, KOLMOGOROV),
            distance(law, target, WASSERSTEIN),
            pair_bound_d1(stats),
            pair_bound_d2(stats),
        )
    return table
