"""Discrete Landau-Kolmogorov interpolation machinery.

The admissibility/exponent algebra for the inequality

    ||D^k f||_q  <=  C ||f||_p^(1-beta) ||D^n f||_r^beta,

its metric form relating pairs of probability metrics through smoothness
norms, and a seeded fuzzer for the two parameter combinations with the known
constant C = sqrt(2): (n=2, p=q=r=1) and (n=3, p=q=inf, r=1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .lattice import LatticeDist, dist_from_weights, smooth_uniform
from .metrics import (
    KOLMOGOROV,
    LOCAL,
    Metric,
    TOTAL_VARIATION,
    WASSERSTEIN,
    cdf_diff_norm,
    distance,
)

SQRT2 = math.sqrt(2.0)


def _inv(x) -> float:
    """1/x with 1/inf = 0; x may be an int or math.inf."""
    if x == math.inf:
        return 0.0
    if not isinstance(x, (int, np.integer)) or x < 1:
        raise InvalidParameter("norm indices must be integers >= 1 or inf")
    return 1.0 / float(x)


def beta_exponent(k: int, n: int, p, q, r) -> tuple[bool, float]:
    """Interpolation exponent and admissibility of a (k, n, p, q, r) tuple.

    Returns (admissible, beta) with beta = (k - 1/q + 1/p) / (n - 1/r + 1/p)
    and admissibility n/q <= (n-k)/p + k/r, reading 1/inf as 0.
    """
    if not 1 <= k < n:
        raise InvalidParameter("need 1 <= k < n")
    ip, iq, ir = _inv(p), _inv(q), _inv(r)
    beta = (k - iq + ip) / (n - ir + ip)
    admissible = n * iq <= (n - k) * ip + k * ir + 1e-15
    return admissible, beta


# metric-pair rows of the interpolation table: (d1, d2) -> beta as a function of l
_COMBO_BETA = {
    ("local", "tv"): lambda l: 1.0 / l,
    ("local", "kolmogorov"): lambda l: 1.0 / l,
    ("local", "wasserstein"): lambda l: 2.0 / (l + 1),
    ("tv", "wasserstein"): lambda l: 1.0 / (l + 1),
    ("kolmogorov", "wasserstein"): lambda l: 1.0 / (l + 1),
}


@dataclass(frozen=True)
class LKCombo:
    """One row of the metric interpolation table.

    d1 is the stronger metric being bounded, d2 the weaker metric on the
    right-hand side, l the difference order of the smoothness norms, m the
    block span; beta is derived from the table.
    """

    d1: Metric
    d2: Metric
    l: int
    m: int = 1

    def __post_init__(self):
        if self.l < 1 or self.m < 1:
            raise InvalidParameter("l and m must be positive integers")
        key = (self.d1.name, self.d2.name)
        if self.d1.span != 1 or self.d2.span != 1 or key not in _COMBO_BETA:
            raise InvalidParameter(f"unsupported metric combination {key}")

    @property
    def beta(self) -> float:
        return _COMBO_BETA[(self.d1.name, self.d2.name)](self.l)


@dataclass(frozen=True)
class LKReport:
    """Both sides of one interpolation inequality, without any constant."""

    lhs: float
    d2_value: float
    smooth_sum: float
    rhs_core: float
    ratio: float


def lk_sides(F: LatticeDist, G: LatticeDist, combo: LKCombo) -> LKReport:
    """Evaluate both sides of the inequality for a pair of lattice laws.

    lhs is d1 between the m-block-averaged laws; rhs_core is
    d2(F, G)^(1-beta) * (sum of the two order-(l+1) smoothed CDF-difference
    norms)^beta.  No constant is applied; ratio = lhs / rhs_core (zero when
    both sides vanish).
    """
    Fs = smooth_uniform(F, combo.m)
    Gs = smooth_uniform(G, combo.m)
    lhs = distance(Fs, Gs, combo.d1)
    d2_value = distance(F, G, combo.d2)
    smooth_sum = cdf_diff_norm(F, combo.l + 1, combo.m) + cdf_diff_norm(
        G, combo.l + 1, combo.m
    )
    beta = combo.beta
    rhs_core = d2_value ** (1.0 - beta) * smooth_sum ** beta
    ratio = lhs / rhs_core if rhs_core > 0 else 0.0
    return LKReport(lhs, d2_value, smooth_sum, rhs_core, ratio)


# the two known-constant cases: case name -> (combo builder, underlying (n,p,q,r))
KNOWN_CASES = {
    # n=2, p=q=r=1: total variation vs Wasserstein with first-order smoothness
    "n2_p1q1r1": LKCombo(TOTAL_VARIATION, WASSERSTEIN, l=1, m=1),
    # n=3, p=q=inf, r=1: local vs Kolmogorov with second-order smoothness
    "n3_pinf_qinf_r1": LKCombo(LOCAL, KOLMOGOROV, l=2, m=1),
}


def random_dist(rng: np.random.Generator, max_width: int = 50) -> LatticeDist:
    """A random test distribution: exponential masses on a random window.

    One draw in eight is a deliberate corner case (point mass, two-point
    law, or a parity-supported law) to stress degenerate geometry.
    """
    corner = rng.integers(0, 8)
    offset = int(rng.integers(-10, 10))
    if corner == 0:
        return dist_from_weights(offset, [1.0])
    if corner == 1:
        gap = int(rng.integers(1, 6))
        w = np.zeros(gap + 1)
        w[0], w[-1] = rng.exponential(), rng.exponential()
        return dist_from_weights(offset, w)
    if corner == 2:
        width = int(rng.integers(1, max_width // 2))
        w = np.zeros(2 * width + 1)
        w[::2] = rng.exponential(size=width + 1)
        return dist_from_weights(offset, w)
    width = int(rng.integers(2, max_width + 1))
    return dist_from_weights(offset, rng.exponential(size=width))


def lk_fuzz(
    trials: int,
    seed: int,
    case: str,
    collect_rows: list | None = None,
) -> float:
    """Worst lhs/rhs_core ratio over random pairs for a known-constant case.

    The asserted inequality carries C = sqrt(2); the returned worst ratio is
    the largest observed lhs / rhs_core, so the inequality holds on the
    sample iff the result is <= sqrt(2).  Deterministic per seed: trial t is
    drawn from a dedicated Philox substream keyed (seed, t-block), so any
    execution order yields the same worst ratio.
    """
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    if case not in KNOWN_CASES:
        raise InvalidParameter(f"unknown case {case!r}; pick from {sorted(KNOWN_CASES)}")
    combo = KNOWN_CASES[case]
    from .rngutil import blocks

    worst = 0.0
    for start, count, rng in blocks(seed, trials):
        for t in range(count):
            F = random_dist(rng)
            G = random_dist(rng)
            rep = lk_sides(F, G, combo)
            worst = max(worst, rep.ratio)
            if collect_rows is not None:
                collect_rows.append(
                    (start + t, case, rep.lhs, rep.rhs_core, rep.ratio)
                )
    return worst
