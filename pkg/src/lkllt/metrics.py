"""Probability metrics on the integer lattice and the smoothing functional.

Metrics between two lattice laws F, G (in CDF terms):

* Kolmogorov:       sup_j |F(j) - G(j)|
* Wasserstein:      sum_j |F(j) - G(j)|
* total variation:  (1/2) sum_j |f(j) - g(j)|        (pmf difference)
* local:            sup_j |f(j) - g(j)|
* local with span m: the local metric between the laws smoothed by
  uniform{0..m-1}; equals (1/m) sup_k |P[X in (k, k+m]] - P[Y in (k, k+m]]|.

The smoothing functional D(F; n, m) = m * l1-norm of the (n+1)-th difference
of the CDF of F smoothed by uniform{0..m-1}.  Small values mean the point
masses of F vary slowly, which is what upgrades weak-metric bounds into
local ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .lattice import (
    LatticeDist,
    SignedSeq,
    difference,
    seq_norm,
    smooth_uniform,
    span_difference,
)


@dataclass(frozen=True)
class Metric:
    """A metric selector; ``span`` only matters for the local metric."""

    name: str
    span: int = 1

    def __post_init__(self):
        if self.name not in ("kolmogorov", "wasserstein", "tv", "local"):
            raise InvalidParameter(f"unknown metric {self.name!r}")
        if self.span < 1:
            raise InvalidParameter("span must be a positive integer")
        if self.span > 1 and self.name != "local":
            raise InvalidParameter("span > 1 is only defined for the local metric")


KOLMOGOROV = Metric("kolmogorov")
WASSERSTEIN = Metric("wasserstein")
TOTAL_VARIATION = Metric("tv")
LOCAL = Metric("local")


def local_span(m: int) -> Metric:
    """The local metric evaluated on laws averaged over m-blocks."""
    return Metric("local", m)


def _aligned(F: LatticeDist, G: LatticeDist) -> tuple[np.ndarray, np.ndarray]:
    lo = min(F.offset, G.offset)
    hi = max(F.support_end, G.support_end)
    pf = np.zeros(hi - lo)
    pg = np.zeros(hi - lo)
    pf[F.offset - lo : F.support_end - lo] = F.pmf
    pg[G.offset - lo : G.support_end - lo] = G.pmf
    return pf, pg


def distance(F: LatticeDist, G: LatticeDist, kind: Metric) -> float:
    """Distance between two lattice laws under the selected metric."""
    if kind.name == "local":
        if kind.span > 1:
            F = smooth_uniform(F, kind.span)
            G = smooth_uniform(G, kind.span)
        pf, pg = _aligned(F, G)
        return float(np.abs(pf - pg).max())
    pf, pg = _aligned(F, G)
    if kind.name == "tv":
        return 0.5 * float(np.abs(pf - pg).sum())
    cdf_gap = np.abs(np.cumsum(pf) - np.cumsum(pg))
    if kind.name == "kolmogorov":
        return float(cdf_gap.max())
    return float(cdf_gap.sum())  # wasserstein


def smoothing_term(F: LatticeDist, n: int, m: int) -> float:
    """Order-n, span-m smoothness of a lattice law.

    Defined as the supremum over |g| <= 1 of E[n-fold span-m difference of g
    at W], which equals m^n times the l1-norm of the n-th unit difference of
    the pmf of F averaged over n independent uniform{0..m-1} blocks.  For
    m = 1 this is the l1-norm of the n-th pmf difference (equivalently of the
    (n+1)-th CDF difference); for n = 1 it is m times the l1-norm of the
    second CDF difference of the m-block-averaged law.  Always in (0, 2^(n+1)].

    Computed here by the n-fold averaging route; :func:`smoothing_term_dual`
    evaluates the same supremum through its extremal test function and exists
    as an independent cross-check.
    """
    if n < 1 or m < 1:
        raise InvalidParameter("n and m must be positive integers")
    smoothed = F
    for _ in range(n):
        smoothed = smooth_uniform(smoothed, m)
    return (m ** n) * seq_norm(difference(smoothed.as_seq(), n), 1)


def cdf_diff_norm(F: LatticeDist, order: int, m: int) -> float:
    """l1-norm of the order-th unit difference of the CDF of the m-smoothed law.

    This is the norm appearing on the right-hand side of the interpolation
    inequalities; the first CDF difference at j equals the mass at j+1, so it
    is computed as the (order-1)-th difference of the smoothed pmf.
    """
    if order < 1 or m < 1:
        raise InvalidParameter("order and m must be positive integers")
    return seq_norm(difference(smooth_uniform(F, m).as_seq(), order - 1), 1)


def smoothing_term_dual(F: LatticeDist, n: int, m: int) -> float:
    """Evaluate the smoothing term as sup over |g| <= 1 of E[span-m n-th difference of g at W].

    The supremum is attained by the sign pattern of the adjoint difference of
    the pmf; the expectation is then evaluated literally, by applying the
    span-m difference operator to that extremal g.  Exists as an independent
    cross-check of :func:`smoothing_term`.
    """
    if n < 1 or m < 1:
        raise InvalidParameter("n and m must be positive integers")
    pmf = F.pmf
    # adjoint of one span-m difference step on mass vectors: p(i-m) - p(i)
    coeffs = pmf
    lo = F.offset
    for _ in range(n):
        ext = np.zeros(len(coeffs) + m)
        ext[m:] += coeffs
        ext[: len(coeffs)] -= coeffs
        coeffs = ext
    g = SignedSeq(lo, np.sign(coeffs))
    dg = span_difference(g, n, m)
    # E (Delta_m^n g)(W): align dg with the pmf support
    pos = F.offset + np.arange(len(pmf)) - dg.offset
    ok = (pos >= 0) & (pos < len(dg.values))
    return float(np.dot(pmf[ok], dg.values[pos[ok]]))
