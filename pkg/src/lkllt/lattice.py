"""Integer-lattice distributions and the discrete difference calculus.

A :class:`LatticeDist` stores a finitely supported probability mass function
as ``(offset, pmf)``: mass ``pmf[i]`` sits at the integer ``offset + i``.
A :class:`SignedSeq` is the signed analogue used for difference operators
and sequence norms.  Both are immutable; every operation returns a new
value.  Cumulative distribution functions are never materialized: the
identity "first difference of the CDF at j equals the mass at j+1" lets all
CDF-difference functionals be computed from pmf differences.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDistribution, InvalidParameter

_NORM_TOL = 1e-9  # reject mass vectors whose sum is further than this from 1


def _trim(offset: int, values: np.ndarray) -> tuple[int, np.ndarray]:
    """Drop exact zeros from both ends; interior zeros are kept."""
    nz = np.flatnonzero(values)
    if nz.size == 0:
        return 0, np.zeros(0)
    lo, hi = nz[0], nz[-1] + 1
    return offset + int(lo), values[lo:hi]


@dataclass(frozen=True)
class LatticeDist:
    """A finitely supported probability distribution on the integers."""

    offset: int
    pmf: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.pmf, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidDistribution("pmf must be a nonempty 1-d array")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise InvalidDistribution("pmf entries must be finite and nonnegative")
        off, arr = _trim(int(self.offset), arr)
        if arr.size == 0:
            raise InvalidDistribution("pmf has no positive mass")
        total = float(arr.sum())
        if abs(total - 1.0) > _NORM_TOL:
            raise InvalidDistribution(f"pmf sums to {total!r}, not 1")
        arr = arr / total
        arr.flags.writeable = False
        object.__setattr__(self, "offset", off)
        object.__setattr__(self, "pmf", arr)

    @property
    def support_end(self) -> int:
        """One past the largest support point."""
        return self.offset + len(self.pmf)

    def mean(self) -> float:
        k = np.arange(len(self.pmf))
        return self.offset + float(np.dot(k, self.pmf))

    def variance(self) -> float:
        k = np.arange(len(self.pmf), dtype=float)
        m = float(np.dot(k, self.pmf))
        return float(np.dot((k - m) ** 2, self.pmf))

    def cdf(self) -> np.ndarray:
        """CDF values at the support points offset, offset+1, ..."""
        return np.cumsum(self.pmf)

    def shift(self, j: int) -> "LatticeDist":
        return LatticeDist(self.offset + int(j), self.pmf)

    def as_seq(self) -> "SignedSeq":
        return SignedSeq(self.offset, self.pmf)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeDist):
            return NotImplemented
        if len(self.pmf) != len(other.pmf):
            return False
        return self.offset == other.offset and bool(np.all(self.pmf == other.pmf))

    def to_json(self) -> str:
        return json.dumps({"offset": self.offset, "pmf": list(self.pmf)})

    @staticmethod
    def from_json(text: str) -> "LatticeDist":
        obj = json.loads(text)
        return LatticeDist(int(obj["offset"]), np.asarray(obj["pmf"], dtype=float))


@dataclass(frozen=True)
class SignedSeq:
    """A finitely supported signed real sequence on the integers."""

    offset: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1:
            raise InvalidParameter("values must be a 1-d array")
        off, arr = _trim(int(self.offset), arr)
        arr = np.array(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "offset", off)
        object.__setattr__(self, "values", arr)

    @property
    def support_end(self) -> int:
        return self.offset + len(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedSeq):
            return NotImplemented
        if len(self.values) != len(other.values):
            return False
        return self.offset == other.offset and bool(np.all(self.values == other.values))


def dist_from_weights(offset: int, weights) -> LatticeDist:
    """Normalize a nonnegative weight vector into a LatticeDist.

    Mass at ``offset + i`` is ``weights[i] / sum(weights)``.  Raises
    InvalidDistribution for all-zero, negative or non-finite weights.
    """
    arr = np.asarray(weights, dtype=float)
    if arr.size == 0 or not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise InvalidDistribution("weights must be finite and nonnegative")
    total = arr.sum()
    if total <= 0:
        raise InvalidDistribution("weights sum to zero")
    return LatticeDist(*_trim(int(offset), arr / total))


def smooth_uniform(F: LatticeDist, m: int) -> LatticeDist:
    """Convolve F with the uniform distribution on {0, ..., m-1}.

    For m = 1 this returns F itself.
    """
    if m < 1:
        raise InvalidParameter("m must be a positive integer")
    if m == 1:
        return F
    kernel = np.full(m, 1.0 / m)
    return LatticeDist(F.offset, np.convolve(F.pmf, kernel))


def _diff_once(values: np.ndarray) -> np.ndarray:
    # (Delta f)(k) = f(k+1) - f(k); support gains one point on the left
    return np.diff(values, prepend=0.0, append=0.0)


def difference(s: SignedSeq, n: int) -> SignedSeq:
    """n-th forward difference of a finite sequence (zero-extended).

    The support grows left by n; n = 0 is the identity.
    """
    if n < 0:
        raise InvalidParameter("n must be nonnegative")
    vals = s.values
    for _ in range(n):
        vals = _diff_once(vals)
    return SignedSeq(s.offset - n, vals)


def span_difference(s: SignedSeq, n: int, m: int) -> SignedSeq:
    """n-fold span-m difference: one step maps f(j) to f(j+m) - f(j)."""
    if n < 0:
        raise InvalidParameter("n must be nonnegative")
    if m < 1:
        raise InvalidParameter("m must be a positive integer")
    offset, vals = s.offset, s.values
    for _ in range(n):
        ext = np.zeros(len(vals) + m)
        ext[: len(vals)] += vals   # f(j + m) term, indexed from offset - m
        ext[m:] -= vals            # f(j) term
        vals = ext
        offset -= m
    return SignedSeq(offset, vals)


def seq_norm(s: SignedSeq, p) -> float:
    """Sequence norm for p in {1, 2, inf}; zero for the empty sequence."""
    if s.values.size == 0:
        return 0.0
    if p == 1:
        return float(np.abs(s.values).sum())
    if p == 2:
        return float(math.sqrt(np.dot(s.values, s.values)))
    if p == math.inf:
        return float(np.abs(s.values).max())
    raise InvalidParameter(f"unsupported norm p={p!r}")


def convolve(F: LatticeDist, G: LatticeDist) -> LatticeDist:
    """Exact convolution (law of the sum of independent variables)."""
    return LatticeDist(F.offset + G.offset, np.convolve(F.pmf, G.pmf))
