"""Shared parameter handling and geometric bucketing.

Processing times are grouped into geometric buckets: bucket ``u`` holds
the integers ``p`` with ``(1+delta)**u <= p < (1+delta)**(u+1)``.  All
approximation error budgets flow from the single knob ``delta``, which
the streaming algorithms set to ``epsilon/3`` and the sampling
algorithms to ``epsilon/20``.

Powers of ``1+delta`` are irrational for the deltas we care about, so
bucket membership is never decided with floating point alone.  The
value ``1+delta`` (for the IEEE double ``delta``) is an exact rational;
`GeometricBuckets` keeps a table of exact integer bucket boundaries and
answers lookups by bisection, while `bucket_index` follows the
float-estimate-then-verify route.  Both give the bit-exact answer and
are cross-checked in the test suite.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ParamError

STREAM_KNOWN = "stream1"
STREAM_UNKNOWN = "stream2"
STREAM_ALPHA_KNOWN = "stream3"
STREAM_ALPHA_UNKNOWN = "stream4"
SAMPLE_BOUNDED = "sample1"
SAMPLE_ALPHA = "sample2"

STREVAL_MODES = (STREAM_KNOWN, STREAM_UNKNOWN, STREAM_ALPHA_KNOWN, STREAM_ALPHA_UNKNOWN)
SAMPLE_MODES = (SAMPLE_BOUNDED, SAMPLE_ALPHA)
ALL_MODES = STREVAL_MODES + SAMPLE_MODES

#: Absolute slack used when flooring real-valued interval lengths.  The
#: rounded processing times are irrational, so accumulated sums can sit
#: a few ulp below an integer they equal mathematically; values this
#: close to an integer are snapped up before flooring.
FLOOR_SNAP = 1e-9


def snapped_floor(x: float) -> int:
    """Floor ``x``, snapping values within `FLOOR_SNAP` of an integer upward."""
    return math.floor(x + FLOOR_SNAP)


def ceil_div(a: int, b: int) -> int:
    """Ceiling of ``a / b`` for positive integers, without floats."""
    return -(-a // b)


@dataclass(frozen=True)
class AlgoParams:
    """User-facing knobs shared by every algorithm.

    ``confidence_scale`` multiplies the derived sample sizes of the
    randomized algorithms; 1.0 keeps the full worst-case constants, and
    tests use smaller values to trade success probability for runtime.
    """

    epsilon: float
    m: int
    c: int | None = None
    h: int | None = None
    alpha: float = 1.0
    n: int | None = None
    seed: int = 0
    confidence_scale: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ParamError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.m < 1:
            raise ParamError(f"m must be a positive integer, got {self.m}")
        if not (0.0 < self.alpha <= 1.0):
            raise ParamError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.c is not None and self.c < 1:
            raise ParamError(f"c must be a positive integer, got {self.c}")
        if self.h is not None and self.h < 1:
            raise ParamError(f"h must be a positive integer, got {self.h}")
        if self.n is not None and self.n < 1:
            raise ParamError(f"n must be a positive integer, got {self.n}")
        if not self.confidence_scale > 0.0:
            raise ParamError("confidence_scale must be positive")

    def require(self, *fields: str) -> None:
        for name in fields:
            if getattr(self, name) is None:
                raise ParamError(f"parameter {name!r} is required for this algorithm")


@dataclass(frozen=True)
class DerivedParams:
    """Constants derived from `AlgoParams` for one algorithm mode."""

    mode: str
    delta: float
    k: int | None = None
    k_eff: int | None = None
    gamma: float | None = None
    p: float | None = None
    beta: float | None = None
    n_prime: int | None = None
    n0: int | None = None
    tau: float | None = None


class GeometricBuckets:
    """Exact geometric bucket index for positive integers.

    The base is the exact rational value of ``1 + delta`` where
    ``delta`` is the given IEEE double.  Boundary ``u`` of the internal
    table is the smallest integer in bucket ``u``; the table grows
    lazily and lookups are a bisection, so per-call cost is O(log u).
    """

    def __init__(self, delta: float):
        if not (delta > 0.0) or not math.isfinite(delta):
            raise ParamError(f"delta must be a positive finite real, got {delta}")
        base = Fraction(1) + Fraction(delta)
        self.delta = delta
        self.base = float(base)
        self._bnum = base.numerator
        self._bden = base.denominator
        # _pnum/_pden == base ** (len(_bounds) - 1), kept for cheap extension
        self._bounds: list[int] = [1]
        self._pnum = 1
        self._pden = 1
        self._np_cache: np.ndarray | None = None

    def _extend_past(self, p: int) -> None:
        if self._bounds[-1] > p:
            return
        while self._bounds[-1] <= p:
            self._pnum *= self._bnum
            self._pden *= self._bden
            self._bounds.append(ceil_div(self._pnum, self._pden))
        self._np_cache = None

    def index(self, p: int) -> int:
        """Bucket of integer ``p >= 1``: the unique u with base**u <= p < base**(u+1)."""
        p = int(p)
        if p < 1:
            raise ParamError(f"processing time must be >= 1, got {p}")
        self._extend_past(p)
        return bisect_right(self._bounds, p) - 1

    def index_array(self, p: np.ndarray) -> np.ndarray:
        """Vectorized `index` for an integer array with entries >= 1."""
        if p.size == 0:
            return np.empty(0, dtype=np.int64)
        self._extend_past(int(p.max()))
        if self._np_cache is None:
            self._np_cache = np.array(self._bounds, dtype=np.int64)
        return np.searchsorted(self._np_cache, p, side="right") - 1

    def pow_cmp(self, u: int, num: int, den: int = 1) -> int:
        """Sign of base**u - num/den, computed exactly."""
        if den <= 0 or num <= 0:
            raise ParamError("comparison target must be a positive rational")
        if u >= 0:
            lhs = self._bnum**u * den
            rhs = num * self._bden**u
        else:
            lhs = self._bden ** (-u) * den
            rhs = num * self._bnum ** (-u)
        return (lhs > rhs) - (lhs < rhs)

    def floor_log(self, num: int, den: int = 1) -> int:
        """Largest integer u with base**u <= num/den (u may be negative)."""
        if num <= 0 or den <= 0:
            raise ParamError("floor_log argument must be a positive rational")
        est = (math.log(num) - math.log(den)) / math.log(self.base)
        u = math.floor(est)
        while self.pow_cmp(u, num, den) > 0:
            u -= 1
        while self.pow_cmp(u + 1, num, den) <= 0:
            u += 1
        return u

    def floor_log_frac(self, x: Fraction) -> int:
        return self.floor_log(x.numerator, x.denominator)

    def rounded_value(self, u: int) -> float:
        """Upper representative base**(u+1) of bucket u, as a float."""
        return self.base ** (u + 1)


@lru_cache(maxsize=None)
def _buckets_for(delta: float) -> GeometricBuckets:
    return GeometricBuckets(delta)


def buckets_for(delta: float) -> GeometricBuckets:
    """Shared per-delta bucket table (bucket tables are append-only caches)."""
    return _buckets_for(float(delta))


def bucket_index(p: int, delta: float) -> int:
    """Bucket of integer ``p`` for parameter ``delta``.

    A float logarithm gives the estimate; the defining inequality is
    then verified with exact rational arithmetic and the estimate is
    corrected until it holds.
    """
    p = int(p)
    if p < 1:
        raise ParamError(f"processing time must be >= 1, got {p}")
    gb = buckets_for(delta)
    u = math.floor(math.log(p) / math.log(gb.base))
    while gb.pow_cmp(u, p) > 0:
        u -= 1
    while gb.pow_cmp(u + 1, p) <= 0:
        u += 1
    return u


def _scaled_ceil(raw: float, scale: float) -> int:
    return max(1, math.ceil(raw * scale))


def derive_params(params: AlgoParams, mode: str) -> DerivedParams:
    """Compute every derived constant an algorithm mode needs.

    Deterministic: equal inputs give equal outputs.  The sampling modes
    substitute ``k_eff = max(k, 1)`` wherever the sample-size formulas
    divide by k, which keeps them meaningful when c = 1 (k = 0) and only
    makes the sampling more conservative.
    """
    if mode not in ALL_MODES:
        raise ParamError(f"unknown algorithm mode {mode!r}")

    if mode in STREVAL_MODES:
        delta = params.epsilon / 3.0
        if mode == STREAM_KNOWN:
            params.require("c", "h")
            k = buckets_for(delta).index(params.c)
            return DerivedParams(mode=mode, delta=delta, k=k)
        if mode == STREAM_ALPHA_KNOWN:
            params.require("c", "h", "n")
        elif mode == STREAM_ALPHA_UNKNOWN:
            params.require("n")
        return DerivedParams(mode=mode, delta=delta)

    delta = params.epsilon / 20.0
    gb = buckets_for(delta)
    if mode == SAMPLE_BOUNDED:
        params.require("c", "h")
        k = gb.index(params.c)
        k_eff = max(k, 1)
        gamma = 1.0 / (10.0 * params.h * k_eff)
        prob = 5.0 * delta / (2.0 * params.c * params.h * k_eff * params.m)
        beta = delta * prob
        n_raw = (3.0 / beta**2) * math.log(2.0 / gamma)
        n0 = None
    else:
        params.require("c", "h", "n")
        cn_over_delta = Fraction(params.c * params.n) / Fraction(delta)
        k = gb.floor_log_frac(cn_over_delta)
        k_eff = max(k, 1)
        gamma = 1.0 / (10.0 * params.h * k_eff)
        prob = 5.0 * params.alpha * delta / (2.0 * params.c**2 * params.h * k_eff * params.m)
        beta = delta * prob
        n_raw = (3.0 / (params.alpha * beta**2)) * math.log(2.0 / gamma)
        if params.alpha == 1.0:
            n0 = max(1, math.ceil(params.confidence_scale))
        else:
            n0_raw = math.log(gamma) / math.log1p(-params.alpha)
            n0 = _scaled_ceil(n0_raw, params.confidence_scale)
    n_prime = _scaled_ceil(n_raw, params.confidence_scale)
    tau = None if params.n is None else params.n * prob
    return DerivedParams(
        mode=mode,
        delta=delta,
        k=k,
        k_eff=k_eff,
        gamma=gamma,
        p=prob,
        beta=beta,
        n_prime=n_prime,
        n0=n0,
        tau=tau,
    )
