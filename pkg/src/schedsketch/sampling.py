"""Randomized sublinear-time approximation via uniform job sampling.

Instead of reading every job, draw n' uniform samples (with
replacement), bucket them exactly like the streaming algorithms, scale
the counts by n/n', and drop groups whose estimate is too small to be
statistically reliable (at most 2*tau, where tau = n * sampling-mass
threshold).  The surviving estimated sketch feeds the same
rounded-load arithmetic as the streaming side and additionally yields
an estimated schedule sketch whose intervals are padded for the
estimation error.

Access to jobs goes through a `SampleAccess`: either materialized
arrays or an implicit family whose ``fetch`` is a pure function of the
job id, so a 10^7-job instance costs O(1) memory.  Everything is
deterministic under (instance, params, seed).

When the derived n' reaches n, sampling degenerates to reading all n
jobs exactly once; the estimates are then exact and the thresholding
still applies.
"""

from __future__ import annotations

import math
from dataclasses import replace
from fractions import Fraction
from typing import Protocol

import numpy as np

from .core import (
    SAMPLE_ALPHA,
    SAMPLE_BOUNDED,
    AlgoParams,
    GeometricBuckets,
    buckets_for,
    derive_params,
    snapped_floor,
)
from .errors import InputContractError
from .model import Instance, RunReport, ScheduleSketch
from .streaming import RoundedValues

_CHUNK = 1 << 20


class SampleAccess(Protocol):
    """Random access to jobs by id (1-based), possibly implicit."""

    n: int

    def fetch(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (p, depth) arrays for the given job ids."""
        ...


class ArrayAccess:
    """Materialized instance backing."""

    def __init__(self, inst: Instance):
        if inst.depth is None:
            raise InputContractError("sampling needs job depths; compute them first")
        self.inst = inst
        self.n = inst.n
        self._p = inst.p
        self._depth = inst.depth

    def fetch(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        idx = ids - 1
        return self._p[idx], self._depth[idx]


class ChainAccess:
    """Implicit chain family: m*q chains of h unit jobs, O(1) memory."""

    def __init__(self, m: int, q: int, h: int):
        self.m = m
        self.q = q
        self.h = h
        self.n = m * q * h
        self.cstar = q * h

    def fetch(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        depth = (ids - 1) % self.h + 1
        return np.ones(ids.size, dtype=np.int64), depth.astype(np.int64)


class TwoValueAccess:
    """Implicit two-valued family: ids <= n_big get p_big, the rest p_small.

    Depth is 1 everywhere, so with m = 1 the optimum is exactly the
    total processing time — a closed form the statistical tests rely on.
    """

    def __init__(self, n: int, n_big: int, p_big: int, p_small: int):
        if not (1 <= n_big <= n) or p_big < p_small or p_small < 1:
            raise InputContractError("need 1 <= n_big <= n and p_big >= p_small >= 1")
        self.n = n
        self.n_big = n_big
        self.p_big = p_big
        self.p_small = p_small

    @property
    def total_p(self) -> int:
        return self.n_big * self.p_big + (self.n - self.n_big) * self.p_small

    def fetch(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        p = np.where(ids <= self.n_big, self.p_big, self.p_small).astype(np.int64)
        return p, np.ones(ids.size, dtype=np.int64)


class CountingAccess:
    """Wraps an access and counts every id fetched (the sublinearity meter)."""

    def __init__(self, inner: SampleAccess):
        self._inner = inner
        self.n = inner.n
        self.ids_fetched = 0
        self.calls = 0

    def fetch(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        self.ids_fetched += int(ids.size)
        self.calls += 1
        return self._inner.fetch(ids)


def estimate_counts(
    access: SampleAccess,
    n_draws: int,
    buckets: GeometricBuckets,
    rng: np.random.Generator,
    min_p: float | None = None,
    p_cap: int | None = None,
    h_cap: int | None = None,
) -> tuple[dict[tuple[int, int], int], int]:
    """Bucketed counts of n_draws uniform samples (or a full scan).

    Exactly ``n_draws`` draws are performed unless ``n_draws >= n``, in
    which case every job is read once instead.  Jobs with p <= min_p
    are discarded after being drawn: they reduce the counted jobs, not
    the number of draws.  Returns ({(d, u): count}, draws_performed).
    """
    if n_draws < 1:
        raise InputContractError(f"need at least one draw, got {n_draws}")
    n = access.n
    full_scan = n_draws >= n
    draws = n if full_scan else n_draws
    counts: dict[tuple[int, int], int] = {}
    done = 0
    while done < draws:
        take = min(_CHUNK, draws - done)
        if full_scan:
            ids = np.arange(done + 1, done + take + 1, dtype=np.int64)
        else:
            ids = rng.integers(1, n + 1, size=take, dtype=np.int64)
        p, depth = access.fetch(ids)
        done += take
        if p_cap is not None and p.size and int(p.max()) > p_cap:
            bad = int(p.max())
            raise InputContractError(f"sampled job has p={bad} > c={p_cap}")
        if h_cap is not None and depth.size and int(depth.max()) > h_cap:
            raise InputContractError(f"sampled job has depth {int(depth.max())} > h={h_cap}")
        if min_p is not None:
            keep = p > min_p
            p, depth = p[keep], depth[keep]
        if p.size == 0:
            continue
        u = buckets.index_array(p)
        keys, cnts = np.unique(depth * (1 << 32) + u, return_counts=True)
        for key, cnt in zip(keys.tolist(), cnts.tolist()):
            du = (key >> 32, key & 0xFFFFFFFF)
            counts[du] = counts.get(du, 0) + cnt
    return counts, draws


def estimate_wmax(access: SampleAccess, n0: int, rng: np.random.Generator) -> int:
    """Largest processing time among n0 uniform draws."""
    if n0 < 1:
        raise InputContractError(f"need at least one draw, got {n0}")
    ids = rng.integers(1, access.n + 1, size=n0, dtype=np.int64)
    p, _ = access.fetch(ids)
    return int(p.max())


def condition_sample_bounded(n: int, m: int, h: int, c: int, epsilon: float) -> bool:
    """Machine bound m <= n*epsilon / (20*h*c)."""
    return 20.0 * m * h * c <= n * epsilon


def condition_sample_alpha(n: int, m: int, h: int, c: int, epsilon: float, alpha: float) -> bool:
    """Machine bound m <= n*alpha*epsilon / (20*c^2*h)."""
    return 20.0 * m * c * c * h <= n * alpha * epsilon


def _scaled_estimates(
    counts: dict[tuple[int, int], int], n: int, draws: int, tau: float
) -> dict[tuple[int, int], float]:
    """ehat = n * count/draws, keeping only groups with ehat > 2*tau."""
    out = {}
    for key, cnt in counts.items():
        ehat = n * cnt / draws
        if ehat > 2.0 * tau:
            out[key] = ehat
    return out


def rand_approx_bounded(access: SampleAccess, params: AlgoParams, *, tight: bool = False) -> RunReport:
    """Sampling scheme for jobs within a factor c with known depths."""
    params.require("c", "h")
    pr = replace(params, n=access.n)
    drv = derive_params(pr, SAMPLE_BOUNDED)
    gb = buckets_for(drv.delta)
    rng = np.random.default_rng(pr.seed)
    counts, draws = estimate_counts(
        access, drv.n_prime, gb, rng, p_cap=pr.c, h_cap=pr.h
    )
    kept = _scaled_estimates(counts, pr.n, draws, drv.tau)
    rp = RoundedValues(gb, 0, drv.k, float(pr.c))
    loads = np.zeros(pr.h)
    for (d, u), ehat in kept.items():
        loads[d - 1] += ehat * rp.value(u)
    loads /= pr.m
    pad_noise = math.floor(3.0 * drv.tau) * drv.k_eff * pr.c
    a_total = 0
    t_total = 0
    times = []
    for load in loads:
        if tight and load == 0.0:
            times.append(t_total)
            continue
        a_total += snapped_floor(load) + pr.c
        t_total += snapped_floor(load / (1.0 - drv.delta)) + pr.c + pad_noise
        times.append(t_total)
    return RunReport(
        algorithm=SAMPLE_BOUNDED,
        A=a_total,
        schedule_sketch=ScheduleSketch(tuple(times), source=SAMPLE_BOUNDED),
        sketch_node_count=len(kept),
        samples_drawn=draws,
        update_count=draws,
        params=pr,
        guarantee_condition_met=condition_sample_bounded(pr.n, pr.m, pr.h, pr.c, pr.epsilon),
        extras={
            "n": pr.n,
            "delta": drv.delta,
            "n_prime": drv.n_prime,
            "n0": 0,
            "tau": drv.tau,
            "cap_triggered": drv.n_prime >= pr.n,
            "estimates": kept,
        },
    )


def rand_approx_alpha(access: SampleAccess, params: AlgoParams, *, tight: bool = False) -> RunReport:
    """Sampling scheme when only the top alpha*n jobs are factor-c bounded.

    A first tiny sample estimates the scale w0 (with probability at
    least 1-gamma the true maximum is at most c*w0); the main sample is
    then filtered at delta*w0/n and bucketed between that filter and
    c*w0, with the top bucket pinned to c*w0.
    """
    params.require("c", "h")
    pr = replace(params, n=access.n)
    drv = derive_params(pr, SAMPLE_ALPHA)
    gb = buckets_for(drv.delta)
    rng = np.random.default_rng(pr.seed)
    w0 = estimate_wmax(access, drv.n0, rng)
    thr = drv.delta * w0 / pr.n
    counts, draws = estimate_counts(
        access, drv.n_prime, gb, rng, min_p=thr, h_cap=pr.h
    )
    kept = _scaled_estimates(counts, pr.n, draws, drv.tau)
    u_lo = gb.floor_log_frac(Fraction(drv.delta) * w0 / pr.n)
    u_hi = gb.floor_log(pr.c * w0)
    rp = RoundedValues(gb, u_lo, u_hi, float(pr.c * w0))
    loads = np.zeros(pr.h)
    dropped_high = 0
    for (d, u), ehat in kept.items():
        if u > u_hi:  # w0 underestimated the top; groups above c*w0 fall outside
            dropped_high += 1
            continue
        loads[d - 1] += ehat * rp.value(u)
    loads /= pr.m
    top = pr.c * w0
    pad_noise = math.floor(3.0 * drv.tau) * drv.k_eff * top + math.floor(drv.delta * w0)
    a_total = 0
    t_total = 0
    times = []
    for load in loads:
        if tight and load == 0.0:
            times.append(t_total)
            continue
        a_total += snapped_floor(load) + top
        t_total += snapped_floor(load / (1.0 - drv.delta)) + top + pad_noise
        times.append(t_total)
    return RunReport(
        algorithm=SAMPLE_ALPHA,
        A=a_total,
        schedule_sketch=ScheduleSketch(tuple(times), source=SAMPLE_ALPHA),
        sketch_node_count=len(kept),
        samples_drawn=drv.n0 + draws,
        update_count=drv.n0 + draws,
        params=pr,
        guarantee_condition_met=condition_sample_alpha(
            pr.n, pr.m, pr.h, pr.c, pr.epsilon, pr.alpha
        ),
        extras={
            "n": pr.n,
            "delta": drv.delta,
            "n_prime": drv.n_prime,
            "n0": drv.n0,
            "tau": drv.tau,
            "w0": w0,
            "cap_triggered": drv.n_prime >= pr.n,
            "dropped_above_top": dropped_high,
            "estimates": kept,
        },
    )


SAMPLING_ALGORITHMS = {
    SAMPLE_BOUNDED: rand_approx_bounded,
    SAMPLE_ALPHA: rand_approx_alpha,
}
