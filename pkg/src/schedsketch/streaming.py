"""One-pass streaming approximation schemes for the makespan.

All four variants share the same skeleton: read the stream once,
maintain per-(depth, bucket) counters, then turn rounded bucket loads
into a per-depth interval budget.  The sum of the budgets is the
approximate makespan A, and their prefix sums form a schedule sketch
that a second pass can expand into a concrete schedule.

Variants:

* `stream_known`        — c, h and every job's depth given up front.
* `stream_unknown`      — jobs then arcs in topological order; depths,
                          c and h discovered while reading.
* `stream_alpha_known`  — only the largest alpha*n jobs are within a
                          factor c; jobs smaller than p_max/n^2 are
                          skipped and the sketch is size-capped.
* `stream_alpha_unknown`— combines the previous two.

Every returned `RunReport` carries ``guarantee_condition_met``: the
machine-count bound under which the run is a (1+epsilon)-approximation.
The A value itself is always sandwiched between the optimum and a
rounded/padded upper bound regardless of that condition.
"""

from __future__ import annotations

from typing import Iterable

from .core import (
    STREAM_ALPHA_KNOWN,
    STREAM_ALPHA_UNKNOWN,
    STREAM_KNOWN,
    STREAM_UNKNOWN,
    AlgoParams,
    GeometricBuckets,
    buckets_for,
    ceil_div,
    derive_params,
    snapped_floor,
)
from .errors import CycleSuspicionError, InputContractError
from .model import Job, RunReport, ScheduleSketch, StreamEvent
from .sketch import DepthTable, GridSketch, TreeSketch


class RoundedValues:
    """Bucket -> rounded processing time, with the top bucket pinned.

    Non-top buckets use the bucket's upper boundary (1+delta)**(u+1);
    the top bucket is pinned to the known maximum (c, p_max, or c*w0
    depending on the algorithm), so every job's rounded time is between
    its true time and (1+delta) times it.
    """

    def __init__(self, buckets: GeometricBuckets, u_lo: int, u_hi: int, top: float):
        if u_hi < u_lo:
            raise InputContractError(f"empty bucket range [{u_lo}, {u_hi}]")
        self._buckets = buckets
        self.u_lo = u_lo
        self.u_hi = u_hi
        self.top = top

    def value(self, u: int) -> float:
        if u == self.u_hi:
            return self.top
        if not (self.u_lo <= u < self.u_hi):
            raise InputContractError(f"bucket {u} outside [{self.u_lo}, {self.u_hi}]")
        return self._buckets.rounded_value(u)


def condition_bounded(n: int, m: int, h: int, c: int, epsilon: float) -> bool:
    """Machine bound m <= 2*n*epsilon / (3*h*c) for the factor-c variants."""
    return 3.0 * m * h * c <= 2.0 * n * epsilon


def condition_alpha(n: int, m: int, h: int, c: int, epsilon: float, alpha: float) -> bool:
    """Machine bound m <= 2*n*alpha*epsilon / (3*(h+1)*c) for the capped variants."""
    return 3.0 * m * (h + 1) * c <= 2.0 * n * alpha * epsilon


def _bounded_totals(loads, pad: int, tight: bool) -> tuple[int, tuple[int, ...]]:
    """A and sketch times when each depth budget is floor(A_d) + pad."""
    total = 0
    times = []
    for load in loads:
        inc = 0 if (tight and load == 0.0) else snapped_floor(load) + pad
        total += inc
        times.append(total)
    return total, tuple(times)


def _alpha_totals(loads, pad: int, tail: int, tight: bool) -> tuple[int, tuple[int, ...]]:
    """A adds ``tail`` once; each sketch interval is padded by it as well."""
    a_total = 0
    t_total = 0
    times = []
    for load in loads:
        if tight and load == 0.0:
            times.append(t_total)
            continue
        base = snapped_floor(load) + pad
        a_total += base
        t_total += base + tail
        times.append(t_total)
    return a_total + tail, tuple(times)


def _job_only(ev: StreamEvent) -> Job | None:
    """Known-depth modes read jobs and pass over redundant arc events."""
    return ev if isinstance(ev, Job) else None


def stream_known(events: Iterable[StreamEvent], params: AlgoParams, *, tight: bool = False) -> RunReport:
    """Factor-c jobs with given depths: fixed-grid one-pass counting.

    Precondition: 1 <= p_j <= c and 1 <= depth <= h for every job.
    """
    drv = derive_params(params, STREAM_KNOWN)
    gb = buckets_for(drv.delta)
    grid = GridSketch(params.h, drv.k)
    updates = 0
    for ev in iter(events):
        updates += 1
        job = _job_only(ev)
        if job is None:
            continue
        if job.depth is None:
            raise InputContractError(f"job {job.id} carries no depth; this mode requires depths")
        if job.depth > params.h:
            raise InputContractError(f"job {job.id} has depth {job.depth} > h={params.h}")
        if job.p > params.c:
            raise InputContractError(f"job {job.id} has p={job.p} > c={params.c}")
        grid.add(job.depth, gb.index(job.p))
        grid.note_processing_time(job.p)
    n = grid.total_counted
    if n == 0:
        raise InputContractError("empty job stream")
    rp = RoundedValues(gb, 0, drv.k, float(params.c))
    loads = grid.depth_loads(rp, params.h) / params.m
    A, times = _bounded_totals(loads, params.c, tight)
    return RunReport(
        algorithm=STREAM_KNOWN,
        A=A,
        schedule_sketch=ScheduleSketch(times, source=STREAM_KNOWN),
        sketch_node_count=grid.node_count,
        samples_drawn=0,
        update_count=updates,
        params=params,
        guarantee_condition_met=condition_bounded(n, params.m, params.h, params.c, params.epsilon),
        extras={"n": n, "delta": drv.delta, "k": drv.k, "input_sketch": grid},
    )


def stream_unknown(events: Iterable[StreamEvent], params: AlgoParams, *, tight: bool = False) -> RunReport:
    """Jobs then topologically ordered arcs; c, h and depths discovered.

    Per-job state (the depth table) makes this O(n) space; the sketch
    itself stays at one node per occupied (depth, bucket) pair.
    """
    drv = derive_params(params, STREAM_UNKNOWN)
    gb = buckets_for(drv.delta)
    tree = TreeSketch()
    table = DepthTable()
    sources_seen: set[int] = set()
    in_arc_phase = False
    height = 1
    updates = 0
    for ev in iter(events):
        updates += 1
        if isinstance(ev, Job):
            if in_arc_phase:
                raise InputContractError(f"job {ev.id} arrived after arc events began")
            u = gb.index(ev.p)
            table.insert(ev.id, u)
            tree.add(1, u)
            tree.note_processing_time(ev.p)
        else:
            in_arc_phase = True
            src, dst = ev
            if dst in sources_seen:
                raise CycleSuspicionError(
                    f"arc ({src} -> {dst}) arrived after {dst} was already a source; "
                    "arc stream is not in topological order"
                )
            sources_seen.add(src)
            d_src, _ = table.get(src)
            d_dst, u_dst = table.get(dst)
            if d_src + 1 > d_dst:
                new_depth = d_src + 1
                if new_depth > len(table):
                    raise CycleSuspicionError(f"depth {new_depth} exceeds job count {len(table)}")
                tree.move(d_dst, u_dst, new_depth)
                table.raise_depth(dst, new_depth)
                if new_depth > height:
                    height = new_depth
    n = len(table)
    if n == 0:
        raise InputContractError("empty job stream")
    p_min, p_max = tree.p_min, tree.p_max
    c_disc = ceil_div(p_max, p_min)
    rp = RoundedValues(gb, gb.index(p_min), gb.index(p_max), float(p_max))
    loads = tree.depth_loads(rp, height) / params.m
    A, times = _bounded_totals(loads, p_max, tight)
    return RunReport(
        algorithm=STREAM_UNKNOWN,
        A=A,
        schedule_sketch=ScheduleSketch(times, source=STREAM_UNKNOWN),
        sketch_node_count=tree.node_count,
        samples_drawn=0,
        update_count=updates,
        params=params,
        guarantee_condition_met=condition_bounded(n, params.m, height, c_disc, params.epsilon),
        extras={
            "n": n,
            "delta": drv.delta,
            "p_min": p_min,
            "p_max": p_max,
            "c_discovered": c_disc,
            "h_discovered": height,
            "depth_table": table,
            "input_sketch": tree,
        },
    )


def stream_alpha_known(events: Iterable[StreamEvent], params: AlgoParams, *, tight: bool = False) -> RunReport:
    """Capped-sketch variant: skip tiny jobs, lazily evict tiny buckets.

    A job is skipped when its processing time is below p_max/n^2 for
    the running maximum p_max; whenever a new sketch node is created,
    the smallest-bucket node is evicted if it fell below that cutoff.
    The final value pads each depth with p_max and adds a single
    ceil(p_max/n) term that pays for every skipped job.
    """
    drv = derive_params(params, STREAM_ALPHA_KNOWN)
    gb = buckets_for(drv.delta)
    tree = TreeSketch()
    n = params.n
    n_sq = n * n
    p_max_run = 1
    cutoff = gb.floor_log(p_max_run, n_sq)
    seen = 0
    updates = 0
    for ev in iter(events):
        updates += 1
        job = _job_only(ev)
        if job is None:
            continue
        seen += 1
        if job.depth is None:
            raise InputContractError(f"job {job.id} carries no depth; this mode requires depths")
        if job.depth > params.h:
            raise InputContractError(f"job {job.id} has depth {job.depth} > h={params.h}")
        tree.note_processing_time(job.p)
        if job.p * n_sq < p_max_run:
            continue
        if job.p > p_max_run:
            p_max_run = job.p
            cutoff = gb.floor_log(p_max_run, n_sq)
        if tree.add(job.depth, gb.index(job.p)):
            tree.prune_smallest(cutoff)
        tree.note_peak()
    if seen == 0:
        raise InputContractError("empty job stream")
    if seen != n:
        raise InputContractError(f"stream carried {seen} jobs but n={n} was declared")
    u_lo = gb.floor_log(p_max_run, n_sq)
    u_hi = gb.index(p_max_run)
    final = tree.restrict(u_lo, u_hi)
    rp = RoundedValues(gb, u_lo, u_hi, float(p_max_run))
    loads = final.depth_loads(rp, params.h) / params.m
    tail = ceil_div(p_max_run, n)
    A, times = _alpha_totals(loads, p_max_run, tail, tight)
    return RunReport(
        algorithm=STREAM_ALPHA_KNOWN,
        A=A,
        schedule_sketch=ScheduleSketch(times, source=STREAM_ALPHA_KNOWN),
        sketch_node_count=final.node_count,
        samples_drawn=0,
        update_count=updates,
        params=params,
        guarantee_condition_met=condition_alpha(
            n, params.m, params.h, params.c, params.epsilon, params.alpha
        ),
        extras={
            "n": n,
            "delta": drv.delta,
            "p_max": p_max_run,
            "peak_node_count": tree.peak_node_count,
            "counted": final.total_counted,
            "input_sketch": final,
        },
    )


def stream_alpha_unknown(events: Iterable[StreamEvent], params: AlgoParams, *, tight: bool = False) -> RunReport:
    """Capped sketch with depths discovered from the arc stream.

    Skipped and evicted jobs keep their depth-table records so later
    arcs still propagate depths; their sketch counts, when absent, are
    simply not moved (they are below the smallness cutoff, which the
    final padding already pays for).
    """
    drv = derive_params(params, STREAM_ALPHA_UNKNOWN)
    gb = buckets_for(drv.delta)
    tree = TreeSketch()
    table = DepthTable()
    sources_seen: set[int] = set()
    in_arc_phase = False
    n = params.n
    n_sq = n * n
    p_max_run = 1
    cutoff = gb.floor_log(p_max_run, n_sq)
    height = 1
    seen = 0
    updates = 0
    for ev in iter(events):
        updates += 1
        if isinstance(ev, Job):
            if in_arc_phase:
                raise InputContractError(f"job {ev.id} arrived after arc events began")
            seen += 1
            u = gb.index(ev.p)
            table.insert(ev.id, u)
            tree.note_processing_time(ev.p)
            if ev.p * n_sq < p_max_run:
                continue
            if ev.p > p_max_run:
                p_max_run = ev.p
                cutoff = gb.floor_log(p_max_run, n_sq)
            if tree.add(1, u):
                tree.prune_smallest(cutoff)
            tree.note_peak()
        else:
            in_arc_phase = True
            src, dst = ev
            if dst in sources_seen:
                raise CycleSuspicionError(
                    f"arc ({src} -> {dst}) arrived after {dst} was already a source; "
                    "arc stream is not in topological order"
                )
            sources_seen.add(src)
            d_src, _ = table.get(src)
            d_dst, u_dst = table.get(dst)
            if d_src + 1 > d_dst:
                new_depth = d_src + 1
                if new_depth > len(table):
                    raise CycleSuspicionError(f"depth {new_depth} exceeds job count {len(table)}")
                moved, created = tree.move_if_present(d_dst, u_dst, new_depth)
                if moved and created:
                    tree.prune_smallest(cutoff)
                    tree.note_peak()
                table.raise_depth(dst, new_depth)
                if new_depth > height:
                    height = new_depth
    if seen == 0:
        raise InputContractError("empty job stream")
    if seen != n:
        raise InputContractError(f"stream carried {seen} jobs but n={n} was declared")
    u_lo = gb.floor_log(p_max_run, n_sq)
    u_hi = gb.index(p_max_run)
    final = tree.restrict(u_lo, u_hi)
    rp = RoundedValues(gb, u_lo, u_hi, float(p_max_run))
    loads = final.depth_loads(rp, height) / params.m
    tail = ceil_div(p_max_run, n)
    A, times = _alpha_totals(loads, p_max_run, tail, tight)
    c_disc = ceil_div(tree.p_max, tree.p_min)
    return RunReport(
        algorithm=STREAM_ALPHA_UNKNOWN,
        A=A,
        schedule_sketch=ScheduleSketch(times, source=STREAM_ALPHA_UNKNOWN),
        sketch_node_count=final.node_count,
        samples_drawn=0,
        update_count=updates,
        params=params,
        guarantee_condition_met=condition_alpha(
            n, params.m, height, c_disc, params.epsilon, params.alpha
        ),
        extras={
            "n": n,
            "delta": drv.delta,
            "p_max": p_max_run,
            "c_discovered": c_disc,
            "h_discovered": height,
            "peak_node_count": tree.peak_node_count,
            "depth_table": table,
            "input_sketch": final,
        },
    )


STREAMING_ALGORITHMS = {
    STREAM_KNOWN: stream_known,
    STREAM_UNKNOWN: stream_unknown,
    STREAM_ALPHA_KNOWN: stream_alpha_known,
    STREAM_ALPHA_UNKNOWN: stream_alpha_unknown,
}
