"""Input sketches: per-(depth, bucket) job counters maintained in one pass.

Two realizations of the same counter multiset:

* `GridSketch` — a dense h x (k+1) array for the known-parameter modes,
  where the bucket range is fixed up front.
* `TreeSketch` — an ordered map keyed by (bucket, depth) for the modes
  that discover parameters on the fly and for the size-capped variants
  that lazily evict the smallest bucket.  Any balanced ordered map with
  O(log size) insert/delete/min satisfies the contract; we use
  ``sortedcontainers.SortedDict``.

Entries iterate in increasing (u, d) order.  Zero-count entries are
never stored.
"""

from __future__ import annotations

import json
from typing import Iterator

import numpy as np
from sortedcontainers import SortedDict

from .errors import InputContractError, InvariantViolationError


class GridSketch:
    """Dense per-(depth, bucket) counters for depths 1..h, buckets 0..k."""

    def __init__(self, h: int, k: int):
        self.h = h
        self.k = k
        self.counts = np.zeros((h, k + 1), dtype=np.int64)
        self.total_counted = 0
        self.p_min: int | None = None
        self.p_max: int | None = None

    def note_processing_time(self, p: int) -> None:
        if self.p_min is None or p < self.p_min:
            self.p_min = p
        if self.p_max is None or p > self.p_max:
            self.p_max = p

    def add(self, d: int, u: int) -> None:
        self.counts[d - 1, u] += 1
        self.total_counted += 1

    @property
    def node_count(self) -> int:
        return int(np.count_nonzero(self.counts))

    def entries(self) -> Iterator[tuple[int, int, int]]:
        """Yield (d, u, count) sorted by (u, d), counts >= 1 only."""
        for u in range(self.k + 1):
            col = self.counts[:, u]
            for d in np.nonzero(col)[0]:
                yield int(d) + 1, u, int(col[d])

    def depth_loads(self, rp: "RoundedValues", h: int) -> np.ndarray:
        """Sum of count * rounded-value per depth 1..h, as a float array."""
        values = np.array([rp.value(u) for u in range(self.k + 1)])
        return self.counts[:h] @ values


class TreeSketch:
    """Ordered-map sketch with optional lazy eviction of the smallest bucket.

    ``peak_node_count`` is updated by `note_peak`, which the streaming
    loops call once per event after any lazy prune has run; the size
    bound of the capped mode is stated over exactly those instants.
    """

    def __init__(self):
        self._map: SortedDict = SortedDict()  # (u, d) -> count
        self.total_counted = 0
        self.p_min: int | None = None
        self.p_max: int | None = None
        self.peak_node_count = 0

    def note_processing_time(self, p: int) -> None:
        if self.p_min is None or p < self.p_min:
            self.p_min = p
        if self.p_max is None or p > self.p_max:
            self.p_max = p

    @property
    def node_count(self) -> int:
        return len(self._map)

    def note_peak(self) -> None:
        if len(self._map) > self.peak_node_count:
            self.peak_node_count = len(self._map)

    def add(self, d: int, u: int) -> bool:
        """Count one job at (d, u); return True if the node is new."""
        if d < 1:
            raise InputContractError(f"depth must be >= 1, got {d}")
        key = (u, d)
        created = key not in self._map
        self._map[key] = self._map.get(key, 0) + 1
        self.total_counted += 1
        return created

    def move(self, d: int, u: int, d_new: int) -> bool:
        """Move one unit of count from (d, u) to (d_new, u).

        Returns True if the destination node was created.  The source
        must exist; a missing source means the depth table and the
        sketch disagree about where the job was counted.
        """
        if d_new <= d:
            raise InvariantViolationError(f"move must increase depth ({d} -> {d_new})")
        key = (u, d)
        cnt = self._map.get(key, 0)
        if cnt < 1:
            raise InvariantViolationError(f"no sketch node at (d={d}, u={u}) to move from")
        if cnt == 1:
            del self._map[key]
        else:
            self._map[key] = cnt - 1
        dest = (u, d_new)
        created = dest not in self._map
        self._map[dest] = self._map.get(dest, 0) + 1
        return created

    def move_if_present(self, d: int, u: int, d_new: int) -> tuple[bool, bool]:
        """`move`, but a missing source is tolerated: returns (moved, created).

        Used by the capped unknown-parameter mode, where a job's count
        may have been skipped or evicted as too small before an arc
        raised its depth.
        """
        if self._map.get((u, d), 0) < 1:
            return False, False
        return True, self.move(d, u, d_new)

    def min_bucket(self) -> int | None:
        """Smallest bucket index currently stored, or None when empty."""
        if not self._map:
            return None
        return self._map.keys()[0][0]

    def prune_smallest(self, cutoff_u: int) -> bool:
        """Evict the minimum-key node iff its bucket is below ``cutoff_u``.

        At most one node is removed per call (lazy pruning); returns
        True when a node was evicted.
        """
        if not self._map:
            return False
        key = self._map.keys()[0]
        if key[0] < cutoff_u:
            del self._map[key]
            return True
        return False

    def restrict(self, u_lo: int, u_hi: int) -> "TreeSketch":
        """New sketch keeping only entries with u_lo <= u <= u_hi."""
        out = TreeSketch()
        for (u, d), cnt in self._map.items():
            if u_lo <= u <= u_hi:
                out._map[(u, d)] = cnt
                out.total_counted += cnt
        out.p_min = self.p_min
        out.p_max = self.p_max
        out.peak_node_count = max(self.peak_node_count, len(out._map))
        return out

    def entries(self) -> Iterator[tuple[int, int, int]]:
        """Yield (d, u, count) sorted by (u, d)."""
        for (u, d), cnt in self._map.items():
            yield d, u, cnt

    def depth_loads(self, rp: "RoundedValues", h: int) -> np.ndarray:
        loads = np.zeros(h)
        for d, u, cnt in self.entries():
            loads[d - 1] += cnt * rp.value(u)
        return loads


InputSketch = GridSketch | TreeSketch


def sketch_add(sk, d: int, u: int):
    """Increment the count at (d, u), creating the entry if absent."""
    sk.add(d, u)
    return sk


def sketch_move(sk: TreeSketch, from_key: tuple[int, int], to_key: tuple[int, int]):
    """Move one count from (d, u) to (d', u); d' must exceed d."""
    (d, u), (d_new, u_new) = from_key, to_key
    if u_new != u:
        raise InvariantViolationError("moves never change a job's bucket")
    sk.move(d, u, d_new)
    return sk


def sketch_prune_smallest(sk: TreeSketch, cutoff_u: int):
    """Lazily evict the minimum-key entry when it falls below the cutoff."""
    sk.prune_smallest(cutoff_u)
    return sk


def sketch_finalize_alpha(sk: TreeSketch, n: int, buckets) -> TreeSketch:
    """Restrict a capped sketch to buckets [floor_log(p_max/n^2), floor_log(p_max)]."""
    if sk.p_max is None:
        return sk.restrict(0, -1)
    u_lo = buckets.floor_log(sk.p_max, n * n)
    u_hi = buckets.floor_log(sk.p_max)
    return sk.restrict(u_lo, u_hi)


def sketch_to_json(sk: InputSketch) -> str:
    """Serialize a sketch for pass-2 use: sorted entries plus extremes."""
    doc = {
        "entries": [{"d": d, "u": u, "n": cnt} for d, u, cnt in sk.entries()],
        "p_min": sk.p_min,
        "p_max": sk.p_max,
    }
    return json.dumps(doc)


def sketch_from_json(text: str) -> TreeSketch:
    doc = json.loads(text)
    sk = TreeSketch()
    for e in doc["entries"]:
        sk._map[(int(e["u"]), int(e["d"]))] = int(e["n"])
        sk.total_counted += int(e["n"])
    sk.p_min = doc.get("p_min")
    sk.p_max = doc.get("p_max")
    sk.peak_node_count = len(sk._map)
    return sk


class DepthTable:
    """Per-job (current depth, bucket) records for the arc-driven modes.

    Depths only ever increase; an arc that would lower one is a
    corrupted stream.
    """

    def __init__(self):
        self._rec: dict[int, tuple[int, int]] = {}

    def __contains__(self, job_id: int) -> bool:
        return job_id in self._rec

    def __len__(self) -> int:
        return len(self._rec)

    def insert(self, job_id: int, u: int) -> None:
        if job_id in self._rec:
            raise InputContractError(f"duplicate job id {job_id} in stream")
        self._rec[job_id] = (1, u)

    def get(self, job_id: int) -> tuple[int, int]:
        try:
            return self._rec[job_id]
        except KeyError:
            raise InputContractError(f"arc references unseen job id {job_id}") from None

    def raise_depth(self, job_id: int, new_depth: int) -> None:
        d, u = self.get(job_id)
        if new_depth < d:
            raise InvariantViolationError(f"depth of job {job_id} would decrease ({d} -> {new_depth})")
        self._rec[job_id] = (new_depth, u)

    def depths_array(self, n: int) -> np.ndarray:
        """Depths for contiguous ids 1..n, for handing to the second pass."""
        out = np.empty(n, dtype=np.int64)
        for j in range(1, n + 1):
            out[j - 1] = self.get(j)[0]
        return out
