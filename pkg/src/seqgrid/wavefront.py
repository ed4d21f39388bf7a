"""Parallel Needleman-Wunsch over column strips.

The matrix is split into vertical strips, one per worker, and filled in
horizontal bands of up to ``tile`` rows.  After finishing a band a worker
sends its strip's last column for those rows (plus the corner cell above) to
its right neighbour, which needs them as the left boundary of its own band.
Adjacent workers therefore exchange exactly ceil(n / tile) messages, and the
run computes the same matrix as the serial fill.
"""

from __future__ import annotations

import threading
import time
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import align
from .align import AlignmentResult, ScoringScheme
from .errors import InvalidPartition
from .harness import (
    ChannelStats,
    ClusterConfig,
    Mode,
    TimingReport,
    WorkerTiming,
    estimate_nbytes,
    make_channel,
)
from .seqio import Sequence

# simulated cost of one matrix cell, in cost units (scaled by
# ClusterConfig.sim_sec_per_unit); corresponds to a 1e8 cells/s machine
CELL_UNITS = 1e-8


@dataclass(frozen=True)
class BlockLayout:
    """Column-strip decomposition of an (n+1) x (m+1) matrix.

    strips holds (worker_id, col_lo, col_hi) half-open ranges over the
    1-based columns; the first m mod W strips are one column wider.
    """

    n: int
    m: int
    workers: int
    tile: int
    strips: tuple

    def ntiles(self) -> int:
        return -(-self.n // self.tile)


@dataclass
class BoundaryMessage:
    from_worker: int
    to_worker: int
    row_lo: int  # half-open row range
    row_hi: int
    values: np.ndarray  # corner A(row_lo-1, c), then A(row_lo..row_hi-1, c)


def partition(n: int, m: int, workers: int, tile: int) -> BlockLayout:
    """Split columns 1..m into contiguous strips of near-equal width."""
    if workers < 1 or workers > m:
        raise InvalidPartition(
            f"need 1 <= workers <= {m} columns, got {workers}"
        )
    if tile < 1:
        raise InvalidPartition(f"tile height must be >= 1, got {tile}")
    if n < 0 or m < 1:
        raise InvalidPartition(f"bad matrix dims {n}x{m}")
    base, extra = divmod(m, workers)
    strips = []
    lo = 1
    for w in range(workers):
        width = base + (1 if w < extra else 0)
        strips.append((w, lo, lo + width))
        lo += width
    return BlockLayout(n, m, workers, tile, tuple(strips))


@njit(nogil=True, cache=True)
def _fill_band(block, s_codes, r_codes, r0, r1, match, mismatch, gap):
    # block: (n+1, width+1) int32; column 0 holds the left boundary, valid
    # for rows r0-1..r1; row 0 is prefilled; fills rows r0..r1 inclusive
    width = block.shape[1] - 1
    for i in range(r0, r1 + 1):
        si = s_codes[i - 1]
        for j in range(1, width + 1):
            best = block[i - 1, j - 1] + (
                match if si == r_codes[j - 1] else mismatch
            )
            v = block[i - 1, j] + gap
            if v > best:
                best = v
            v = block[i, j - 1] + gap
            if v > best:
                best = v
            block[i, j] = best


def _warm_kernel():
    block = np.zeros((2, 2), dtype=np.int32)
    codes = np.zeros(1, dtype=np.uint8)
    _fill_band(block, codes, codes, 1, 1, 1, -1, -1)


class StripView:
    """Indexable view over the distributed matrix for traceback.

    Supports cells[i, j] like an ndarray; column 0 is synthesized from the
    gap score.
    """

    def __init__(self, layout: BlockLayout, blocks, gap: int):
        self._starts = [lo for _, lo, _ in layout.strips]
        self._blocks = blocks
        self._gap = gap

    def __getitem__(self, ij):
        i, j = ij
        if j == 0:
            return i * self._gap
        k = bisect_right(self._starts, j) - 1
        return self._blocks[k][i, j - self._starts[k] + 1]


def _make_blocks(layout: BlockLayout, r_codes, gap: int):
    """Allocate per-worker strips with row 0 and worker 0's column 0 set."""
    blocks = []
    locals_r = []
    for w, lo, hi in layout.strips:
        width = hi - lo
        block = np.empty((layout.n + 1, width + 1), dtype=np.int32)
        for j in range(width + 1):
            block[0, j] = (lo - 1 + j) * gap
        if w == 0:
            block[1:, 0] = np.arange(1, layout.n + 1, dtype=np.int32) * gap
        blocks.append(block)
        locals_r.append(r_codes[lo - 1:hi - 1])
    return blocks, locals_r


def _bands(n: int, tile: int):
    r0 = 1
    while r0 <= n:
        r1 = min(r0 + tile - 1, n)
        yield r0, r1
        r0 = r1 + 1


def _boundary_payload(block, r0, r1):
    width = block.shape[1] - 1
    values = np.empty(r1 - r0 + 2, dtype=np.int32)
    values[0] = block[r0 - 1, width]
    values[1:] = block[r0:r1 + 1, width]
    return values


def _apply_boundary(block, msg: BoundaryMessage):
    block[msg.row_lo - 1, 0] = msg.values[0]
    block[msg.row_lo:msg.row_hi, 0] = msg.values[1:]


def parallel_nw(
    s: Sequence,
    r: Sequence,
    w: ScoringScheme,
    cfg: ClusterConfig,
    tile: int = 64,
):
    """Compute the global alignment on cfg.workers workers.

    Returns (AlignmentResult, TimingReport).  The result is identical to the
    serial nw_align for every worker count and tile height; the report
    decomposes the run into compute and communication time.  The last worker
    forwards the final score to worker 0 (the coordinator) in one extra
    message outside the boundary-message tally.
    """
    align.check_pair(s, r)
    align.check_overflow(len(s.residues), len(r.residues), w)
    n, m = len(s.residues), len(r.residues)
    if m == 0 and cfg.workers == 1:
        result = align.nw_align(s, r, w)
        report = TimingReport(0.0, 0.0, 0.0, {0: WorkerTiming()}, cfg.mode)
        return result, report
    layout = partition(n, m, cfg.workers, tile)
    r_codes = align.encode(r.residues, r.alphabet)
    s_codes = align.encode(s.residues, s.alphabet)
    _warm_kernel()
    if cfg.mode is Mode.SIMULATED:
        blocks, report = _run_sim(layout, s_codes, r_codes, w, cfg)
    else:
        blocks, report = _run_threaded(layout, s_codes, r_codes, w, cfg)
    view = StripView(layout, blocks, w.gap)
    aligned_s, aligned_r = align.traceback(view, s.residues, r.residues, w)
    return AlignmentResult(int(view[n, m]), aligned_s, aligned_r), report


def _run_sim(layout, s_codes, r_codes, w, cfg):
    """Fill strips sequentially, then build the parallel timeline twice:
    once with modelled message delays and once with free messages.  Their
    difference is the communication time, so the accounting identity is
    exact by construction."""
    W = layout.workers
    blocks, locals_r = _make_blocks(layout, r_codes, w.gap)
    channels = {
        (i, i + 1): make_channel(i, i + 1, cfg) for i in range(W - 1)
    }
    if W > 1:
        channels[(W - 1, 0)] = make_channel(W - 1, 0, cfg)

    bands = list(_bands(layout.n, layout.tile))
    delays = {}  # (worker, band index) -> modelled delay of its outgoing msg
    for t, (r0, r1) in enumerate(bands):
        for wk, lo, hi in layout.strips:
            if wk > 0:
                _apply_boundary(blocks[wk], channels[(wk - 1, wk)].recv())
            _fill_band(
                blocks[wk], s_codes, locals_r[wk], r0, r1,
                w.match, w.mismatch, w.gap,
            )
            if wk < W - 1:
                ch = channels[(wk, wk + 1)]
                before = ch.stats.delay
                ch.send(BoundaryMessage(
                    wk, wk + 1, r0, r1 + 1,
                    _boundary_payload(blocks[wk], r0, r1),
                ))
                delays[(wk, t)] = ch.stats.delay - before
    final_delay = 0.0
    if W > 1:
        ch = channels[(W - 1, 0)]
        score = int(blocks[W - 1][layout.n, layout.strips[-1][2] - layout.strips[-1][1]])
        ch.send(score)
        final_delay = ch.stats.delay

    def timeline(use_delays):
        done = {}
        finish = [0.0] * W
        for t, (r0, r1) in enumerate(bands):
            for wk, lo, hi in layout.strips:
                start = finish[wk]
                if wk > 0:
                    delay = delays[(wk - 1, t)] if use_delays else 0.0
                    start = max(start, done[(wk - 1, t)] + delay)
                cost = (r1 - r0 + 1) * (hi - lo) * CELL_UNITS
                done[(wk, t)] = start + cost * cfg.sim_sec_per_unit
                finish[wk] = done[(wk, t)]
        total = max(finish) if finish else 0.0
        if W > 1:
            total = finish[W - 1] + (final_delay if use_delays else 0.0)
        return total, finish

    total_with, finish_with = timeline(True)
    total_without, finish_without = timeline(False)
    per_worker = {}
    for wk, lo, hi in layout.strips:
        compute = layout.n * (hi - lo) * CELL_UNITS * cfg.sim_sec_per_unit
        per_worker[wk] = WorkerTiming(
            compute=compute,
            comm=finish_with[wk] - finish_without[wk],
            finish=finish_with[wk],
        )
    report = TimingReport(
        total_time=total_with,
        compute_time=total_without,
        comm_time=total_with - total_without,
        per_worker=per_worker,
        mode=Mode.SIMULATED,
        channels={k: ch.stats for k, ch in channels.items()},
    )
    return blocks, report


def _run_threaded(layout, s_codes, r_codes, w, cfg):
    W = layout.workers
    blocks, locals_r = _make_blocks(layout, r_codes, w.gap)
    channels = {
        (i, i + 1): make_channel(i, i + 1, cfg) for i in range(W - 1)
    }
    if W > 1:
        channels[(W - 1, 0)] = make_channel(W - 1, 0, cfg)
    busy = [0.0] * W
    ends = [0.0] * W
    t0 = time.perf_counter()

    def run_worker(wk):
        _, lo, hi = layout.strips[wk]
        block = blocks[wk]
        left = channels.get((wk - 1, wk))
        right = channels.get((wk, wk + 1))
        for r0, r1 in _bands(layout.n, layout.tile):
            if left is not None:
                _apply_boundary(block, left.recv())
            c0 = time.perf_counter()
            _fill_band(
                block, s_codes, locals_r[wk], r0, r1,
                w.match, w.mismatch, w.gap,
            )
            busy[wk] += time.perf_counter() - c0
            if right is not None:
                right.send(BoundaryMessage(
                    wk, wk + 1, r0, r1 + 1, _boundary_payload(block, r0, r1),
                ))
        if wk == W - 1 and W > 1:
            channels[(W - 1, 0)].send(int(block[layout.n, hi - lo]))
        ends[wk] = time.perf_counter() - t0

    threads = [
        threading.Thread(target=run_worker, args=(wk,), name=f"wf-{wk}")
        for wk in range(W)
    ]
    for t in threads:
        t.start()
    if W > 1:
        channels[(W - 1, 0)].recv()  # coordinator waits for the final score
    for t in threads:
        t.join()
    total = time.perf_counter() - t0
    per_worker = {}
    for wk in range(W):
        blocked = 0.0
        if wk > 0:
            blocked = channels[(wk - 1, wk)].stats.blocked
        per_worker[wk] = WorkerTiming(
            compute=busy[wk], comm=blocked, finish=ends[wk],
        )
    comm = max((pw.comm for pw in per_worker.values()), default=0.0)
    comm = min(comm, total)
    report = TimingReport(
        total_time=total,
        compute_time=total - comm,
        comm_time=comm,
        per_worker=per_worker,
        mode=Mode.THREADED,
        channels={k: ch.stats for k, ch in channels.items()},
    )
    return blocks, report


def count_boundary_messages(report: TimingReport) -> int:
    """Messages on worker-to-right-neighbour channels, excluding the final
    score forward to the coordinator."""
    return sum(
        stats.msgs
        for (src, dst), stats in report.channels.items()
        if dst == src + 1
    )
