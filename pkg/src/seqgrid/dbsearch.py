"""Scatter-gather database search.

The database is segmented across workers by a greedy residue balance; every
query is sent to every partition, searched by a minimal seed-and-extend
engine (exact k-mer seeds, ungapped X-dropoff extension, raw scores), and
the per-partition hit lists are merged under a total ranking order, so the
merged results are identical for every worker count.  Timing follows the
with/without-communication accounting: query distribution and result
collection are communication, per-partition search is compute.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .align import ScoringScheme, encode
from .errors import (
    AlphabetMismatch,
    BadParams,
    DuplicateSequenceId,
    EmptyDatabase,
)
from .harness import (
    ClusterConfig,
    Mode,
    TimingReport,
    WorkerTiming,
    estimate_nbytes,
    make_channel,
)
from .seqio import Sequence

# simulated search cost per residue per query: search time scales with the
# residues a worker holds, not with how they are split into records
RESIDUE_UNITS = 1e-8


@dataclass
class Database:
    sequences: list
    total_residues: int = field(init=False)

    def __post_init__(self):
        ids = [s.id for s in self.sequences]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise DuplicateSequenceId(f"duplicate sequence id {dup!r}")
        alphabets = {s.alphabet.name for s in self.sequences}
        if len(alphabets) > 1:
            raise AlphabetMismatch(
                f"database mixes alphabets: {sorted(alphabets)}"
            )
        self.total_residues = sum(len(s.residues) for s in self.sequences)

    def __len__(self) -> int:
        return len(self.sequences)


@dataclass(frozen=True)
class Partition:
    worker_id: int
    ids: tuple
    residue_count: int


def segment(db: Database, workers: int):
    """Greedy balance: sequences in descending length order, each to the
    partition currently holding the fewest residues (ties to the lowest
    worker id)."""
    if workers < 1:
        raise BadParams(f"need at least one worker, got {workers}")
    if not db.sequences:
        raise EmptyDatabase("cannot segment an empty database")
    order = sorted(
        range(len(db.sequences)),
        key=lambda i: (-len(db.sequences[i].residues), i),
    )
    heap = [(0, w) for w in range(workers)]
    members = {w: [] for w in range(workers)}
    loads = {w: 0 for w in range(workers)}
    for i in order:
        seq = db.sequences[i]
        load, w = heapq.heappop(heap)
        members[w].append(seq.id)
        loads[w] = load + len(seq.residues)
        heapq.heappush(heap, (loads[w], w))
    return [
        Partition(w, tuple(members[w]), loads[w]) for w in range(workers)
    ]


@dataclass(frozen=True)
class SearchParams:
    k: int = 11
    scheme: ScoringScheme = ScoringScheme(1, -1, -1)
    min_score: int = 16
    x_drop: int = 20

    def __post_init__(self):
        if self.k < 1:
            raise BadParams(f"seed length must be >= 1, got {self.k}")
        if self.x_drop < 0:
            raise BadParams(f"dropoff must be >= 0, got {self.x_drop}")


@dataclass(frozen=True)
class Hit:
    query_id: str
    subject_id: str
    score: int
    q_start: int  # 1-based inclusive
    q_end: int
    s_start: int
    s_end: int


def hit_rank_key(h: Hit):
    return (-h.score, h.subject_id, h.s_start, h.q_start, h.q_end, h.s_end)


@njit(cache=True)
def _extend(q, s, i, j, k, match, mismatch, wild, xdrop):
    # ungapped X-dropoff extension from the seed q[i:i+k] == s[j:j+k];
    # returns (left gain, left span, right gain, right span) with the
    # earliest position achieving each maximum
    nq = q.shape[0]
    ns = s.shape[0]
    best_r = 0
    ext_r = 0
    run = 0
    t = 0
    while i + k + t < nq and j + k + t < ns:
        a = q[i + k + t]
        b = s[j + k + t]
        run += match if (a == b and a != wild) else mismatch
        t += 1
        if run > best_r:
            best_r = run
            ext_r = t
        elif run < best_r - xdrop:
            break
    best_l = 0
    ext_l = 0
    run = 0
    t = 0
    while i - 1 - t >= 0 and j - 1 - t >= 0:
        a = q[i - 1 - t]
        b = s[j - 1 - t]
        run += match if (a == b and a != wild) else mismatch
        t += 1
        if run > best_l:
            best_l = run
            ext_l = t
        elif run < best_l - xdrop:
            break
    return best_l, ext_l, best_r, ext_r


class PartitionSearcher:
    """Stateless-after-construction matcher for one database partition.

    Holds a k-mer position index over the member sequences; k-mers touching
    a wildcard are never indexed and never used as seeds.
    """

    def __init__(self, db: Database, part: Partition, params: SearchParams):
        self.params = params
        by_id = {s.id: s for s in db.sequences}
        self.members = [by_id[i] for i in part.ids]
        self.codes = [
            encode(s.residues, s.alphabet) for s in self.members
        ]
        k = params.k
        index = {}
        for sidx, seq in enumerate(self.members):
            res = seq.residues
            wild = seq.alphabet.wildcard
            for j in range(len(res) - k + 1):
                kmer = res[j:j + k]
                if wild in kmer:
                    continue
                index.setdefault(kmer, []).append((sidx, j))
        self.index = index

    def search(self, q: Sequence):
        """All hits of q against the partition, ranked."""
        p = self.params
        if p.k > len(q.residues):
            raise BadParams(
                f"seed length {p.k} exceeds query length {len(q.residues)}"
            )
        if self.members and q.alphabet != self.members[0].alphabet:
            raise AlphabetMismatch(
                f"{q.alphabet.name} query against "
                f"{self.members[0].alphabet.name} database"
            )
        qcodes = encode(q.residues, q.alphabet)
        wild_q = q.alphabet.wildcard
        k, w = p.k, p.scheme
        seen = set()
        hits = []
        for i in range(len(q.residues) - k + 1):
            kmer = q.residues[i:i + k]
            if wild_q in kmer:
                continue
            for sidx, j in self.index.get(kmer, ()):
                seq = self.members[sidx]
                best_l, ext_l, best_r, ext_r = _extend(
                    qcodes, self.codes[sidx], i, j, k,
                    w.match, w.mismatch, len(q.alphabet.order) - 1, p.x_drop,
                )
                score = k * w.match + best_l + best_r
                if score < p.min_score:
                    continue
                key = (
                    sidx,
                    i - ext_l + 1, i + k + ext_r,
                    j - ext_l + 1, j + k + ext_r,
                )
                if key in seen:
                    continue
                seen.add(key)
                hits.append(Hit(
                    q.id, seq.id, score,
                    i - ext_l + 1, i + k + ext_r,
                    j - ext_l + 1, j + k + ext_r,
                ))
        hits.sort(key=hit_rank_key)
        return hits


def search_partition(q: Sequence, db: Database, part: Partition,
                     params: SearchParams):
    """One-shot search of a single query against one partition."""
    return PartitionSearcher(db, part, params).search(q)


def merge_hits(per_partition, topk: int):
    """Stable-rank merge of per-partition hit lists for one query."""
    merged = []
    for hits in per_partition:
        merged.extend(hits)
    merged.sort(key=hit_rank_key)
    return merged[:topk]


def scatter_gather(queries, db: Database, cfg: ClusterConfig,
                   params: SearchParams, topk: int = 10):
    """Search all queries against the segmented database.

    Returns (results, TimingReport) where results[i] is the ranked top-k
    hit list for queries[i].  Results are identical for every worker count;
    only the timing differs.  Worker ids 1..W hold partitions, id 0 is the
    coordinator.
    """
    if topk < 1:
        raise BadParams(f"topk must be >= 1, got {topk}")
    parts = segment(db, cfg.workers)
    if not queries:
        report = TimingReport(0.0, 0.0, 0.0, {}, cfg.mode)
        return [], report
    if cfg.mode is Mode.SIMULATED:
        return _scatter_sim(queries, db, parts, cfg, params, topk)
    return _scatter_threaded(queries, db, parts, cfg, params, topk)


def _scatter_sim(queries, db, parts, cfg, params, topk):
    W = len(parts)
    query_payload = [(q.id, q.residues) for q in queries]
    send_delay = cfg.comm_delay(estimate_nbytes(query_payload))
    out_ch = {p.worker_id: make_channel(0, p.worker_id + 1, cfg) for p in parts}
    back_ch = {p.worker_id: make_channel(p.worker_id + 1, 0, cfg) for p in parts}
    per_part = []
    computes = []
    back_delays = []
    for p in parts:
        out_ch[p.worker_id].send(query_payload)
        searcher = PartitionSearcher(db, p, params)
        out_ch[p.worker_id].recv()
        hits = [searcher.search(q) for q in queries]
        per_part.append(hits)
        computes.append(
            len(queries) * p.residue_count * RESIDUE_UNITS
            * cfg.sim_sec_per_unit
        )
        ch = back_ch[p.worker_id]
        ch.send(hits)
        back_delays.append(ch.stats.delay)
        ch.recv()
    # serialized scatter over the coordinator link, then independent
    # compute, then result return; both timelines share the schedule
    finish_with = []
    finish_without = []
    for idx in range(W):
        arrival = (idx + 1) * send_delay
        finish_with.append(arrival + computes[idx] + back_delays[idx])
        finish_without.append(computes[idx])
    total_with = max(finish_with)
    total_without = max(finish_without)
    per_worker = {
        p.worker_id + 1: WorkerTiming(
            compute=computes[idx],
            comm=finish_with[idx] - finish_without[idx],
            finish=finish_with[idx],
        )
        for idx, p in enumerate(parts)
    }
    channels = {}
    for p in parts:
        channels[(0, p.worker_id + 1)] = out_ch[p.worker_id].stats
        channels[(p.worker_id + 1, 0)] = back_ch[p.worker_id].stats
    report = TimingReport(
        total_time=total_with,
        compute_time=total_without,
        comm_time=total_with - total_without,
        per_worker=per_worker,
        mode=Mode.SIMULATED,
        channels=channels,
    )
    results = [
        merge_hits([per_part[idx][qi] for idx in range(W)], topk)
        for qi in range(len(queries))
    ]
    return results, report


def _scatter_threaded(queries, db, parts, cfg, params, topk):
    import threading

    W = len(parts)
    out_ch = {p.worker_id: make_channel(0, p.worker_id + 1, cfg) for p in parts}
    back_ch = {p.worker_id: make_channel(p.worker_id + 1, 0, cfg) for p in parts}
    busy = {p.worker_id: 0.0 for p in parts}
    errors = {}

    def run_part(p):
        try:
            searcher = PartitionSearcher(db, p, params)
            payload = out_ch[p.worker_id].recv()
            t0 = time.perf_counter()
            hits = [searcher.search(q) for q in payload]
            busy[p.worker_id] = time.perf_counter() - t0
            back_ch[p.worker_id].send(hits)
        except Exception as exc:
            errors[p.worker_id] = exc
            back_ch[p.worker_id].send(None)

    threads = [
        threading.Thread(target=run_part, args=(p,), name=f"search-{p.worker_id}")
        for p in parts
    ]
    t0 = time.perf_counter()
    for t in threads:
        t.start()
    for p in parts:
        out_ch[p.worker_id].send(queries)
    per_part = []
    for p in parts:
        got = back_ch[p.worker_id].recv()
        per_part.append(got)
    for t in threads:
        t.join()
    total = time.perf_counter() - t0
    for wid, exc in errors.items():
        raise exc
    blocked = max(
        [ch.stats.blocked for ch in back_ch.values()]
        + [ch.stats.blocked for ch in out_ch.values()],
        default=0.0,
    )
    comm = min(blocked, total)
    per_worker = {
        p.worker_id + 1: WorkerTiming(
            compute=busy[p.worker_id],
            comm=out_ch[p.worker_id].stats.blocked,
            finish=total,
        )
        for p in parts
    }
    channels = {}
    for p in parts:
        channels[(0, p.worker_id + 1)] = out_ch[p.worker_id].stats
        channels[(p.worker_id + 1, 0)] = back_ch[p.worker_id].stats
    report = TimingReport(
        total_time=total,
        compute_time=total - comm,
        comm_time=comm,
        per_worker=per_worker,
        mode=Mode.THREADED,
        channels=channels,
    )
    results = [
        merge_hits([per_part[idx][qi] for idx in range(W)], topk)
        for qi in range(len(queries))
    ]
    return results, report


def write_hits(results) -> str:
    """Tab-separated rows: query_id subject_id score q_start q_end s_start
    s_end, queries in input order, hits ranked."""
    lines = []
    for hits in results:
        for h in hits:
            lines.append(
                f"{h.query_id}\t{h.subject_id}\t{h.score}"
                f"\t{h.q_start}\t{h.q_end}\t{h.s_start}\t{h.s_end}"
            )
    return "".join(line + "\n" for line in lines)
