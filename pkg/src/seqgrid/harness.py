"""In-process cluster substrate.

Two execution modes sit behind one API: a deterministic simulation whose
clock is built arithmetically from per-task costs and a communication model,
and real threads for wall-clock measurements.  Pipelines create channels
between workers, run their work, and report timing in the with/without
communication style: compute_time is what the run would cost with free
messages, comm_time is the difference to the full total.
"""

from __future__ import annotations

import heapq
import pickle
import queue
import threading
import time
from dataclasses import dataclass, field
from enum import Enum

from .errors import BadParams, BlockedChannel, ChannelClosed

_CLOSE = object()


class Mode(Enum):
    SIMULATED = "sim"
    THREADED = "threads"


@dataclass(frozen=True)
class ClusterConfig:
    """Worker count, execution mode, and the simulated communication model.

    A message of B bytes costs latency + B/bandwidth seconds in simulation.
    sim_sec_per_unit converts job cost units into simulated seconds.
    """

    workers: int = 1
    mode: Mode = Mode.SIMULATED
    bandwidth: float = 2 ** 30
    latency: float = 100e-6
    sim_sec_per_unit: float = 1.0

    def __post_init__(self):
        if self.workers < 1:
            raise BadParams(f"need at least one worker, got {self.workers}")
        if self.bandwidth <= 0:
            raise BadParams("bandwidth must be positive")
        if self.latency < 0:
            raise BadParams("latency must be non-negative")

    def comm_delay(self, nbytes: int) -> float:
        return self.latency + nbytes / self.bandwidth


def estimate_nbytes(payload) -> int:
    """Serialized size of a message payload, used for byte accounting."""
    return len(pickle.dumps(payload, protocol=pickle.HIGHEST_PROTOCOL))


@dataclass
class ChannelStats:
    msgs: int = 0
    nbytes: int = 0
    delay: float = 0.0  # simulated transfer time, sum over sends
    blocked: float = 0.0  # measured receiver wait, threaded mode only


class SimChannel:
    """FIFO channel for the deterministic mode.

    The simulation runs producers before consumers, so recv always finds its
    message; an empty recv means the schedule has a cycle and raises
    BlockedChannel rather than spinning.  Sends accumulate byte counts and
    modelled transfer delays for the timeline builders.
    """

    def __init__(self, from_worker: int, to_worker: int, cfg: ClusterConfig):
        self.from_worker = from_worker
        self.to_worker = to_worker
        self._cfg = cfg
        self._items = []
        self._head = 0
        self._closed = False
        self.stats = ChannelStats()

    def send(self, payload) -> None:
        if self._closed:
            raise ChannelClosed(
                f"send on closed channel {self.from_worker}->{self.to_worker}"
            )
        nbytes = estimate_nbytes(payload)
        self.stats.msgs += 1
        self.stats.nbytes += nbytes
        self.stats.delay += self._cfg.comm_delay(nbytes)
        self._items.append(payload)

    def recv(self):
        if self._head >= len(self._items):
            if self._closed:
                raise ChannelClosed("recv on drained closed channel")
            raise BlockedChannel(
                f"recv with no pending message on {self.from_worker}->"
                f"{self.to_worker}: deterministic schedule is stuck"
            )
        item = self._items[self._head]
        self._head += 1
        return item

    def close(self) -> None:
        self._closed = True


class ThreadedChannel:
    """FIFO channel between two threads with blocked-time measurement."""

    def __init__(self, from_worker: int, to_worker: int, cfg: ClusterConfig):
        self.from_worker = from_worker
        self.to_worker = to_worker
        self._cfg = cfg
        self._q = queue.Queue()
        self._closed = False
        self.stats = ChannelStats()

    def send(self, payload) -> None:
        if self._closed:
            raise ChannelClosed(
                f"send on closed channel {self.from_worker}->{self.to_worker}"
            )
        nbytes = estimate_nbytes(payload)
        self.stats.msgs += 1
        self.stats.nbytes += nbytes
        self.stats.delay += self._cfg.comm_delay(nbytes)
        self._q.put(payload)

    def recv(self):
        t0 = time.perf_counter()
        item = self._q.get()
        # single consumer per channel, so this sum is race-free
        self.stats.blocked += time.perf_counter() - t0
        if item is _CLOSE:
            self._q.put(_CLOSE)
            raise ChannelClosed("recv on drained closed channel")
        return item

    def close(self) -> None:
        self._closed = True
        self._q.put(_CLOSE)


def make_channel(from_worker: int, to_worker: int, cfg: ClusterConfig):
    cls = SimChannel if cfg.mode is Mode.SIMULATED else ThreadedChannel
    return cls(from_worker, to_worker, cfg)


@dataclass
class WorkerTiming:
    compute: float = 0.0
    comm: float = 0.0
    finish: float = 0.0


@dataclass
class TimingReport:
    """Run timing in the with/without-communication accounting style.

    total_time is the makespan with communication included, compute_time the
    makespan of the same schedule with free messages, and comm_time their
    difference.  In the deterministic mode the identity
    total_time = compute_time + comm_time holds exactly.
    """

    total_time: float
    compute_time: float
    comm_time: float
    per_worker: dict = field(default_factory=dict)
    mode: Mode = Mode.SIMULATED
    channels: dict = field(default_factory=dict)  # (from, to) -> ChannelStats


@dataclass(frozen=True)
class Job:
    job_id: str
    payload: object = None
    cost: float = 1.0


@dataclass
class JobRun:
    job_id: str
    worker: int
    start: float
    end: float


@dataclass
class QueueResult:
    assignments: dict  # worker id -> list of JobRun in execution order
    results: dict  # job_id -> executor return value
    failures: dict  # job_id -> exception raised by the executor
    report: TimingReport


def run_job_queue(jobs, cfg: ClusterConfig, executor) -> QueueResult:
    """Dispatch jobs in submission order, each to the earliest-free worker.

    Ties go to the lowest worker id.  A failing executor is recorded under
    its job_id and the remaining jobs still run; in simulation a failed job
    still occupies its worker for the job's estimated cost.
    """
    ids = [j.job_id for j in jobs]
    if len(set(ids)) != len(ids):
        raise BadParams("job ids must be unique")
    if cfg.mode is Mode.SIMULATED:
        return _run_queue_sim(jobs, cfg, executor)
    return _run_queue_threaded(jobs, cfg, executor)


def _run_queue_sim(jobs, cfg, executor):
    free = [(0.0, w) for w in range(cfg.workers)]
    heapq.heapify(free)
    assignments = {w: [] for w in range(cfg.workers)}
    results = {}
    failures = {}
    for job in jobs:
        avail, w = heapq.heappop(free)
        try:
            results[job.job_id] = executor(job)
        except Exception as exc:
            failures[job.job_id] = exc
        end = avail + job.cost * cfg.sim_sec_per_unit
        assignments[w].append(JobRun(job.job_id, w, avail, end))
        heapq.heappush(free, (end, w))
    makespan = max((r.end for rs in assignments.values() for r in rs), default=0.0)
    per_worker = {
        w: WorkerTiming(
            compute=sum(r.end - r.start for r in rs),
            comm=0.0,
            finish=rs[-1].end if rs else 0.0,
        )
        for w, rs in assignments.items()
    }
    report = TimingReport(makespan, makespan, 0.0, per_worker, Mode.SIMULATED)
    return QueueResult(assignments, results, failures, report)


def _run_queue_threaded(jobs, cfg, executor):
    feed = queue.Queue()
    for job in jobs:
        feed.put(job)
    for _ in range(cfg.workers):
        feed.put(_CLOSE)
    assignments = {w: [] for w in range(cfg.workers)}
    results = {}
    failures = {}
    lock = threading.Lock()
    t0 = time.perf_counter()

    def loop(w):
        while True:
            job = feed.get()
            if job is _CLOSE:
                return
            start = time.perf_counter() - t0
            try:
                value = executor(job)
                err = None
            except Exception as exc:
                value, err = None, exc
            end = time.perf_counter() - t0
            with lock:
                assignments[w].append(JobRun(job.job_id, w, start, end))
                if err is None:
                    results[job.job_id] = value
                else:
                    failures[job.job_id] = err

    threads = [
        threading.Thread(target=loop, args=(w,), name=f"jobq-{w}")
        for w in range(cfg.workers)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    makespan = time.perf_counter() - t0
    per_worker = {
        w: WorkerTiming(
            compute=sum(r.end - r.start for r in rs),
            comm=0.0,
            finish=rs[-1].end if rs else 0.0,
        )
        for w, rs in assignments.items()
    }
    report = TimingReport(makespan, makespan, 0.0, per_worker, Mode.THREADED)
    return QueueResult(assignments, results, failures, report)


BENCH_HEADER = "label,one_node,nodes_with_comm,nodes_without_comm,comm_time"


@dataclass(frozen=True)
class BenchRow:
    label: str
    one_node: float
    with_comm: float
    without_comm: float
    comm: float


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def bench_report(rows) -> str:
    """CSV with one row per benchmark, 6 significant digits per number."""
    lines = [BENCH_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [r.label, _fmt(r.one_node), _fmt(r.with_comm),
                 _fmt(r.without_comm), _fmt(r.comm)]
            )
        )
    return "\n".join(lines) + "\n"
