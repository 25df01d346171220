"""Stream replay through a selected engine with oracle validation.

The runner feeds a parsed stream into one of the four connectivity engines,
answers every ``q`` line, validates answers against an exact shadow oracle,
performs a full partition audit at every ``c`` line, and emits one metrics
row per checkpoint interval.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .cutset import SketchGraph
from .errors import BadParamsError
from .hybrid import HybridGraph
from .lossless import LosslessGraph
from .metrics import MetricsRow
from .oracle import LiveOracle
from .streaming import StreamGraph

MODES = ("hybrid", "lossless", "sketch", "streaming")


@dataclass
class RunConfig:
    seed: int = 0
    delta_mult: int = 25
    demote_div: int = 2
    delta: int | None = None
    tiers: int | None = None
    columns: int | None = None
    buffer_capacity: int = 1024
    checkpoint_every: int = 1000
    timing: bool = True


@dataclass
class RunResult:
    rows: list[MetricsRow] = field(default_factory=list)
    answers: list[bool] = field(default_factory=list)
    queries: int = 0
    mismatches: int = 0


class _HybridEngine:
    mode = "hybrid"

    def __init__(self, n: int, cfg: RunConfig):
        self.g = HybridGraph(n, seed=cfg.seed, delta=cfg.delta,
                             delta_mult=cfg.delta_mult,
                             demote_div=cfg.demote_div,
                             buffer_capacity=cfg.buffer_capacity,
                             tiers=cfg.tiers)

    def insert(self, u, v):
        self.g.insert_edge(u, v)

    def delete(self, u, v):
        self.g.delete_edge(u, v)

    def connected(self, u, v):
        return self.g.connected(u, v)

    def space(self):
        rep = self.g.space_report()
        return (rep["sparse_words"],
                rep["dense_words"] + rep["directory_words"],
                rep["iblt_words"], rep["dense_buckets"],
                self.g.dense_vertex_count())


class _LosslessEngine:
    mode = "lossless"

    def __init__(self, n: int, cfg: RunConfig):
        self.g = LosslessGraph(n, seed=cfg.seed)

    def insert(self, u, v):
        self.g.insert_edge(u, v)

    def delete(self, u, v):
        self.g.delete_edge(u, v)

    def connected(self, u, v):
        return self.g.connected(u, v)

    def space(self):
        return (self.g.space_report()["words"], 0, 0, 0, 0)


class _SketchEngine:
    mode = "sketch"

    def __init__(self, n: int, cfg: RunConfig):
        self.g = SketchGraph(n, seed=cfg.seed, tiers=cfg.tiers)
        for v in range(n):
            self.g.insert_vertex(v)

    def insert(self, u, v):
        self.g.update_edge(u, v)

    def delete(self, u, v):
        self.g.update_edge(u, v)

    def connected(self, u, v):
        return self.g.connected(u, v)

    def space(self):
        rep = self.g.space_report()
        return (0, rep["words"], 0,
                rep["leaf_buckets"] + rep["agg_buckets"],
                self.g.active_count())


class _StreamEngine:
    mode = "streaming"

    def __init__(self, n: int, cfg: RunConfig):
        self.g = StreamGraph(n, seed=cfg.seed, delta=cfg.delta,
                             delta_mult=cfg.delta_mult, columns=cfg.columns)
        self._labels: list[int] | None = None

    def insert(self, u, v):
        self.g.insert_edge(u, v)
        self._labels = None

    def delete(self, u, v):
        self.g.delete_edge(u, v)
        self._labels = None

    def connected(self, u, v):
        if self._labels is None:
            _, self._labels = self.g.query_spanning_forest()
        return self._labels[u] == self._labels[v]

    def space(self):
        rep = self.g.space_report()
        return (rep["explicit_words"], rep["matrix_words"],
                rep["iblt_words"], rep["matrix_buckets"],
                self.g.sketch_vertex_count())


_ENGINES = {
    "hybrid": _HybridEngine,
    "lossless": _LosslessEngine,
    "sketch": _SketchEngine,
    "streaming": _StreamEngine,
}


def make_engine(mode: str, num_vertices: int, cfg: RunConfig):
    if mode not in _ENGINES:
        raise BadParamsError(f"unknown mode {mode!r}; pick one of {MODES}")
    return _ENGINES[mode](num_vertices, cfg)


def _partition_audit(engine, labels: list[int]) -> int:
    """Full component check: every vertex reaches its label representative
    and distinct representatives stay apart.  Returns the failure count."""
    bad = 0
    reps = sorted(set(labels))
    for v, lab in enumerate(labels):
        if v != lab and not engine.connected(v, lab):
            bad += 1
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            if engine.connected(a, b):
                bad += 1
    return bad


def run_stream(mode: str, num_vertices: int, ops, cfg: RunConfig) -> RunResult:
    engine = make_engine(mode, num_vertices, cfg)
    oracle = LiveOracle(num_vertices)
    out = RunResult()
    step = 0
    row_started = time.perf_counter()
    row_updates = 0
    query_ns = 0
    row_queries = 0

    def emit_row():
        nonlocal row_started, row_updates, query_ns, row_queries
        elapsed = time.perf_counter() - row_started
        if cfg.timing and elapsed > 0:
            ups = row_updates / elapsed
        else:
            ups = 0.0
        latency = query_ns // row_queries if (cfg.timing and row_queries) else 0
        sparse, dense, iblt, buckets, dense_verts = engine.space()
        out.rows.append(MetricsRow(
            step=step, mode=mode, counted_words_sparse=sparse,
            counted_words_dense=dense, counted_words_iblt=iblt,
            buckets_total=buckets, dense_vertices=dense_verts,
            throughput_ups=ups, query_latency_ns=latency,
            oracle_mismatches=out.mismatches))
        row_started = time.perf_counter()
        row_updates = 0
        query_ns = 0
        row_queries = 0

    pending = False
    for op in ops:
        kind = op[0]
        if kind == "i" or kind == "d":
            u, v = op[1], op[2]
            if kind == "i":
                engine.insert(u, v)
                oracle.insert(u, v)
            else:
                engine.delete(u, v)
                oracle.delete(u, v)
            step += 1
            row_updates += 1
            pending = True
            if cfg.checkpoint_every and step % cfg.checkpoint_every == 0:
                emit_row()
                pending = False
        elif kind == "q":
            u, v = op[1], op[2]
            t0 = time.perf_counter_ns()
            got = engine.connected(u, v)
            query_ns += time.perf_counter_ns() - t0
            row_queries += 1
            out.answers.append(got)
            out.queries += 1
            if got != oracle.connected(u, v):
                out.mismatches += 1
            pending = True
        else:
            out.mismatches += _partition_audit(engine, oracle.labels())
            pending = True
    if pending:
        emit_row()
    return out
