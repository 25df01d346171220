"""Fully-dynamic connectivity that splits the graph by vertex density.

Heavy vertices (degree above ``delta``) and the edges between them form the
dense region, handled by the sketch engine; everything else, plus a mirror
of the dense spanning forest, lives in the lossless structure.  Connectivity
queries go to the lossless side alone: since it holds every vertex, all
sparse edges, and a spanning forest of the dense region, its components are
exactly the global ones.

Update routing follows the two pseudocode paths.  An insert first bumps the
global degrees and promotes endpoints that crossed the threshold, then
either hands the edge to the sketch engine (both endpoints dense, with both
recovery IBLTs updated and any spanning-forest deltas replayed into the
lossless side) or stores it losslessly.  A delete demotes endpoints that
fell to the lower threshold before routing the removal the same way.

Promotion moves every edge between the new vertex and the existing dense
set from the lossless side into the sketch engine.  Demotion recovers the
vertex's dense edges from its IBLT, deletes them from the sketch engine,
and re-homes them losslessly; forest deltas from those deletions are
replayed with the recovered edges exempted, because their removal from the
dense forest must not remove the freshly re-homed copies.  A failed IBLT
recovery aborts the demotion before any state changes; the vertex simply
stays dense until a later deletion retries.

Dense updates may be batched in a small buffer.  Anything that could move
the dense spanning forest (a deletion of a live forest edge, an insert
joining two dense components, any promotion or demotion) forces a flush
first, so buffering is invisible to queries.
"""

from __future__ import annotations

from .cutset import SketchGraph
from .errors import (BadParamsError, DuplicateEdgeError, MissingEdgeError,
                     SelfLoopError)
from .hashing import derive_seed
from .iblt import NeighborIblt
from .lossless import LosslessGraph
from .sketch_core import ceil_log2

_IBLT_PURPOSE = 7_400_009


def _key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class HybridGraph:
    """Density-routed dynamic connectivity over a fixed vertex capacity."""

    def __init__(self, num_vertices: int, seed: int = 0,
                 delta: int | None = None, delta_mult: int = 25,
                 demote_div: int = 2, buffer_capacity: int = 1024,
                 tiers: int | None = None):
        if num_vertices < 2:
            raise BadParamsError(f"need at least 2 vertices, got {num_vertices}")
        if delta_mult < 1:
            raise BadParamsError(f"delta multiplier must be >= 1, got {delta_mult}")
        if demote_div < 2:
            raise BadParamsError(f"demote divisor must be >= 2, got {demote_div}")
        if buffer_capacity < 0:
            raise BadParamsError("buffer capacity cannot be negative")
        self.num_vertices = num_vertices
        if delta is None:
            delta = delta_mult * ceil_log2(num_vertices)
        if delta < 2:
            raise BadParamsError(f"density threshold must be >= 2, got {delta}")
        self.delta = delta
        self.demote_at = max(1, delta // demote_div)
        self.seed = seed
        self.buffer_capacity = buffer_capacity
        self._s = LosslessGraph(num_vertices, seed=derive_seed(seed, 1))
        self._d = SketchGraph(num_vertices, seed=derive_seed(seed, 2), tiers=tiers)
        self._deg = [0] * num_vertices
        self._dense = [False] * num_vertices
        self._iblt: dict[int, NeighborIblt] = {}
        self._buffer: list[tuple[int, int]] = []
        self._pending: dict[tuple[int, int], int] = {}
        self._touch = [0] * num_vertices
        self._last_transition = [-1] * num_vertices
        self.min_transition_gap: int | None = None
        self.promotions = 0
        self.demotions = 0
        self.failed_demotions = 0
        self.flushes = 0

    # -- queries -----------------------------------------------------------

    def connected(self, u: int, v: int) -> bool:
        return self._s.connected(u, v)

    def degree(self, v: int) -> int:
        return self._deg[v]

    def is_dense(self, v: int) -> bool:
        return self._dense[v]

    def dense_vertex_count(self) -> int:
        return len(self._iblt)

    def _dense_contains(self, a: int, b: int) -> bool:
        # logical membership: materialized state xor pending buffer parity
        present = self._d.contains(a, b)
        if self._pending.get((a, b), 0) % 2:
            present = not present
        return present

    def contains_edge(self, u: int, v: int) -> bool:
        a, b = _key(u, v)
        return self._s.contains(a, b) or self._dense_contains(a, b)

    def edge_count(self) -> int:
        dense = self._d.edge_count()
        for k, count in self._pending.items():
            if count % 2:
                dense += -1 if self._d.contains(*k) else 1
        mirrored = sum(1 for a, b in self._d.forest_edges() if self._s.contains(a, b))
        return self._s.edge_count() + dense - mirrored

    # -- mirror plumbing ---------------------------------------------------

    def _apply_mirror(self, events, exempt: set | None = None) -> None:
        for kind, a, b in events:
            if kind == "link":
                if not self._s.contains(a, b):
                    self._s.insert_edge(a, b)
            else:
                if exempt and _key(a, b) in exempt:
                    continue
                self._s.delete_edge(a, b)

    def _apply_dense(self, key: tuple[int, int]) -> None:
        events = self._d.update_edge(*key)
        self._apply_mirror(events)

    def flush_buffer(self) -> None:
        if not self._buffer:
            return
        ops = self._buffer
        self._buffer = []
        self._pending.clear()
        self.flushes += 1
        for key in ops:
            self._apply_dense(key)

    def _route_dense(self, key: tuple[int, int], deleting: bool) -> None:
        if self.buffer_capacity == 0:
            self._apply_dense(key)
            return
        a, b = key
        if deleting:
            forces = self._d.is_forest_edge(a, b)
        else:
            forces = not self._d.connected(a, b)
        if forces:
            # the op can move the dense forest; apply it against fresh state
            self.flush_buffer()
            self._apply_dense(key)
            return
        self._buffer.append(key)
        self._pending[key] = self._pending.get(key, 0) + 1
        if len(self._buffer) >= self.buffer_capacity:
            self.flush_buffer()

    # -- transitions -------------------------------------------------------

    def _record_transition(self, v: int) -> None:
        prev = self._last_transition[v]
        now = self._touch[v]
        if prev >= 0:
            gap = now - prev
            if self.min_transition_gap is None or gap < self.min_transition_gap:
                self.min_transition_gap = gap
        self._last_transition[v] = now

    def _promote(self, v: int) -> None:
        self.flush_buffer()
        self._d.insert_vertex(v)
        tbl = NeighborIblt(self.num_vertices, self.demote_at,
                           derive_seed(self.seed, _IBLT_PURPOSE + v))
        self._iblt[v] = tbl
        self._dense[v] = True
        events: list = []
        for a, b in self._s.incident_edges(v):
            w = b if a == v else a
            if not self._dense[w]:
                continue
            self._s.delete_edge(a, b)
            events.extend(self._d.update_edge(a, b))
            tbl.insert(w)
            self._iblt[w].insert(v)
        self._apply_mirror(events)
        self.promotions += 1
        self._record_transition(v)

    def _demote(self, v: int) -> bool:
        self.flush_buffer()
        got = self._iblt[v].recover()
        if got is None or not all(self._dense[w] and self._d.contains(v, w)
                                  for w in got):
            self.failed_demotions += 1
            return False
        rehomed = {_key(v, w) for w in got}
        events: list = []
        for w in sorted(got):
            a, b = _key(v, w)
            events.extend(self._d.update_edge(a, b))
            self._iblt[w].delete(v)
            if not self._s.contains(a, b):
                self._s.insert_edge(a, b)
        self._apply_mirror(events, exempt=rehomed)
        self._d.delete_vertex(v)
        del self._iblt[v]
        self._dense[v] = False
        self.demotions += 1
        self._record_transition(v)
        return True

    # -- updates -----------------------------------------------------------

    def _validate(self, u: int, v: int) -> None:
        n = self.num_vertices
        if not (0 <= u < n and 0 <= v < n):
            raise BadParamsError(f"vertex out of range in ({u}, {v})")
        if u == v:
            raise SelfLoopError(f"self-loop on {u}")

    def insert_edge(self, u: int, v: int) -> None:
        self._validate(u, v)
        if self.contains_edge(u, v):
            raise DuplicateEdgeError(f"edge ({u}, {v}) already present")
        for x in sorted((u, v)):
            self._deg[x] += 1
            self._touch[x] += 1
            if not self._dense[x] and self._deg[x] > self.delta:
                self._promote(x)
        if self._dense[u] and self._dense[v]:
            self._iblt[u].insert(v)
            self._iblt[v].insert(u)
            self._route_dense(_key(u, v), deleting=False)
        else:
            self._s.insert_edge(*_key(u, v))

    def delete_edge(self, u: int, v: int) -> None:
        self._validate(u, v)
        if not self.contains_edge(u, v):
            raise MissingEdgeError(f"edge ({u}, {v}) not present")
        for x in sorted((u, v)):
            self._deg[x] -= 1
            self._touch[x] += 1
            if self._dense[x] and self._deg[x] <= self.demote_at:
                self._demote(x)
        if self._dense[u] and self._dense[v]:
            self._iblt[u].delete(v)
            self._iblt[v].delete(u)
            self._route_dense(_key(u, v), deleting=True)
        else:
            self._s.delete_edge(*_key(u, v))

    # -- accounting and audits ---------------------------------------------

    def space_report(self) -> dict[str, int]:
        sparse = self._s.space_report()["words"]
        dense_report = self._d.space_report()
        dense = dense_report["words"]
        iblt = sum(t.allocated_words for t in self._iblt.values())
        directory = 2 * self.num_vertices  # degree array + dense flags
        return {
            "sparse_words": sparse,
            "dense_words": dense,
            "dense_buckets": dense_report["leaf_buckets"] + dense_report["agg_buckets"],
            "iblt_words": iblt,
            "directory_words": directory,
            "words": sparse + dense + iblt + directory,
        }

    def audit(self, edges) -> list[str]:
        """Full-state check against the true edge set; flushes first."""
        self.flush_buffer()
        problems: list[str] = []
        n = self.num_vertices
        deg = [0] * n
        forest = set(self._d.forest_edges())
        dense_neighbors: dict[int, set[int]] = {v: set() for v in self._iblt}
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
            both_dense = self._dense[a] and self._dense[b]
            in_s = self._s.contains(a, b)
            in_d = self._d.contains(a, b)
            if both_dense:
                if not in_d:
                    problems.append(f"dense edge ({a}, {b}) missing from sketch side")
                if in_s != ((a, b) in forest):
                    problems.append(f"edge ({a}, {b}) breaks the mirror rule")
                dense_neighbors[a].add(b)
                dense_neighbors[b].add(a)
            else:
                if not in_s:
                    problems.append(f"sparse edge ({a}, {b}) missing from lossless side")
                if in_d:
                    problems.append(f"sparse edge ({a}, {b}) present in sketch side")
        edge_set = {_key(a, b) for a, b in edges}
        for a, b in forest:
            if (a, b) not in edge_set:
                problems.append(f"forest edge ({a}, {b}) not a graph edge")
            elif not self._s.contains(a, b):
                problems.append(f"forest edge ({a}, {b}) not mirrored")
        extra_s = self._s.edge_count() - sum(
            1 for a, b in edge_set
            if not (self._dense[a] and self._dense[b]) or (a, b) in forest)
        if extra_s:
            problems.append(f"lossless side holds {extra_s} unexpected edges")
        extra_d = self._d.edge_count() - sum(
            1 for a, b in edge_set if self._dense[a] and self._dense[b])
        if extra_d:
            problems.append(f"sketch side holds {extra_d} unexpected edges")
        for v in range(n):
            if deg[v] != self._deg[v]:
                problems.append(f"vertex {v}: degree {self._deg[v]} vs true {deg[v]}")
            if self._dense[v] != (v in self._iblt):
                problems.append(f"vertex {v}: dense flag out of step with IBLT")
            if self._dense[v] != self._d.is_active(v):
                problems.append(f"vertex {v}: dense flag out of step with sketch side")
        for v, tbl in self._iblt.items():
            expect = NeighborIblt(n, self.demote_at,
                                  derive_seed(self.seed, _IBLT_PURPOSE + v))
            for w in dense_neighbors[v]:
                expect.insert(w)
            if expect.serialize() != tbl.serialize():
                problems.append(f"vertex {v}: IBLT does not match dense neighbors")
        if (self.min_transition_gap is not None
                and self.min_transition_gap < self.demote_at):
            problems.append(f"transition gap {self.min_transition_gap} below hysteresis window")
        return problems
