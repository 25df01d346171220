"""Semi-streaming connectivity with per-vertex adaptive storage.

Every vertex starts in explicit form, holding a plain neighbor set.  When
its degree climbs past the density threshold ``delta`` the vertex promotes
to sketch form: a bank of sketch columns plus a recovery IBLT.  Dropping
back to ``delta // 2`` triggers demotion, which rebuilds the explicit set
from the IBLT.  Edges are stored asymmetrically so the total footprint
stays near min(degree, polylog) words per vertex:

* both endpoints sketch-form: the edge id is toggled into both sketches
  and both IBLTs;
* otherwise: the edge sits in exactly one explicit endpoint's set (ties
  broken toward the lower id on insert).

Under this rule no sketch ever receives an edge with an explicit endpoint,
which is what lets a component's merged sketch cancel everything internal.

The spanning-forest query runs in two phases.  Phase one walks the edges
held in explicit sets (breadth first), collapsing the graph into
super-components.  Phase two repeatedly XOR-merges the sketch matrices
inside each super-component and samples one fresh column per round for an
outgoing edge, contracting until samples stop landing.  Queries operate on
merged copies, so the structure remains live afterward.
"""

from __future__ import annotations

from collections import deque

from .errors import BadParamsError, MalformedUpdateError
from .hashing import derive_seed
from .iblt import NeighborIblt
from .sketch_core import (EMPTY, GOOD, SketchMatrix, ceil_log2, decode_edge,
                          edge_universe, encode_edge)

_IBLT_PURPOSE = 3_000_017


def _edge_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class StreamGraph:
    """One-pass connectivity structure over an insert/delete edge stream."""

    def __init__(self, num_vertices: int, seed: int = 0,
                 delta: int | None = None, delta_mult: int = 25,
                 columns: int | None = None):
        if num_vertices < 2:
            raise BadParamsError(f"need at least 2 vertices, got {num_vertices}")
        if delta_mult < 1:
            raise BadParamsError(f"delta multiplier must be >= 1, got {delta_mult}")
        if columns is not None and columns < 1:
            raise BadParamsError(f"need at least one column, got {columns}")
        self.num_vertices = num_vertices
        self.columns = columns if columns is not None else ceil_log2(num_vertices)
        if delta is None:
            delta = delta_mult * self.columns
        if delta < 2:
            raise BadParamsError(f"density threshold must be >= 2, got {delta}")
        self.delta = delta
        self.demote_at = delta // 2
        self.seed = seed
        self.universe = edge_universe(num_vertices)
        self._deg = [0] * num_vertices
        self._set: list[set[int] | None] = [set() for _ in range(num_vertices)]
        self._matrix: list[SketchMatrix | None] = [None] * num_vertices
        self._iblt: list[NeighborIblt | None] = [None] * num_vertices
        # incident-update counters back the hysteresis bookkeeping
        self._touch = [0] * num_vertices
        self._last_transition = [-1] * num_vertices
        self.min_transition_gap: int | None = None
        self.promotions = 0
        self.demotions = 0
        self.failed_demotions = 0

    # -- introspection -----------------------------------------------------

    def degree(self, v: int) -> int:
        return self._deg[v]

    def is_sketch(self, v: int) -> bool:
        return self._matrix[v] is not None

    def explicit_neighbors(self, v: int) -> list[int]:
        """Neighbors whose edge is stored at v; v must be explicit-form."""
        stored = self._set[v]
        if stored is None:
            raise BadParamsError(f"vertex {v} is in sketch form")
        return sorted(stored)

    def sketch_is_empty(self, v: int) -> bool:
        mat = self._matrix[v]
        if mat is None:
            raise BadParamsError(f"vertex {v} is in explicit form")
        return mat.is_empty() and self._iblt[v].is_empty()

    def sketch_vertex_count(self) -> int:
        return sum(1 for m in self._matrix if m is not None)

    # -- stream ingestion --------------------------------------------------

    def process(self, u: int, v: int, delta: int) -> None:
        if delta == 1:
            self.insert_edge(u, v)
        elif delta == -1:
            self.delete_edge(u, v)
        else:
            raise MalformedUpdateError(f"update delta must be +-1, got {delta}")

    def _validate_pair(self, u: int, v: int) -> None:
        n = self.num_vertices
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedUpdateError(f"vertex out of range in ({u}, {v})")
        if u == v:
            raise MalformedUpdateError(f"self-loop on {u}")

    def _stored_at(self, u: int, v: int) -> int | None:
        su = self._set[u]
        if su is not None and v in su:
            return u
        sv = self._set[v]
        if sv is not None and u in sv:
            return v
        return None

    def insert_edge(self, u: int, v: int) -> None:
        self._validate_pair(u, v)
        if self._stored_at(u, v) is not None:
            raise MalformedUpdateError(f"insert of present edge ({u}, {v})")
        # a duplicate between two sketch-form endpoints is undetectable in
        # this space regime; the stream contract rules it out
        self._deg[u] += 1
        self._deg[v] += 1
        self._touch[u] += 1
        self._touch[v] += 1
        for w in ((u, v) if u < v else (v, u)):
            if self._set[w] is not None and self._deg[w] > self.delta:
                self._promote(w)
        if self._set[u] is None and self._set[v] is None:
            self._sketch_toggle(u, v)
        elif self._set[u] is None:
            self._set[v].add(u)
        elif self._set[v] is None:
            self._set[u].add(v)
        else:
            a, b = (u, v) if u < v else (v, u)
            self._set[a].add(b)

    def delete_edge(self, u: int, v: int) -> None:
        self._validate_pair(u, v)
        holder = self._stored_at(u, v)
        if holder is None:
            both_sketch = self._set[u] is None and self._set[v] is None
            if not both_sketch or self._deg[u] == 0 or self._deg[v] == 0:
                raise MalformedUpdateError(f"delete of absent edge ({u}, {v})")
        self._deg[u] -= 1
        self._deg[v] -= 1
        self._touch[u] += 1
        self._touch[v] += 1
        for w in ((u, v) if u < v else (v, u)):
            if self._set[w] is None and self._deg[w] <= self.demote_at:
                self._demote(w)
        holder = self._stored_at(u, v)
        if holder is not None:
            self._set[holder].discard(v if holder == u else u)
        else:
            self._sketch_toggle(u, v)

    def _sketch_toggle(self, u: int, v: int) -> None:
        j = encode_edge(u, v, self.num_vertices)
        self._matrix[u].update(j)
        self._matrix[v].update(j)
        self._iblt[u].insert(v)
        self._iblt[v].insert(u)

    # -- form transitions --------------------------------------------------

    def _record_transition(self, v: int) -> None:
        prev = self._last_transition[v]
        now = self._touch[v]
        if prev >= 0:
            gap = now - prev
            if self.min_transition_gap is None or gap < self.min_transition_gap:
                self.min_transition_gap = gap
        self._last_transition[v] = now

    def _promote(self, v: int) -> None:
        mat = SketchMatrix(self.universe, self.columns, self.seed)
        tbl = NeighborIblt(self.num_vertices, self.demote_at,
                           derive_seed(self.seed, _IBLT_PURPOSE + v))
        for w in sorted(self._set[v]):
            if self._set[w] is None:
                # neighbor already sketched: the edge now lives on both sides
                j = encode_edge(v, w, self.num_vertices)
                mat.update(j)
                tbl.insert(w)
                self._matrix[w].update(j)
                self._iblt[w].insert(v)
            else:
                self._set[w].add(v)
        self._set[v] = None
        self._matrix[v] = mat
        self._iblt[v] = tbl
        self.promotions += 1
        self._record_transition(v)

    def _demote(self, v: int) -> bool:
        got = self._iblt[v].recover()
        if got is None or any(self._set[w] is not None for w in got):
            self.failed_demotions += 1
            return False
        for w in sorted(got):
            j = encode_edge(v, w, self.num_vertices)
            self._matrix[w].update(j)
            self._iblt[w].delete(v)
        self._set[v] = set(got)
        self._matrix[v] = None
        self._iblt[v] = None
        self.demotions += 1
        self._record_transition(v)
        return True

    # -- spanning-forest query ---------------------------------------------

    def query_spanning_forest(self) -> tuple[list[tuple[int, int]], list[int]]:
        """Return (sorted forest edge list, per-vertex component labels).

        Labels are canonical: every vertex maps to the smallest vertex id in
        its component.  The structure itself is untouched.
        """
        n = self.num_vertices
        adj: list[list[int]] = [[] for _ in range(n)]
        for x in range(n):
            stored = self._set[x]
            if stored is None:
                continue
            for y in stored:
                adj[x].append(y)
                adj[y].append(x)
        label = [-1] * n
        forest: list[tuple[int, int]] = []
        for s in range(n):
            if label[s] >= 0:
                continue
            label[s] = s
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if label[y] < 0:
                        label[y] = s
                        forest.append(_edge_key(x, y))
                        queue.append(y)

        members: dict[int, list[int]] = {}
        for v in range(n):
            if self._matrix[v] is not None:
                members.setdefault(label[v], []).append(v)

        parent: dict[int, int] = {root: root for root in set(label)}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for rnd in range(self.columns):
            groups: dict[int, list[int]] = {}
            for root, verts in members.items():
                groups.setdefault(find(root), []).extend(verts)
            candidates: list[tuple[int, int]] = []
            live_cutsets = False
            for verts in groups.values():
                acc = self._matrix[verts[0]].columns[rnd].copy()
                for v in verts[1:]:
                    acc.merge_in_place(self._matrix[v].columns[rnd])
                status, coord = acc.sample()
                if status == EMPTY:
                    continue
                # a failed sample still proves outgoing edges exist, so the
                # next round's fresh column deserves a try
                live_cutsets = True
                if status != GOOD or coord >= self.universe:
                    continue
                a, b = decode_edge(coord, n)
                if find(label[a]) != find(label[b]):
                    candidates.append((a, b))
            if not live_cutsets:
                break
            for a, b in candidates:
                ra, rb = find(label[a]), find(label[b])
                if ra == rb:
                    continue
                parent[max(ra, rb)] = min(ra, rb)
                forest.append(_edge_key(a, b))

        out = [find(label[v]) for v in range(n)]
        return sorted(forest), out

    # -- audits and accounting ---------------------------------------------

    def audit(self, edges) -> list[str]:
        """Cross-check storage against the true edge set; [] when clean."""
        problems: list[str] = []
        n = self.num_vertices
        deg = [0] * n
        sketch_support: dict[int, list[int]] = {}
        sketch_neighbors: dict[int, set[int]] = {}
        stored_total = 0
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
            sa = self._set[a] is None
            sb = self._set[b] is None
            if sa and sb:
                j = encode_edge(a, b, n)
                sketch_support.setdefault(a, []).append(j)
                sketch_support.setdefault(b, []).append(j)
                sketch_neighbors.setdefault(a, set()).add(b)
                sketch_neighbors.setdefault(b, set()).add(a)
                if self._stored_at(a, b) is not None:
                    problems.append(f"sketched edge ({a}, {b}) also stored explicitly")
            else:
                holder = self._stored_at(a, b)
                if holder is None:
                    problems.append(f"edge ({a}, {b}) not stored anywhere")
                elif self._set[holder] is None:
                    problems.append(f"edge ({a}, {b}) held by sketch vertex {holder}")
                else:
                    stored_total += 1
        entries = sum(len(s) for s in self._set if s is not None)
        if entries != stored_total:
            problems.append(f"{entries} explicit entries for {stored_total} light edges")
        for v in range(n):
            if deg[v] != self._deg[v]:
                problems.append(f"vertex {v}: degree {self._deg[v]} vs true {deg[v]}")
            if self._set[v] is not None:
                if self._deg[v] > self.delta:
                    problems.append(f"explicit vertex {v} over threshold ({self._deg[v]})")
                continue
            expect = SketchMatrix.from_support(
                self.universe, self.columns, self.seed,
                sketch_support.get(v, []))
            if expect != self._matrix[v]:
                problems.append(f"vertex {v}: sketch matrix out of sync")
            expect_tbl = NeighborIblt(n, self.demote_at,
                                      derive_seed(self.seed, _IBLT_PURPOSE + v))
            for w in sketch_neighbors.get(v, set()):
                expect_tbl.insert(w)
            if expect_tbl.serialize() != self._iblt[v].serialize():
                problems.append(f"vertex {v}: IBLT does not match sketch neighbors")
        if self.min_transition_gap is not None and self.min_transition_gap <= self.demote_at:
            problems.append(f"transition gap {self.min_transition_gap} below hysteresis window")
        return problems

    def vertex_words(self, v: int) -> int:
        """Analytic word count: degree counter plus payload storage."""
        if self._set[v] is not None:
            return 1 + len(self._set[v])
        return 1 + self._matrix[v].allocated_words + self._iblt[v].allocated_words

    def space_report(self) -> dict[str, int]:
        explicit_words = 0
        matrix_words = 0
        matrix_buckets = 0
        iblt_words = 0
        for v in range(self.num_vertices):
            if self._set[v] is not None:
                explicit_words += 1 + len(self._set[v])
            else:
                matrix_words += 1 + self._matrix[v].allocated_words
                matrix_buckets += self._matrix[v].allocated_buckets
                iblt_words += self._iblt[v].allocated_words
        return {
            "explicit_words": explicit_words,
            "matrix_words": matrix_words,
            "matrix_buckets": matrix_buckets,
            "iblt_words": iblt_words,
            "words": explicit_words + matrix_words + iblt_words,
        }
