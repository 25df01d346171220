"""Sketch-based dynamic connectivity over tiered cutset forests.

The engine keeps T = max(2, ceil(log2 V)) tiers.  Tier i holds a forest
F_i plus, per active vertex, one sketch column of that vertex's incident
edge ids under a tier-local seed.  Because columns are linear, the XOR
of a component's member columns is a sketch of exactly the edges
crossing the component's cut: internal edges appear twice and cancel.
Those component aggregates are stored per forest root; singleton
components read their single leaf directly.

Maintained invariants:

  1. F_0 has no edges.
  2. F_i is a subforest of F_{i+1}; the top forest spans the graph w.h.p.
  3. A tier-i component whose cutset query currently succeeds is a
     proper subset of its tier-(i+1) component; the repair sweep
     enforces this by linking every successful sample at tiers i+1 and
     up, so a maximal component is left only with a failing query.

A weighted mirror of the top forest records, per forest edge, the
lowest tier at which it appears.  When a repair link would close a
top-tier cycle, the maximum-weight edge on the existing path is cut
from its tiers first; that edge's weight is exactly the lowest tier at
which the endpoints were connected, so the cut separates them at every
tier and the new link proceeds cleanly.
"""

from __future__ import annotations

from .errors import (InactiveVertexError, NonZeroDegreeError,
                     NotForestEdgeError)
from .forest import EulerTourForest
from .hashing import mix64, random_depth
from .linkcut import WeightedPathForest
from .sketch_core import (GOOD, SketchColumn, SketchSeed, ceil_log2,
                          decode_edge, edge_universe, encode_edge)

Event = tuple[str, int, int]


class CutsetTier:
    __slots__ = ("index", "forest", "leaf", "agg", "seed",
                 "column_seed", "checksum_seed", "rho", "mask")

    def __init__(self, index: int, seed: SketchSeed, forest_seed: int,
                 universe: int):
        self.index = index
        self.forest = EulerTourForest(seed=forest_seed)
        self.leaf: dict[int, SketchColumn] = {}
        self.agg: dict[object, SketchColumn] = {}
        self.seed = seed
        self.column_seed = seed.column_seed
        self.checksum_seed = seed.checksum_seed
        template = SketchColumn(universe, seed)
        self.rho = template.rho
        self.mask = template.width_mask


class SketchGraph:
    """Dynamic-connectivity engine answering queries from sketches alone."""

    def __init__(self, num_vertices: int, seed: int = 0, tiers: int | None = None):
        if num_vertices < 2:
            raise ValueError("need at least two vertices")
        if tiers is None:
            tiers = max(3, ceil_log2(num_vertices))
        if tiers < 3:
            # with fewer, multi-vertex components are only ever maximal at
            # the top tier, where nothing samples them
            raise ValueError("need at least three tiers")
        self.num_vertices = num_vertices
        self.universe = edge_universe(num_vertices)
        self.seed = seed
        self._tiers = [
            CutsetTier(i, SketchSeed.derive(seed, i),
                       mix64(seed, 10_000 + i), self.universe)
            for i in range(tiers)
        ]
        self._top = self._tiers[-1]
        self._weights = WeightedPathForest()
        self._edges: set[tuple[int, int]] = set()
        self._deg: dict[int, int] = {}

    # -- vertex directory --------------------------------------------------

    def insert_vertex(self, v: int) -> None:
        if not 0 <= v < self.num_vertices:
            raise ValueError(f"vertex {v} outside capacity {self.num_vertices}")
        if v in self._deg:
            raise ValueError(f"vertex {v} already active")
        self._deg[v] = 0
        for tier in self._tiers:
            tier.leaf[v] = SketchColumn(self.universe, tier.seed)
            tier.forest.add_vertex(v)
        self._weights.add_vertex(v)

    def delete_vertex(self, v: int) -> None:
        deg = self._deg.get(v)
        if deg is None:
            raise InactiveVertexError(f"vertex {v} not active")
        if deg:
            raise NonZeroDegreeError(f"vertex {v} has degree {deg}")
        for tier in self._tiers:
            del tier.leaf[v]
            tier.forest.remove_vertex(v)
        self._weights.remove_vertex(v)
        del self._deg[v]

    def is_active(self, v: int) -> bool:
        return v in self._deg

    def active_count(self) -> int:
        return len(self._deg)

    def degree(self, v: int) -> int:
        return self._deg[v]

    def contains(self, u: int, v: int) -> bool:
        return EulerTourForest.edge_key(u, v) in self._edges

    def edge_count(self) -> int:
        return len(self._edges)

    # -- queries -----------------------------------------------------------

    def connected(self, u: int, v: int) -> bool:
        if u not in self._deg or v not in self._deg:
            raise InactiveVertexError(f"inactive endpoint in ({u}, {v})")
        return self._top.forest.connected(u, v)

    def forest_edges(self):
        return self._top.forest.edges()

    def is_forest_edge(self, u: int, v: int) -> bool:
        return self._top.forest.has_edge(u, v)

    # -- edge updates ------------------------------------------------------

    def update_edge(self, u: int, v: int) -> list[Event]:
        """Insert edge (u, v) if absent, else delete it; returns the
        resulting top-forest link/cut events in execution order."""
        key = EulerTourForest.edge_key(u, v)
        deg = self._deg
        if u not in deg or v not in deg:
            raise InactiveVertexError(f"inactive endpoint in ({u}, {v})")
        j = encode_edge(u, v, self.num_vertices)
        deleting = key in self._edges
        if deleting:
            self._edges.discard(key)
            deg[u] -= 1
            deg[v] -= 1
        else:
            self._edges.add(key)
            deg[u] += 1
            deg[v] += 1
        self._toggle_all_tiers(j, u, v)
        events: list[Event] = []
        marks: list[list[int]] = [[u, v] for _ in self._tiers]
        if deleting and key in self._weights.edge_weight:
            self._cut_forest_edge(key[0], key[1], events, marks)
        self._repair(marks, events)
        return events

    def delete_forest_edge(self, u: int, v: int) -> list[Event]:
        """Cut a forest edge from every tier holding it, then repair.

        The graph edge itself stays; it becomes an ordinary non-forest
        edge and may well be relinked by the repair sweep.
        """
        key = EulerTourForest.edge_key(u, v)
        if key not in self._weights.edge_weight:
            raise NotForestEdgeError(f"({u}, {v}) is not a forest edge")
        events: list[Event] = []
        marks: list[list[int]] = [[] for _ in self._tiers]
        self._cut_forest_edge(key[0], key[1], events, marks)
        self._repair(marks, events)
        return events

    def _toggle_all_tiers(self, j: int, u: int, v: int) -> None:
        for tier in self._tiers:
            g = mix64(tier.checksum_seed, j) & tier.mask
            d = random_depth(tier.column_seed, j, tier.rho)
            leaf = tier.leaf
            leaf[u].toggle_hashed(j, g, d)
            leaf[v].toggle_hashed(j, g, d)
            aggd = tier.agg
            if aggd:
                loop = tier.forest.loop
                n = loop[u]
                while n.parent is not None:
                    n = n.parent
                col = aggd.get(n)
                if col is not None:
                    col.toggle_hashed(j, g, d)
                n = loop[v]
                while n.parent is not None:
                    n = n.parent
                col = aggd.get(n)
                if col is not None:
                    col.toggle_hashed(j, g, d)

    # -- forest maintenance ------------------------------------------------

    def _cut_forest_edge(self, u: int, v: int, events: list[Event],
                         marks: list[list[int]]) -> None:
        key = (u, v)
        weight = self._weights.edge_weight[key]
        self._weights.cut(u, v)
        for i in range(weight, len(self._tiers)):
            self._split_component(self._tiers[i], u, v)
            marks[i].append(u)
            marks[i].append(v)
        # the tier below the cut sees its parent components shrink, so its
        # own components may stop being properly contained
        if weight > 0:
            marks[weight - 1].append(u)
            marks[weight - 1].append(v)
        events.append(("cut", u, v))

    def _split_component(self, tier: CutsetTier, u: int, v: int) -> None:
        f = tier.forest
        old = tier.agg.pop(f.component_root(u))
        f.cut(u, v)
        ru = f.component_root(u)
        rv = f.component_root(v)
        if ru.loops > rv.loops:
            ru, rv = rv, ru
        # rebuild the smaller side from leaves; peel it off the old
        # aggregate to get the larger side
        small = SketchColumn(self.universe, tier.seed)
        leaf = tier.leaf
        for x in f.subtree_vertices(ru):
            small.merge_in_place(leaf[x])
        old.merge_in_place(small)
        if ru.loops > 1:
            tier.agg[ru] = small
        if rv.loops > 1:
            tier.agg[rv] = old

    def _link_span(self, lowest: int, a: int, b: int, events: list[Event],
                   marks: list[list[int]]) -> None:
        for t in range(lowest, len(self._tiers)):
            tier = self._tiers[t]
            f = tier.forest
            ra = f.component_root(a)
            rb = f.component_root(b)
            ca = tier.agg.pop(ra, None)
            cb = tier.agg.pop(rb, None)
            if ca is None:
                ca = tier.leaf[a]
            if cb is None:
                cb = tier.leaf[b]
            merged = ca.merge(cb)
            f.link(a, b)
            tier.agg[f.component_root(a)] = merged
            marks[t].append(a)
        self._weights.link(a, b, lowest)
        events.append(("link", a, b))

    # -- repair sweep ------------------------------------------------------

    def _repair(self, marks: list[list[int]], events: list[Event]) -> None:
        top = len(self._tiers) - 1
        for i in range(top):
            tier = self._tiers[i]
            upper_forest = self._tiers[i + 1].forest
            pending = marks[i]
            seen: set[int] = set()
            idx = 0
            while idx < len(pending):
                v = pending[idx]
                idx += 1
                f = tier.forest
                root = f.component_root(v)
                rid = id(root)
                if rid in seen:
                    continue
                seen.add(rid)
                size = root.loops
                if size < upper_forest.component_root(v).loops:
                    continue  # properly contained above; invariant 3 holds
                col = tier.agg[root] if size > 1 else tier.leaf[v]
                status, coord = col.sample()
                if status != GOOD:
                    continue
                a, b = decode_edge(coord, self.num_vertices)
                if (a, b) not in self._edges:
                    continue  # checksum collision; treat as a failed sample
                if f.connected(a, v) == f.connected(b, v):
                    continue
                if self._weights.connected(a, b):
                    _, (x, y) = self._weights.path_max(a, b)
                    self._cut_forest_edge(x, y, events, marks)
                self._link_span(i + 1, a, b, events, marks)

    # -- bulk loading ------------------------------------------------------

    def bulk_load(self, edges) -> list[Event]:
        """Load a static edge set into an edgeless engine.

        Leaves are built vectorized from each vertex's incidence list;
        the forest hierarchy is the canonical one where every tier above
        0 carries the same spanning forest, which satisfies all three
        invariants, and every multi-vertex component aggregate is the
        empty column because true components have no crossing edges.
        """
        if self._edges:
            raise ValueError("bulk_load requires an edgeless engine")
        incidence: dict[int, list[int]] = {}
        parent = {v: v for v in self._deg}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        spanning: list[tuple[int, int]] = []
        for u, v in edges:
            key = EulerTourForest.edge_key(u, v)
            if u not in self._deg or v not in self._deg:
                raise InactiveVertexError(f"inactive endpoint in ({u}, {v})")
            if key in self._edges:
                continue
            self._edges.add(key)
            self._deg[u] += 1
            self._deg[v] += 1
            j = encode_edge(u, v, self.num_vertices)
            incidence.setdefault(u, []).append(j)
            incidence.setdefault(v, []).append(j)
            ra = find(u)
            rb = find(v)
            if ra != rb:
                parent[ra] = rb
                spanning.append(key)
        for tier in self._tiers:
            for v, ids in incidence.items():
                tier.leaf[v] = SketchColumn.from_support(
                    self.universe, tier.seed, ids)
        events: list[Event] = []
        for u, v in spanning:
            for tier in self._tiers[1:]:
                tier.forest.link(u, v)
            self._weights.link(u, v, 1)
            events.append(("link", u, v))
        for tier in self._tiers[1:]:
            f = tier.forest
            done: set[int] = set()
            for v in self._deg:
                root = f.component_root(v)
                if root.loops > 1 and id(root) not in done:
                    done.add(id(root))
                    tier.agg[root] = SketchColumn(self.universe, tier.seed)
        return events

    # -- audits ------------------------------------------------------------

    def audit_invariants(self) -> list[str]:
        """Full structural audit; returns human-readable violations."""
        bad: list[str] = []
        tiers = self._tiers
        if tiers[0].forest.edge_count():
            bad.append("tier 0 forest has edges")
        for i in range(len(tiers) - 1):
            lower = set(tiers[i].forest.edges())
            upper = set(tiers[i + 1].forest.edges())
            if not lower <= upper:
                bad.append(f"F_{i} not within F_{i + 1}")
        top_edges = set(self._top.forest.edges())
        if top_edges != set(self._weights.edge_weight):
            bad.append("weight mirror out of sync with top forest")
        for key, w in self._weights.edge_weight.items():
            for i, tier in enumerate(tiers):
                if tier.forest.has_edge(*key) != (i >= w):
                    bad.append(f"edge {key} weight {w} wrong at tier {i}")
                    break
        for tier in tiers:
            if len(tier.leaf) != len(self._deg):
                bad.append(f"tier {tier.index} directory size mismatch")
            bad.extend(self._audit_tier_aggregates(tier))
        bad.extend(self._audit_containment())
        return bad

    def _audit_tier_aggregates(self, tier: CutsetTier) -> list[str]:
        bad: list[str] = []
        f = tier.forest
        seen: set[int] = set()
        for v in self._deg:
            root = f.component_root(v)
            rid = id(root)
            if rid in seen:
                continue
            seen.add(rid)
            stored = tier.agg.get(root)
            if root.loops == 1:
                if stored is not None:
                    bad.append(f"tier {tier.index}: singleton {v} has aggregate")
                continue
            if stored is None:
                bad.append(f"tier {tier.index}: component of {v} lacks aggregate")
                continue
            direct = SketchColumn(self.universe, tier.seed)
            for x in f.subtree_vertices(root):
                direct.merge_in_place(tier.leaf[x])
            if direct != stored:
                bad.append(f"tier {tier.index}: aggregate of {v} inexact")
        return bad

    def _audit_containment(self) -> list[str]:
        """Invariant 3: a component not properly contained above must not
        have a currently succeeding cutset query (the repair sweep links
        every success, so one surviving means a missed repair)."""
        bad: list[str] = []
        tiers = self._tiers
        for i in range(len(tiers) - 1):
            f = tiers[i].forest
            up = tiers[i + 1].forest
            seen: set[int] = set()
            for v in self._deg:
                root = f.component_root(v)
                if id(root) in seen:
                    continue
                seen.add(id(root))
                if root.loops < up.component_root(v).loops:
                    continue
                col = (tiers[i].agg[root] if root.loops > 1
                       else tiers[i].leaf[v])
                status, coord = col.sample()
                if status != GOOD:
                    continue
                a, b = decode_edge(coord, self.num_vertices)
                if ((a, b) in self._edges
                        and f.connected(a, v) != f.connected(b, v)):
                    bad.append(
                        f"tier {i}: maximal component of {v} (size "
                        f"{root.loops}) still samples edge ({a}, {b})")
        return bad

    # -- accounting --------------------------------------------------------

    def space_report(self) -> dict[str, int]:
        leaf_buckets = 0
        agg_buckets = 0
        forest_nodes = 0
        directory = len(self._edges) + len(self._deg)
        for tier in self._tiers:
            leaf_buckets += sum(len(c.alpha) for c in tier.leaf.values())
            agg_buckets += sum(len(c.alpha) for c in tier.agg.values())
            forest_nodes += tier.forest.node_count
            directory += len(tier.leaf) + len(tier.agg)
        forest_nodes += len(self._weights._vert) + self._weights.edge_count()
        bucket_words = 2 * (leaf_buckets + agg_buckets)
        return {
            "leaf_buckets": leaf_buckets,
            "agg_buckets": agg_buckets,
            "bucket_words": bucket_words,
            "forest_nodes": forest_nodes,
            "directory_entries": directory,
            "words": bucket_words + 4 * forest_nodes + directory,
        }
