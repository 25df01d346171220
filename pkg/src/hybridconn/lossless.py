"""Exact dynamic connectivity with a leveled spanning-forest hierarchy.

Holm/de Lichtenberg/Thorup scheme: every edge carries a level that only
rises; forest edges of level l appear in the Euler-tour forests for
levels 0..l, so forest 0 is the full spanning forest.  Deleting a forest
edge triggers the usual replacement search that pushes the smaller
side's tree edges up one level, then sweeps that side's non-tree edges,
promoting failures and reconnecting on the first crossing edge found.

Besides connectivity this structure answers the bookkeeping queries the
hybrid framework asks of its sparse half: exact incident-edge
enumeration and edge membership.
"""

from __future__ import annotations

from .errors import DuplicateEdgeError, MissingEdgeError
from .forest import LevelTourForest
from .sketch_core import ceil_log2

Event = tuple[str, int, int]


class LosslessGraph:
    """Adjacency-list graph with O(polylog) connectivity maintenance."""

    def __init__(self, num_vertices: int, seed: int = 0):
        if num_vertices < 1:
            raise ValueError("need at least one vertex")
        self.num_vertices = num_vertices
        self._seed = seed
        self._adj: dict[int, set[int]] = {v: set() for v in range(num_vertices)}
        # edge key -> current level
        self._edges: dict[tuple[int, int], int] = {}
        base = LevelTourForest(seed=seed)
        for v in range(num_vertices):
            base.add_vertex(v)
        self._levels: list[LevelTourForest] = [base]
        # level -> vertex -> its non-tree neighbors at that level
        self._spare: list[dict[int, set[int]]] = [{}]

    # -- plumbing ----------------------------------------------------------

    def _forest(self, i: int) -> LevelTourForest:
        while len(self._levels) <= i:
            self._levels.append(LevelTourForest(seed=self._seed + len(self._levels)))
            self._spare.append({})
        return self._levels[i]

    def _ensure_vertex(self, i: int, v: int) -> None:
        f = self._forest(i)
        if not f.has_vertex(v):
            f.add_vertex(v)

    def _add_spare(self, i: int, u: int, v: int) -> None:
        f = self._forest(i)
        spare = self._spare[i]
        for a, b in ((u, v), (v, u)):
            s = spare.setdefault(a, set())
            if not s:
                f.set_loop_flag(a, True)
            s.add(b)

    def _remove_spare(self, i: int, u: int, v: int) -> None:
        spare = self._spare[i]
        for a, b in ((u, v), (v, u)):
            s = spare[a]
            s.remove(b)
            if not s:
                del spare[a]
                self._levels[i].set_loop_flag(a, False)

    # -- queries -----------------------------------------------------------

    def connected(self, u: int, v: int) -> bool:
        return self._levels[0].connected(u, v)

    def contains(self, u: int, v: int) -> bool:
        return LevelTourForest.edge_key(u, v) in self._edges

    def incident_edges(self, v: int) -> list[tuple[int, int]]:
        return [LevelTourForest.edge_key(v, w) for w in sorted(self._adj[v])]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edge_count(self) -> int:
        return len(self._edges)

    def forest_edge_count(self) -> int:
        return self._levels[0].edge_count()

    def forest_edges(self) -> list[tuple[int, int]]:
        return self._levels[0].edges()

    def is_forest_edge(self, u: int, v: int) -> bool:
        return self._levels[0].has_edge(u, v)

    def component_size(self, v: int) -> int:
        return self._levels[0].component_size(v)

    def max_level(self) -> int:
        return max(self._edges.values(), default=0)

    # -- updates -----------------------------------------------------------

    def insert_edge(self, u: int, v: int) -> list[Event]:
        key = LevelTourForest.edge_key(u, v)
        if key in self._edges:
            raise DuplicateEdgeError(f"edge {key} already present")
        self._edges[key] = 0
        self._adj[u].add(v)
        self._adj[v].add(u)
        base = self._levels[0]
        if base.connected(u, v):
            self._add_spare(0, u, v)
            return []
        base.link(u, v)
        base.set_tree_flag(u, v, True)
        return [("link", u, v)]

    def delete_edge(self, u: int, v: int) -> list[Event]:
        key = LevelTourForest.edge_key(u, v)
        level = self._edges.pop(key, None)
        if level is None:
            raise MissingEdgeError(f"edge {key} not present")
        self._adj[u].discard(v)
        self._adj[v].discard(u)
        if not self._levels[0].has_edge(u, v):
            self._remove_spare(level, u, v)
            return []
        for i in range(level + 1):
            self._levels[i].cut(u, v)
        events: list[Event] = [("cut", u, v)]
        replacement = self._search_replacement(u, v, level)
        if replacement is not None:
            events.append(("link", *replacement))
        return events

    def _search_replacement(self, u: int, v: int, level: int):
        """Walk levels high to low looking for an edge rejoining the split."""
        for i in range(level, -1, -1):
            fi = self._levels[i]
            small, other = u, v
            if fi.component_size(small) > fi.component_size(other):
                small, other = other, small
            # tree edges local to this level move up a level first
            while True:
                edge = fi.find_flagged_tree_edge(small)
                if edge is None:
                    break
                x, y = edge
                fi.set_tree_flag(x, y, False)
                self._edges[edge] = i + 1
                self._ensure_vertex(i + 1, x)
                self._ensure_vertex(i + 1, y)
                up = self._forest(i + 1)
                up.link(x, y)
                up.set_tree_flag(x, y, True)
            while True:
                w = fi.find_flagged_vertex(small)
                if w is None:
                    break
                for z in sorted(self._spare[i][w]):
                    self._remove_spare(i, w, z)
                    if fi.connected(z, other):
                        for j in range(i + 1):
                            self._levels[j].link(w, z)
                        fi.set_tree_flag(w, z, True)
                        return LevelTourForest.edge_key(w, z)
                    self._edges[LevelTourForest.edge_key(w, z)] = i + 1
                    self._ensure_vertex(i + 1, w)
                    self._ensure_vertex(i + 1, z)
                    self._add_spare(i + 1, w, z)
        return None

    # -- accounting --------------------------------------------------------

    def space_report(self) -> dict[str, int]:
        forest_nodes = sum(f.node_count for f in self._levels)
        adjacency = sum(len(s) for s in self._adj.values())
        spare = sum(len(s) for level in self._spare for s in level.values())
        records = len(self._edges)
        words = 4 * forest_nodes + adjacency + spare + records
        return {
            "forest_nodes": forest_nodes,
            "adjacency_entries": adjacency,
            "spare_entries": spare,
            "edge_records": records,
            "words": words,
        }
