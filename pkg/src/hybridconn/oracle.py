"""Brute-force connectivity referees for validation runs."""

from __future__ import annotations

from collections import deque
from typing import Iterable


class UnionFind:
    """Array-based union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def labels(self) -> list[int]:
        """Canonical component labels: smallest member id."""
        n = len(self.parent)
        label: dict[int, int] = {}
        out = [0] * n
        for v in range(n):
            r = self.find(v)
            if r not in label:
                label[r] = v
            out[v] = label[r]
        return out


def union_find_labels(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    uf = UnionFind(n)
    for a, b in edges:
        uf.union(a, b)
    return uf.labels()


def bfs_labels(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    """Independent second referee for cross-checking the union-find one."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    label = [-1] * n
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = start
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if label[y] < 0:
                    label[y] = start
                    queue.append(y)
    return label


class LiveOracle:
    """Edge-set shadow answering connectivity exactly.

    Inserts are unioned incrementally; a delete only marks the structure
    dirty, and the next query rebuilds union-find from the surviving
    edges.  Cheap as long as queries cluster between delete bursts.
    """

    def __init__(self, n: int):
        self.n = n
        self.edges: set[tuple[int, int]] = set()
        self._uf = UnionFind(n)
        self._dirty = False

    def insert(self, u: int, v: int) -> None:
        self.edges.add((u, v) if u < v else (v, u))
        if not self._dirty:
            self._uf.union(u, v)

    def delete(self, u: int, v: int) -> None:
        self.edges.discard((u, v) if u < v else (v, u))
        self._dirty = True

    def _refresh(self) -> None:
        if self._dirty:
            self._uf = UnionFind(self.n)
            for a, b in self.edges:
                self._uf.union(a, b)
            self._dirty = False

    def connected(self, u: int, v: int) -> bool:
        self._refresh()
        return self._uf.find(u) == self._uf.find(v)

    def labels(self) -> list[int]:
        self._refresh()
        return self._uf.labels()
