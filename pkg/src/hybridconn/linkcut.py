"""Link-cut tree keeping per-edge weights with path-maximum queries.

Mirrors the top-tier spanning forest of the sketched connectivity
engine.  Each forest edge is its own splay node carrying the lowest tier
index at which the edge appears; vertices carry a sentinel weight.  A
path-max query then names the edge that entered the forest highest,
which is the one to displace when a lower-tier link must go through.
"""

from __future__ import annotations

from .errors import NotForestEdgeError
from .forest import EulerTourForest

_NEG = -1


class _Node:
    __slots__ = ("left", "right", "parent", "flip", "weight",
                 "max_weight", "max_node", "label")

    def __init__(self, weight: int, label):
        self.left = None
        self.right = None
        self.parent = None
        self.flip = False
        self.weight = weight
        self.max_weight = weight
        self.max_node = self
        self.label = label


class WeightedPathForest:
    """Dynamic forest over integer vertices with max-weight path queries."""

    def __init__(self):
        self._vert: dict[int, _Node] = {}
        self._deg: dict[int, int] = {}
        self.edge_weight: dict[tuple[int, int], int] = {}
        self._edge_node: dict[tuple[int, int], _Node] = {}

    # -- splay machinery -------------------------------------------------

    @staticmethod
    def _is_splay_root(x: _Node) -> bool:
        p = x.parent
        return p is None or (p.left is not x and p.right is not x)

    @staticmethod
    def _push(x: _Node) -> None:
        if x.flip:
            x.left, x.right = x.right, x.left
            if x.left is not None:
                x.left.flip ^= True
            if x.right is not None:
                x.right.flip ^= True
            x.flip = False

    @staticmethod
    def _pull(x: _Node) -> None:
        w = x.weight
        n = x
        l = x.left
        r = x.right
        if l is not None and l.max_weight > w:
            w = l.max_weight
            n = l.max_node
        if r is not None and r.max_weight > w:
            w = r.max_weight
            n = r.max_node
        x.max_weight = w
        x.max_node = n

    def _rotate(self, x: _Node) -> None:
        p = x.parent
        g = p.parent
        if not self._is_splay_root(p):
            if g.left is p:
                g.left = x
            else:
                g.right = x
        x.parent = g
        if p.left is x:
            p.left = x.right
            if x.right is not None:
                x.right.parent = p
            x.right = p
        else:
            p.right = x.left
            if x.left is not None:
                x.left.parent = p
            x.left = p
        p.parent = x
        self._pull(p)
        self._pull(x)

    def _splay(self, x: _Node) -> None:
        stack = [x]
        n = x
        while not self._is_splay_root(n):
            n = n.parent
            stack.append(n)
        while stack:
            self._push(stack.pop())
        while not self._is_splay_root(x):
            p = x.parent
            if not self._is_splay_root(p):
                g = p.parent
                if (g.left is p) == (p.left is x):
                    self._rotate(p)
                else:
                    self._rotate(x)
            self._rotate(x)

    def _access(self, x: _Node) -> None:
        self._splay(x)
        if x.right is not None:
            x.right = None
            self._pull(x)
        while x.parent is not None:
            y = x.parent
            self._splay(y)
            y.right = x
            self._pull(y)
            self._splay(x)

    def _make_root(self, x: _Node) -> None:
        self._access(x)
        x.flip ^= True
        self._push(x)

    # -- public interface ------------------------------------------------

    def add_vertex(self, v: int) -> None:
        if v in self._vert:
            raise ValueError(f"vertex {v} already present")
        self._vert[v] = _Node(_NEG, v)
        self._deg[v] = 0

    def remove_vertex(self, v: int) -> None:
        if self._deg[v]:
            raise NotForestEdgeError(f"vertex {v} still has forest edges")
        del self._vert[v]
        del self._deg[v]

    def has_vertex(self, v: int) -> bool:
        return v in self._vert

    def has_edge(self, u: int, v: int) -> bool:
        return EulerTourForest.edge_key(u, v) in self.edge_weight

    def edge_count(self) -> int:
        return len(self.edge_weight)

    def link(self, u: int, v: int, weight: int) -> None:
        key = EulerTourForest.edge_key(u, v)
        if key in self.edge_weight:
            raise ValueError(f"forest edge {key} already present")
        if self.connected(u, v):
            raise ValueError(f"linking {key} would close a cycle")
        e = _Node(weight, key)
        nu = self._vert[u]
        nv = self._vert[v]
        self._make_root(nu)
        nu.parent = e
        self._make_root(nv)
        nv.parent = e  # e is root of its own (singleton) tree
        self.edge_weight[key] = weight
        self._edge_node[key] = e
        self._deg[u] += 1
        self._deg[v] += 1

    def cut(self, u: int, v: int) -> None:
        key = EulerTourForest.edge_key(u, v)
        e = self._edge_node.pop(key, None)
        if e is None:
            raise NotForestEdgeError(f"({u}, {v}) is not a top-forest edge")
        del self.edge_weight[key]
        self._deg[u] -= 1
        self._deg[v] -= 1
        for end in (u, v):
            node = self._vert[end]
            self._make_root(e)
            self._access(node)
            # path e..node is [e, node]; detach the left child
            node.left.parent = None
            node.left = None
            self._pull(node)

    def connected(self, u: int, v: int) -> bool:
        if u == v:
            return True
        nu = self._vert[u]
        nv = self._vert[v]
        self._access(nu)
        self._access(nv)
        # u joins v's preferred path iff they share a tree
        return nu.parent is not None

    def path_max(self, u: int, v: int) -> tuple[int, tuple[int, int]]:
        """Maximum edge weight on the tree path u..v and the edge itself."""
        nu = self._vert[u]
        nv = self._vert[v]
        self._make_root(nu)
        self._access(nv)
        if nu is not nv and nu.parent is None:
            raise NotForestEdgeError(f"{u} and {v} are not connected")
        top = nv
        if top.max_weight < 0:
            raise NotForestEdgeError(f"no edges on path {u}..{v}")
        return top.max_weight, top.max_node.label
