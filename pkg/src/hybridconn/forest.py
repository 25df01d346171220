"""Euler-tour forests over randomized balanced search trees.

A component's Euler tour is kept as an implicit-key treap: one loop node
per vertex plus a directed arc node per forest-edge direction.  Link and
cut are splice operations on the tour; connectivity is root identity;
component sizes come from subtree loop counts.  Treap priorities are
drawn from a forest-local seeded RNG so runs are reproducible.

The level variant used by the lossless engine adds two counter channels
(tree edges at exactly this level, vertices with spare edges at this
level) so replacement searches can walk straight to flagged nodes.
"""

from __future__ import annotations

import random
from typing import Iterator

from .errors import NotForestEdgeError, SelfLoopError


class TourNode:
    __slots__ = ("prio", "left", "right", "parent", "size", "loops",
                 "is_loop", "payload")

    def __init__(self, prio: int, is_loop: bool, payload):
        self.prio = prio
        self.left = None
        self.right = None
        self.parent = None
        self.size = 1
        self.loops = 1 if is_loop else 0
        self.is_loop = is_loop
        self.payload = payload


class EulerTourForest:
    """Dynamic forest over integer vertices with O(log) link/cut/connected."""

    node_class = TourNode

    def __init__(self, seed: int = 0):
        self._rng = random.Random(seed)
        self.loop: dict[int, TourNode] = {}
        self._arcs: dict[tuple[int, int], tuple[TourNode, TourNode]] = {}
        self.node_count = 0

    # -- node plumbing ---------------------------------------------------

    def _new_node(self, is_loop: bool, payload) -> TourNode:
        self.node_count += 1
        return self.node_class(self._rng.getrandbits(60), is_loop, payload)

    def _pull(self, n: TourNode) -> None:
        size = 1
        loops = 1 if n.is_loop else 0
        l = n.left
        r = n.right
        if l is not None:
            size += l.size
            loops += l.loops
        if r is not None:
            size += r.size
            loops += r.loops
        n.size = size
        n.loops = loops

    def _merge(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        if a.prio >= b.prio:
            sub = self._merge(a.right, b)
            a.right = sub
            sub.parent = a
            self._pull(a)
            return a
        sub = self._merge(a, b.left)
        b.left = sub
        sub.parent = b
        self._pull(b)
        return b

    def _split_before(self, x: TourNode):
        """Split x's tour into (prefix strictly before x, suffix from x)."""
        a = x.left
        if a is not None:
            a.parent = None
            x.left = None
            self._pull(x)
        b = x
        node = x
        p = x.parent
        x.parent = None
        while p is not None:
            gp = p.parent
            from_left = p.left is node
            if from_left:
                p.left = None
            else:
                p.right = None
            p.parent = None
            self._pull(p)
            if from_left:
                b = self._merge(b, p)
            else:
                a = self._merge(p, a)
            node = p
            p = gp
        return a, b

    def _split_after(self, x: TourNode):
        """Split x's tour into (prefix through x, suffix strictly after x)."""
        b = x.right
        if b is not None:
            b.parent = None
            x.right = None
            self._pull(x)
        a = x
        node = x
        p = x.parent
        x.parent = None
        while p is not None:
            gp = p.parent
            from_left = p.left is node
            if from_left:
                p.left = None
            else:
                p.right = None
            p.parent = None
            self._pull(p)
            if from_left:
                b = self._merge(b, p)
            else:
                a = self._merge(p, a)
            node = p
            p = gp
        return a, b

    @staticmethod
    def _root(n: TourNode) -> TourNode:
        while n.parent is not None:
            n = n.parent
        return n

    @staticmethod
    def _position(n: TourNode) -> int:
        pos = n.left.size if n.left is not None else 0
        while n.parent is not None:
            p = n.parent
            if p.right is n:
                pos += (p.left.size if p.left is not None else 0) + 1
            n = p
        return pos

    def _reroot(self, x: TourNode) -> TourNode:
        """Rotate x's tour so it starts at x; returns the new treap root."""
        a, b = self._split_before(x)
        return self._merge(b, a)

    # -- vertex management -----------------------------------------------

    def add_vertex(self, v: int) -> TourNode:
        if v in self.loop:
            raise ValueError(f"vertex {v} already present")
        node = self._new_node(True, v)
        self.loop[v] = node
        return node

    def remove_vertex(self, v: int) -> None:
        node = self.loop[v]
        if self._root(node).size != 1:
            raise NotForestEdgeError(f"vertex {v} still has forest edges")
        del self.loop[v]
        self.node_count -= 1

    def has_vertex(self, v: int) -> bool:
        return v in self.loop

    # -- forest operations -----------------------------------------------

    def connected(self, u: int, v: int) -> bool:
        return self._root(self.loop[u]) is self._root(self.loop[v])

    def component_root(self, v: int) -> TourNode:
        return self._root(self.loop[v])

    def component_size(self, v: int) -> int:
        return self._root(self.loop[v]).loops

    @staticmethod
    def edge_key(u: int, v: int) -> tuple[int, int]:
        if u == v:
            raise SelfLoopError(f"self loop at {u}")
        return (u, v) if u < v else (v, u)

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_key(u, v) in self._arcs

    def edges(self):
        return self._arcs.keys()

    def edge_count(self) -> int:
        return len(self._arcs)

    def link(self, u: int, v: int) -> None:
        """Join two distinct components with forest edge (u, v)."""
        key = self.edge_key(u, v)
        if key in self._arcs:
            raise ValueError(f"forest edge {key} already present")
        nu = self.loop[u]
        nv = self.loop[v]
        if self._root(nu) is self._root(nv):
            raise ValueError(f"link ({u}, {v}) would close a cycle")
        tu = self._reroot(nu)
        tv = self._reroot(nv)
        arc_uv = self._new_node(False, (u, v))
        arc_vu = self._new_node(False, (v, u))
        self._arcs[key] = (arc_uv, arc_vu)
        self._merge(self._merge(self._merge(tu, arc_uv), tv), arc_vu)

    def cut(self, u: int, v: int) -> None:
        """Remove forest edge (u, v), splitting its component in two."""
        key = self.edge_key(u, v)
        pair = self._arcs.pop(key, None)
        if pair is None:
            raise NotForestEdgeError(f"({u}, {v}) is not a forest edge")
        x, y = pair
        if self._position(x) > self._position(y):
            x, y = y, x
        before, _ = self._split_before(x)
        self._split_after(x)            # drops the arc, leaves (x, ..] rooted
        self._split_before(y)           # inner tour now stands alone
        _, after = self._split_after(y)
        self._merge(before, after)
        self.node_count -= 2

    # -- traversal -------------------------------------------------------

    def component_vertices(self, v: int) -> Iterator[int]:
        """Yield every vertex in v's component (tour order)."""
        yield from self.subtree_vertices(self._root(self.loop[v]))

    @staticmethod
    def subtree_vertices(root) -> Iterator[int]:
        stack = []
        n = root
        while stack or n is not None:
            while n is not None:
                stack.append(n)
                n = n.left
            n = stack.pop()
            if n.is_loop:
                yield n.payload
            n = n.right


class LevelTourNode(TourNode):
    __slots__ = ("t_local", "t_sub", "n_local", "n_sub")

    def __init__(self, prio: int, is_loop: bool, payload):
        super().__init__(prio, is_loop, payload)
        self.t_local = 0
        self.t_sub = 0
        self.n_local = 0
        self.n_sub = 0


class LevelTourForest(EulerTourForest):
    """Euler-tour forest with the counter channels the lossless engine's
    replacement search walks: tree edges pinned at this level and loop
    nodes whose vertex owns spare (non-tree) edges at this level."""

    node_class = LevelTourNode

    def _pull(self, n) -> None:
        size = 1
        loops = 1 if n.is_loop else 0
        t = n.t_local
        nn = n.n_local
        l = n.left
        r = n.right
        if l is not None:
            size += l.size
            loops += l.loops
            t += l.t_sub
            nn += l.n_sub
        if r is not None:
            size += r.size
            loops += r.loops
            t += r.t_sub
            nn += r.n_sub
        n.size = size
        n.loops = loops
        n.t_sub = t
        n.n_sub = nn

    @staticmethod
    def _bubble(node, channel: str, delta: int) -> None:
        while node is not None:
            setattr(node, channel, getattr(node, channel) + delta)
            node = node.parent

    def set_tree_flag(self, u: int, v: int, on: bool) -> None:
        arc = self._arcs[self.edge_key(u, v)][0]
        want = 1 if on else 0
        if arc.t_local != want:
            arc.t_local = want
            self._bubble(arc, "t_sub", 1 if on else -1)

    def set_loop_flag(self, v: int, on: bool) -> None:
        node = self.loop[v]
        want = 1 if on else 0
        if node.n_local != want:
            node.n_local = want
            self._bubble(node, "n_sub", 1 if on else -1)

    @staticmethod
    def _find_flagged(root, local: str, sub: str):
        n = root
        while n is not None:
            if getattr(n, local):
                return n
            l = n.left
            if l is not None and getattr(l, sub):
                n = l
                continue
            n = n.right
        return None

    def find_flagged_tree_edge(self, v: int):
        """Some (u, w) tree edge flagged in v's component, or None."""
        root = self._root(self.loop[v])
        if root.t_sub == 0:
            return None
        node = self._find_flagged(root, "t_local", "t_sub")
        return self.edge_key(*node.payload)

    def find_flagged_vertex(self, v: int):
        """Some vertex flagged as owning spare edges here, or None."""
        root = self._root(self.loop[v])
        if root.n_sub == 0:
            return None
        node = self._find_flagged(root, "n_local", "n_sub")
        return node.payload
