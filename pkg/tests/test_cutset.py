from __future__ import annotations

import random

import pytest

from hybridconn.cutset import SketchGraph
from hybridconn.errors import (InactiveVertexError, NonZeroDegreeError,
                               NotForestEdgeError)
from hybridconn.forest import EulerTourForest


def _engine(n, seed=11, **kw):
    g = SketchGraph(n, seed=seed, **kw)
    for v in range(n):
        g.insert_vertex(v)
    return g


def _dsu_map(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return [find(x) for x in range(n)]


def test_single_insert_links_and_reports_one_event():
    g = _engine(4)
    events = g.update_edge(0, 1)
    assert events == [("link", 0, 1)]
    assert g.connected(0, 1)
    assert not g.connected(0, 2)
    assert set(g.forest_edges()) == {(0, 1)}
    assert not g.audit_invariants()


def test_insert_then_delete_nets_to_empty():
    g = _engine(5)
    ev1 = g.update_edge(2, 4)
    ev2 = g.update_edge(2, 4)
    assert ev1 == [("link", 2, 4)]
    assert ev2 == [("cut", 2, 4)]
    assert g.edge_count() == 0
    assert not list(g.forest_edges())
    for tier in g._tiers:
        assert all(col.is_empty() for col in tier.leaf.values())
        assert not tier.agg
    assert not g.audit_invariants()


def test_forced_deletion_of_bridge_splits_component():
    g = _engine(3)
    g.update_edge(0, 1)
    g.update_edge(1, 2)
    events = g.update_edge(0, 1)  # delete the bridge
    assert events == [("cut", 0, 1)]
    assert not g.connected(0, 1)
    assert g.connected(1, 2)
    assert not g.audit_invariants()


def test_forced_deletion_on_cycle_finds_replacement():
    g = _engine(3)
    g.update_edge(0, 1)
    g.update_edge(1, 2)
    g.update_edge(0, 2)  # closes the cycle; stays a non-forest edge
    forest = set(g.forest_edges())
    target = sorted(forest)[0]
    events = g.update_edge(*target)
    kinds = [kind for kind, _, _ in events]
    assert kinds == ["cut", "link"]
    assert g.connected(0, 2) and g.connected(0, 1)
    assert not g.audit_invariants()


def test_delete_forest_edge_relinks_surviving_graph_edge():
    # the raw forest cut leaves the edge in E, so the repair sweep is
    # entitled to sample it right back in
    g = _engine(3)
    g.update_edge(0, 1)
    events = g.delete_forest_edge(0, 1)
    assert events[0] == ("cut", 0, 1)
    assert ("link", 0, 1) in events
    assert g.connected(0, 1)
    assert not g.audit_invariants()
    with pytest.raises(NotForestEdgeError):
        g.delete_forest_edge(0, 2)


def test_spanning_component_aggregate_cancels_empty():
    g = _engine(6)
    for u, v in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (1, 4)]:
        g.update_edge(u, v)
    top = g._top
    root = top.forest.component_root(0)
    assert root.loops == 6
    assert top.agg[root].is_empty()
    assert not g.audit_invariants()


def test_single_crossing_edge_gets_linked():
    g = _engine(4)
    g.update_edge(0, 1)
    g.update_edge(2, 3)
    events = g.update_edge(1, 2)
    assert events == [("link", 1, 2)]
    assert g.connected(0, 3)


def test_vertex_lifecycle_and_errors():
    g = SketchGraph(8, seed=3)
    g.insert_vertex(1)
    g.insert_vertex(5)
    with pytest.raises(ValueError):
        g.insert_vertex(5)
    with pytest.raises(ValueError):
        g.insert_vertex(8)
    g.update_edge(1, 5)
    with pytest.raises(NonZeroDegreeError):
        g.delete_vertex(1)
    with pytest.raises(InactiveVertexError):
        g.update_edge(1, 2)
    with pytest.raises(InactiveVertexError):
        g.connected(1, 7)
    g.update_edge(1, 5)
    g.delete_vertex(1)
    assert not g.is_active(1)
    with pytest.raises(InactiveVertexError):
        g.delete_vertex(1)


def test_vertex_churn_keeps_directory_aligned():
    rng = random.Random(40)
    g = SketchGraph(64, seed=8)
    active: set[int] = set()
    for _ in range(10_000):
        if active and rng.random() < 0.5:
            v = rng.choice(sorted(active))
            g.delete_vertex(v)
            active.discard(v)
        else:
            free = [v for v in range(64) if v not in active]
            if not free:
                continue
            v = rng.choice(free)
            g.insert_vertex(v)
            active.add(v)
            assert all(col.is_empty() for tier in g._tiers
                       for col in [tier.leaf[v]])
        for tier in g._tiers:
            assert len(tier.leaf) == len(active)
    assert g.active_count() == len(active)


def test_randomized_churn_with_audits_and_event_mirror():
    rng = random.Random(606)
    n = 128
    g = _engine(n, seed=29)
    mirror = EulerTourForest(seed=2)
    for v in range(n):
        mirror.add_vertex(v)
    edges: set[tuple[int, int]] = set()
    for step in range(2500):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        for kind, a, b in g.update_edge(u, v):
            if kind == "link":
                mirror.link(a, b)
            else:
                mirror.cut(a, b)
        edges.symmetric_difference_update({key})
        assert set(mirror.edges()) == set(g.forest_edges())
        if step % 500 == 0:
            assert not g.audit_invariants(), step
    assert not g.audit_invariants()


def test_oracle_agreement_at_spec_scale():
    rng = random.Random(512512)
    n = 512
    g = _engine(n, seed=77)
    edges: set[tuple[int, int]] = set()
    queries = 0
    wrong = 0
    for step in range(10_000):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        g.update_edge(u, v)
        edges.symmetric_difference_update({key})
        if step % 10 == 0:
            comp = _dsu_map(n, edges)
            for _ in range(4):
                x = rng.randrange(n)
                y = rng.randrange(n)
                queries += 1
                if g.connected(x, y) != (comp[x] == comp[y]):
                    wrong += 1
    assert queries >= 3900
    assert wrong / queries < 1e-3, (wrong, queries)


def test_bulk_load_matches_incremental_leaves():
    rng = random.Random(9)
    n = 96
    all_edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = rng.sample(all_edges, 700)
    bulk = _engine(n, seed=55)
    bulk.bulk_load(edges)
    inc = _engine(n, seed=55)
    for u, v in edges:
        inc.update_edge(u, v)
    for tb, ti in zip(bulk._tiers, inc._tiers):
        for v in range(n):
            assert tb.leaf[v] == ti.leaf[v]
    comp = _dsu_map(n, edges)
    for _ in range(400):
        x = rng.randrange(n)
        y = rng.randrange(n)
        assert bulk.connected(x, y) == (comp[x] == comp[y])
    assert not bulk.audit_invariants()
    with pytest.raises(ValueError):
        bulk.bulk_load([(0, 1)])


def test_bulk_load_supports_further_updates():
    rng = random.Random(10)
    n = 48
    edges = {(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < 0.06}
    g = _engine(n, seed=21)
    g.bulk_load(sorted(edges))
    for step in range(600):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        g.update_edge(u, v)
        edges.symmetric_difference_update({key})
    comp = _dsu_map(n, sorted(edges))
    wrong = sum(1 for x in range(n) for y in range(n)
                if g.connected(x, y) != (comp[x] == comp[y]))
    assert wrong == 0
    assert not g.audit_invariants()


def test_space_report_totals():
    g = _engine(32, seed=2)
    rng = random.Random(3)
    for _ in range(120):
        u = rng.randrange(32)
        v = rng.randrange(32)
        if u != v:
            g.update_edge(u, v)
    rep = g.space_report()
    assert rep["bucket_words"] == 2 * (rep["leaf_buckets"] + rep["agg_buckets"])
    assert rep["words"] == (rep["bucket_words"] + 4 * rep["forest_nodes"]
                            + rep["directory_entries"])
    assert rep["leaf_buckets"] > 0
    assert rep["forest_nodes"] > 0
