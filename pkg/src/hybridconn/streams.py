"""Text stream files: parsing, validation, and synthetic generators.

A stream file is a header line ``V <count>`` followed by one operation per
line: ``i u v`` inserts an edge, ``d u v`` deletes one, ``q u v`` asks for
connectivity, and ``c`` requests a full oracle checkpoint.  Generators are
deterministic in their seed.
"""

from __future__ import annotations

import random
from typing import Iterable, Iterator, TextIO

from .errors import BadParamsError, MalformedUpdateError

Op = tuple  # ("i", u, v) | ("d", u, v) | ("q", u, v) | ("c",)


def parse_stream(lines: Iterable[str]) -> tuple[int, list[Op]]:
    """Parse and syntax-check a stream; returns (num_vertices, ops)."""
    it = iter(lines)
    header = None
    for raw in it:
        if raw.strip():
            header = raw.split()
            break
    if header is None:
        raise MalformedUpdateError("empty stream: missing 'V <count>' header")
    if len(header) != 2 or header[0] != "V":
        raise MalformedUpdateError(f"bad header: {' '.join(header)!r}")
    try:
        n = int(header[1])
    except ValueError:
        raise MalformedUpdateError(f"bad vertex count: {header[1]!r}") from None
    if n < 1:
        raise MalformedUpdateError(f"vertex count must be positive, got {n}")
    ops: list[Op] = []
    for lineno, raw in enumerate(it, start=2):
        parts = raw.split()
        if not parts:
            continue
        kind = parts[0]
        if kind == "c":
            if len(parts) != 1:
                raise MalformedUpdateError(f"line {lineno}: checkpoint takes no arguments")
            ops.append(("c",))
            continue
        if kind not in ("i", "d", "q") or len(parts) != 3:
            raise MalformedUpdateError(f"line {lineno}: unrecognized op {raw.strip()!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise MalformedUpdateError(f"line {lineno}: bad vertex ids") from None
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedUpdateError(f"line {lineno}: vertex outside [0, {n})")
        if u == v and kind != "q":
            raise MalformedUpdateError(f"line {lineno}: self-loop on {u}")
        ops.append((kind, u, v))
    return n, ops


def read_stream(path: str) -> tuple[int, list[Op]]:
    with open(path, "r", encoding="ascii") as fh:
        return parse_stream(fh)


def write_stream(fh: TextIO, num_vertices: int, ops: Iterable[Op]) -> None:
    fh.write(f"V {num_vertices}\n")
    for op in ops:
        fh.write(" ".join(str(x) for x in op) + "\n")


def validate_updates(num_vertices: int, ops: Iterable[Op]) -> None:
    """Semantic well-formedness: no duplicate insert, no phantom delete."""
    live: set[tuple[int, int]] = set()
    for idx, op in enumerate(ops):
        if op[0] not in ("i", "d"):
            continue
        _, u, v = op
        key = (u, v) if u < v else (v, u)
        if op[0] == "i":
            if key in live:
                raise MalformedUpdateError(f"op {idx}: duplicate insert of {key}")
            live.add(key)
        else:
            if key not in live:
                raise MalformedUpdateError(f"op {idx}: delete of absent {key}")
            live.discard(key)


def _check_vertices(num_vertices: int) -> None:
    if num_vertices < 2:
        raise BadParamsError(f"need at least 2 vertices, got {num_vertices}")


def _sample_edges(num_vertices: int, edges: int, rng: random.Random) -> list[tuple[int, int]]:
    limit = num_vertices * (num_vertices - 1) // 2
    if edges > limit:
        raise BadParamsError(f"{edges} edges exceed the {limit} possible")
    out: set[tuple[int, int]] = set()
    while len(out) < edges:
        a = rng.randrange(num_vertices)
        b = rng.randrange(num_vertices)
        if a != b:
            out.add((a, b) if a < b else (b, a))
    picked = sorted(out)
    rng.shuffle(picked)
    return picked


def _gnp_edges(vertices: Iterable[int], p: float, rng: random.Random) -> list[tuple[int, int]]:
    verts = list(vertices)
    out = []
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            if rng.random() < p:
                out.append((a, b) if a < b else (b, a))
    return out


def gen_gnp(num_vertices: int, seed: int, p: float | None = None,
            edges: int | None = None) -> list[Op]:
    """Random graph inserts in shuffled order; fixed edge count or G(n, p)."""
    _check_vertices(num_vertices)
    rng = random.Random(seed)
    if (p is None) == (edges is None):
        raise BadParamsError("give exactly one of p and edges")
    if p is not None:
        if not 0.0 <= p <= 1.0:
            raise BadParamsError(f"p must be in [0, 1], got {p}")
        picked = _gnp_edges(range(num_vertices), p, rng)
        rng.shuffle(picked)
    else:
        if edges < 0:
            raise BadParamsError(f"edge count cannot be negative, got {edges}")
        picked = _sample_edges(num_vertices, edges, rng)
    return [("i", a, b) for a, b in picked]


def gen_planted_core(num_vertices: int, seed: int, core_size: int,
                     core_p: float, p: float) -> list[Op]:
    """Sparse periphery over all vertices plus a dense core clique region.

    Core vertices are 0..core_size-1.  Periphery edges follow G(n, p) over
    every vertex pair not internal to the core; core-internal pairs follow
    G(k, core_p).
    """
    _check_vertices(num_vertices)
    if not 2 <= core_size <= num_vertices:
        raise BadParamsError(f"core size {core_size} outside [2, {num_vertices}]")
    if not 0.0 <= core_p <= 1.0 or not 0.0 <= p <= 1.0:
        raise BadParamsError("probabilities must be in [0, 1]")
    rng = random.Random(seed)
    picked = _gnp_edges(range(core_size), core_p, rng)
    for a, b in _gnp_edges(range(num_vertices), p, rng):
        if not (a < core_size and b < core_size):
            picked.append((a, b))
    rng.shuffle(picked)
    return [("i", a, b) for a, b in picked]


def gen_insert_then_delete(num_vertices: int, seed: int,
                           edges: Iterable[tuple[int, int]] | None = None,
                           edge_count: int | None = None) -> list[Op]:
    """Insert a whole edge set, then delete it in an independent order."""
    _check_vertices(num_vertices)
    rng = random.Random(seed)
    if edges is None:
        if edge_count is None:
            raise BadParamsError("give an edge set or an edge count")
        picked = _sample_edges(num_vertices, edge_count, rng)
    else:
        picked = [(a, b) if a < b else (b, a) for a, b in edges]
        if len(set(picked)) != len(picked):
            raise BadParamsError("edge set contains duplicates")
        rng.shuffle(picked)
    ops: list[Op] = [("i", a, b) for a, b in picked]
    ops.append(("c",))
    down = list(picked)
    rng.shuffle(down)
    ops.extend(("d", a, b) for a, b in down)
    ops.append(("c",))
    return ops


def gen_churn(num_vertices: int, seed: int, steps: int, delete_p: float = 0.4,
              query_every: int = 0, hot: int = 0) -> list[Op]:
    """Mixed insert/delete stream, optionally biased toward a hot vertex set
    and sprinkled with connectivity queries.  Not a CLI generator; used by
    tests and benchmarks that need update/query interleavings."""
    _check_vertices(num_vertices)
    rng = random.Random(seed)
    live: list[tuple[int, int]] = []
    index: dict[tuple[int, int], int] = {}
    ops: list[Op] = []
    produced = 0
    while produced < steps:
        if live and rng.random() < delete_p:
            pos = rng.randrange(len(live))
            key = live[pos]
            last = live.pop()
            if pos < len(live):
                live[pos] = last
                index[last] = pos
            del index[key]
            ops.append(("d", key[0], key[1]))
        else:
            if hot and rng.random() < 0.6:
                a, b = rng.randrange(hot), rng.randrange(num_vertices)
            else:
                a, b = rng.randrange(num_vertices), rng.randrange(num_vertices)
            if a == b:
                continue
            key = (a, b) if a < b else (b, a)
            if key in index:
                continue
            index[key] = len(live)
            live.append(key)
            ops.append(("i", key[0], key[1]))
        produced += 1
        if query_every and produced % query_every == 0:
            x, y = rng.randrange(num_vertices), rng.randrange(num_vertices)
            ops.append(("q", x, y))
    return ops
