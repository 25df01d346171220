"""Space-adaptive l0-sampler columns over GF(2).

A column is a growable array of buckets.  Each bucket keeps two XOR
accumulators: ``alpha`` (coordinate ids) and ``gamma`` (coordinate
checksums).  Every coordinate lands in bucket 0 and in one random bucket
whose index follows a geometric law, so the array length tracks
``log2(support)`` plus a small random excess instead of a fixed
``log(universe)`` budget.  Columns are linear: XOR-merging two columns
yields the column of the symmetric difference of their supports.
"""

from __future__ import annotations

import math
import struct
from typing import NamedTuple

import numpy as np

from .errors import BadParamsError, SeedMismatchError, SelfLoopError
from .hashing import mix64, mix64_array, random_depth, random_depth_array

# Extra headroom on top of ceil(log2 universe) for the geometric index.
RHO_PAD = 8

# Sample / bucket classification outcomes.
EMPTY = "empty"
GOOD = "good"
FAIL = "fail"
BAD = "bad"


def checksum_width(universe: int) -> int:
    """Checksum accumulator width in bits: the universe's bit width, floored
    at 32 so collision odds stay below 2**-32 even for tiny universes."""
    return max(universe.bit_length(), 32)


def ceil_log2(n: int) -> int:
    if n < 1:
        raise BadParamsError(f"ceil_log2 needs n >= 1, got {n}")
    return (n - 1).bit_length()


class SketchSeed(NamedTuple):
    """Seed pair for one column: bucket placement and checksum streams."""

    column_seed: int
    checksum_seed: int

    @classmethod
    def derive(cls, master: int, index: int) -> "SketchSeed":
        return cls(mix64(master, 2 * index), mix64(master, 2 * index + 1))


def classify_bucket(alpha: int, gamma: int, checksum_seed: int, width_mask: int):
    """Classify one (alpha, gamma) bucket.

    Returns ``(EMPTY, None)`` for the all-zero bucket, ``(GOOD, alpha)``
    when the checksum confirms a single member, else ``(BAD, None)``.
    """
    if alpha == 0 and gamma == 0:
        return (EMPTY, None)
    if gamma == (mix64(checksum_seed, alpha) & width_mask):
        return (GOOD, alpha)
    return (BAD, None)


class SketchColumn:
    """One l0-sampler column over the coordinate universe ``[0, universe)``."""

    __slots__ = ("universe", "rho", "width_mask", "column_seed", "checksum_seed",
                 "alpha", "gamma")

    def __init__(self, universe: int, seed: SketchSeed):
        if universe < 1:
            raise BadParamsError(f"universe must be >= 1, got {universe}")
        self.universe = universe
        self.rho = ceil_log2(universe) + RHO_PAD
        self.width_mask = (1 << checksum_width(universe)) - 1
        self.column_seed = seed.column_seed
        self.checksum_seed = seed.checksum_seed
        self.alpha: list[int] = []
        self.gamma: list[int] = []

    # -- hashing ---------------------------------------------------------

    def coord_depth(self, j: int) -> int:
        return random_depth(self.column_seed, j, self.rho)

    def coord_checksum(self, j: int) -> int:
        return mix64(self.checksum_seed, j) & self.width_mask

    # -- updates ---------------------------------------------------------

    def update(self, j: int) -> int:
        """Toggle coordinate ``j``; returns the number of buckets touched
        (toggles plus grow/shrink work) for cost accounting."""
        if not 0 <= j < self.universe:
            raise BadParamsError(f"coordinate {j} outside universe {self.universe}")
        d = random_depth(self.column_seed, j, self.rho)
        g = mix64(self.checksum_seed, j) & self.width_mask
        return self.toggle_hashed(j, g, d)

    def toggle_hashed(self, j: int, g: int, d: int) -> int:
        """Fast-path toggle with precomputed checksum ``g`` and depth ``d``.

        Grows to exactly ``d + 1`` buckets when needed; shrinks only when
        the toggle lands in the last bucket and empties it, trimming back
        to the deepest non-empty bucket.
        """
        alpha = self.alpha
        gamma = self.gamma
        n = len(alpha)
        touched = 0
        if d >= n:
            pad = d + 1 - n
            alpha.extend([0] * pad)
            gamma.extend([0] * pad)
            touched += pad
            n = d + 1
        alpha[d] ^= j
        gamma[d] ^= g
        touched += 1
        if d:
            alpha[0] ^= j
            gamma[0] ^= g
            touched += 1
        if d == n - 1 and alpha[d] == 0 and gamma[d] == 0:
            k = d
            while k > 0 and alpha[k - 1] == 0 and gamma[k - 1] == 0:
                k -= 1
            touched += d - k + 1
            del alpha[k:]
            del gamma[k:]
        return touched

    @classmethod
    def from_support(cls, universe: int, seed: SketchSeed,
                     coords) -> "SketchColumn":
        """Build the column holding exactly ``coords`` (distinct ids).

        Vectorized equivalent of toggling each coordinate once; the
        result is bit-identical to the incremental build, which makes
        bulk graph loading cheap.
        """
        col = cls(universe, seed)
        ids = np.asarray(coords, dtype=np.uint64)
        if ids.size == 0:
            return col
        if ids.size and int(ids.max()) >= universe:
            raise BadParamsError("coordinate outside universe")
        depths = random_depth_array(seed.column_seed, ids, col.rho)
        checks = mix64_array(seed.checksum_seed, ids) & np.uint64(col.width_mask)
        top = int(depths.max())
        alpha = [0] * (top + 1)
        gamma = [0] * (top + 1)
        alpha[0] = int(np.bitwise_xor.reduce(ids))
        gamma[0] = int(np.bitwise_xor.reduce(checks))
        order = np.argsort(depths, kind="stable")
        sd = depths[order]
        bounds = np.searchsorted(sd, np.arange(1, top + 2))
        sa = ids[order]
        sg = checks[order]
        for d in range(1, top + 1):
            lo = bounds[d - 1]
            hi = bounds[d]
            if lo < hi:
                alpha[d] = int(np.bitwise_xor.reduce(sa[lo:hi]))
                gamma[d] = int(np.bitwise_xor.reduce(sg[lo:hi]))
        # depth-0 ids only touch bucket 0, matching the incremental rule
        k = top + 1
        while k > 0 and alpha[k - 1] == 0 and gamma[k - 1] == 0:
            k -= 1
        col.alpha = alpha[:k]
        col.gamma = gamma[:k]
        return col

    # -- queries ---------------------------------------------------------

    def sample(self):
        """Scan deepest-first for a bucket whose checksum verifies.

        Returns ``(EMPTY, None)`` when no buckets are allocated,
        ``(GOOD, j)`` for the first verified bucket, or ``(FAIL, None)``
        when every non-empty bucket holds an unrecoverable XOR blend.
        """
        alpha = self.alpha
        if not alpha:
            return (EMPTY, None)
        gamma = self.gamma
        seed = self.checksum_seed
        mask = self.width_mask
        for i in range(len(alpha) - 1, -1, -1):
            a = alpha[i]
            g = gamma[i]
            if a == 0 and g == 0:
                continue
            if g == (mix64(seed, a) & mask):
                return (GOOD, a)
        return (FAIL, None)

    def bucket_state(self, i: int):
        return classify_bucket(self.alpha[i], self.gamma[i],
                               self.checksum_seed, self.width_mask)

    @property
    def depth(self) -> int:
        return len(self.alpha)

    def residual_depth(self, support_size: int) -> int:
        """Depth in excess of ceil(log2 m) for a support of size ``m``."""
        if support_size < 1:
            return len(self.alpha)
        return max(0, len(self.alpha) - ceil_log2(support_size))

    def is_empty(self) -> bool:
        return not self.alpha

    @property
    def allocated_words(self) -> int:
        return 2 * len(self.alpha)

    # -- linearity -------------------------------------------------------

    def _check_compatible(self, other: "SketchColumn") -> None:
        if (self.column_seed != other.column_seed
                or self.checksum_seed != other.checksum_seed
                or self.universe != other.universe):
            raise SeedMismatchError("columns differ in seed or universe")

    def merge(self, other: "SketchColumn") -> "SketchColumn":
        """Return the column of the symmetric difference of the supports."""
        out = self.copy()
        out.merge_in_place(other)
        return out

    def merge_in_place(self, other: "SketchColumn") -> None:
        self._check_compatible(other)
        alpha = self.alpha
        gamma = self.gamma
        oa = other.alpha
        og = other.gamma
        if len(oa) > len(alpha):
            pad = len(oa) - len(alpha)
            alpha.extend([0] * pad)
            gamma.extend([0] * pad)
        for i, (a, g) in enumerate(zip(oa, og)):
            alpha[i] ^= a
            gamma[i] ^= g
        k = len(alpha)
        while k > 0 and alpha[k - 1] == 0 and gamma[k - 1] == 0:
            k -= 1
        del alpha[k:]
        del gamma[k:]

    def copy(self) -> "SketchColumn":
        out = SketchColumn.__new__(SketchColumn)
        out.universe = self.universe
        out.rho = self.rho
        out.width_mask = self.width_mask
        out.column_seed = self.column_seed
        out.checksum_seed = self.checksum_seed
        out.alpha = self.alpha[:]
        out.gamma = self.gamma[:]
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SketchColumn):
            return NotImplemented
        return (self.universe == other.universe
                and self.column_seed == other.column_seed
                and self.checksum_seed == other.checksum_seed
                and self.alpha == other.alpha
                and self.gamma == other.gamma)

    __hash__ = None

    # -- serialization ---------------------------------------------------

    def serialize(self) -> bytes:
        """Little-endian: universe, seed pair, bucket count, (alpha, gamma)
        pairs.  Identical update histories give identical bytes."""
        n = len(self.alpha)
        head = struct.pack("<QQQI", self.universe, self.column_seed,
                           self.checksum_seed, n)
        flat = [0] * (2 * n)
        flat[0::2] = self.alpha
        flat[1::2] = self.gamma
        return head + struct.pack(f"<{2 * n}Q", *flat)

    @classmethod
    def deserialize(cls, blob: bytes) -> "SketchColumn":
        universe, cseed, gseed, n = struct.unpack_from("<QQQI", blob, 0)
        flat = struct.unpack_from(f"<{2 * n}Q", blob, 28)
        col = cls(universe, SketchSeed(cseed, gseed))
        col.alpha = list(flat[0::2])
        col.gamma = list(flat[1::2])
        return col


class SketchMatrix:
    """A bank of independently seeded columns sketching one coordinate set."""

    __slots__ = ("universe", "master_seed", "columns", "touched")

    def __init__(self, universe: int, num_columns: int, master_seed: int):
        if num_columns < 1:
            raise BadParamsError(f"need at least one column, got {num_columns}")
        self.universe = universe
        self.master_seed = master_seed
        self.columns = [SketchColumn(universe, SketchSeed.derive(master_seed, i))
                        for i in range(num_columns)]
        self.touched = 0

    def __len__(self) -> int:
        return len(self.columns)

    def update(self, j: int) -> int:
        """Apply the toggle to every column; returns buckets touched."""
        touched = 0
        for col in self.columns:
            touched += col.update(j)
        self.touched += touched
        return touched

    def sample_all(self):
        return [col.sample() for col in self.columns]

    def sample_column(self, index: int):
        return self.columns[index].sample()

    def merge(self, other: "SketchMatrix") -> "SketchMatrix":
        out = self.copy()
        out.merge_in_place(other)
        return out

    def merge_in_place(self, other: "SketchMatrix") -> None:
        if (self.master_seed != other.master_seed
                or self.universe != other.universe
                or len(self.columns) != len(other.columns)):
            raise SeedMismatchError("matrices differ in seed, width, or universe")
        for mine, theirs in zip(self.columns, other.columns):
            mine.merge_in_place(theirs)

    def copy(self) -> "SketchMatrix":
        out = SketchMatrix.__new__(SketchMatrix)
        out.universe = self.universe
        out.master_seed = self.master_seed
        out.columns = [col.copy() for col in self.columns]
        out.touched = self.touched
        return out

    @classmethod
    def from_support(cls, universe: int, num_columns: int, master_seed: int,
                     coords) -> "SketchMatrix":
        out = cls(universe, num_columns, master_seed)
        out.columns = [
            SketchColumn.from_support(universe, SketchSeed.derive(master_seed, i),
                                      coords)
            for i in range(num_columns)
        ]
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SketchMatrix):
            return NotImplemented
        return (self.universe == other.universe
                and self.master_seed == other.master_seed
                and self.columns == other.columns)

    def is_empty(self) -> bool:
        return all(col.is_empty() for col in self.columns)

    @property
    def allocated_buckets(self) -> int:
        return sum(len(col.alpha) for col in self.columns)

    @property
    def allocated_words(self) -> int:
        return 2 * self.allocated_buckets


def edge_universe(num_vertices: int) -> int:
    return num_vertices * (num_vertices - 1) // 2


def encode_edge(u: int, v: int, num_vertices: int) -> int:
    """Map an unordered vertex pair to a dense id in [0, V*(V-1)/2)."""
    if u == v:
        raise SelfLoopError(f"self loop at vertex {u}")
    if u > v:
        u, v = v, u
    if u < 0 or v >= num_vertices:
        raise BadParamsError(f"edge ({u}, {v}) outside vertex range {num_vertices}")
    return u * num_vertices - u * (u + 1) // 2 + (v - u - 1)


def decode_edge(edge_id: int, num_vertices: int) -> tuple[int, int]:
    """Exact inverse of :func:`encode_edge`."""
    if not 0 <= edge_id < edge_universe(num_vertices):
        raise BadParamsError(f"edge id {edge_id} outside universe for V={num_vertices}")
    t = 2 * num_vertices - 1
    u = (t - math.isqrt(t * t - 8 * edge_id)) // 2
    offset = u * num_vertices - u * (u + 1) // 2
    while offset + (num_vertices - u - 1) <= edge_id:
        offset += num_vertices - u - 1
        u += 1
    while offset > edge_id:
        u -= 1
        offset -= num_vertices - u - 1
    v = edge_id - offset + u + 1
    return u, v
