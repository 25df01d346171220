"""Benchmark CSV rows and analytical word accounting.

Word counts come from each structure's own ``space_report`` (record counts
times word costs), never from allocator statistics, so identical runs
produce identical numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

CSV_FIELDS = (
    "step", "mode", "counted_words_sparse", "counted_words_dense",
    "counted_words_iblt", "buckets_total", "dense_vertices",
    "throughput_ups", "query_latency_ns", "oracle_mismatches",
)

CSV_HEADER = ",".join(CSV_FIELDS)


@dataclass
class MetricsRow:
    step: int
    mode: str
    counted_words_sparse: int
    counted_words_dense: int
    counted_words_iblt: int
    buckets_total: int
    dense_vertices: int
    throughput_ups: float
    query_latency_ns: int
    oracle_mismatches: int

    def to_csv(self) -> str:
        return ",".join((
            str(self.step), self.mode, str(self.counted_words_sparse),
            str(self.counted_words_dense), str(self.counted_words_iblt),
            str(self.buckets_total), str(self.dense_vertices),
            f"{self.throughput_ups:.3f}", str(self.query_latency_ns),
            str(self.oracle_mismatches),
        ))


def write_csv(fh, rows) -> None:
    fh.write(CSV_HEADER + "\n")
    for row in rows:
        fh.write(row.to_csv() + "\n")
