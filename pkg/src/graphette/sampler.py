"""Statistical graphette sampling over large host graphs.

Draw k-node samples by one of three strategies, identify each sample's
canonical graphette and node orbits through the precomputed table, and
accumulate graphette counts, orbit counts, and the per-node orbit degree
vector.  An exhaustive enumerator over all k-subsets doubles as the exact
oracle for small hosts.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from os import PathLike
from typing import IO, Sequence, Union

import numpy as np

from .core import HostGraph, induced_bits
from .store import TableSet

DEFAULT_ENUMERATION_BOUND = 10_000_000


class GraphFormatError(ValueError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, line_number: int | None, message: str):
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)


class EnumerationBoundError(ValueError):
    """The host graph has too many k-subsets to enumerate exhaustively."""


class SamplingStrategy(Enum):
    UNIFORM = "uniform"
    LOCAL_EXPANSION = "local"
    EDGE_EXPANSION = "edge"


def load_graph(source: Union[str, PathLike, IO[str]]) -> HostGraph:
    """Parse whitespace-separated edge-list text into a host graph.

    Node names are arbitrary tokens, interned to dense 0-based labels in
    first-appearance order; '#'-prefixed lines are comments; duplicate edges
    collapse; self-loops are rejected with their line number.
    """
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()

    labels: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()

    def intern(token: str) -> int:
        if token not in labels:
            labels[token] = len(labels)
        return labels[token]

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(
                lineno, f"expected two node tokens, got {len(tokens)}: {line!r}"
            )
        a, b = tokens
        if a == b:
            raise GraphFormatError(lineno, f"self-loop on node {a!r}")
        u, v = intern(a), intern(b)
        edges.add((u, v) if u < v else (v, u))

    if not labels:
        raise GraphFormatError(None, "empty graph: no edges found")
    names = [None] * len(labels)
    for token, label in labels.items():
        names[label] = token
    return HostGraph(len(labels), edges, names=names)


def _distinct_uniform(rng: np.random.Generator, n: int, k: int) -> list[int]:
    if 2 * k >= n:
        return [int(x) for x in rng.permutation(n)[:k]]
    chosen: list[int] = []
    seen: set[int] = set()
    while len(chosen) < k:
        u = int(rng.integers(n))
        if u not in seen:
            seen.add(u)
            chosen.append(u)
    return chosen


def _expand(
    graph: HostGraph, rng: np.random.Generator, selected: list[int], k: int
) -> list[int]:
    """Grow a selection to k nodes by uniform frontier draws.

    The frontier is the union of neighbors of selected nodes minus the
    selection; when it is empty (component exhausted) a uniform unused node
    restarts the growth, so disconnected hosts still yield samples.
    """
    chosen = set(selected)
    while len(selected) < k:
        frontier = sorted(
            {int(v) for u in selected for v in graph.neighbors(u)} - chosen
        )
        if frontier:
            nxt = frontier[int(rng.integers(len(frontier)))]
        else:
            nxt = int(rng.integers(graph.n))
            while nxt in chosen:
                nxt = int(rng.integers(graph.n))
        selected.append(nxt)
        chosen.add(nxt)
    return selected


def draw_sample(
    graph: HostGraph,
    k: int,
    strategy: SamplingStrategy,
    rng: np.random.Generator,
) -> list[int]:
    """Draw k distinct node labels by the requested strategy."""
    if graph.n < k:
        raise ValueError(f"host graph has {graph.n} nodes, cannot sample k={k}")
    if strategy is SamplingStrategy.UNIFORM:
        return _distinct_uniform(rng, graph.n, k)
    if strategy is SamplingStrategy.LOCAL_EXPANSION:
        return _expand(graph, rng, [int(rng.integers(graph.n))], k)
    if strategy is SamplingStrategy.EDGE_EXPANSION:
        if graph.edge_count == 0:
            raise ValueError("edge expansion needs at least one edge")
        u, v = graph.edge_array[int(rng.integers(graph.edge_count))]
        return _expand(graph, rng, [int(u), int(v)][:k], k)
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass
class SampleAccumulator:
    """Counts per canonical graphette, per global orbit, and per host node.

    odv row v column w counts how often host node v landed in global orbit w
    across accumulated samples (the graphette orbit degree vector).
    """

    k: int
    n_samples: int
    graphette_counts: np.ndarray
    orbit_counts: np.ndarray
    odv: np.ndarray
    rng_seed: int | None = None

    @classmethod
    def empty(cls, tables: TableSet, host_nodes: int, rng_seed: int | None = None
              ) -> "SampleAccumulator":
        return cls(
            k=tables.k,
            n_samples=0,
            graphette_counts=np.zeros(len(tables.catalog), dtype=np.int64),
            orbit_counts=np.zeros(tables.orbits.total_orbits, dtype=np.int64),
            odv=np.zeros((host_nodes, tables.orbits.total_orbits), dtype=np.int64),
            rng_seed=rng_seed,
        )

    def merge(self, other: "SampleAccumulator") -> "SampleAccumulator":
        """Elementwise sum; associative, so worker order never matters."""
        if self.k != other.k or self.odv.shape != other.odv.shape:
            raise ValueError("accumulators do not match")
        return SampleAccumulator(
            k=self.k,
            n_samples=self.n_samples + other.n_samples,
            graphette_counts=self.graphette_counts + other.graphette_counts,
            orbit_counts=self.orbit_counts + other.orbit_counts,
            odv=self.odv + other.odv,
            rng_seed=self.rng_seed,
        )


def accumulate(
    acc: SampleAccumulator,
    graph: HostGraph,
    nodes: Sequence[int],
    tables: TableSet,
) -> SampleAccumulator:
    """Identify one k-node sample and fold it into the accumulator.

    Costs O(k^2) host edge tests plus O(1) table lookups, independent of
    host size.
    """
    if len(nodes) != tables.k or acc.k != tables.k:
        raise ValueError(f"sample size {len(nodes)} does not match table k={tables.k}")
    g = induced_bits(graph, nodes)
    cid, orbit_ids = tables.identify(g.bits)
    acc.graphette_counts[cid] += 1
    odv = acc.odv
    orbit_counts = acc.orbit_counts
    for u, w in enumerate(orbit_ids):
        orbit_counts[w] += 1
        odv[nodes[u], w] += 1
    acc.n_samples += 1
    return acc


def sample_distribution(
    graph: HostGraph,
    tables: TableSet,
    n_samples: int,
    strategy: SamplingStrategy = SamplingStrategy.UNIFORM,
    seed: int = 0,
    workers: int = 1,
) -> SampleAccumulator:
    """Draw and accumulate n_samples k-sets; deterministic for fixed inputs.

    Each worker w processes a fixed share of the draws with its own stream
    seeded by (seed, w), and the per-worker accumulators are summed, so the
    result depends only on (seed, workers), never on scheduling.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    k = tables.k
    quotas = [n_samples // workers + (1 if w < n_samples % workers else 0)
              for w in range(workers)]

    def run(worker: int) -> SampleAccumulator:
        rng = np.random.default_rng([seed, worker])
        acc = SampleAccumulator.empty(tables, graph.n, rng_seed=seed)
        for _ in range(quotas[worker]):
            accumulate(acc, graph, draw_sample(graph, k, strategy, rng), tables)
        return acc

    if workers == 1:
        return run(0)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, range(workers)))
    merged = parts[0]
    for part in parts[1:]:
        merged = merged.merge(part)
    return merged


def exhaustive_enumerate(
    graph: HostGraph,
    tables: TableSet,
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> SampleAccumulator:
    """Accumulate every k-subset of the host exactly once (small-host oracle)."""
    k = tables.k
    if graph.n < k:
        raise ValueError(f"host graph has {graph.n} nodes, cannot enumerate k={k}")
    total = math.comb(graph.n, k)
    if total > bound:
        raise EnumerationBoundError(
            f"C({graph.n}, {k}) = {total} subsets exceeds the bound {bound}"
        )
    acc = SampleAccumulator.empty(tables, graph.n)
    for nodes in combinations(range(graph.n), k):
        accumulate(acc, graph, nodes, tables)
    return acc


@dataclass(frozen=True)
class GraphetteReport:
    """Normalized view of an accumulator, ready for writing or comparison."""

    k: int
    n_samples: int
    canonical_bits: np.ndarray
    connected: np.ndarray
    graphette_counts: np.ndarray
    graphette_frequencies: np.ndarray
    orbit_counts: np.ndarray
    orbit_frequencies: np.ndarray
    odv: np.ndarray
    odv_normalized: np.ndarray
    node_names: list[str]

    def graphlet_view(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(canonical ids, counts, frequencies) of connected graphettes only."""
        ids = np.flatnonzero(self.connected)
        return ids, self.graphette_counts[ids], self.graphette_frequencies[ids]


def estimate(acc: SampleAccumulator, tables: TableSet, graph: HostGraph) -> GraphetteReport:
    """Turn raw tallies into frequencies and per-node ODV rows."""
    if acc.n_samples < 1:
        raise ValueError("no samples accumulated")
    n = acc.n_samples
    row_sums = acc.odv.sum(axis=1, keepdims=True)
    safe = np.where(row_sums > 0, row_sums, 1)
    return GraphetteReport(
        k=acc.k,
        n_samples=n,
        canonical_bits=tables.catalog.canonicals.copy(),
        connected=tables.catalog.connected.copy(),
        graphette_counts=acc.graphette_counts.copy(),
        graphette_frequencies=acc.graphette_counts / n,
        orbit_counts=acc.orbit_counts.copy(),
        orbit_frequencies=acc.orbit_counts / (acc.k * n),
        odv=acc.odv.copy(),
        odv_normalized=acc.odv / safe,
        node_names=list(graph.names),
    )


def write_report_tsv(report: GraphetteReport, out: IO[str]) -> None:
    """Write the three report sections as TSV; identical schema for sampled
    and exhaustive runs so the outputs diff cleanly."""
    out.write(f"# graphettes\tk={report.k}\tsamples={report.n_samples}\n")
    out.write("canonical_id\tbits\tconnected\tcount\tfrequency\n")
    for cid in range(len(report.canonical_bits)):
        out.write(
            f"{cid}\t{int(report.canonical_bits[cid])}\t"
            f"{int(report.connected[cid])}\t{int(report.graphette_counts[cid])}\t"
            f"{report.graphette_frequencies[cid]:.10g}\n"
        )
    out.write("# orbits\n")
    out.write("orbit_id\tcount\tfrequency\n")
    for w in range(len(report.orbit_counts)):
        out.write(
            f"{w}\t{int(report.orbit_counts[w])}\t{report.orbit_frequencies[w]:.10g}\n"
        )
    out.write("# odv\n")
    out.write("node\t" + "\t".join(str(w) for w in range(report.odv.shape[1])) + "\n")
    for v, name in enumerate(report.node_names):
        row = "\t".join(str(int(x)) for x in report.odv[v])
        out.write(f"{name}\t{row}\n")


def report_to_string(report: GraphetteReport) -> str:
    buf = io.StringIO()
    write_report_tsv(report, buf)
    return buf.getvalue()
