"""Bit-vector graphettes, permutations, and host graphs.

A graphette is a small undirected simple graph on k labeled nodes, stored as
the lower triangle of its adjacency matrix packed into an integer: edge
{i, j} with i > j occupies bit position p(i, j) = i*(i-1)/2 + j, with
position 0 the least significant bit.  The layout is normative; table files
written by this package depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_K = 12  # b(12) = 66 bits still fits a Python int with room to spare


def bit_length(k: int) -> int:
    """Number of lower-triangle bits b(k) = k*(k-1)/2 for a k-node graphette."""
    return k * (k - 1) // 2


def edge_bit(i: int, j: int) -> int:
    """Bit position of edge {i, j}; order of arguments does not matter."""
    if i == j:
        raise ValueError(f"self-loop on node {i}")
    if i < j:
        i, j = j, i
    return i * (i - 1) // 2 + j


@dataclass(frozen=True)
class Graphette:
    """A k-node graphette as (k, lower-triangle bit vector)."""

    k: int
    bits: int

    def __post_init__(self) -> None:
        if not 1 <= self.k <= MAX_K:
            raise ValueError(f"k must be in 1..{MAX_K}, got {self.k}")
        if not 0 <= self.bits < (1 << bit_length(self.k)):
            raise ValueError(
                f"bits {self.bits:#x} out of range for k={self.k} "
                f"(need 0 <= bits < 2**{bit_length(self.k)})"
            )

    @property
    def edge_count(self) -> int:
        return self.bits.bit_count()

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.bits >> edge_bit(i, j) & 1)


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0..k-1}; mapping[u] is the image of node u."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.mapping)
        if sorted(self.mapping) != list(range(k)):
            raise ValueError(f"not a bijection on 0..{k - 1}: {self.mapping}")

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(k)))

    @property
    def k(self) -> int:
        return len(self.mapping)

    def __call__(self, u: int) -> int:
        return self.mapping[u]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(u) = self(other(u))."""
        if self.k != other.k:
            raise ValueError(f"size mismatch: {self.k} vs {other.k}")
        return Permutation(tuple(self.mapping[v] for v in other.mapping))

    def inverse(self) -> "Permutation":
        inv = [0] * self.k
        for u, v in enumerate(self.mapping):
            inv[v] = u
        return Permutation(tuple(inv))


def encode(k: int, edges: Iterable[tuple[int, int]]) -> Graphette:
    """Pack an edge set on nodes 0..k-1 into a graphette.

    Raises ValueError for endpoints out of range or self-loops.
    """
    bits = 0
    for u, v in edges:
        if not (0 <= u < k and 0 <= v < k):
            raise ValueError(f"edge endpoint out of range for k={k}: ({u}, {v})")
        bits |= 1 << edge_bit(u, v)
    return Graphette(k, bits)


def decode(g: Graphette) -> set[tuple[int, int]]:
    """Edge set of g as (i, j) pairs with i > j; exact inverse of encode."""
    edges = set()
    bits = g.bits
    for i in range(1, g.k):
        row = bits >> (i * (i - 1) // 2)
        for j in range(i):
            if row >> j & 1:
                edges.add((i, j))
    return edges


def apply_permutation(g: Graphette, perm: Permutation) -> Graphette:
    """Relabel g's nodes: the result has edge {perm(u), perm(v)} iff g has {u, v}."""
    if perm.k != g.k:
        raise ValueError(f"size mismatch: graphette k={g.k}, permutation k={perm.k}")
    m = perm.mapping
    out = 0
    bits = g.bits
    for i in range(1, g.k):
        row = bits >> (i * (i - 1) // 2)
        if not row & ((1 << i) - 1):
            continue
        for j in range(i):
            if row >> j & 1:
                out |= 1 << edge_bit(m[i], m[j])
    return Graphette(g.k, out)


def degree_sequence(g: Graphette) -> list[int]:
    """Node degrees of g in non-decreasing order."""
    return sorted(degrees(g))


def degrees(g: Graphette) -> list[int]:
    """Per-node degrees of g, indexed by node."""
    deg = [0] * g.k
    bits = g.bits
    for i in range(1, g.k):
        row = bits >> (i * (i - 1) // 2)
        for j in range(i):
            if row >> j & 1:
                deg[i] += 1
                deg[j] += 1
    return deg


def adjacency_masks(g: Graphette) -> list[int]:
    """Per-node neighbor bitmasks (bit v of entry u set iff edge {u, v})."""
    masks = [0] * g.k
    for i, j in decode(g):
        masks[i] |= 1 << j
        masks[j] |= 1 << i
    return masks


def is_connected(g: Graphette) -> bool:
    """True iff all k nodes lie in one connected component (k=1 is connected)."""
    if g.k == 1:
        return True
    masks = adjacency_masks(g)
    seen = 1  # start from node 0
    frontier = 1
    while frontier:
        nxt = 0
        v = frontier
        while v:
            low = v & -v
            nxt |= masks[low.bit_length() - 1]
            v ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen == (1 << g.k) - 1


def complement(g: Graphette) -> Graphette:
    """Edge-complement within the k-node graphette (no self-loops appear)."""
    full = (1 << bit_length(g.k)) - 1
    return Graphette(g.k, g.bits ^ full)


class HostGraph:
    """A large undirected simple graph with O(k^2)-cost induced-subgraph reads.

    Adjacency is stored in compressed sparse rows (sorted neighbor arrays), so
    an edge test is a binary search in one node's neighbor list and memory
    stays near 12 bytes/edge even for million-node hosts.
    """

    def __init__(self, n: int, edges: "Iterable[tuple[int, int]] | np.ndarray",
                 names: Sequence[str] | None = None):
        if n < 1:
            raise ValueError("host graph needs at least one node")
        if isinstance(edges, np.ndarray):
            arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
            if len(arr):
                if (arr[:, 0] == arr[:, 1]).any():
                    u = int(arr[arr[:, 0] == arr[:, 1]][0, 0])
                    raise ValueError(f"self-loop on node {u}")
                if arr.min() < 0 or arr.max() >= n:
                    raise ValueError("edge endpoint out of range")
                arr = np.sort(arr, axis=1)
                arr = np.unique(arr, axis=0)
        else:
            pairs = set()
            for u, v in edges:
                if u == v:
                    raise ValueError(f"self-loop on node {u}")
                if not (0 <= u < n and 0 <= v < n):
                    raise ValueError(f"edge endpoint out of range: ({u}, {v})")
                pairs.add((u, v) if u < v else (v, u))
            if pairs:
                arr = np.array(sorted(pairs), dtype=np.int64)
            else:
                arr = np.empty((0, 2), dtype=np.int64)
        self.n = n
        if names is not None:
            if len(names) != n:
                raise ValueError("names length must equal n")
            self.names = list(names)
        else:
            self.names = [str(i) for i in range(n)]
        self.edge_array = arr  # (m, 2), u < v, lexicographically sorted
        both = np.concatenate([arr, arr[:, ::-1]]) if len(arr) else arr
        order = np.lexsort((both[:, 1], both[:, 0])) if len(both) else []
        sorted_pairs = both[order] if len(both) else both
        self._indptr = np.zeros(n + 1, dtype=np.int64)
        if len(sorted_pairs):
            counts = np.bincount(sorted_pairs[:, 0], minlength=n)
            self._indptr[1:] = np.cumsum(counts)
            self._indices = np.ascontiguousarray(sorted_pairs[:, 1])
        else:
            self._indices = np.empty(0, dtype=np.int64)

    @property
    def edge_count(self) -> int:
        return len(self.edge_array)

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted neighbor labels of u (a view; do not mutate)."""
        return self._indices[self._indptr[u]:self._indptr[u + 1]]

    def degree(self, u: int) -> int:
        return int(self._indptr[u + 1] - self._indptr[u])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v


def induced_bits(graph: HostGraph, nodes: Sequence[int]) -> Graphette:
    """Graphette induced on an ordered k-tuple of distinct host nodes.

    Position i of `nodes` becomes graphette node i; costs O(k^2) edge tests
    regardless of host size.
    """
    k = len(nodes)
    if len(set(nodes)) != k:
        raise ValueError(f"duplicate node label in {nodes}")
    for u in nodes:
        if not 0 <= u < graph.n:
            raise ValueError(f"node label {u} out of range (n={graph.n})")
    bits = 0
    for i in range(1, k):
        base = i * (i - 1) // 2
        for j in range(i):
            if graph.has_edge(nodes[i], nodes[j]):
                bits |= 1 << (base + j)
    return Graphette(k, bits)
