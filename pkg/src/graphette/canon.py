"""Graphette isomorphism testing and canonical lookup-table construction.

The canonical representative of an isomorphism class is its numerically
lowest bit vector.  Tables map every bit vector B to (canonical id, witness
permutation, connected flag), where the witness w satisfies
apply_permutation(decode(B), w) == canonical bits.

Among all valid witnesses for a given B we always store the lexicographically
least mapping.  That rule is independent of how the table was built, which is
what makes one-shot and partitioned builds produce identical bytes; it also
guarantees every canonical entry carries the identity witness, since the
identity is lexicographically least inside any permutation group.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .core import (
    Graphette,
    Permutation,
    adjacency_masks,
    bit_length,
    decode,
    degree_sequence,
    degrees,
    is_connected,
)

MAX_BUILD_K = 8          # b(8)=28 record bits; beyond this the table does not fit the format
MAX_SEQUENTIAL_K = 7     # one-shot scan is practical up to here; k=8 needs partitioned runs
_KEY_SENTINEL = np.iinfo(np.int64).max


@dataclass
class CanonicalCatalog:
    """Ascending canonical bit vectors for one k, with per-canonical metadata.

    orbit_labels stays None until the orbit pass fills it; entry c is a
    k-tuple giving, for each node of canonical c, the minimum node index of
    its automorphism orbit.
    """

    k: int
    canonicals: np.ndarray
    connected: np.ndarray
    orbit_labels: list[tuple[int, ...]] | None = None

    def __len__(self) -> int:
        return len(self.canonicals)

    def graphette(self, canonical_id: int) -> Graphette:
        return Graphette(self.k, int(self.canonicals[canonical_id]))


@dataclass
class LookupTable:
    """Dense map from every k-node bit vector to its canonical record.

    witness is packed 3 bits per node: node u's image sits in bits 3u..3u+2.
    """

    k: int
    canonical_id: np.ndarray
    witness: np.ndarray
    connected: np.ndarray

    def __len__(self) -> int:
        return len(self.canonical_id)

    def witness_permutation(self, bits: int) -> Permutation:
        w = int(self.witness[bits])
        return Permutation(tuple(w >> 3 * u & 7 for u in range(self.k)))


@dataclass
class SiftPartition:
    """Isomorphism classes of one contiguous bit-vector range [lo, hi).

    temp_canonicals holds the lowest member of each class local to the range;
    tc_index[b - lo] points at the temp canonical of member b, and
    witness_key[b - lo] is the lexicographic key of the least permutation
    sending b onto that temp canonical.
    """

    k: int
    lo: int
    hi: int
    temp_canonicals: np.ndarray
    temp_connected: np.ndarray
    tc_index: np.ndarray
    witness_key: np.ndarray


# ---------------------------------------------------------------------------
# pairwise isomorphism


def _iter_isomorphisms(g: Graphette, h: Graphette) -> Iterator[tuple[int, ...]]:
    """Yield every node mapping taking g onto h, in lexicographic order.

    Backtracking over partial assignments; a node may only map to a node of
    equal degree, and each extension is checked against all earlier edges.
    """
    k = g.k
    deg_g, deg_h = degrees(g), degrees(h)
    adj_g, adj_h = adjacency_masks(g), adjacency_masks(h)
    candidates = [[v for v in range(k) if deg_h[v] == deg_g[u]] for u in range(k)]
    image = [0] * k
    used = [False] * k

    def extend(u: int) -> Iterator[tuple[int, ...]]:
        if u == k:
            yield tuple(image)
            return
        row = adj_g[u]
        for v in candidates[u]:
            if used[v]:
                continue
            hrow = adj_h[v]
            ok = True
            for s in range(u):
                if (row >> s & 1) != (hrow >> image[s] & 1):
                    ok = False
                    break
            if ok:
                used[v] = True
                image[u] = v
                yield from extend(u + 1)
                used[v] = False

    yield from extend(0)


def are_isomorphic(g: Graphette, h: Graphette) -> Permutation | None:
    """Witness permutation taking g onto h, or None if not isomorphic.

    Rejects cheaply on edge-count then degree-sequence mismatch before
    cycling through degree-compatible node assignments.
    """
    if g.k != h.k:
        raise ValueError(f"size mismatch: k={g.k} vs k={h.k}")
    if g.bits == h.bits:
        return Permutation.identity(g.k)
    if g.edge_count != h.edge_count:
        return None
    if degree_sequence(g) != degree_sequence(h):
        return None
    for mapping in _iter_isomorphisms(g, h):
        return Permutation(mapping)
    return None


# ---------------------------------------------------------------------------
# vectorized permutation sweeps


@lru_cache(maxsize=None)
def _perm_tables(k: int) -> tuple[np.ndarray, np.ndarray]:
    """All k! permutations plus the lexicographic key of each one's inverse.

    Keys order mappings with node 0's image most significant (base 8 digits,
    valid for k <= 8), so the minimum key is the lexicographically least
    mapping.
    """
    perms = np.array(list(itertools.permutations(range(k))), dtype=np.int64)
    perms = perms.reshape(-1, k)
    inverse = np.empty_like(perms)
    inverse[np.arange(len(perms))[:, None], perms] = np.arange(k, dtype=np.int64)
    weights = _lex_weights(k)
    return perms, inverse @ weights


def _lex_weights(k: int) -> np.ndarray:
    return np.array([8 ** (k - 1 - u) for u in range(k)], dtype=np.int64)


def _permutation_images(perms: np.ndarray, bits: int, k: int) -> np.ndarray:
    """Bit vectors of the graphette relabeled by every permutation row."""
    out = np.zeros(len(perms), dtype=np.int64)
    for i in range(1, k):
        base = i * (i - 1) // 2
        for j in range(i):
            if bits >> (base + j) & 1:
                a, b = perms[:, i], perms[:, j]
                hi = np.maximum(a, b)
                lo = np.minimum(a, b)
                out |= np.int64(1) << (hi * (hi - 1) // 2 + lo)
    return out


def _keys_to_packed(keys: np.ndarray, k: int) -> np.ndarray:
    """Convert lexicographic witness keys to the 3-bits-per-node packing."""
    packed = np.zeros(len(keys), dtype=np.uint32)
    for u in range(k):
        digit = (keys // 8 ** (k - 1 - u)) % 8
        packed |= digit.astype(np.uint32) << np.uint32(3 * u)
    return packed


def _next_unmarked(marks: np.ndarray, start: int) -> int:
    """Index of the first -1 entry at or after start, or len(marks)."""
    size = len(marks)
    chunk = 1 << 16
    pos = start
    while pos < size:
        stop = min(pos + chunk, size)
        hits = np.flatnonzero(marks[pos:stop] == -1)
        if len(hits):
            return pos + int(hits[0])
        pos = stop
    return size


def _check_build_k(k: int, limit: int) -> None:
    if not 1 <= k <= limit:
        raise ValueError(f"table building supports k in 1..{limit}, got {k}")


# ---------------------------------------------------------------------------
# one-shot builder


def build_canonical_map_sequential(k: int) -> tuple[CanonicalCatalog, LookupTable]:
    """Scan all 2^b(k) bit vectors in ascending order and classify them.

    Each time the scan reaches a bit vector not yet claimed by an earlier
    class, that vector is the lowest member of a new class and becomes its
    canonical; all k! relabelings of it are then marked in one vectorized
    pass, recording for every image the least witness permutation back onto
    the canonical.
    """
    _check_build_k(k, MAX_SEQUENTIAL_K)
    size = 1 << bit_length(k)
    perms, inv_keys = _perm_tables(k)

    canon_id = np.full(size, -1, dtype=np.int32)
    wit_key = np.full(size, _KEY_SENTINEL, dtype=np.int64)
    canonicals: list[int] = []
    conn_flags: list[bool] = []

    cursor = 0
    while True:
        cursor = _next_unmarked(canon_id, cursor)
        if cursor >= size:
            break
        cid = len(canonicals)
        images = _permutation_images(perms, cursor, k)
        canon_id[images] = cid
        np.minimum.at(wit_key, images, inv_keys)
        canonicals.append(cursor)
        conn_flags.append(is_connected(Graphette(k, cursor)))

    canon_arr = np.array(canonicals, dtype=np.int64)
    conn_arr = np.array(conn_flags, dtype=bool)
    table = LookupTable(
        k=k,
        canonical_id=canon_id,
        witness=_keys_to_packed(wit_key, k),
        connected=conn_arr[canon_id],
    )
    return CanonicalCatalog(k, canon_arr, conn_arr), table


# ---------------------------------------------------------------------------
# partitioned builder


def sift_partition(k: int, lo: int, hi: int) -> SiftPartition:
    """Classify one contiguous range of bit vectors in isolation.

    Same ascending sweep as the one-shot builder, except relabelings that
    fall outside [lo, hi) are ignored; the lowest member of each class
    within the range becomes its temporary canonical.
    """
    _check_build_k(k, MAX_BUILD_K)
    size = 1 << bit_length(k)
    if not (0 <= lo < hi <= size):
        raise ValueError(f"empty or out-of-range partition [{lo}, {hi}) for k={k}")
    perms, inv_keys = _perm_tables(k)

    span = hi - lo
    tc_index = np.full(span, -1, dtype=np.int32)
    wit_key = np.full(span, _KEY_SENTINEL, dtype=np.int64)
    temps: list[int] = []
    temp_conn: list[bool] = []

    cursor = 0
    while True:
        cursor = _next_unmarked(tc_index, cursor)
        if cursor >= span:
            break
        bits = lo + cursor
        tid = len(temps)
        images = _permutation_images(perms, bits, k)
        inside = (images >= lo) & (images < hi)
        local = images[inside] - lo
        tc_index[local] = tid
        np.minimum.at(wit_key, local, inv_keys[inside])
        temps.append(bits)
        temp_conn.append(is_connected(Graphette(k, bits)))

    return SiftPartition(
        k=k,
        lo=lo,
        hi=hi,
        temp_canonicals=np.array(temps, dtype=np.int64),
        temp_connected=np.array(temp_conn, dtype=bool),
        tc_index=tc_index,
        witness_key=wit_key,
    )


def _validate_tiling(parts: Sequence[SiftPartition]) -> list[SiftPartition]:
    if not parts:
        raise ValueError("no partitions to merge")
    k = parts[0].k
    ordered = sorted(parts, key=lambda p: p.lo)
    size = 1 << bit_length(k)
    expected = 0
    for p in ordered:
        if p.k != k:
            raise ValueError(f"mixed k in partitions: {p.k} vs {k}")
        if p.lo != expected:
            raise ValueError(
                f"partitions do not tile the space: gap/overlap at {expected} "
                f"(next range starts at {p.lo})"
            )
        expected = p.hi
    if expected != size:
        raise ValueError(
            f"partitions do not tile the space: cover [0, {expected}) of [0, {size})"
        )
    return ordered


def merge_siftings(parts: Sequence[SiftPartition]) -> tuple[CanonicalCatalog, LookupTable]:
    """Fuse per-range siftings into the global catalog and lookup table.

    Temporary canonicals are revisited in ascending numeric order; the first
    unclaimed one in each isomorphism class is the global canonical (the
    class's lowest member always survives its own range, so it is present).
    Every record's witness is then the composition member->temp->canonical,
    minimized over the canonical's automorphisms so the stored bytes match a
    one-shot build exactly.
    """
    ordered = _validate_tiling(parts)
    k = ordered[0].k
    size = 1 << bit_length(k)
    perms, inv_keys = _perm_tables(k)
    weights = _lex_weights(k)

    all_temps = np.concatenate([p.temp_canonicals for p in ordered])
    all_temp_conn = np.concatenate([p.temp_connected for p in ordered])
    temp_offsets = np.cumsum([0] + [len(p.temp_canonicals) for p in ordered])
    # ranges are ascending and temps ascend within each range
    temp_cid = np.full(len(all_temps), -1, dtype=np.int32)
    temp_wit = np.empty((len(all_temps), k), dtype=np.int64)

    canonicals: list[int] = []
    conn_flags: list[bool] = []
    canonical_auts: list[np.ndarray] = []

    for slot in range(len(all_temps)):
        if temp_cid[slot] != -1:
            continue
        bits = int(all_temps[slot])
        cid = len(canonicals)
        images = _permutation_images(perms, bits, k)
        pos = np.searchsorted(all_temps, images)
        hit = (pos < len(all_temps)) & (all_temps[np.minimum(pos, len(all_temps) - 1)] == images)
        hit_slots = pos[hit]
        best = np.full(len(all_temps), _KEY_SENTINEL, dtype=np.int64)
        np.minimum.at(best, hit_slots, inv_keys[hit])
        touched = np.unique(hit_slots)
        temp_cid[touched] = cid
        keys = best[touched]
        for u in range(k):
            temp_wit[touched, u] = (keys // 8 ** (k - 1 - u)) % 8
        canonicals.append(bits)
        canonical_auts.append(np.ascontiguousarray(perms[images == bits]))
        conn_flags.append(bool(all_temp_conn[slot]))

    canon_arr = np.array(canonicals, dtype=np.int64)
    conn_arr = np.array(conn_flags, dtype=bool)

    canon_id = np.empty(size, dtype=np.int32)
    wit_packed = np.empty(size, dtype=np.uint32)
    for pi, part in enumerate(ordered):
        base = temp_offsets[pi]
        slots = base + part.tc_index.astype(np.int64)
        canon_id[part.lo:part.hi] = temp_cid[slots]
        # witness = min over Aut(canonical) of  aut ∘ (temp->canonical) ∘ (member->temp)
        member_perm = np.empty((part.hi - part.lo, k), dtype=np.int64)
        for u in range(k):
            member_perm[:, u] = (part.witness_key // 8 ** (k - 1 - u)) % 8
        out_keys = np.empty(part.hi - part.lo, dtype=np.int64)
        for tid in range(len(part.temp_canonicals)):
            members = np.flatnonzero(part.tc_index == tid)
            slot = base + tid
            cid = temp_cid[slot]
            lifted = canonical_auts[cid][:, temp_wit[slot]]      # (A, k): aut ∘ temp witness
            cand = lifted[:, member_perm[members]]               # (A, m, k)
            out_keys[members] = (cand @ weights).min(axis=0)
        wit_packed[part.lo:part.hi] = _keys_to_packed(out_keys, k)

    table = LookupTable(
        k=k,
        canonical_id=canon_id,
        witness=wit_packed,
        connected=conn_arr[canon_id],
    )
    return CanonicalCatalog(k, canon_arr, conn_arr), table


def partition_ranges(k: int, m: int) -> list[tuple[int, int]]:
    """m contiguous near-equal ranges tiling [0, 2^b(k)); never empty."""
    if m < 1:
        raise ValueError(f"partition count must be >= 1, got {m}")
    size = 1 << bit_length(k)
    m = min(m, size)
    bounds = [size * i // m for i in range(m + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(m)]


def build_canonical_map_parallel(
    k: int, m: int, workers: int = 1
) -> tuple[CanonicalCatalog, LookupTable]:
    """Sift m bit-vector ranges (concurrently when workers > 1) and merge.

    Output is identical to the one-shot builder regardless of m, worker
    count, or completion order.
    """
    _check_build_k(k, MAX_BUILD_K)
    ranges = partition_ranges(k, m)
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sift_range, [(k, lo, hi) for lo, hi in ranges]))
    else:
        parts = [sift_partition(k, lo, hi) for lo, hi in ranges]
    return merge_siftings(parts)


def _sift_range(args: tuple[int, int, int]) -> SiftPartition:
    return sift_partition(*args)
