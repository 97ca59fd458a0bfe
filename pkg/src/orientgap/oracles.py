"""Exhaustive ground-truth solvers for micro instances.

``opt_so`` enumerates every orientation, but does so bit-parallel: one
machine bit per orientation, 64 orientations per word, so reachability for a
whole block of orientations is a handful of numpy ``|``/``&`` sweeps.
``opt_dmc`` enumerates cutsets directly.  ``max_clique_at_least`` is a
bitset backtracking search.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import TooLarge
from .instances import (
    Cutset,
    MixedInstance,
    MulticutInstance,
    Orientation,
    reachable_from,
    satisfied_pairs_so,
    separated_pairs_dmc,
)

DEFAULT_SO_LIMIT = 1 << 22
DEFAULT_DMC_LIMIT = 10**7
_CHUNK_BITS = 16


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: Any


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _edge_masks(m: int, start: int, length: int) -> np.ndarray:
    """Packed masks: bit ``x`` of row ``e`` is set iff orientation ``start + x`` reverses edge ``e``."""
    idx = np.arange(start, start + length, dtype=np.uint64)
    masks = np.empty((m, length // 64), dtype=np.uint64)
    for e in range(m):
        bits = ((idx >> np.uint64(e)) & np.uint64(1)).astype(np.uint8)
        masks[e] = np.packbits(bits, bitorder="little").view(np.uint64)
    return masks


def _so_chunk(instance: MixedInstance, order: dict[int, list[int]], start: int, length: int):
    m = len(instance.edges)
    masks = _edge_masks(m, start, length)
    words = length // 64
    ones = np.full(words, np.uint64(0xFFFFFFFFFFFFFFFF))
    counts = np.zeros(length, dtype=np.uint32)
    by_source: dict[int, list[int]] = {}
    for s, t in instance.pairs:
        by_source.setdefault(s, []).append(t)

    for s, sinks in by_source.items():
        reach = np.zeros((instance.n, words), dtype=np.uint64)
        reach[s] = ones
        arcs, edges = order[s]
        while True:
            before = reach.copy()
            for u, v in arcs:
                reach[v] |= reach[u]
            for e in edges:
                u, v = instance.edges[e]
                rev = masks[e]
                reach[v] |= reach[u] & ~rev
                reach[u] |= reach[v] & rev
            if np.array_equal(before, reach):
                break
        for t in sinks:
            counts += np.unpackbits(reach[t].view(np.uint8), bitorder="little")[:length]
    best = int(np.argmax(counts))
    return int(counts[best]), start + best


def _sweep_order(instance: MixedInstance, s: int):
    """Arcs and edge indices touching vertices reachable from ``s``, sorted by BFS depth."""
    adj = instance.relaxation()
    depth = {s: 0}
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in depth:
                    depth[v] = depth[u] + 1
                    nxt.append(v)
        frontier = nxt
    arcs = sorted((a for a in instance.arcs if a[0] in depth), key=lambda a: depth[a[0]])
    edges = [e for e, (u, v) in enumerate(instance.edges) if u in depth]
    edges.sort(key=lambda e: min(depth[x] for x in instance.edges[e]))
    return arcs, edges


def opt_so(instance: MixedInstance, limit: int = DEFAULT_SO_LIMIT, threads: int = 1) -> OracleResult:
    """Maximum number of satisfiable pairs over all ``2**|E|`` orientations.

    Ties are broken towards the orientation with the smallest index (bit
    ``e`` of the index is bit ``e`` of the orientation), so the witness does
    not depend on ``threads``.
    """
    m = len(instance.edges)
    if m >= 63 or (1 << m) > limit:
        raise TooLarge(f"2^{m} orientations exceed the cap of {limit}")
    if m == 0:
        value, _ = satisfied_pairs_so(instance, ())
        return OracleResult(value, Orientation(()))

    total = 1 << m
    chunk = max(64, min(total, 1 << _CHUNK_BITS))
    order = {s: _sweep_order(instance, s) for s, _ in instance.pairs}
    starts = list(range(0, total, chunk))
    results = _map(lambda st: _so_chunk(instance, order, st, chunk), starts, threads)
    value, index = -1, 0
    for v, i in results:
        if i < total and v > value:
            value, index = v, i
    return OracleResult(value, Orientation.from_index(index, m))


def opt_dmc(instance: MulticutInstance, limit: int = DEFAULT_DMC_LIMIT, threads: int = 1) -> OracleResult:
    """Maximum number of separable pairs over all cutsets within budget.

    Deleting arcs never reconnects a pair, so only cutsets of size exactly
    ``min(p, |A|)`` are enumerated.
    """
    m, p = len(instance.arcs), min(instance.budget, len(instance.arcs))
    if comb(m, p) > limit:
        raise TooLarge(f"C({m}, {p}) cutsets exceed the cap of {limit}")
    k = instance.k
    cuts = list(combinations(range(m), p))
    block = max(1, len(cuts) // max(1, threads * 4))
    blocks = [cuts[i:i + block] for i in range(0, len(cuts), block)]

    def best_in(block_cuts):
        best, arg = -1, None
        for cut in block_cuts:
            removed = set(cut)
            adj: list[list[int]] = [[] for _ in range(instance.n)]
            for i, (u, v) in enumerate(instance.arcs):
                if i not in removed:
                    adj[u].append(v)
            reach: dict[int, set[int]] = {}
            value = 0
            for s, t in instance.pairs:
                if s not in reach:
                    reach[s] = reachable_from(adj, s)
                value += t not in reach[s]
            if value > best:
                best, arg = value, cut
                if best == k:
                    break
        return best, arg

    best, arg = -1, ()
    for value, cut in _map(best_in, blocks, threads):
        if value > best:
            best, arg = value, cut
    witness = Cutset(frozenset(arg))
    assert separated_pairs_dmc(instance, witness)[0] == best
    return OracleResult(best, witness)


# -- clique ------------------------------------------------------------------

def _bitsets(adjacency: Sequence[Iterable[int]]) -> list[int]:
    masks = []
    for v, nbrs in enumerate(adjacency):
        mask = 0
        for w in nbrs:
            if w != v:
                mask |= 1 << w
        masks.append(mask)
    return masks


def _members(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _transversal_clique(adj: list[int], groups: list[int]) -> list[int] | None:
    """One vertex per group, pairwise adjacent; groups are searched in list order."""
    chosen: list[int] = []

    def search(depth: int, cands: list[int]) -> bool:
        if depth == len(groups):
            return True
        for v in _members(cands[depth]):
            nb = adj[v]
            rest = [c & nb for c in cands[depth + 1:]]
            if all(rest):
                chosen.append(v)
                if search(depth + 1, cands[:depth + 1] + rest):
                    return True
                chosen.pop()
        return False

    return list(chosen) if search(0, list(groups)) else None


def _plain_clique(adj: list[int], target: int) -> list[int] | None:
    chosen: list[int] = []

    def expand(cands: int) -> bool:
        if len(chosen) == target:
            return True
        while cands:
            if len(chosen) + bin(cands).count("1") < target:
                return False
            low = cands & -cands
            v = low.bit_length() - 1
            cands ^= low
            chosen.append(v)
            if expand(cands & adj[v]):
                return True
            chosen.pop()
        return False

    return list(chosen) if expand((1 << len(adj)) - 1) else None


def max_clique_at_least(
    adjacency: Sequence[Iterable[int]],
    target: int,
    parts: Sequence[Hashable] | None = None,
) -> frozenset[int] | None:
    """Find a clique of size ``target``, or return ``None``.

    With ``parts`` (one label per vertex) the search picks exactly one vertex
    from every part, visiting parts in sorted label order and filtering the
    candidates of every later part after each pick; ``target`` must then
    equal the number of parts.
    """
    adj = _bitsets(adjacency)
    if target <= 0:
        return frozenset()
    if parts is None:
        found = _plain_clique(adj, target)
    else:
        if len(parts) != len(adj):
            raise ValueError("one part label per vertex is required")
        labels = sorted(set(parts))
        if target != len(labels):
            raise ValueError(f"multipartite target must equal the part count {len(labels)}")
        position = {lab: i for i, lab in enumerate(labels)}
        groups = [0] * len(labels)
        for v, lab in enumerate(parts):
            groups[position[lab]] |= 1 << v
        found = _transversal_clique(adj, groups)
    return None if found is None else frozenset(found)
