"""Known-YES, known-NO and random instances for tests and the CLI."""

from __future__ import annotations

import numpy as np

from .instances import MixedInstance, MulticutInstance, reachable_from


def no_edge() -> MixedInstance:
    """One undirected edge, both directions requested: at most one pair is satisfiable."""
    return MixedInstance(2, (), ((0, 1),), ((0, 1), (1, 0)))


def yes_chain(k: int = 2, length: int = 2, undirected: int = 1) -> MixedInstance:
    """``k`` disjoint chains ``s_i -> ... -> t_i`` of ``length`` links.

    The first ``undirected`` links of every chain are undirected edges, the
    rest are arcs.  Orienting everything forward satisfies all pairs.
    """
    if k < 1 or length < 1 or not 0 <= undirected <= length:
        raise ValueError(f"bad chain shape k={k} length={length} undirected={undirected}")
    arcs, edges, pairs = [], [], []
    for i in range(k):
        base = i * (length + 1)
        for step in range(length):
            link = (base + step, base + step + 1)
            (edges if step < undirected else arcs).append(link)
        pairs.append((base, base + length))
    return MixedInstance(k * (length + 1), tuple(arcs), tuple(edges), tuple(pairs))


def dmc_no() -> MulticutInstance:
    """Two arcs, each pair listed twice, budget 1: at most two of four pairs separable."""
    return MulticutInstance(4, ((0, 1), (2, 3)), ((0, 1), (0, 1), (2, 3), (2, 3)), 1)


def dmc_yes() -> MulticutInstance:
    """Four disjoint arcs, budget 4: cutting all of them separates every pair."""
    arcs = tuple((2 * i, 2 * i + 1) for i in range(4))
    return MulticutInstance(8, arcs, arcs, 4)


def random_mixed(
    n: int,
    k: int,
    seed=None,
    max_edges: int | None = None,
    arc_prob: float = 0.4,
    planted: bool = True,
) -> MixedInstance:
    """Random acyclic mixed graph.

    Undirected edges form a random forest; its trees are put in a random
    order and arcs only run from earlier trees to later ones, so every
    orientation is a DAG.  Planted pairs are chosen among pairs reachable in
    the relaxation; unplanted pairs are arbitrary distinct vertices.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    rng = np.random.default_rng(seed)
    max_edges = n - 1 if max_edges is None else min(max_edges, n - 1)
    n_edges = int(rng.integers(0, max_edges + 1))

    order = [int(v) for v in rng.permutation(n)]
    edges = []
    for idx in range(1, n_edges + 1):
        v = order[idx]
        u = order[int(rng.integers(0, idx))]
        edges.append((u, v))
    comp = {v: v for v in range(n)}
    for u, v in edges:
        old, new = comp[v], comp[u]
        for w in comp:
            if comp[w] == old:
                comp[w] = new
    labels = sorted(set(comp.values()))
    perm = rng.permutation(len(labels)).tolist()
    rank = {lab: perm[i] for i, lab in enumerate(labels)}

    arcs = []
    for u in range(n):
        for v in range(n):
            if rank[comp[u]] < rank[comp[v]] and rng.random() < arc_prob:
                arcs.append((u, v))

    if planted:
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in arcs:
            adj[u].append(v)
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        candidates = [(s, t) for s in range(n) for t in sorted(reachable_from(adj, s)) if t != s]
        if not candidates:
            candidates = [(s, t) for s in range(n) for t in range(n) if s != t]
        picks = rng.integers(0, len(candidates), size=k)
        pairs = [candidates[int(i)] for i in picks]
    else:
        pairs = []
        for _ in range(k):
            s, t = (int(x) for x in rng.choice(n, size=2, replace=False))
            pairs.append((s, t))
    return MixedInstance(n, tuple(arcs), tuple(edges), tuple(pairs))
