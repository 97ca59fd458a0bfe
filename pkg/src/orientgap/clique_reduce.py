"""Reduction from Steiner Orientation on acyclic mixed graphs to multipartite Clique.

Paths live in the relaxation digraph (every undirected edge usable in both
directions).  In an acyclic mixed graph a walk in the relaxation that never
uses an undirected edge both ways is a simple path and can be realised by an
orientation, so "reachable" and "path" mean the same thing here as in the
mixed graph.

The clique instance has one part per (pair ``i``, column ``j``).  A vertex of
part ``(i, j)`` is a reachable ordered pair ``(u, v)`` standing for the
canonical path from ``u`` to ``v``; a clique that meets every part spells out,
row by row, a chain of canonical paths from ``s_i`` to ``t_i`` with no two
pieces using an undirected edge in opposite directions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotAClique, NotAcyclic, NotAPath, OracleTooLarge, PartMissing
from .instances import MixedInstance, Orientation, is_acyclic, satisfied_pairs_so
from .oracles import max_clique_at_least

Path = tuple[int, ...]

DEFAULT_VERTEX_CAP = 20_000


@dataclass(frozen=True)
class CanonicalFamily:
    """Shortest paths with smallest-index next hop, for every reachable ordered pair.

    ``paths[(u, u)]`` is the one-vertex path ``(u,)``, which has no edges.
    """

    instance: MixedInstance
    paths: dict[tuple[int, int], Path]

    def __getitem__(self, key: tuple[int, int]) -> Path:
        return self.paths[key]

    def __contains__(self, key) -> bool:
        return key in self.paths

    def reachable_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.paths)


def _bfs_dist_to(adj_in: list[list[int]], target: int, n: int) -> list[int]:
    dist = [-1] * n
    dist[target] = 0
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for u in adj_in[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def canonical_family(instance: MixedInstance) -> CanonicalFamily:
    if not is_acyclic(instance):
        raise NotAcyclic("contract cycles before building a canonical family")
    n = instance.n
    adj = instance.relaxation()
    adj_in: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        for v in adj[u]:
            adj_in[v].append(u)
    paths: dict[tuple[int, int], Path] = {}
    for v in range(n):
        dist = _bfs_dist_to(adj_in, v, n)
        for u in range(n):
            if dist[u] < 0:
                continue
            walk = [u]
            while walk[-1] != v:
                x = walk[-1]
                walk.append(next(w for w in adj[x] if dist[w] == dist[x] - 1))
            paths[(u, v)] = tuple(walk)
    return CanonicalFamily(instance, paths)


def _undirected_steps(path: Sequence[int], edge_set: set[frozenset[int]]) -> set[tuple[int, int]]:
    return {(a, b) for a, b in zip(path, path[1:]) if frozenset((a, b)) in edge_set}


def paths_conflict(p: Sequence[int], q: Sequence[int], instance: MixedInstance) -> bool:
    """True iff some undirected edge is traversed by ``p`` and ``q`` in opposite directions."""
    edge_set = {frozenset(e) for e in instance.edges}
    steps_p = _undirected_steps(p, edge_set)
    return any((b, a) in steps_p for a, b in _undirected_steps(q, edge_set))


def _check_path(path: Sequence[int], instance: MixedInstance) -> None:
    if not path:
        raise NotAPath("empty vertex sequence")
    if len(set(path)) != len(path):
        raise NotAPath(f"{tuple(path)} repeats a vertex")
    arcs = set(instance.arcs)
    edges = {frozenset(e) for e in instance.edges}
    for a, b in zip(path, path[1:]):
        if (a, b) not in arcs and frozenset((a, b)) not in edges:
            raise NotAPath(f"no arc or edge from {a} to {b}")


@dataclass(frozen=True)
class Support:
    breakpoints: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.breakpoints)

    def expand(self, family: CanonicalFamily) -> Path:
        """Concatenate the canonical pieces between consecutive breakpoints."""
        out = [self.breakpoints[0]]
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            out.extend(family[(a, b)][1:])
        return tuple(out)


def min_support(path: Sequence[int], family: CanonicalFamily) -> Support:
    """Smallest breakpoint set splitting ``path`` into canonical pieces (O(len^2) DP)."""
    path = tuple(path)
    _check_path(path, family.instance)
    size = len(path)
    best = [0] + [size + 1] * (size - 1)
    back = [0] * size
    for j in range(1, size):
        for i in range(j):
            if best[i] + 1 < best[j] and family.paths.get((path[i], path[j])) == path[i:j + 1]:
                best[j], back[j] = best[i] + 1, i
    points = [size - 1]
    while points[-1] != 0:
        points.append(back[points[-1]])
    return Support(tuple(path[i] for i in reversed(points)))


@dataclass(frozen=True)
class CliqueInstance:
    """Multipartite graph; ``part[x] = (i, j)`` and ``payload[x] = (u, v)`` for vertex ``x``."""

    part: tuple[tuple[int, int], ...]
    payload: tuple[tuple[int, int], ...]
    adjacency: tuple[frozenset[int], ...]
    k: int
    beta: int

    @property
    def target(self) -> int:
        return self.k * self.beta

    @property
    def n(self) -> int:
        return len(self.part)

    def edges(self) -> Iterable[tuple[int, int]]:
        for a, nbrs in enumerate(self.adjacency):
            for b in sorted(nbrs):
                if a < b:
                    yield a, b


def build_clique_instance(
    instance: MixedInstance,
    beta: int,
    family: CanonicalFamily | None = None,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
) -> CliqueInstance:
    """Compile ``instance`` into a ``k * beta`` multipartite clique question.

    Vertices of distinct parts are adjacent iff their canonical paths do not
    conflict; between columns ``j`` and ``j + 1`` of the same row the edge is
    additionally kept only when the first path ends where the second starts.
    """
    if beta < 1:
        raise ValueError("beta must be at least 1")
    family = canonical_family(instance) if family is None else family
    reach = family.reachable_pairs()
    k = instance.k

    part: list[tuple[int, int]] = []
    payload: list[tuple[int, int]] = []
    for i, (s, t) in enumerate(instance.pairs):
        for j in range(beta):
            for u, v in reach:
                if (j == 0 and u != s) or (j == beta - 1 and v != t):
                    continue
                part.append((i, j))
                payload.append((u, v))
                if len(part) > vertex_cap:
                    raise OracleTooLarge(f"clique instance exceeds {vertex_cap} vertices")

    edge_set = {frozenset(e) for e in instance.edges}
    steps = {uv: _undirected_steps(family[uv], edge_set) for uv in reach}
    reversed_steps = {uv: {(b, a) for a, b in st} for uv, st in steps.items()}
    clash = {
        a: frozenset(b for b in reach if steps[b] & reversed_steps[a])
        for a in reach
    }

    nbrs: list[set[int]] = [set() for _ in part]
    for x in range(len(part)):
        (ix, jx), vx = part[x], payload[x][1]
        bad = clash[payload[x]]
        for y in range(x + 1, len(part)):
            (iy, jy), uy = part[y], payload[y][0]
            if (ix, jx) == (iy, jy) or payload[y] in bad:
                continue
            if ix == iy and jy == jx + 1 and vx != uy:
                continue
            nbrs[x].add(y)
            nbrs[y].add(x)
    return CliqueInstance(tuple(part), tuple(payload), tuple(frozenset(s) for s in nbrs), k, beta)


def solve_clique_instance(clique: CliqueInstance) -> frozenset[int] | None:
    if len(set(clique.part)) < clique.target:
        return None  # some part is empty
    return max_clique_at_least(clique.adjacency, clique.target, clique.part)


def clique_to_orientation(instance: MixedInstance, clique_inst: CliqueInstance,
                          clique: Iterable[int], family: CanonicalFamily | None = None) -> Orientation:
    """Decode a clique into an orientation satisfying every pair.

    Undirected edges on a chosen canonical path follow its direction; the rest
    keep their written direction.
    """
    family = canonical_family(instance) if family is None else family
    chosen = sorted(set(clique))
    by_part: dict[tuple[int, int], int] = {}
    for x in chosen:
        if not 0 <= x < clique_inst.n:
            raise NotAClique(f"vertex {x} is not in the clique instance")
        p = clique_inst.part[x]
        if p in by_part:
            raise NotAClique(f"two vertices picked from part {p}")
        by_part[p] = x
    for a in chosen:
        for b in chosen:
            if a < b and b not in clique_inst.adjacency[a]:
                raise NotAClique(f"vertices {a} and {b} are not adjacent")
    for i in range(clique_inst.k):
        for j in range(clique_inst.beta):
            if (i, j) not in by_part:
                raise PartMissing(f"no vertex picked from part {(i, j)}")

    direction: dict[frozenset[int], tuple[int, int]] = {}
    edge_set = {frozenset(e) for e in instance.edges}
    for x in by_part.values():
        for a, b in _undirected_steps(family[clique_inst.payload[x]], edge_set):
            direction[frozenset((a, b))] = (a, b)
    bits = tuple(int(direction.get(frozenset((u, v)), (u, v)) != (u, v)) for u, v in instance.edges)
    return Orientation(bits)


def row_paths(clique_inst: CliqueInstance, clique: Iterable[int], family: CanonicalFamily) -> list[Path]:
    """The ``s_i``-``t_i`` path spelled by each row of a clique."""
    pieces = sorted((clique_inst.part[x], clique_inst.payload[x]) for x in clique)
    rows: list[list[int]] = [[] for _ in range(clique_inst.k)]
    for (i, _), uv in pieces:
        seg = family[uv]
        rows[i].extend(seg if not rows[i] else seg[1:])
    return [tuple(r) for r in rows]


@dataclass(frozen=True)
class BetaResult:
    beta: int
    clique_instance: CliqueInstance
    clique: frozenset[int]
    orientation: Orientation


def min_beta(instance: MixedInstance, beta_max: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> BetaResult | None:
    """Smallest ``beta <= beta_max`` whose clique instance has a full clique."""
    family = canonical_family(instance)
    for beta in range(1, beta_max + 1):
        ci = build_clique_instance(instance, beta, family, vertex_cap)
        found = solve_clique_instance(ci)
        if found is not None:
            orientation = clique_to_orientation(instance, ci, found, family)
            assert satisfied_pairs_so(instance, orientation)[0] == instance.k
            return BetaResult(beta, ci, found, orientation)
    return None


def serialize_clique(ci: CliqueInstance) -> str:
    lines = [f"clique {ci.n} {ci.target}"]
    lines += [f"part {x} {i} {j}" for x, (i, j) in enumerate(ci.part)]
    lines += [f"payload {x} {u} {v}" for x, (u, v) in enumerate(ci.payload)]
    lines += [f"cedge {a} {b}" for a, b in ci.edges()]
    return "\n".join(lines) + "\n"


def parse_clique(text: str) -> CliqueInstance:
    nv = target = None
    part: dict[int, tuple[int, int]] = {}
    payload: dict[int, tuple[int, int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        try:
            nums = [int(t) for t in tokens[1:]]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer argument") from None
        word = tokens[0]
        if word == "clique" and len(nums) == 2:
            nv, target = nums
        elif word == "part" and len(nums) == 3:
            part[nums[0]] = (nums[1], nums[2])
        elif word == "payload" and len(nums) == 3:
            payload[nums[0]] = (nums[1], nums[2])
        elif word == "cedge" and len(nums) == 2:
            edges.append((nums[0], nums[1]))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if nv is None:
        raise ValueError("missing 'clique' header")
    if sorted(part) != list(range(nv)):
        raise ValueError("every vertex needs exactly one part line")
    nbrs: list[set[int]] = [set() for _ in range(nv)]
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    k = len({i for i, _ in part.values()})
    beta = len({j for _, j in part.values()})
    if k * beta != target:
        raise ValueError(f"target {target} does not match {k} rows x {beta} columns")
    return CliqueInstance(
        tuple(part[x] for x in range(nv)),
        tuple(payload.get(x, (0, 0)) for x in range(nv)),
        tuple(frozenset(s) for s in nbrs),
        k,
        beta,
    )
