"""Instance data model, text format, reachability and cycle contraction.

Two problems share one line-oriented text format::

    so <n>              # Steiner Orientation on a mixed graph
    dmc <n> <p>         # Max Directed Multicut with budget p
    arc <u> <v>
    edge <u> <v>        # so only
    pair <s> <t>

Vertices are dense 0-based integers.  Arcs and edges are kept sorted inside
the data model, so the position of an undirected edge in ``edges`` is the
index of its bit in an :class:`Orientation` and the position of an arc in
``arcs`` is its index in a :class:`Cutset`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import (
    BadIndex,
    BudgetExceeded,
    DuplicateAdjacency,
    EmptyTerminals,
    IndexOutOfRange,
    InstanceError,
    InstanceSyntaxError,
    LengthMismatch,
    SelfLoop,
)

Pair = tuple[int, int]


def _check_graph(n: int, arcs, edges, pairs) -> None:
    if n < 0:
        raise InstanceError(f"negative vertex count {n}")
    seen_arcs: set[Pair] = set()
    for u, v in arcs:
        if not (0 <= u < n and 0 <= v < n):
            raise IndexOutOfRange(f"arc ({u}, {v}) outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"arc ({u}, {v}) is a self-loop")
        if (u, v) in seen_arcs:
            raise DuplicateAdjacency(f"duplicate arc ({u}, {v})")
        seen_arcs.add((u, v))
    seen_edges: set[frozenset[int]] = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"edge ({u}, {v}) is a self-loop")
        key = frozenset((u, v))
        if key in seen_edges:
            raise DuplicateAdjacency(f"duplicate edge {{{u}, {v}}}")
        if (u, v) in seen_arcs or (v, u) in seen_arcs:
            raise DuplicateAdjacency(f"edge {{{u}, {v}}} also present as an arc")
        seen_edges.add(key)
    if not pairs:
        raise EmptyTerminals("instance has no terminal pairs")
    for s, t in pairs:
        if not (0 <= s < n and 0 <= t < n):
            raise IndexOutOfRange(f"pair ({s}, {t}) outside 0..{n - 1}")


def _pairs(items: Iterable[Sequence[int]]) -> tuple[Pair, ...]:
    return tuple((int(a), int(b)) for a, b in items)


@dataclass(frozen=True)
class MixedInstance:
    """Mixed graph ``(V, A, E)`` with an ordered list of terminal pairs."""

    n: int
    arcs: tuple[Pair, ...]
    edges: tuple[Pair, ...]
    pairs: tuple[Pair, ...]

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(sorted(_pairs(self.arcs))))
        object.__setattr__(self, "edges", tuple(sorted(_pairs(self.edges))))
        object.__setattr__(self, "pairs", _pairs(self.pairs))
        _check_graph(self.n, self.arcs, self.edges, self.pairs)

    @property
    def k(self) -> int:
        return len(self.pairs)

    def relaxation(self) -> list[list[int]]:
        """Out-neighbour lists with every undirected edge usable both ways."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].append(v)
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        return adj

    def oriented(self, orientation: "Orientation | Sequence[int]") -> list[list[int]]:
        bits = _bits(orientation, len(self.edges))
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].append(v)
        for (u, v), b in zip(self.edges, bits):
            if b:
                adj[v].append(u)
            else:
                adj[u].append(v)
        return adj


@dataclass(frozen=True)
class Orientation:
    """One direction bit per undirected edge: 0 keeps ``(u, v)`` as written, 1 reverses it."""

    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(1 if b else 0 for b in self.bits))

    @classmethod
    def forward(cls, m: int) -> "Orientation":
        return cls((0,) * m)

    @classmethod
    def from_index(cls, index: int, m: int) -> "Orientation":
        """Orientation whose bit ``e`` is bit ``e`` of ``index``."""
        return cls(tuple((index >> e) & 1 for e in range(m)))

    def __len__(self) -> int:
        return len(self.bits)


def _bits(orientation, m: int) -> tuple[int, ...]:
    bits = orientation.bits if isinstance(orientation, Orientation) else tuple(orientation)
    if len(bits) != m:
        raise LengthMismatch(f"orientation has {len(bits)} bits, instance has {m} undirected edges")
    return bits


@dataclass(frozen=True)
class MulticutInstance:
    """Directed graph with terminal pairs and a deletion budget ``p``."""

    n: int
    arcs: tuple[Pair, ...]
    pairs: tuple[Pair, ...]
    budget: int

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(sorted(_pairs(self.arcs))))
        object.__setattr__(self, "pairs", _pairs(self.pairs))
        _check_graph(self.n, self.arcs, (), self.pairs)
        if not 0 <= self.budget <= len(self.arcs):
            raise InstanceError(f"budget {self.budget} outside 0..{len(self.arcs)}")

    @property
    def k(self) -> int:
        return len(self.pairs)

    def arc_index(self) -> dict[Pair, int]:
        return {a: i for i, a in enumerate(self.arcs)}


@dataclass(frozen=True)
class Cutset:
    """A set of arc indices to delete."""

    indices: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "indices", frozenset(int(i) for i in self.indices))

    def __len__(self) -> int:
        return len(self.indices)


Instance = Union[MixedInstance, MulticutInstance]


# -- text format -------------------------------------------------------------

def _int_token(tok: str, line: int, col: int) -> int:
    if not tok.isdigit():
        raise InstanceSyntaxError(f"expected a non-negative integer, got {tok!r}", line, col)
    return int(tok)


def parse_instance(text: str) -> Instance:
    """Parse the line format; errors carry 1-based line and column numbers."""
    kind = None
    n = budget = 0
    arcs: list[Pair] = []
    edges: list[Pair] = []
    pairs: list[Pair] = []
    arc_set: set[Pair] = set()
    edge_keys: set[frozenset[int]] = set()
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        body = raw.split("#", 1)[0]
        tokens: list[tuple[str, int]] = []
        col = 0
        for tok in body.split():
            col = body.index(tok, col)
            tokens.append((tok, col + 1))
            col += len(tok)
        if not tokens:
            continue
        word, wcol = tokens[0]
        args = tokens[1:]

        if kind is None:
            if word not in ("so", "dmc"):
                raise InstanceSyntaxError(f"expected header 'so' or 'dmc', got {word!r}", lineno, wcol)
            want = 1 if word == "so" else 2
            if len(args) != want:
                raise InstanceSyntaxError(f"'{word}' takes {want} argument(s)", lineno, wcol)
            kind = word
            n = _int_token(args[0][0], lineno, args[0][1])
            if kind == "dmc":
                budget = _int_token(args[1][0], lineno, args[1][1])
            continue

        if word in ("so", "dmc"):
            raise InstanceSyntaxError("duplicate header", lineno, wcol)
        if word not in ("arc", "edge", "pair"):
            raise InstanceSyntaxError(f"unknown statement {word!r}", lineno, wcol)
        if word == "edge" and kind == "dmc":
            raise InstanceSyntaxError("undirected edges are not allowed in a dmc instance", lineno, wcol)
        if len(args) != 2:
            raise InstanceSyntaxError(f"'{word}' takes 2 arguments", lineno, wcol)
        (ta, ca), (tb, cb) = args
        a, b = _int_token(ta, lineno, ca), _int_token(tb, lineno, cb)
        for value, c in ((a, ca), (b, cb)):
            if value >= n:
                raise IndexOutOfRange(f"vertex {value} outside 0..{n - 1}", lineno, c)

        if word == "pair":
            pairs.append((a, b))
            continue
        if a == b:
            raise SelfLoop(f"{word} ({a}, {b}) is a self-loop", lineno, wcol)
        key = frozenset((a, b))
        if word == "arc":
            if (a, b) in arc_set or key in edge_keys:
                raise DuplicateAdjacency(f"arc ({a}, {b}) repeats an existing adjacency", lineno, wcol)
            arc_set.add((a, b))
            arcs.append((a, b))
        else:
            if key in edge_keys or (a, b) in arc_set or (b, a) in arc_set:
                raise DuplicateAdjacency(f"edge ({a}, {b}) repeats an existing adjacency", lineno, wcol)
            edge_keys.add(key)
            edges.append((a, b))

    if kind is None:
        raise InstanceSyntaxError("missing header", last_line or 1)
    if not pairs:
        raise EmptyTerminals("instance has no terminal pairs", last_line or 1)
    if kind == "so":
        return MixedInstance(n, tuple(arcs), tuple(edges), tuple(pairs))
    if budget > len(arcs):
        raise InstanceError(f"budget {budget} exceeds arc count {len(arcs)}", 1)
    return MulticutInstance(n, tuple(arcs), tuple(pairs), budget)


def serialize_instance(instance: Instance) -> str:
    if isinstance(instance, MixedInstance):
        lines = [f"so {instance.n}"]
    else:
        lines = [f"dmc {instance.n} {instance.budget}"]
    lines += [f"arc {u} {v}" for u, v in instance.arcs]
    if isinstance(instance, MixedInstance):
        lines += [f"edge {u} {v}" for u, v in instance.edges]
    lines += [f"pair {s} {t}" for s, t in instance.pairs]
    return "\n".join(lines) + "\n"


# -- reachability ------------------------------------------------------------

def reachable_from(adj: Sequence[Sequence[int]], source: int) -> set[int]:
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _pair_flags(adj, pairs) -> tuple[bool, ...]:
    cache: dict[int, set[int]] = {}
    flags = []
    for s, t in pairs:
        if s not in cache:
            cache[s] = reachable_from(adj, s)
        flags.append(t in cache[s])
    return tuple(flags)


def satisfied_pairs_so(instance: MixedInstance, orientation) -> tuple[int, tuple[bool, ...]]:
    """Count pairs whose sink is reachable from its source under ``orientation``."""
    flags = _pair_flags(instance.oriented(orientation), instance.pairs)
    return sum(flags), flags


def separated_pairs_dmc(instance: MulticutInstance, cut) -> tuple[int, tuple[bool, ...]]:
    """Count pairs whose sink becomes unreachable once the arcs in ``cut`` are deleted."""
    indices = cut.indices if isinstance(cut, Cutset) else frozenset(cut)
    if len(indices) > instance.budget:
        raise BudgetExceeded(f"cut of size {len(indices)} exceeds budget {instance.budget}")
    for i in indices:
        if not 0 <= i < len(instance.arcs):
            raise BadIndex(f"arc index {i} outside 0..{len(instance.arcs) - 1}")
    adj: list[list[int]] = [[] for _ in range(instance.n)]
    for i, (u, v) in enumerate(instance.arcs):
        if i not in indices:
            adj[u].append(v)
    flags = tuple(not f for f in _pair_flags(adj, instance.pairs))
    return sum(flags), flags


# -- acyclicity and cycle contraction ----------------------------------------

class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _tree_path(forest: dict[int, list[int]], a: int, b: int) -> list[int]:
    prev = {a: a}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            break
        for w in forest.get(u, ()):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path


def _find_cycle(vertices, arcs: set[Pair], edges: list[Pair]) -> list[int] | None:
    """Vertex set of one mixed cycle, or ``None`` if the graph is acyclic."""
    forest: dict[int, list[int]] = {}
    dsu = _DSU(max(vertices, default=-1) + 1)
    for u, v in edges:
        if not dsu.union(u, v):
            return _tree_path(forest, u, v)
        forest.setdefault(u, []).append(v)
        forest.setdefault(v, []).append(u)

    comp = {v: dsu.find(v) for v in vertices}
    out: dict[int, list[Pair]] = {}
    for u, v in sorted(arcs):
        if comp[u] == comp[v]:
            return _tree_path(forest, v, u)
        out.setdefault(comp[u], []).append((u, v))

    # Directed cycle among undirected components, found by iterative DFS.
    state: dict[int, int] = {}
    for root in sorted(set(comp.values())):
        if root in state:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        via: list[Pair] = []
        state[root] = 1
        while stack:
            c, i = stack[-1]
            succ = out.get(c, [])
            if i == len(succ):
                state[c] = 2
                stack.pop()
                if via:
                    via.pop()
                continue
            stack[-1] = (c, i + 1)
            u, v = succ[i]
            d = comp[v]
            if state.get(d) == 1:
                # Cycle: components from d back to c along the stack, closed by (u, v).
                cyc_arcs = via[[s[0] for s in stack].index(d):] + [(u, v)]
                found: set[int] = set()
                for j, (_, head) in enumerate(cyc_arcs):
                    tail = cyc_arcs[(j + 1) % len(cyc_arcs)][0]
                    found.update(_tree_path(forest, head, tail))
                return sorted(found)
            if d not in state:
                state[d] = 1
                stack.append((d, 0))
                via.append((u, v))
    return None


def is_acyclic(instance: MixedInstance) -> bool:
    """True iff every orientation is a DAG.

    Checked on the undirected components: each must be a tree with no arc
    inside it, and arcs between components must not close a directed cycle.
    """
    return _find_cycle(range(instance.n), set(instance.arcs), list(instance.edges)) is None


def contraction_map(instance: MixedInstance) -> tuple[int, ...]:
    """Map each vertex to its label in :func:`contract_cycles` output."""
    dsu = _DSU(instance.n)
    arcs = set(instance.arcs)
    edges = list(instance.edges)
    while True:
        cycle = _find_cycle(range(instance.n), arcs, edges)
        if cycle is None:
            break
        for v in cycle[1:]:
            dsu.union(cycle[0], v)
        find = dsu.find
        arcs = {(find(u), find(v)) for u, v in arcs if find(u) != find(v)}
        edges = [(find(u), find(v)) for u, v in edges if find(u) != find(v)]
    reps = sorted({dsu.find(v) for v in range(instance.n)})
    label = {r: i for i, r in enumerate(reps)}
    return tuple(label[dsu.find(v)] for v in range(instance.n))


def contract_cycles(instance: MixedInstance) -> MixedInstance:
    """Contract mixed cycles until the instance is acyclic.

    Each group of merged vertices is labelled by the rank of its smallest
    original vertex, so an acyclic input comes back unchanged.
    """
    mapping = contraction_map(instance)
    n = max(mapping, default=-1) + 1
    if n == instance.n:
        return instance
    arcs = {(mapping[u], mapping[v]) for u, v in instance.arcs if mapping[u] != mapping[v]}
    edges = {}
    for u, v in instance.edges:
        a, b = mapping[u], mapping[v]
        if a != b:
            edges.setdefault(frozenset((a, b)), (a, b))
    pairs = tuple((mapping[s], mapping[t]) for s, t in instance.pairs)
    return MixedInstance(n, tuple(arcs), tuple(edges.values()), pairs)
