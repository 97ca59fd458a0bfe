"""Parallel composition for Max Directed Multicut with four terminal pairs.

``M`` disjoint copies of the base sit side by side.  Each wiring tuple
``R in [4]^M`` adds a fresh pair ``(s_R, t_R)`` with arcs ``s_R -> G_i{s, r_i}``
and ``G_i{t, r_i} -> t_R`` for every copy ``i``, so ``(s_R, t_R)`` stays
connected iff some copy ``i`` still connects its pair ``r_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import CapExceeded, NotFourPairs, NotFullySeparating, QTooSmall
from .instances import Cutset, MulticutInstance, reachable_from, separated_pairs_dmc
from .sampler import SamplerFamily, TupleDomain, required_sample_count, sample_tuples, verify_sampler

FULL_SPACE = "full_space"
SAMPLED = "sampled"
BASE_PAIRS = 4
DEFAULT_SIZE_CAP = 5_000_000


def _log2_ceil_product(factor: int, q: int) -> int:
    """``ceil(factor * log2 q)``, exact when ``q`` is a power of two."""
    if q & (q - 1) == 0:
        return factor * (q.bit_length() - 1)
    return math.ceil(factor * math.log2(q))


@dataclass(frozen=True)
class DmcPlan:
    p: int
    q: int
    copies: int
    k0: int
    p0: int

    @property
    def delta(self) -> Fraction:
        return Fraction(1, 2 * self.q)


def plan_dmc(p: int, q: int, copies: int | None = None, k0: int | None = None) -> DmcPlan:
    """Copy count ``M``, pair count ``k0`` and budget ``p0 = p * M``.

    Defaults: ``M = 3(p+1) log2 q`` and ``k0`` = the sample count for
    ``delta = 1/(2q)`` over at most ``16**M`` configurations, which is
    ``480 q**2 (p+1) log2 q``.
    """
    if q < 2:
        raise QTooSmall(f"q must be at least 2, got {q}")
    if p < 1:
        raise ValueError(f"p must be at least 1, got {p}")
    m = _log2_ceil_product(3 * (p + 1), q) if copies is None else copies
    if m < 1:
        raise ValueError("at least one copy is required")
    if k0 is None:
        k0 = required_sample_count(Fraction(1, 2 * q), 4 * m)
    return DmcPlan(p=p, q=q, copies=m, k0=k0, p0=p * m)


@dataclass(frozen=True)
class ReducedMulticut:
    instance: MulticutInstance
    base: MulticutInstance
    copies: int
    wiring: tuple[tuple[int, ...], ...]

    def terminal_vertices(self, idx: int) -> tuple[int, int]:
        first = self.copies * self.base.n + 2 * idx
        return first, first + 1


def reduce_dmc(
    base: MulticutInstance,
    dmc_plan: DmcPlan,
    mode: str = SAMPLED,
    seed=0,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> ReducedMulticut:
    """Compose ``M`` copies of a four-pair base; budget becomes ``p * M``.

    Full-space mode wires all ``4**M`` tuples and ignores ``dmc_plan.k0``.
    ``size_cap`` bounds the arc count of the result.
    """
    if base.k != BASE_PAIRS:
        raise NotFourPairs(f"base has {base.k} pairs, the composition needs exactly 4")
    if mode not in (SAMPLED, FULL_SPACE):
        raise ValueError(f"unknown mode {mode!r}")
    m, n = dmc_plan.copies, base.n
    k0 = BASE_PAIRS**m if mode == FULL_SPACE else dmc_plan.k0
    projected = len(base.arcs) * m + 2 * m * k0
    if projected > size_cap:
        raise CapExceeded(f"projected {projected} arcs exceed the size cap of {size_cap}")

    if mode == FULL_SPACE:
        wiring = tuple(product(range(BASE_PAIRS), repeat=m))
    else:
        wiring = sample_tuples(TupleDomain(m, BASE_PAIRS), k0, seed).tuples

    arcs = [(u + i * n, v + i * n) for i in range(m) for u, v in base.arcs]
    pairs = []
    first = m * n
    for idx, r in enumerate(wiring):
        s_r, t_r = first + 2 * idx, first + 2 * idx + 1
        for i, ri in enumerate(r):
            src, snk = base.pairs[ri]
            arcs.append((s_r, src + i * n))
            arcs.append((snk + i * n, t_r))
        pairs.append((s_r, t_r))
    instance = MulticutInstance(first + 2 * len(wiring), tuple(arcs), tuple(pairs), base.budget * m)
    return ReducedMulticut(instance, base, m, wiring)


def witness_lift_dmc(base_cut, result: ReducedMulticut) -> Cutset:
    """Apply a fully separating base cut inside every copy."""
    base = result.base
    count, _ = separated_pairs_dmc(base, base_cut)
    if count != base.k:
        raise NotFullySeparating(f"base cut separates {count} of {base.k} pairs")
    indices = base_cut.indices if isinstance(base_cut, Cutset) else frozenset(base_cut)
    where = result.instance.arc_index()
    n = base.n
    lifted = set()
    for i in range(result.copies):
        for a in indices:
            u, v = base.arcs[a]
            lifted.add(where[(u + i * n, v + i * n)])
    return Cutset(frozenset(lifted))


def soundness_expectation_bound(alive_copies: int) -> Fraction:
    """``(3/4) ** alive``: chance that a uniform tuple misses every live pair."""
    return Fraction(3, 4) ** alive_copies


def min_alive_copies(copies: int, p: int) -> int:
    """Copies that keep a live pair under any budget-``p * M`` cut of a NO base."""
    return -(-copies // (p + 1))


def alive_sets(result: ReducedMulticut, cut) -> tuple[frozenset[int], ...]:
    """For each copy, the base pairs still connected after ``cut``.

    ``s_R`` has no in-arcs and ``t_R`` no out-arcs, so reachability between
    copy vertices never leaves the copy.
    """
    indices = cut.indices if isinstance(cut, Cutset) else frozenset(cut)
    inst, base, n = result.instance, result.base, result.base.n
    adj: list[list[int]] = [[] for _ in range(inst.n)]
    for i, (u, v) in enumerate(inst.arcs):
        if i not in indices:
            adj[u].append(v)
    out = []
    for c in range(result.copies):
        live = frozenset(
            j for j, (s, t) in enumerate(base.pairs) if t + c * n in reachable_from(adj, s + c * n)
        )
        out.append(live)
    return tuple(out)


def base_configurations(base: MulticutInstance, budget: int, cap: int) -> dict[frozenset[int], int]:
    """Every achievable live-pair set of the base, with the fewest arcs achieving it."""
    best: dict[frozenset[int], int] = {}
    seen = 0
    for size in range(min(budget, len(base.arcs)) + 1):
        for cut in combinations(range(len(base.arcs)), size):
            seen += 1
            if seen > cap:
                raise CapExceeded(f"more than {cap} base cutsets")
            removed = set(cut)
            adj: list[list[int]] = [[] for _ in range(base.n)]
            for i, (u, v) in enumerate(base.arcs):
                if i not in removed:
                    adj[u].append(v)
            live = frozenset(j for j, (s, t) in enumerate(base.pairs) if t in reachable_from(adj, s))
            best.setdefault(live, size)
    return best


def configurations(result: ReducedMulticut, cap: int = 1_000_000) -> list[tuple[frozenset[int], ...]]:
    """All per-copy live-set tuples reachable with at most ``p0`` cut arcs inside copies."""
    options = sorted(base_configurations(result.base, result.instance.budget, cap).items(),
                     key=lambda kv: (kv[1], sorted(kv[0])))
    budget = result.instance.budget
    found: list[tuple[frozenset[int], ...]] = []

    def extend(prefix: list[frozenset[int]], spent: int) -> None:
        if len(found) > cap:
            raise CapExceeded(f"more than {cap} configurations")
        if len(prefix) == result.copies:
            found.append(tuple(prefix))
            return
        for live, cost in options:
            if spent + cost <= budget:
                prefix.append(live)
                extend(prefix, spent + cost)
                prefix.pop()

    extend([], 0)
    return found


def verify_wiring(result: ReducedMulticut, q: int, cap: int = 1_000_000) -> tuple[bool, float]:
    """Check that the wiring tuples are a ``1/(2q)``-biased sampler for every separation indicator."""
    configs = configurations(result, cap)
    domain = TupleDomain(result.copies, BASE_PAIRS)
    family = SamplerFamily(domain, result.wiring)

    def separated(config):
        return lambda r: float(all(ri not in live for ri, live in zip(r, config)))

    return verify_sampler(family, (separated(c) for c in configs), Fraction(1, 2 * q))


def format_provenance(result: ReducedMulticut) -> str:
    """Sidecar text: ``<pair> <r_1,..,r_M>`` per line."""
    return "".join(f"{i} {','.join(map(str, r))}\n" for i, r in enumerate(result.wiring))
