"""Layered gap amplification for Steiner Orientation.

``H^1`` is the base instance.  ``H^{i+1}`` consists of ``k`` vertex-disjoint
copies ``H^i_1 .. H^i_k`` of ``H^i`` followed by a new layer: for every
wiring tuple ``R = (r_1, .., r_k)`` over the ``k_i`` pairs of ``H^i`` a fresh
copy ``G_R`` of the base is added, with an arc from the sink of pair ``r_j``
in ``H^i_j`` to source ``j`` of ``G_R``.  The new pairs run from the source of
pair ``r_j`` in ``H^i_j`` to sink ``j`` of ``G_R``.

Every vertex belongs to exactly one copy of the base.  Copy ``c`` occupies
vertices ``c * n .. c * n + n - 1`` and copies are numbered in creation
order: the ``k`` blocks of the previous instance first, then the new layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, NotFullySatisfying, QTooSmall, TupleOutOfRange
from .instances import MixedInstance, Orientation, satisfied_pairs_so
from .oracles import DEFAULT_SO_LIMIT, opt_so
from .sampler import SamplerFamily, TupleDomain, required_sample_count, sample_tuples

FULL_SPACE = "full_space"
SAMPLED = "sampled"
DEFAULT_SIZE_CAP = 2_000_000
_MATERIALIZE_LAYERS = 10_000


def layer_delta(k: int, q: int) -> Fraction:
    """Sampling error allowed per layer, ``q**-k / (2k)``."""
    return Fraction(1, 2 * k * q**k)


def expected_decrement(k: int, q: int) -> Fraction:
    """Drop of the layer ratio in expectation over all wiring tuples, ``q**-k / k``."""
    return Fraction(1, k * q**k)


@dataclass(frozen=True)
class LayerPlan:
    k: int
    q: int
    layers: int
    multiplier: int
    delta: Fraction
    uses_defaults: bool

    @property
    def constant(self) -> Fraction:
        """``multiplier / (k**4 q**2k)``; 40 under the default recurrence."""
        return Fraction(self.multiplier, self.k**4 * self.q ** (2 * self.k))

    @cached_property
    def copies(self) -> tuple[int, ...]:
        """``p_1 .. p_B`` with ``p_1 = 1`` and ``p_{i+1} = multiplier * p_i``."""
        if self.layers > _MATERIALIZE_LAYERS:
            raise CapExceeded(f"{self.layers} layers are only reported symbolically")
        return tuple(self.multiplier**i for i in range(self.layers))

    @property
    def pair_counts(self) -> tuple[int, ...]:
        return tuple(self.k * p for p in self.copies)

    @property
    def log2_k0(self) -> float:
        return math.log2(self.k) + (self.layers - 1) * math.log2(self.multiplier)

    @property
    def k0(self) -> int:
        if self.log2_k0 > 4096:
            raise CapExceeded(f"k0 ~ 2^{self.log2_k0:.1f} is only reported symbolically")
        return self.k * self.multiplier ** (self.layers - 1)

    def vertex_bound(self, base_vertices: int) -> int:
        """The ``|V(H)| <= |V(G)| * k0**2`` size guarantee."""
        return base_vertices * self.k0**2


def plan(k: int, q: int, layers: int | None = None, multiplier: int | None = None) -> LayerPlan:
    """Parameters of the amplification; overrides replace ``B`` and the copy multiplier.

    The default multiplier is the sample count for ``delta = q**-k / (2k)``
    over a function family of size ``2**(p_i k**2)``, per unit ``p_i``.
    """
    if q < 2:
        raise QTooSmall(f"q must be at least 2, got {q}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    delta = layer_delta(k, q)
    default_mult = required_sample_count(delta, k * k)
    if layers is not None and layers < 1:
        raise ValueError("at least one layer is required")
    if multiplier is not None and multiplier < 1:
        raise ValueError("copy multiplier must be positive")
    return LayerPlan(
        k=k,
        q=q,
        layers=2 * k * q**k if layers is None else layers,
        multiplier=default_mult if multiplier is None else multiplier,
        delta=delta,
        uses_defaults=layers is None and multiplier is None,
    )


@dataclass(frozen=True)
class PairProvenance:
    """Where a terminal pair came from.

    ``copy`` is the base copy holding the sink; ``wiring`` is the tuple ``R``
    that created that copy, ``None`` for the first layer.
    """

    layer: int
    copy: int
    wiring: tuple[int, ...] | None
    coordinate: int


@dataclass(frozen=True)
class LayeredInstance:
    instance: MixedInstance
    base: MixedInstance
    layer_of_copy: tuple[int, ...]
    provenance: tuple[PairProvenance, ...]

    @classmethod
    def initial(cls, base: MixedInstance) -> "LayeredInstance":
        prov = tuple(PairProvenance(1, 0, None, j) for j in range(base.k))
        return cls(base, base, (1,), prov)

    @property
    def layers(self) -> int:
        return max(self.layer_of_copy)

    @property
    def copies(self) -> int:
        return len(self.layer_of_copy)

    def copy_of(self, vertex: int) -> int:
        return vertex // self.base.n


def _wiring_tuples(tuples, k: int, k_i: int) -> list[tuple[int, ...]]:
    if isinstance(tuples, str):
        if tuples != FULL_SPACE:
            raise ValueError(f"unknown wiring mode {tuples!r}")
        return list(product(range(k_i), repeat=k))
    rows = list(tuples.tuples if isinstance(tuples, SamplerFamily) else tuples)
    for r in rows:
        if len(r) != k or any(not 0 <= x < k_i for x in r):
            raise TupleOutOfRange(f"wiring tuple {tuple(r)} outside [{k_i}]^{k}")
    return [tuple(int(x) for x in r) for r in rows]


def stack_layer(current: LayeredInstance, base: MixedInstance, tuples) -> LayeredInstance:
    """Build ``H^{i+1}`` from ``H^i``: ``k`` copies of it plus one new layer.

    ``tuples`` is a :class:`SamplerFamily`, a sequence of wiring tuples over
    ``range(k_i)``, or :data:`FULL_SPACE` for every tuple of ``[k_i]^k``.
    """
    if current.base != base:
        raise ValueError("layered instance was built from a different base")
    k, n = base.k, base.n
    prev = current.instance
    k_i = prev.k
    rows = _wiring_tuples(tuples, k, k_i)
    block = current.copies * n
    arcs: list[tuple[int, int]] = []
    edges: list[tuple[int, int]] = []
    for j in range(k):
        off = j * block
        arcs += [(u + off, v + off) for u, v in prev.arcs]
        edges += [(u + off, v + off) for u, v in prev.edges]

    first_new = k * current.copies
    next_layer = current.layers + 1
    pairs: list[tuple[int, int]] = []
    prov: list[PairProvenance] = []
    for idx, r in enumerate(rows):
        copy = first_new + idx
        off = copy * n
        arcs += [(u + off, v + off) for u, v in base.arcs]
        edges += [(u + off, v + off) for u, v in base.edges]
        for j, rj in enumerate(r):
            src, snk = prev.pairs[rj]
            arcs.append((snk + j * block, base.pairs[j][0] + off))
            pairs.append((src + j * block, base.pairs[j][1] + off))
            prov.append(PairProvenance(next_layer, copy, r, j))

    layer_of_copy = current.layer_of_copy * k + (next_layer,) * len(rows)
    instance = MixedInstance(len(layer_of_copy) * n, tuple(arcs), tuple(edges), tuple(pairs))
    return LayeredInstance(instance, base, layer_of_copy, tuple(prov))


def _projected_copies(k: int, counts: Iterable[int], full_space: bool, cap_copies: int) -> int:
    copies, pairs_i = 1, k
    for p_next in counts:
        if full_space:
            p_next = pairs_i**k if pairs_i < cap_copies else cap_copies + 1
        copies = k * copies + p_next
        pairs_i = k * p_next
        if copies > cap_copies:
            return copies
    return copies


def amplify_stages(
    base: MixedInstance,
    layer_plan: LayerPlan,
    mode: str = SAMPLED,
    seed=0,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Iterator[LayeredInstance]:
    """Yield ``H^1, H^2, .., H^B``.

    ``size_cap`` bounds the vertex count of ``H^B``; the whole construction is
    refused up front when the projection exceeds it.
    """
    if layer_plan.q < 2:
        raise QTooSmall(f"q must be at least 2, got {layer_plan.q}")
    if mode not in (SAMPLED, FULL_SPACE):
        raise ValueError(f"unknown mode {mode!r}")
    if base.k != layer_plan.k:
        raise ValueError(f"plan is for k={layer_plan.k}, base has {base.k} pairs")
    cap_copies = max(1, size_cap // max(1, base.n))
    if layer_plan.layers > cap_copies:
        raise CapExceeded(f"{layer_plan.layers} layers exceed the size cap {size_cap}")
    counts = (layer_plan.multiplier**i for i in range(1, layer_plan.layers))
    projected = _projected_copies(base.k, counts, mode == FULL_SPACE, cap_copies)
    if projected > cap_copies:
        raise CapExceeded(f"projected instance exceeds the size cap of {size_cap} vertices")

    seeds = np.random.SeedSequence(seed).spawn(max(0, layer_plan.layers - 1))
    current = LayeredInstance.initial(base)
    yield current
    for i in range(1, layer_plan.layers):
        if mode == FULL_SPACE:
            wiring = FULL_SPACE
        else:
            domain = TupleDomain(base.k, current.instance.k)
            wiring = sample_tuples(domain, layer_plan.copies[i], seeds[i - 1])
        current = stack_layer(current, base, wiring)
        yield current


def amplify(
    base: MixedInstance,
    layer_plan: LayerPlan,
    mode: str = SAMPLED,
    seed=0,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> LayeredInstance:
    """Run all ``B - 1`` stacking steps; deterministic for a given seed."""
    result = None
    for result in amplify_stages(base, layer_plan, mode, seed, size_cap):
        pass
    return result


def witness_lift(base_witness, result: LayeredInstance) -> Orientation:
    """Orient every copy of the base like ``base_witness``.

    Each new pair is then served by concatenating satisfied base paths
    through the connecting arcs, so every pair of the result is satisfied.
    """
    base = result.base
    count, _ = satisfied_pairs_so(base, base_witness)
    if count != base.k:
        raise NotFullySatisfying(f"base witness satisfies {count} of {base.k} pairs")
    bits = base_witness.bits if isinstance(base_witness, Orientation) else tuple(base_witness)
    index = {e: i for i, e in enumerate(base.edges)}
    n = base.n
    lifted = []
    for u, v in result.instance.edges:
        off = (u // n) * n
        lifted.append(bits[index[(u - off, v - off)]])
    return Orientation(tuple(lifted))


@dataclass(frozen=True)
class Configuration:
    """Per-block sets of satisfied pair indices, each a subset of ``range(universe)``."""

    sets: tuple[frozenset[int], ...]
    universe: int

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        for s in sets:
            if any(not 0 <= x < self.universe for x in s):
                raise ValueError(f"configuration entry outside range({self.universe})")
        object.__setattr__(self, "sets", sets)

    @property
    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(len(s), self.universe) for s in self.sets)


def configuration_bound(config: Configuration) -> Fraction:
    """``(sum c_j - prod c_j) / k``: expected best ratio of a fresh copy over uniform wiring."""
    fr = config.fractions
    return (sum(fr, Fraction(0)) - math.prod(fr)) / len(fr)


def measured_ratio(instance: MixedInstance, limit: int = DEFAULT_SO_LIMIT) -> Fraction:
    """Exact ``S(H) / k`` via the exhaustive oracle."""
    return Fraction(opt_so(instance, limit).value, instance.k)


def format_provenance(result: LayeredInstance) -> str:
    """Sidecar text: ``<pair> <layer> <r_1,..,r_k | ->`` per line."""
    lines = []
    for i, p in enumerate(result.provenance):
        wiring = "-" if p.wiring is None else ",".join(map(str, p.wiring))
        lines.append(f"{i} {p.layer} {wiring}")
    return "\n".join(lines) + "\n"


def layer_ratios(stages: Sequence[LayeredInstance], limit: int = DEFAULT_SO_LIMIT) -> list[Fraction]:
    return [measured_ratio(s.instance, limit) for s in stages]
