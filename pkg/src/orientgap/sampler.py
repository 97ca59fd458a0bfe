"""Biased sampler families over finite tuple domains.

A multiset of tuples is a ``delta``-biased sampler for a family of functions
``f: tuple -> [0, 1]`` if, for every ``f``, its mean over the multiset is
within ``delta`` of its mean over the whole domain.  Drawing
``required_sample_count(delta, log2 |F|)`` tuples independently gives such a
family with probability at least 1/2 (Hoeffding plus a union bound).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from numbers import Rational
from typing import Callable, Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import CapExceeded, DomainTooLarge, NotFound, ZeroDelta

SAMPLE_CONSTANT = 10
TABLE_CAP = 1 << 20

Tuple = tuple[int, ...]


def _exact(x) -> Fraction:
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    # Floats go through their shortest repr so 0.1 means 1/10.
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class TupleDomain:
    """All tuples of ``length`` coordinates, each in ``range(radix)``."""

    length: int
    radix: int

    def __post_init__(self):
        if self.length < 1 or self.radix < 1:
            raise ValueError(f"bad domain [{self.radix}]^{self.length}")

    @property
    def size(self) -> int:
        return self.radix**self.length

    @property
    def log2_size(self) -> float:
        return self.length * math.log2(self.radix)

    def __iter__(self) -> Iterator[Tuple]:
        return product(range(self.radix), repeat=self.length)

    def __contains__(self, t) -> bool:
        return len(t) == self.length and all(0 <= x < self.radix for x in t)

    def index(self, t: Sequence[int]) -> int:
        i = 0
        for x in t:
            i = i * self.radix + x
        return i


@dataclass(frozen=True)
class SamplerFamily:
    domain: TupleDomain
    tuples: tuple[Tuple, ...]
    seed: object = None

    def __post_init__(self):
        tuples = tuple(tuple(int(x) for x in t) for t in self.tuples)
        for t in tuples:
            if t not in self.domain:
                raise ValueError(f"tuple {t} outside [{self.domain.radix}]^{self.domain.length}")
        object.__setattr__(self, "tuples", tuples)

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[Tuple]:
        return iter(self.tuples)

    def histogram(self) -> np.ndarray:
        """Multiplicity of every domain tuple, indexed by :meth:`TupleDomain.index`."""
        idx = [self.domain.index(t) for t in self.tuples]
        return np.bincount(np.asarray(idx, dtype=np.int64), minlength=self.domain.size)


def required_sample_count(delta, family_size_log2, multiplier=SAMPLE_CONSTANT) -> int:
    """``ceil(multiplier * delta**-2 * log2|F|)``, at least 1."""
    d = _exact(delta)
    if d <= 0:
        raise ZeroDelta(f"delta must be positive, got {delta}")
    if d > 1:
        raise ValueError(f"delta must be at most 1, got {delta}")
    log_f = _exact(family_size_log2)
    if log_f < 0:
        raise ValueError("log2 of the family size must be non-negative")
    return max(1, math.ceil(_exact(multiplier) * log_f / (d * d)))


def sample_tuples(domain: TupleDomain, m: int, seed=None) -> SamplerFamily:
    """Draw ``m`` tuples independently and uniformly, with repetition."""
    if m < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, domain.radix, size=(m, domain.length))
    return SamplerFamily(domain, tuple(map(tuple, draws.tolist())), seed)


class FunctionTable:
    """Values of a function family on every domain tuple, one row per function.

    Build it once with :func:`tabulate` when the same family is checked
    against many samples.
    """

    def __init__(self, domain: TupleDomain, values: np.ndarray):
        self.domain = domain
        self.values = np.asarray(values, dtype=np.float64).reshape(-1, domain.size)
        ones = np.ones(domain.size)
        self.means = self.values @ ones / domain.size

    def __len__(self) -> int:
        return self.values.shape[0]


Functions = Union[FunctionTable, Iterable[Callable[[Tuple], float]]]


def _rows(domain: TupleDomain, functions: Iterable[Callable]) -> Iterator[np.ndarray]:
    points = list(domain)
    for f in functions:
        yield np.fromiter((f(x) for x in points), dtype=np.float64, count=len(points))


def tabulate(domain: TupleDomain, functions: Iterable[Callable], cap: int = TABLE_CAP) -> FunctionTable:
    functions = list(functions)
    if domain.size > cap or len(functions) * domain.size > cap:
        raise DomainTooLarge(f"{len(functions)} x {domain.size} table exceeds {cap} entries")
    rows = list(_rows(domain, functions))
    values = np.vstack(rows) if rows else np.zeros((0, domain.size))
    return FunctionTable(domain, values)


def verify_sampler(family: SamplerFamily, functions: Functions, delta, cap: int = TABLE_CAP) -> tuple[bool, float]:
    """Check the bias condition exactly by enumerating the domain.

    Returns ``(ok, max_deviation)``; an empty function family passes with
    deviation 0.
    """
    domain = family.domain
    if domain.size > cap:
        raise DomainTooLarge(f"domain of size {domain.size} exceeds {cap}")
    counts = family.histogram().astype(np.float64)
    ones = np.ones(domain.size)
    m = len(family)
    worst = 0.0
    if isinstance(functions, FunctionTable):
        if len(functions):
            worst = float(np.max(np.abs(functions.values @ counts / m - functions.means)))
    else:
        for row in _rows(domain, functions):
            worst = max(worst, float(abs(row @ counts / m - row @ ones / domain.size)))
    return worst <= float(_exact(delta)), worst


def derandomize_family(
    domain: TupleDomain,
    functions: Functions,
    delta,
    size_cap: int,
    max_size: int | None = None,
) -> SamplerFamily:
    """Smallest multiset passing :func:`verify_sampler`, by exhaustive search.

    Multisets are tried in increasing size and, within a size, in
    lexicographic order of domain indices.  ``size_cap`` bounds the number of
    candidate multisets examined.  ``max_size`` defaults to the sample count
    that the probabilistic argument guarantees to contain a good family.
    """
    table = functions if isinstance(functions, FunctionTable) else tabulate(domain, functions)
    points = list(domain)
    if len(table) == 0:
        return SamplerFamily(domain, (points[0],))
    if max_size is None:
        max_size = required_sample_count(delta, max(1.0, math.log2(len(table))))
    bound = float(_exact(delta))
    examined = 0
    for m in range(1, max_size + 1):
        for combo in combinations_with_replacement(range(domain.size), m):
            examined += 1
            if examined > size_cap:
                raise CapExceeded(f"no family found within {size_cap} candidates")
            means = table.values[:, combo].sum(axis=1) / m
            if float(np.max(np.abs(means - table.means))) <= bound:
                return SamplerFamily(domain, tuple(points[i] for i in combo))
    raise NotFound(f"no {delta}-biased family of size <= {max_size}")


def random_indicator_table(domain: TupleDomain, count: int, seed=None, cap: int = TABLE_CAP) -> FunctionTable:
    """``count`` indicators of uniformly random subsets of the domain."""
    if count * domain.size > cap:
        raise DomainTooLarge(f"{count} x {domain.size} table exceeds {cap} entries")
    rng = np.random.default_rng(seed)
    return FunctionTable(domain, rng.integers(0, 2, size=(count, domain.size)).astype(np.float64))
