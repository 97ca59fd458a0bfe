from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orientgap.errors import CapExceeded, DomainTooLarge, ZeroDelta
from orientgap.sampler import (
    FunctionTable,
    SamplerFamily,
    TupleDomain,
    derandomize_family,
    random_indicator_table,
    required_sample_count,
    sample_tuples,
    tabulate,
    verify_sampler,
)


@pytest.mark.parametrize(
    "delta, log_f, expected",
    [(0.1, 8, 8000), (Fraction(1, 10), 8, 8000), (0.5, 1, 40), (Fraction(1, 16), 4, 10240), (1, 0, 1)],
)
def test_required_sample_count(delta, log_f, expected):
    assert required_sample_count(delta, log_f) == expected


def test_required_sample_count_rejects_bad_delta():
    with pytest.raises(ZeroDelta):
        required_sample_count(0, 3)
    with pytest.raises(ValueError):
        required_sample_count(1.5, 3)


def test_domain_enumeration_and_index():
    dom = TupleDomain(2, 3)
    points = list(dom)
    assert len(points) == dom.size == 9
    assert [dom.index(t) for t in points] == list(range(9))
    assert (2, 2) in dom and (3, 0) not in dom


def test_sample_tuples_is_seeded():
    dom = TupleDomain(3, 4)
    assert sample_tuples(dom, 50, 7).tuples == sample_tuples(dom, 50, 7).tuples
    assert sample_tuples(dom, 50, 7).tuples != sample_tuples(dom, 50, 8).tuples
    assert all(t in dom for t in sample_tuples(dom, 50, 7))


def naive_deviation(family, functions):
    dom = family.domain
    worst = Fraction(0)
    for f in functions:
        true = Fraction(sum(f(x) for x in dom), dom.size)
        emp = Fraction(sum(f(x) for x in family), len(family))
        worst = max(worst, abs(true - emp))
    return worst


def indicator(points):
    points = set(points)
    return lambda x: 1 if x in points else 0


@st.composite
def families_and_functions(draw):
    dom = TupleDomain(draw(st.integers(1, 3)), draw(st.integers(1, 3)))
    pts = list(dom)
    tuples = draw(st.lists(st.sampled_from(pts), min_size=1, max_size=12))
    subsets = draw(st.lists(st.sets(st.sampled_from(pts)), max_size=5))
    return SamplerFamily(dom, tuples), [indicator(s) for s in subsets]


@given(families_and_functions())
def test_verify_matches_exact_rational_deviation(case):
    family, functions = case
    _, worst = verify_sampler(family, functions, 1)
    assert worst == pytest.approx(float(naive_deviation(family, functions)), abs=1e-12)


@given(families_and_functions(), st.floats(0.001, 1), st.floats(0, 1))
def test_verify_is_monotone_in_delta(case, delta, extra):
    family, functions = case
    if verify_sampler(family, functions, delta)[0]:
        assert verify_sampler(family, functions, min(1.0, delta + extra))[0]


@given(families_and_functions(), st.floats(1e-9, 1))
def test_full_domain_family_always_verifies(case, delta):
    family, functions = case
    full = SamplerFamily(family.domain, tuple(family.domain))
    assert verify_sampler(full, functions, delta) == (True, 0.0)


def test_table_and_closures_agree():
    dom = TupleDomain(2, 3)
    fns = [indicator([(0, 0), (1, 2)]), lambda x: (x[0] + x[1]) / 4]
    fam = sample_tuples(dom, 10, 1)
    assert verify_sampler(fam, tabulate(dom, fns), 0.2) == verify_sampler(fam, fns, 0.2)


def test_table_cap():
    with pytest.raises(DomainTooLarge):
        tabulate(TupleDomain(3, 4), [indicator([])] * 5, cap=100)
    with pytest.raises(DomainTooLarge):
        verify_sampler(SamplerFamily(TupleDomain(3, 4), ((0, 0, 0),)), [], 0.5, cap=10)


def test_derandomize_coordinate_indicators():
    dom = TupleDomain(1, 2)
    fns = [indicator([(0,)]), indicator([(1,)])]
    assert verify_sampler(SamplerFamily(dom, ((0,), (1,))), fns, 0.5)[0]
    found = derandomize_family(dom, fns, 0.5, size_cap=100)
    assert len(found) <= 2
    assert verify_sampler(found, fns, 0.5)[0]


def test_derandomize_tighter_delta_needs_both_points():
    dom = TupleDomain(1, 2)
    fns = [indicator([(0,)]), indicator([(1,)])]
    assert sorted(derandomize_family(dom, fns, 0.25, size_cap=100)) == [(0,), (1,)]


def test_derandomize_empty_function_set():
    dom = TupleDomain(2, 2)
    found = derandomize_family(dom, [], 0.1, size_cap=1)
    assert len(found) == 1 and verify_sampler(found, [], 0.1)[0]


def test_derandomize_cap():
    dom = TupleDomain(2, 3)
    fns = [indicator([x]) for x in dom]
    with pytest.raises(CapExceeded):
        derandomize_family(dom, fns, 0.01, size_cap=10)


@given(st.integers(0, 2**16), st.integers(1, 4))
def test_derandomized_families_verify(seed, count):
    dom = TupleDomain(2, 2)
    table = random_indicator_table(dom, count, seed)
    found = derandomize_family(dom, table, 0.25, size_cap=10_000)
    assert verify_sampler(found, table, 0.25)[0]


def test_histogram_counts_multiplicity():
    dom = TupleDomain(1, 3)
    fam = SamplerFamily(dom, ((2,), (2,), (0,)))
    assert fam.histogram().tolist() == [1, 0, 2]


def test_function_table_means():
    dom = TupleDomain(1, 4)
    table = FunctionTable(dom, np.array([[1, 0, 0, 1], [1, 1, 1, 1]]))
    assert table.means.tolist() == [0.5, 1.0]
