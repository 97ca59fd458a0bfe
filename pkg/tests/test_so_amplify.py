from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orientgap.errors import CapExceeded, NotFullySatisfying, QTooSmall, TupleOutOfRange
from orientgap.generators import no_edge, yes_chain
from orientgap.instances import Orientation, satisfied_pairs_so
from orientgap.oracles import opt_so
from orientgap.so_amplify import (
    FULL_SPACE,
    SAMPLED,
    Configuration,
    LayeredInstance,
    amplify,
    amplify_stages,
    configuration_bound,
    expected_decrement,
    format_provenance,
    layer_delta,
    layer_ratios,
    measured_ratio,
    plan,
    stack_layer,
    witness_lift,
)


def test_default_plan_for_two_pairs():
    lp = plan(2, 2)
    assert lp.layers == 16
    assert lp.delta == Fraction(1, 16)
    assert lp.multiplier == 10240
    assert lp.constant == 40
    assert lp.copies[:3] == (1, 10240, 10240**2)
    assert lp.uses_defaults


def test_constant_is_forty_for_other_parameters():
    for k, q in [(1, 2), (2, 3), (3, 2)]:
        assert plan(k, q).constant == 40


def test_plan_overrides():
    lp = plan(2, 2, layers=3, multiplier=4)
    assert lp.copies == (1, 4, 16)
    assert lp.pair_counts == (2, 8, 32)
    assert lp.k0 == 32
    assert lp.vertex_bound(2) == 2 * 32**2
    assert not lp.uses_defaults


def test_plan_rejects_small_q():
    with pytest.raises(QTooSmall):
        plan(2, 1)


def test_default_scale_k0_is_not_materialized():
    with pytest.raises(CapExceeded):
        plan(3, 4).k0


def test_layer_constants():
    assert layer_delta(2, 2) == Fraction(1, 16)
    assert expected_decrement(2, 2) == Fraction(1, 8)


def test_full_space_layer_on_no_edge():
    base = no_edge()
    h2 = stack_layer(LayeredInstance.initial(base), base, FULL_SPACE)
    assert h2.copies == 6
    assert h2.instance.k == 8
    assert (h2.instance.n, len(h2.instance.edges)) == (12, 6)
    assert measured_ratio(h2.instance) == Fraction(3, 8)


def test_wiring_follows_the_tuple():
    base = no_edge()
    first = LayeredInstance.initial(base)
    h2 = stack_layer(first, base, [(0, 1)])
    # H^1 copies j = 0, 1 occupy vertices {0,1} and {2,3}; G_R is copy 2 at {4,5}.
    # Copy 0 sink of pair 0 is 1, copy 1 sink of pair 1 is 2; G_R sources are 4 and 5.
    assert {(1, 4), (2, 5)} <= set(h2.instance.arcs)
    assert h2.instance.pairs == ((0, 5), (3, 4))
    assert [p.wiring for p in h2.provenance] == [(0, 1), (0, 1)]


def test_tuple_out_of_range():
    base = no_edge()
    with pytest.raises(TupleOutOfRange):
        stack_layer(LayeredInstance.initial(base), base, [(0, 2)])


@given(st.sampled_from([(2, 5), (3, 4)]), st.integers(0, 2**32 - 1), st.integers(2, 3), st.integers(1, 2))
def test_completeness_for_every_seed(layers_copies, seed, k, undirected):
    layers, copies = layers_copies
    base = yes_chain(k, 2, undirected)
    result = amplify(base, plan(k, 2, layers, copies), SAMPLED, seed)
    lifted = witness_lift(Orientation.forward(len(base.edges)), result)
    assert len(lifted) == len(result.instance.edges) == result.copies * len(base.edges)
    assert satisfied_pairs_so(result.instance, lifted)[0] == result.instance.k == k * copies ** (layers - 1)


def test_witness_lift_rejects_partial_witness():
    base = no_edge()
    with pytest.raises(NotFullySatisfying):
        witness_lift(Orientation((0,)), amplify(base, plan(2, 2, 2, 2)))


@given(st.integers(0, 1000))
def test_sources_in_first_layer_sinks_in_last(seed):
    base = yes_chain(2, 1, 1)
    result = amplify(base, plan(2, 2, 3, 3), SAMPLED, seed)
    last = result.layers
    for (s, t), prov in zip(result.instance.pairs, result.provenance):
        assert result.layer_of_copy[result.copy_of(s)] == 1
        assert result.layer_of_copy[result.copy_of(t)] == last
        assert prov.layer == last and all(0 <= r < 6 for r in prov.wiring)


def test_amplify_is_deterministic():
    base = yes_chain(2, 2, 1)
    lp = plan(2, 2, 3, 3)
    assert amplify(base, lp, SAMPLED, 11) == amplify(base, lp, SAMPLED, 11)
    assert amplify(base, lp, SAMPLED, 11) != amplify(base, lp, SAMPLED, 12)


def test_amplify_cap():
    with pytest.raises(CapExceeded):
        amplify(no_edge(), plan(2, 2, 4, 50), SAMPLED, 0, size_cap=1000)
    with pytest.raises(CapExceeded):
        amplify(no_edge(), plan(2, 2))


def test_configuration_bound_examples():
    assert configuration_bound(Configuration(({0, 1}, {0, 1}), 2)) == Fraction(1, 2)
    assert configuration_bound(Configuration((set(), set()), 2)) == 0
    assert configuration_bound(Configuration(({0}, {1}), 2)) == Fraction(3, 8)
    assert configuration_bound(Configuration(({0, 1, 2},) * 3, 3)) == Fraction(2, 3)


def test_provenance_sidecar():
    base = no_edge()
    h2 = amplify(base, plan(2, 2, 2, 1), SAMPLED, 0)
    lines = format_provenance(h2).splitlines()
    assert len(lines) == h2.instance.k
    assert lines[0].split()[:2] == ["0", "2"]
    assert format_provenance(LayeredInstance.initial(base)) == "0 1 -\n1 1 -\n"


def test_sampled_stackings_are_monotone():
    base = no_edge()
    for seed in range(5):
        stages = list(amplify_stages(base, plan(2, 2, 3, 2), SAMPLED, seed))
        ys = layer_ratios(stages)
        assert all(b <= a for a, b in zip(ys, ys[1:]))


def test_monotonicity_can_fail_after_a_full_space_layer():
    # Documented counterexample: a small sampled layer on top of the exact
    # 3/8 layer may land on a lucky wiring and push the ratio back up.
    base = no_edge()
    h2 = stack_layer(LayeredInstance.initial(base), base, FULL_SPACE)
    h3 = stack_layer(h2, base, [(0, 1), (2, 3)])
    y2, y3 = measured_ratio(h2.instance), measured_ratio(h3.instance)
    assert y2 == Fraction(3, 8)
    assert y3 > y2
    assert opt_so(h3.instance).value <= h3.instance.k
