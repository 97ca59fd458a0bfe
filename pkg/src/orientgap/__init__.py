"""Gap reductions for Steiner Orientation and Max Directed Multicut, with exact oracles."""

from .clique_reduce import (
    CanonicalFamily,
    CliqueInstance,
    Support,
    build_clique_instance,
    canonical_family,
    clique_to_orientation,
    min_beta,
    min_support,
    paths_conflict,
)
from .dmc_reduce import DmcPlan, ReducedMulticut, plan_dmc, reduce_dmc, witness_lift_dmc
from .errors import ReductionError
from .instances import (
    Cutset,
    MixedInstance,
    MulticutInstance,
    Orientation,
    contract_cycles,
    is_acyclic,
    parse_instance,
    satisfied_pairs_so,
    separated_pairs_dmc,
    serialize_instance,
)
from .oracles import max_clique_at_least, opt_dmc, opt_so
from .sampler import SamplerFamily, TupleDomain, derandomize_family, required_sample_count, sample_tuples, verify_sampler
from .so_amplify import LayeredInstance, LayerPlan, amplify, configuration_bound, plan, witness_lift

__version__ = "0.1.0"

__all__ = [
    "amplify",
    "build_clique_instance",
    "canonical_family",
    "CanonicalFamily",
    "clique_to_orientation",
    "CliqueInstance",
    "configuration_bound",
    "contract_cycles",
    "Cutset",
    "derandomize_family",
    "DmcPlan",
    "is_acyclic",
    "LayeredInstance",
    "LayerPlan",
    "max_clique_at_least",
    "min_beta",
    "min_support",
    "MixedInstance",
    "MulticutInstance",
    "opt_dmc",
    "opt_so",
    "Orientation",
    "parse_instance",
    "paths_conflict",
    "plan",
    "plan_dmc",
    "reduce_dmc",
    "ReducedMulticut",
    "ReductionError",
    "required_sample_count",
    "sample_tuples",
    "SamplerFamily",
    "satisfied_pairs_so",
    "separated_pairs_dmc",
    "serialize_instance",
    "Support",
    "TupleDomain",
    "verify_sampler",
    "witness_lift",
    "witness_lift_dmc",
]
