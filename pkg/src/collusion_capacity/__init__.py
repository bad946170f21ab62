"""Simple and joint capacities of collusion channels and group-testing models."""
from ._backend import BACKEND
from .channels import (
    ChannelSpec,
    CollusionChannel,
    GapKind,
    format_channel,
    is_deterministic,
    is_symbol_symmetric,
    make_additive,
    make_all1,
    make_coinflip,
    make_custom,
    make_dilution,
    make_interleaving,
    make_majority,
    make_minority,
    make_threshold,
    make_threshold_gap,
    parse_channel,
    parse_spec,
    satisfies_marking,
)
from .payoff import (
    MarginalTriple,
    binary_entropy,
    joint_payoff,
    kl_divergence,
    log_binomial_pmf,
    marginals,
    payoff,
    simple_payoff,
)
from .optimize import (
    CapacityResult,
    OptimizerOptions,
    maximize_payoff,
    solve_a_half,
    universal_capacity,
)

__version__ = "0.1.0"
