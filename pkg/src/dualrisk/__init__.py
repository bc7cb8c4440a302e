"""Exact-rational dual-theory risk toolkit.

Lotteries are finite lists of (outcome, probability) states over exact
rationals. The value functional applies a probability weighting function
to the decumulative distribution and integrates outcomes linearly, so
risk attitudes live entirely in the weighting function. On top of that
sit dual moments (expected minima of iid draws), primal and dual
stochastic dominance of arbitrary degree, block constructions that pin
down a single m-th order trait while freezing everything below it,
randomized harnesses for the six characterization statements, and two
worked decision problems (derivative menus, self-protection effort).
"""

from .applications import (
    BackgroundEffectReport,
    DerivativeMenu,
    DigitalZeroAt,
    EMPTY_MENU,
    ExponentialEffort,
    LinearEffort,
    LongPut,
    PortfolioProblem,
    PowerLawEffort,
    SelfProtectionProblem,
    ShortCall,
    ShortStraddle,
    SPDiagnostics,
    SPSolution,
    Straddle,
    background_shift_expression,
    build_menu,
    calibrate_exponential,
    calibrate_power_law,
    loss_probability,
    loss_probability_slope,
    optimal_alpha,
    parse_problem_config,
    portfolio_value,
    sp_background_effect,
    sp_foc_lhs,
    sp_lottery,
    sp_solve,
    sp_value,
    supplemented_prices,
)
from .apportionment import (
    ApportionmentPair,
    Block,
    PairProvenance,
    Polarity,
    anti_squeeze,
    attach,
    make_blocks,
    make_pair,
    make_parsimonious_pair,
    pair_increments,
    preference_direction,
    rebuild_pair,
    squeeze,
)
from .dominance import (
    DominanceReport,
    crossing_pattern,
    dual_sd_check,
    iterated_cdf,
    iterated_quantile,
    primal_sd_check,
)
from .errors import (
    BadGapSpec,
    CaseBoundary,
    ConstructionInvariantError,
    DomainError,
    DominanceCheckFailed,
    DualRiskError,
    FormatError,
    InputValidationError,
    NegativeOutcome,
    NonMonotoneUtility,
    NonPositiveProbability,
    NonUnitMass,
    PrecedenceViolation,
    RankViolation,
    UnsupportedFamily,
)
from .harness import (
    THEOREMS,
    HarnessReport,
    converse_check,
    converse_witness_search,
    direct_battery,
    direct_check,
    random_base,
    random_mixed_tabulated,
    random_pair,
    run_theorem,
)
from .lottery import (
    EqualProbLottery,
    Lottery,
    as_distribution,
    canonical_distribution,
    cdf,
    equal_prob_from_lottery,
    format_lottery_text,
    make_lottery,
    mean,
    parse_lottery_text,
    quantile,
    support_points,
    survival,
)
from .rationals import format_exact, format_rational, parse_rational, rat
from .valuation import (
    LinearUtility,
    PowerIntUtility,
    QuadraticUtility,
    TabulatedUtility,
    dt_value,
    dual_moment,
    dual_moment_mc_oracle,
    dual_moment_weights,
    eu_value,
    eval_utility,
    primal_moment,
    raw_moment,
)
from .weighting import (
    DualPower,
    Identity,
    Polynomial,
    Power,
    Prelec,
    Quadratic,
    SignCertificate,
    SignClass,
    SignWitness,
    Tabulated,
    TverskyKahneman,
    analytic_derivative_sign,
    dual_power_mixture,
    eval_h,
    eval_h_prime,
    eval_hbar,
    finite_difference,
    finite_difference_sign,
    format_weighting,
    hbar_finite_difference,
    is_exact,
    parse_weighting,
)

__version__ = "0.1.0"

__all__ = [
    "ApportionmentPair",
    "BackgroundEffectReport",
    "BadGapSpec",
    "Block",
    "CaseBoundary",
    "ConstructionInvariantError",
    "DerivativeMenu",
    "DigitalZeroAt",
    "DomainError",
    "DominanceCheckFailed",
    "DominanceReport",
    "DualPower",
    "DualRiskError",
    "EMPTY_MENU",
    "EqualProbLottery",
    "ExponentialEffort",
    "FormatError",
    "HarnessReport",
    "Identity",
    "InputValidationError",
    "LinearEffort",
    "LinearUtility",
    "LongPut",
    "Lottery",
    "NegativeOutcome",
    "NonMonotoneUtility",
    "NonPositiveProbability",
    "NonUnitMass",
    "PairProvenance",
    "Polarity",
    "Polynomial",
    "PortfolioProblem",
    "Power",
    "PowerIntUtility",
    "PowerLawEffort",
    "PrecedenceViolation",
    "Prelec",
    "Quadratic",
    "QuadraticUtility",
    "RankViolation",
    "SPDiagnostics",
    "SPSolution",
    "SelfProtectionProblem",
    "ShortCall",
    "ShortStraddle",
    "SignCertificate",
    "SignClass",
    "SignWitness",
    "Straddle",
    "THEOREMS",
    "Tabulated",
    "TabulatedUtility",
    "TverskyKahneman",
    "UnsupportedFamily",
    "analytic_derivative_sign",
    "anti_squeeze",
    "as_distribution",
    "attach",
    "background_shift_expression",
    "build_menu",
    "calibrate_exponential",
    "calibrate_power_law",
    "canonical_distribution",
    "cdf",
    "converse_check",
    "converse_witness_search",
    "crossing_pattern",
    "direct_battery",
    "direct_check",
    "dt_value",
    "dual_moment",
    "dual_moment_mc_oracle",
    "dual_moment_weights",
    "dual_power_mixture",
    "dual_sd_check",
    "equal_prob_from_lottery",
    "eu_value",
    "eval_h",
    "eval_h_prime",
    "eval_hbar",
    "eval_utility",
    "finite_difference",
    "finite_difference_sign",
    "format_exact",
    "format_lottery_text",
    "format_rational",
    "format_weighting",
    "hbar_finite_difference",
    "is_exact",
    "iterated_cdf",
    "iterated_quantile",
    "loss_probability",
    "loss_probability_slope",
    "make_blocks",
    "make_lottery",
    "make_pair",
    "make_parsimonious_pair",
    "mean",
    "optimal_alpha",
    "pair_increments",
    "parse_lottery_text",
    "parse_problem_config",
    "parse_rational",
    "parse_weighting",
    "portfolio_value",
    "preference_direction",
    "primal_moment",
    "primal_sd_check",
    "quantile",
    "random_base",
    "random_mixed_tabulated",
    "random_pair",
    "rat",
    "raw_moment",
    "rebuild_pair",
    "run_theorem",
    "sp_background_effect",
    "sp_foc_lhs",
    "sp_lottery",
    "sp_solve",
    "sp_value",
    "squeeze",
    "support_points",
    "supplemented_prices",
    "survival",
]
