"""Budgeted worst-case adaptive selection with cost-sensitive greedy policies."""

from .active import (
    COST_SCENARIOS,
    STRATEGIES,
    ALResult,
    ALScenario,
    GridConfig,
    make_scenario,
    run_al_experiment,
    run_grid,
    run_strategy,
)
from .costs import (
    CostModel,
    CoverageCount,
    ExpOfG,
    ModularCost,
    ModularWeights,
    PolyOfG,
    TableCost,
    combine_costs,
    cost_eval,
    cost_increment,
)
from .errors import (
    CapExceededError,
    ConfigurationError,
    CostGreedyError,
    CostModelViolation,
    InconsistentEvidenceError,
    MinimalDependencyError,
    PreconditionError,
    StructuralError,
)
from .instance import (
    Instance,
    PartialRealization,
    PolicyNode,
    PolicyTree,
    marginal_gain_delta,
    policy_cost,
    trace_policy,
    validate_policy,
    worst_case_value,
)
from .io import instance_from_dict, instance_to_dict, load_instance
from .kernels import BACKEND
from .policies import (
    best_of_two,
    brute_force_optimal,
    materialize_policy_tree,
    run_combined_half,
    run_greedy_cost_average,
    run_greedy_cost_insensitive,
)
from .utilities import (
    CoverageUtility,
    FunctionUtility,
    ModularUtility,
    UtilityModel,
    VersionSpaceUtility,
    posterior_label_prob,
    utility_eval,
)
from .verify import (
    BOUND,
    CheckReport,
    RatioReport,
    bound_reports,
    check_cost_axioms,
    check_cost_sensitive_submodularity,
    check_minimal_dependency,
    check_pointwise_properties,
    check_submodularity,
    gen_counterexample_thm2,
    gen_counterexample_thm3,
    ratio_harness,
)

__version__ = "0.1.0"
