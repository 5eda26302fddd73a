"""Simulation laboratory for long-range percolation, random-cluster and
Potts models on the 1D lattice with 1/|i-j|**s couplings."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    Interval,
    ModelParams,
    coupling,
    edge_prob,
    edge_prob_array,
    tail_sum,
    validate_params,
)
from .stats import EstimatorResult, batch_means, bernoulli_result  # noqa: F401
from .sampler import (  # noqa: F401
    Configuration,
    dump_config,
    expected_edge_count,
    load_config,
    sample_config,
    sample_config_coupled,
)
from .clusters import (  # noqa: F401
    ClusterPartition,
    clusters_in,
    connected_to_distance,
    largest_cluster,
)
from .renorm import (  # noqa: F401
    BlockReport,
    BlockSpec,
    DensitySets,
    block_reports,
    closed_pair_weight,
    closed_pair_weight_bound,
    density_threshold,
    estimate_p_bad,
    is_theta_good,
    isolated_bad_block,
    isolated_bad_sparse_event,
    spread_density_sets,
    verify_block_merge,
)
from .crossing import (  # noqa: F401
    BlockingReport,
    BridgeVerdict,
    CrossSpec,
    ScalingReport,
    blocking_indicators,
    bridge_probability,
    check_escape_blocking,
    check_uncrossed_scaling,
    choose_bridge_radius,
    escape_probability,
    estimate_uncrossed,
    is_bridge,
    is_k_crossed,
    local_connectivity_probability,
    mean_unbridged,
    reach_probability,
    unbridged_blocks,
)
from .fk import (  # noqa: F401
    BoundaryCondition,
    FkWeightTable,
    PottsState,
    conditional_closed_weight,
    estimate_magnetization,
    estimate_theta_fk,
    exact_fk_distribution,
    fk_from_spins,
    ghost_couplings,
    initial_state,
    sw_sweep,
)
from .multiscale import (  # noqa: F401
    RecursionTrace,
    ResourceCapError,
    ScaleSchedule,
    TraceRow,
    build_schedule,
    density_to_percolation,
    lambda_seed,
    run_recursion_experiment,
)
