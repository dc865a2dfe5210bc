"""Percolation laboratory for the d-dimensional binary cube.

Fast reproducible Monte Carlo on Q^d_p with component statistics, the
analytic fixed-point law of the supercritical phase, and exact brute-force
oracles at desk scale.
"""

from .components import (
    ComponentLabeling,
    ExplorationResult,
    HitProbability,
    WSet,
    distance_to_set,
    explore_component,
    hit_probability,
    label_components,
    size_gap_count,
    w_set,
    write_histogram_csv,
)
from .errors import CapacityError, ConfigError
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    parse_config_file,
    read_report_csv,
    run_experiment,
    run_gw,
    run_hitprob,
    run_sprinkling,
    run_subcritical,
    run_supercritical,
    write_report,
)
from .hypercube import (
    CubeGraph,
    EdgeRef,
    edge_endpoint_arrays,
    edge_from_index,
    edge_index,
    export_adjacency,
    hamming_distance,
    neighbors,
)
from .oracles import (
    HarperReport,
    PercolationDistribution,
    SmallGraph,
    count_subtrees,
    edge_boundary,
    exact_percolation_distribution,
    harper_check,
)
from .sampler import (
    BitStream,
    EdgeKeyedBitSource,
    EdgeSample,
    SampleKey,
    SprinklingSplit,
    read_sample,
    sample_edges,
    split_probability,
    uniform01,
    uniform01_array,
    union_samples,
    write_sample,
)
from .theory import (
    GWParams,
    TheoryValues,
    TreeCountBound,
    binom_tail_geq,
    chernoff_interval_bound,
    gw_extinction,
    gw_survival_limit_check,
    second_component_bound,
    solve_y,
    subcritical_bound,
    theory_values,
    tree_count_bound,
    y_near_critical,
)

__version__ = "0.1.0"
