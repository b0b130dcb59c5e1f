"""Buffered queues with heavy-tailed arrivals and long-intense-period statistics."""

from .heavytail import (
    ArrivalDist,
    TailParams,
    arrival_quantile,
    nu_alpha_tail,
    sample_arrival,
    survival,
    tail_constant,
)
from .pathspace import (
    JumpSpec,
    PiecewisePath,
    bernstein_bound,
    classify_jumps,
    embed_walk,
    h_j_path,
    parse_path,
    serialize_path,
    sup_norm,
)
from .reflect import (
    QueueModel,
    QueuePath,
    lindley_step,
    queue_path_from_arrivals,
    scaled_queue,
    simulate_queue,
    skorohod_reflect,
)
from .intense import IntensePeriodSet, enumerate_periods, longest_intense
from .measures import (
    MeasureRepr,
    ModelParams,
    atom_estimate,
    combined_tail_estimate,
    gamma_rate,
    kappa,
    mu1_atom,
    mu1_tail,
    mu2_tail,
    one_jump_measure,
    tabulate_measures,
    two_jump_measure,
)
from .harness import (
    ExperimentConfig,
    HistComparison,
    LipDataset,
    PlantedTwoJumpSample,
    RateCheck,
    compare_histogram,
    kappa_centered_edges,
    planted_two_jump_sampler,
    replicate_arrivals,
    replication_seed,
    run_lip_experiment,
    verify_rate_j1,
)

__all__ = [
    "ArrivalDist",
    "TailParams",
    "arrival_quantile",
    "nu_alpha_tail",
    "sample_arrival",
    "survival",
    "tail_constant",
    "JumpSpec",
    "PiecewisePath",
    "bernstein_bound",
    "classify_jumps",
    "embed_walk",
    "h_j_path",
    "parse_path",
    "serialize_path",
    "sup_norm",
    "QueueModel",
    "QueuePath",
    "lindley_step",
    "queue_path_from_arrivals",
    "scaled_queue",
    "simulate_queue",
    "skorohod_reflect",
    "IntensePeriodSet",
    "enumerate_periods",
    "longest_intense",
    "MeasureRepr",
    "ModelParams",
    "atom_estimate",
    "combined_tail_estimate",
    "gamma_rate",
    "kappa",
    "mu1_atom",
    "mu1_tail",
    "mu2_tail",
    "one_jump_measure",
    "tabulate_measures",
    "two_jump_measure",
    "ExperimentConfig",
    "HistComparison",
    "LipDataset",
    "PlantedTwoJumpSample",
    "RateCheck",
    "compare_histogram",
    "kappa_centered_edges",
    "planted_two_jump_sampler",
    "replicate_arrivals",
    "replication_seed",
    "run_lip_experiment",
    "verify_rate_j1",
]

__version__ = "0.1.0"
