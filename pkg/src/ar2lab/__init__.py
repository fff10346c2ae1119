"""Simulation and verification lab for 2nd-order autoregressive partial sums.

The package studies S_n = xi_1 + ... + xi_n for the stable recursion
xi_k = a xi_{k-1} + b xi_{k-2} + theta_k with symmetric i.i.d. noise,
and estimates weighted tail series of Baum-Katz type

    sum_n n^(r/p-2) P{ |S_n| > eps n^(1/p) }

by deterministic, seed-keyed Monte Carlo.
"""

from .config import ExperimentConfig, parse_config, parse_config_text, render_config
from .errors import (
    DegenerateSpectrum,
    EmptyGrid,
    HorizonOverflow,
    InfiniteMoment,
    InsufficientHorizon,
    InvalidOrder,
    InvalidParameters,
    InvalidParams,
    LabError,
    NonFiniteInput,
    ParseError,
    UnstableCoefficients,
    ValidationError,
)
from .estimate import (
    MomentGrowthReport,
    SeriesEstimate,
    SeriesParams,
    TailEstimate,
    Verdict,
    default_grid,
    moment_growth_check,
    partial_series,
    tail_probability,
    wilson_interval,
)
from .noise import MomentValue, NoiseFamily, NoiseSpec, StreamKey, absolute_moment, generator_for, sample_block
from .recurrence import (
    ARCoefficients,
    BoundReport,
    CompanionSpectrum,
    Stability,
    WeightTable,
    bound_report,
    classify_stability,
    companion_power_column,
    companion_spectrum,
    weight_closed_form,
    weight_sequence,
)
from .simulate import (
    Path,
    prefix_sums,
    representation_residual,
    simulate_path,
    weighted_prefix_sums,
    weighted_sum,
)

__all__ = [
    "ARCoefficients",
    "BoundReport",
    "CompanionSpectrum",
    "DegenerateSpectrum",
    "EmptyGrid",
    "ExperimentConfig",
    "HorizonOverflow",
    "InfiniteMoment",
    "InsufficientHorizon",
    "InvalidOrder",
    "InvalidParameters",
    "InvalidParams",
    "LabError",
    "MomentGrowthReport",
    "MomentValue",
    "NoiseFamily",
    "NoiseSpec",
    "NonFiniteInput",
    "ParseError",
    "Path",
    "SeriesEstimate",
    "SeriesParams",
    "Stability",
    "StreamKey",
    "TailEstimate",
    "UnstableCoefficients",
    "ValidationError",
    "Verdict",
    "WeightTable",
    "absolute_moment",
    "bound_report",
    "classify_stability",
    "companion_power_column",
    "companion_spectrum",
    "default_grid",
    "generator_for",
    "moment_growth_check",
    "parse_config",
    "parse_config_text",
    "partial_series",
    "prefix_sums",
    "render_config",
    "representation_residual",
    "sample_block",
    "simulate_path",
    "tail_probability",
    "weight_closed_form",
    "weight_sequence",
    "weighted_prefix_sums",
    "weighted_sum",
    "wilson_interval",
]

__version__ = "0.1.0"
