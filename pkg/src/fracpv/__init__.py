"""Power variations of Levy-driven fractional random fields and their limits.

Submodules
----------
levy        Levy measures, jump laws, stable sampling, jump configurations
kernels     kernel families, rectangular increments, regime classification
simulator   lattice, shot-noise and Gaussian reference simulation
statistics  power variations, the change-of-frequency estimator, log-log slopes
limits      lattice sums, limit laws and constants for every regime
quadrature  adaptive cubature with error bounds and certified tails
harness     config-driven experiments and reports
"""

from __future__ import annotations

from .errors import (DegenerateSampleError, DivergenceError, FracPVError, NonConvergenceError,
                     ParameterError, SingularityError, SizeError, TruncationError,
                     UnsupportedRegimeError)
from .grids import FieldGrid, IncrementGrid, coarsen_increments, read_grid
from .harness import ExperimentConfig, Report, ks_distance, run_experiment
from .kernels import (LFSS, MAFSF, ExpTemper, GaussianFractional, H1Radial, H2Product,
                      MaternBessel, One, RectHomogeneous, Regime, classify)
from .levy import (CompoundPoisson, Gaussian, PointConfiguration, SymmetricStable,
                   SymmetricUniform, SymmetrizedExponential, TruncatedStable, TwoPoint,
                   sample_jump_configuration, sample_sas)
from .limits import (ergodic_limit, lattice_mean, lattice_sum_H, sample_derivative_pv_limit,
                     sample_limit_Z_thm1i, sample_limit_Z_thm2i, stable_abs_moment)
from .rng import stream
from .simulator import Discretized, GaussianReference, ShotNoise, simulate_grid, simulate_increments
from .statistics import estimate_H, power_variation, ratio_statistic, rect_increments, scaling_exponent

__version__ = "0.1.0"

__all__ = [
    "FracPVError", "ParameterError", "UnsupportedRegimeError", "SingularityError",
    "DegenerateSampleError", "TruncationError", "SizeError", "NonConvergenceError", "DivergenceError",
    "FieldGrid", "IncrementGrid", "read_grid", "coarsen_increments",
    "ExperimentConfig", "Report", "run_experiment", "ks_distance",
    "One", "ExpTemper", "H1Radial", "H2Product", "MaternBessel", "MAFSF", "GaussianFractional", "LFSS",
    "RectHomogeneous", "Regime", "classify",
    "TwoPoint", "SymmetricUniform", "SymmetrizedExponential", "SymmetricStable", "CompoundPoisson",
    "Gaussian", "TruncatedStable", "PointConfiguration", "sample_jump_configuration", "sample_sas",
    "lattice_sum_H", "lattice_mean", "sample_limit_Z_thm1i", "sample_limit_Z_thm2i", "ergodic_limit",
    "stable_abs_moment", "sample_derivative_pv_limit",
    "stream",
    "Discretized", "ShotNoise", "GaussianReference", "simulate_grid", "simulate_increments",
    "power_variation", "rect_increments", "ratio_statistic", "estimate_H", "scaling_exponent",
]
