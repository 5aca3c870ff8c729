"""Numerical laboratory for the 1D cubic Schrödinger equation with L^p data."""

__version__ = "0.1.0"

from .grid import (FREQUENCY, PHYSICAL, Field, Grid, GridError, convolve,
                   dealiased_product, field_from_bytes, field_to_bytes,
                   forward_transform, inverse_transform, lp_norm, make_grid,
                   read_field, read_field_csv, smooth_indicator, write_field,
                   write_field_csv)
from .ops import (FactorizationCalibration, UnresolvedChirpWarning, chirp,
                  conjugate, factorization_calibration, factorized_propagate,
                  modulus_identity_pair, propagate, reflect, t_chirp_min,
                  twisted_cubic)
from .spaces import (PhysicalTrajectory, SpaceError, SpaceSpec,
                     StrichartzSpec, TimeGrid, TwistedTrajectory, besov_norm,
                     holder_modulus_check, littlewood_paley_frame_report,
                     sobolev_norm, weighted_spacetime_norm, x_norm, y_norm)
from .families import (chirped_cutoff, gaussian, plane_wave,
                       random_fourier_sum, scale_to_lp,
                       truncated_homogeneous)
from .splitstep import SplitStepParams, compare, splitstep_solve
from .duhamel import (DuhamelError, SolveReport, SolverParams, TmaxScanEntry,
                      TmaxScanResult, contraction_probe,
                      estimate_trilinear_constant, picard_solve, tmax_scan,
                      trilinear_D)
from .experiments import (ConfigError, ExperimentConfig, ResultRecord,
                          default_config, run_experiment)

__all__ = [
    "__version__",
    "FREQUENCY", "PHYSICAL", "Field", "Grid", "GridError", "convolve",
    "dealiased_product", "field_from_bytes", "field_to_bytes",
    "forward_transform", "inverse_transform", "lp_norm", "make_grid",
    "read_field", "read_field_csv", "smooth_indicator", "write_field",
    "write_field_csv",
    "FactorizationCalibration", "UnresolvedChirpWarning", "chirp",
    "conjugate", "factorization_calibration", "factorized_propagate",
    "modulus_identity_pair", "propagate", "reflect", "t_chirp_min",
    "twisted_cubic",
    "PhysicalTrajectory", "SpaceError", "SpaceSpec", "StrichartzSpec",
    "TimeGrid", "TwistedTrajectory", "besov_norm", "holder_modulus_check",
    "littlewood_paley_frame_report", "sobolev_norm",
    "weighted_spacetime_norm", "x_norm", "y_norm",
    "chirped_cutoff", "gaussian", "plane_wave", "random_fourier_sum",
    "scale_to_lp", "truncated_homogeneous",
    "SplitStepParams", "compare", "splitstep_solve",
    "DuhamelError", "SolveReport", "SolverParams", "TmaxScanEntry",
    "TmaxScanResult", "contraction_probe", "estimate_trilinear_constant",
    "picard_solve", "tmax_scan", "trilinear_D",
    "ConfigError", "ExperimentConfig", "ResultRecord", "default_config",
    "run_experiment",
]
