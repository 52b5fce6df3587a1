"""FFT-free ADMM PAPR reduction for oversampled OFDM signals."""

__version__ = "0.1.0"

from .admm import (
    AdmmState,
    DiagnosticsReport,
    SolveResult,
    SolverParams,
    Variant,
    augmented_lagrangian,
    beta_adapt,
    beta_from_target,
    diagnose,
    dual_update,
    iterate,
    project_linf,
    solve,
    u_update,
)
from .baselines import IcfParams, icf
from .channel import BerRecord, SspaParams, awgn, ber_experiment, receive, sspa
from .methods import Method, apply_method
from .metrics import CcdfCurve, PsdCurve, ccdf, distortion_energy, oobe, psd
from .config import ExperimentConfig, parse_config
from .signal import OfdmConfig, Scheme, dft, map_bits, papr, papr_db, random_symbol, synthesize

__all__ = [
    "AdmmState", "BerRecord", "CcdfCurve", "DiagnosticsReport", "ExperimentConfig", "IcfParams",
    "Method", "OfdmConfig", "PsdCurve", "Scheme", "SolveResult", "SolverParams",
    "SspaParams", "Variant", "apply_method", "augmented_lagrangian", "awgn",
    "ber_experiment", "beta_adapt", "beta_from_target", "ccdf", "dft", "diagnose",
    "distortion_energy", "dual_update", "icf", "iterate", "map_bits", "oobe",
    "papr", "papr_db", "parse_config", "project_linf", "psd", "random_symbol", "receive",
    "solve", "sspa",
    "synthesize", "u_update",
]
