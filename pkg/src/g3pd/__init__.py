"""Fingerprint segmentation by three-part cartoon / texture / noise decomposition."""
from .baselines import decompose_tv_l1, decompose_tv_l2
from .benchmark import (
    DatasetManifest,
    EvalReport,
    evaluate,
    load_manifest,
    report_table,
    segmentation_error,
    train_grid,
)
from .config import ConfigError, MorphologyConfig, SolverConfig, load_config
from .image import load_grayscale, load_mask, save_grayscale, save_mask
from .prox import compute_delta, cst, estimate_sigma, shrink
from .segmentation import block_morphology, segment
from .solver import Decomposition, NumericalError, decompose_g3pd

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DatasetManifest",
    "Decomposition",
    "EvalReport",
    "MorphologyConfig",
    "NumericalError",
    "SolverConfig",
    "block_morphology",
    "compute_delta",
    "cst",
    "decompose_g3pd",
    "decompose_tv_l1",
    "decompose_tv_l2",
    "estimate_sigma",
    "evaluate",
    "load_config",
    "load_grayscale",
    "load_manifest",
    "load_mask",
    "report_table",
    "save_grayscale",
    "save_mask",
    "segment",
    "segmentation_error",
    "shrink",
    "train_grid",
]
