"""Dataset handling, end-to-end runs, evaluation and experiment drivers."""
from .config import (
    DistanceType,
    GraphType,
    PipelineConfig,
    cap_state_space,
    is_valid_combination,
    valid_combinations,
)
from .evaluate import EvalReport, evaluate_baseline
from .experiments import AblationTable, ablation_matrix, make_synthetic_suite, noise_sweep
from .io import Dataset, load_ucr_tsv, write_feature_csv
from .noise import inject_noise, signal_power
from .run import PipelineResult, run_pipeline
