from .config import ExperimentConfig, apply_overrides, default_config, load_config
from .report import emit_report
from .runner import ReportRow, ReportTable, run_experiment

__all__ = [
    "ExperimentConfig",
    "ReportRow",
    "ReportTable",
    "apply_overrides",
    "default_config",
    "emit_report",
    "load_config",
    "run_experiment",
]
