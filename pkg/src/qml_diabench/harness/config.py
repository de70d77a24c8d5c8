"""Experiment configuration: a flat JSON document with defaults for every key."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from ..errors import InvalidValue, ParseError, UnknownKey

MODEL_NAMES = ("LR", "KNN", "CART", "NB", "QSVC", "VQC")
REDUCTIONS = ("PCA", "LDA")
FORMATS = ("csv", "markdown")


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str | None = None  # None = bundled Pima CSV
    split_ratio: float = 0.8
    seed: int = 0
    reduction: str = "both"
    pca_components: int = 2
    models: tuple = MODEL_NAMES
    # QSVC
    svc_C: float = 1.0
    svc_tol: float = 1e-3
    svc_max_iterations: int | None = None
    zz_reps: int = 2
    # classical
    knn_k: int = 5
    cart_max_depth: int = 4
    cart_min_leaf: int = 2
    cart_criterion: str = "entropy"
    logreg_lr: float = 0.1
    logreg_iterations: int = 500
    # VQC
    vqc_lr: float = 0.1
    vqc_epochs: int = 100
    vqc_depth: int = 3
    vqc_batch_size: int | None = None
    # output
    out_dir: str = "results"
    formats: tuple = FORMATS
    report_timing: bool = False

    def reductions(self) -> tuple:
        return REDUCTIONS if self.reduction == "both" else (self.reduction,)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["models"] = list(self.models)
        d["formats"] = list(self.formats)
        return d


_KEYS = {f.name for f in fields(ExperimentConfig)}


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _check(cond: bool, key: str, reason: str):
    if not cond:
        raise InvalidValue(key, reason)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    """Type/range checks; returns a normalized copy (upper-case names, tuples)."""
    c = cfg
    _check(c.dataset is None or isinstance(c.dataset, str), "dataset", "must be a path string")
    _check(_is_num(c.split_ratio) and 0 < c.split_ratio < 1, "split_ratio", "must lie in (0, 1)")
    _check(_is_int(c.seed), "seed", "must be an integer")
    _check(isinstance(c.reduction, str), "reduction", "must be a string")
    reduction = c.reduction.upper() if c.reduction.lower() != "both" else "both"
    _check(reduction in REDUCTIONS + ("both",), "reduction", "must be PCA, LDA or both")
    _check(_is_int(c.pca_components) and 1 <= c.pca_components <= 8, "pca_components",
           "must be an integer in [1, 8]")
    _check(isinstance(c.models, (list, tuple)) and len(c.models) > 0, "models", "must be a non-empty list")
    models = tuple(str(m).upper() for m in c.models)
    _check(all(m in MODEL_NAMES for m in models), "models", f"entries must be in {MODEL_NAMES}")
    _check(len(set(models)) == len(models), "models", "duplicate entries")
    _check(_is_num(c.svc_C) and c.svc_C > 0, "svc_C", "must be > 0")
    _check(_is_num(c.svc_tol) and c.svc_tol > 0, "svc_tol", "must be > 0")
    _check(c.svc_max_iterations is None or (_is_int(c.svc_max_iterations) and c.svc_max_iterations > 0),
           "svc_max_iterations", "must be a positive integer or null")
    _check(_is_int(c.zz_reps) and 1 <= c.zz_reps <= 4, "zz_reps", "must be an integer in [1, 4]")
    _check(_is_int(c.knn_k) and c.knn_k > 0 and c.knn_k % 2 == 1, "knn_k", "must be an odd positive integer")
    _check(_is_int(c.cart_max_depth) and c.cart_max_depth >= 0, "cart_max_depth", "must be >= 0")
    _check(_is_int(c.cart_min_leaf) and c.cart_min_leaf >= 1, "cart_min_leaf", "must be >= 1")
    _check(c.cart_criterion in ("entropy", "gini"), "cart_criterion", "must be 'entropy' or 'gini'")
    _check(_is_num(c.logreg_lr) and c.logreg_lr > 0, "logreg_lr", "must be > 0")
    _check(_is_int(c.logreg_iterations) and c.logreg_iterations >= 1, "logreg_iterations", "must be >= 1")
    _check(_is_num(c.vqc_lr) and c.vqc_lr > 0, "vqc_lr", "must be > 0")
    _check(_is_int(c.vqc_epochs) and c.vqc_epochs >= 1, "vqc_epochs", "must be >= 1")
    _check(_is_int(c.vqc_depth) and c.vqc_depth >= 1, "vqc_depth", "must be >= 1")
    _check(c.vqc_batch_size is None or (_is_int(c.vqc_batch_size) and c.vqc_batch_size >= 1),
           "vqc_batch_size", "must be a positive integer or null")
    _check(isinstance(c.out_dir, str) and c.out_dir != "", "out_dir", "must be a non-empty path")
    _check(isinstance(c.formats, (list, tuple)), "formats", "must be a list")
    formats = tuple(str(f).lower() for f in c.formats)
    _check(all(f in FORMATS for f in formats), "formats", f"entries must be in {FORMATS}")
    _check(isinstance(c.report_timing, bool), "report_timing", "must be true or false")
    return replace(c, reduction=reduction, models=models, formats=formats)


def config_from_dict(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ParseError("$", "top-level value must be an object")
    for key in doc:
        if key not in _KEYS:
            raise UnknownKey(key)
    return validate(ExperimentConfig(**doc))


def load_config(path) -> ExperimentConfig:
    """Read a JSON config; absent keys take defaults, unknown keys are rejected.

    A relative ``dataset`` path is resolved against the config file's directory.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(path), str(exc)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    cfg = config_from_dict(doc)
    if cfg.dataset is not None and not Path(cfg.dataset).is_absolute():
        cfg = replace(cfg, dataset=str(path.parent / cfg.dataset))
    return cfg


def apply_overrides(cfg: ExperimentConfig, overrides: dict) -> ExperimentConfig:
    doc = cfg.to_dict()
    for key, value in overrides.items():
        if key not in _KEYS:
            raise UnknownKey(key)
        doc[key] = value
    return validate(ExperimentConfig(**doc))


def parse_override_value(text: str):
    """CLI values are read as JSON when possible, otherwise kept as strings."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def default_config(**kwargs) -> ExperimentConfig:
    return config_from_dict(dict(kwargs))

