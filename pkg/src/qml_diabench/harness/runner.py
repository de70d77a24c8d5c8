"""The benchmark grid: {PCA, LDA} x {LR, KNN, CART, NB, QSVC, VQC}."""
from __future__ import annotations

import hashlib
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..classical import (
    cart_fit,
    cart_predict,
    gnb_fit,
    gnb_predict,
    knn_fit,
    knn_predict,
    logreg_fit,
    logreg_predict,
)
from ..dataset import (
    Split,
    apply_standardizer,
    bundled_csv_path,
    clean_impute,
    fit_standardizer,
    load_csv,
    stratified_split,
)
from ..dimred import (
    apply_angle_scaler,
    fit_angle_scaler,
    lda_fit,
    lda_transform,
    pca_fit,
    pca_transform,
)
from ..encoding import FeatureMapSpec
from ..errors import MissingFile
from ..metrics import MetricsRecord, evaluate
from ..qkernel import kernel_matrix, svc_fit, svc_predict
from ..vqc import TrainConfig, vqc_predict, vqc_train
from .config import ExperimentConfig

log = logging.getLogger(__name__)

QUANTUM_MODELS = ("QSVC", "VQC")
THREADS_ENV = "QML_DIABENCH_THREADS"


@dataclass(frozen=True)
class ReducedData:
    reduction: str
    train: np.ndarray
    test: np.ndarray
    train_angles: np.ndarray
    test_angles: np.ndarray
    train_y: np.ndarray
    test_y: np.ndarray

    @property
    def n_features(self) -> int:
        return self.train.shape[1]


@dataclass(frozen=True)
class ReportRow:
    model: str
    reduction: str
    metrics: MetricsRecord | None
    seconds: float
    n_features: int | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.metrics is None


@dataclass
class ReportTable:
    rows: list = field(default_factory=list)

    def sorted_rows(self) -> list:
        return sorted(self.rows, key=lambda r: (r.reduction, r.model))

    def get(self, model: str, reduction: str) -> ReportRow:
        for r in self.rows:
            if r.model == model and r.reduction == reduction:
                return r
        raise KeyError((model, reduction))

    @property
    def any_failed(self) -> bool:
        return any(r.failed for r in self.rows)

    @property
    def total_seconds(self) -> float:
        return sum(r.seconds for r in self.rows)


def cell_seed(master_seed: int, model: str, reduction: str) -> int:
    digest = hashlib.sha256(f"{master_seed}:{model}:{reduction}".encode()).digest()
    return int.from_bytes(digest[:4], "little")


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        return 1


def load_split(cfg: ExperimentConfig) -> tuple[Split, list[str]]:
    """Load, impute, and split (standardization happens per reduction)."""
    path = Path(cfg.dataset) if cfg.dataset else bundled_csv_path()
    if not path.is_file():
        raise MissingFile(f"dataset not found: {path}")
    table = load_csv(path)
    X, y = clean_impute(table)
    return stratified_split(X, y, cfg.split_ratio, cfg.seed), table.column_names[:-1]


def reduce_split(split: Split, reduction: str, cfg: ExperimentConfig) -> ReducedData:
    """Standardize, reduce, and angle-scale one split.

    Every fitted transform sees training rows only.
    """
    std = fit_standardizer(split.train_X)
    train = apply_standardizer(std, split.train_X)
    test = apply_standardizer(std, split.test_X)
    if reduction == "PCA":
        model = pca_fit(train, cfg.pca_components)
        train_r, test_r = pca_transform(model, train), pca_transform(model, test)
    elif reduction == "LDA":
        model = lda_fit(train, split.train_y, 1)
        train_r, test_r = lda_transform(model, train), lda_transform(model, test)
    else:
        raise ValueError(f"unknown reduction {reduction!r}")
    scaler = fit_angle_scaler(train_r)
    return ReducedData(
        reduction,
        train_r,
        test_r,
        apply_angle_scaler(scaler, train_r),
        apply_angle_scaler(scaler, test_r),
        split.train_y,
        split.test_y,
    )


def fit_predict(model: str, data: ReducedData, cfg: ExperimentConfig, seed: int) -> np.ndarray:
    """Fit one model on the training rows and return test predictions.

    Quantum models consume angle-scaled features; classical ones the reduced features.
    """
    X, Xt, y = data.train, data.test, data.train_y
    if model == "LR":
        return logreg_predict(logreg_fit(X, y, cfg.logreg_lr, cfg.logreg_iterations), Xt)
    if model == "KNN":
        return knn_predict(knn_fit(X, y, cfg.knn_k), Xt)
    if model == "CART":
        tree = cart_fit(X, y, cfg.cart_max_depth, cfg.cart_min_leaf, cfg.cart_criterion)
        return cart_predict(tree, Xt, n_features=X.shape[1])
    if model == "NB":
        return gnb_predict(gnb_fit(X, y), Xt)
    if model == "QSVC":
        spec = FeatureMapSpec("ZZ", cfg.zz_reps)
        A, At = data.train_angles, data.test_angles
        svm = svc_fit(kernel_matrix(A, spec=spec), y, cfg.svc_C, cfg.svc_tol,
                      cfg.svc_max_iterations, training_features=A, spec=spec)
        return svc_predict(svm, kernel_matrix(At, A, spec=spec))
    if model == "VQC":
        tc = TrainConfig(cfg.vqc_lr, cfg.vqc_epochs, cfg.vqc_batch_size, seed, cfg.vqc_depth)
        return vqc_predict(vqc_train(data.train_angles, y, tc), data.test_angles)
    raise ValueError(f"unknown model {model!r}")


def run_cell(model: str, data: ReducedData, cfg: ExperimentConfig) -> ReportRow:
    start = time.perf_counter()
    try:
        pred = fit_predict(model, data, cfg, cell_seed(cfg.seed, model, data.reduction))
        metrics = evaluate(data.test_y, pred)
        error = None
    except Exception as exc:  # one broken cell must not sink the grid
        log.exception("cell (%s, %s) failed", model, data.reduction)
        metrics, error = None, f"{type(exc).__name__}: {exc}"
    return ReportRow(model, data.reduction, metrics, time.perf_counter() - start,
                     data.n_features, error)


def run_experiment(cfg: ExperimentConfig) -> ReportTable:
    """Load, reduce, fit and score every configured (model, reduction) cell."""
    split, _ = load_split(cfg)
    cells = []
    table = ReportTable()
    for reduction in cfg.reductions():
        try:
            data = reduce_split(split, reduction, cfg)
        except Exception as exc:
            log.exception("reduction %s failed", reduction)
            for model in cfg.models:
                table.rows.append(ReportRow(model, reduction, None, 0.0, None,
                                            f"{type(exc).__name__}: {exc}"))
            continue
        cells.extend((model, data) for model in cfg.models)
    workers = min(thread_count(), max(1, len(cells)))
    if workers == 1:
        rows = [run_cell(m, d, cfg) for m, d in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda md: run_cell(md[0], md[1], cfg), cells))
    table.rows.extend(rows)
    return table
