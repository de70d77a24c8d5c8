"""PCA and two-class Fisher LDA, plus the min-max scaler that feeds rotation angles."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFeature,
    DimensionMismatch,
    KTooLarge,
    LabelEncoding,
    RankDeficient,
    SingleClass,
    SingularScatter,
)


@dataclass(frozen=True)
class PcaModel:
    components: np.ndarray  # (k, d), orthonormal rows
    explained_variance: np.ndarray  # (k,), descending
    means: np.ndarray  # (d,)

    @property
    def k(self) -> int:
        return self.components.shape[0]


@dataclass(frozen=True)
class LdaModel:
    directions: np.ndarray  # (k, d)
    class_means: np.ndarray  # (2, d)
    k: int = 1


@dataclass(frozen=True)
class AngleScaler:
    mins: np.ndarray
    maxs: np.ndarray
    low: float = 0.0
    high: float = np.pi


def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so its largest-magnitude entry is positive (first one on ties)."""
    return -v if v[np.argmax(np.abs(v))] < 0 else v


def _check_dims(X, d: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != d:
        raise DimensionMismatch(f"expected {d} columns, got shape {X.shape}")
    return X


def pca_fit(X, k: int = 2) -> PcaModel:
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    if not 1 <= k <= min(n - 1, d):
        raise KTooLarge(f"k={k} outside [1, min(N-1, d)] = [1, {min(n - 1, d)}]")
    means = X.mean(axis=0)
    cov = np.atleast_2d(np.cov(X, rowvar=False, ddof=1))
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals, kind="stable")[::-1]
    evals, evecs = evals[order], evecs[:, order]
    tol = max(float(evals[0]), 1.0) * 1e-12 * d
    if np.count_nonzero(evals > tol) < k:
        raise RankDeficient(f"fewer than {k} positive eigenvalues")
    components = np.array([_fix_sign(evecs[:, i]) for i in range(k)])
    return PcaModel(components, evals[:k].copy(), means)


def pca_transform(m: PcaModel, X) -> np.ndarray:
    X = _check_dims(X, m.components.shape[1])
    return (X - m.means) @ m.components.T


def default_ridge(within_scatter: np.ndarray) -> float:
    d = within_scatter.shape[0]
    return 1e-6 * float(np.trace(within_scatter)) / d


def scatter_matrices(X, y) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (within-class scatter, between-class scatter, class means) for binary y."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    means = np.array([X[y == c].mean(axis=0) for c in (0, 1)])
    sw = np.zeros((X.shape[1], X.shape[1]))
    for c in (0, 1):
        centered = X[y == c] - means[c]
        sw += centered.T @ centered
    diff = means[1] - means[0]
    sb = np.outer(diff, diff)
    return sw, sb, means


def fisher_criterion(w, sw: np.ndarray, sb: np.ndarray) -> float:
    w = np.asarray(w, dtype=float)
    return float(w @ sb @ w) / float(w @ sw @ w)


def lda_fit(X, y, k: int = 1, ridge: float | None = None) -> LdaModel:
    """Fisher discriminant direction for two classes.

    The dominant eigenvector of ``inv(S_W + ridge*I) @ S_B`` is, for a
    rank-one ``S_B``, proportional to ``inv(S_W + ridge*I) @ (mu1 - mu0)``;
    that closed form is what gets solved. ``ridge=None`` uses
    ``1e-6 * trace(S_W) / d``; pass ``0.0`` for the unregularized fit.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if not np.all((y == 0) | (y == 1)):
        raise LabelEncoding("LDA expects labels in {0, 1}")
    if k != 1:
        raise KTooLarge(f"binary LDA supports exactly k = 1 (n_classes - 1), got {k}")
    counts = np.bincount(y.astype(int), minlength=2)
    if counts.min() < 2:
        raise SingleClass("each class needs at least 2 samples")
    sw, _, means = scatter_matrices(X, y)
    lam = default_ridge(sw) if ridge is None else float(ridge)
    reg = sw + lam * np.eye(sw.shape[0])
    try:
        chol = np.linalg.cholesky(reg)
    except np.linalg.LinAlgError:
        raise SingularScatter("within-class scatter is singular") from None
    if np.min(np.diag(chol)) ** 2 < 1e-14 * max(np.trace(reg), 1e-300):
        raise SingularScatter("within-class scatter is numerically singular")
    w = np.linalg.solve(reg, means[1] - means[0])
    norm = np.linalg.norm(w)
    if not np.isfinite(norm) or norm == 0:
        raise SingularScatter("class means coincide; no separating direction")
    w = w / norm
    if w @ means[1] < w @ means[0]:
        w = -w
    return LdaModel(w[None, :], means, 1)


def lda_transform(m: LdaModel, X) -> np.ndarray:
    X = _check_dims(X, m.directions.shape[1])
    return X @ m.directions.T


def fit_angle_scaler(X) -> AngleScaler:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    mins, maxs = X.min(axis=0), X.max(axis=0)
    if np.any(maxs == mins):
        warnings.warn(
            f"constant features {np.flatnonzero(maxs == mins).tolist()} map to pi/2",
            DegenerateFeature,
            stacklevel=2,
        )
    return AngleScaler(mins, maxs)


def apply_angle_scaler(s: AngleScaler, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    X = _check_dims(X, len(s.mins))
    span = s.maxs - s.mins
    flat = span == 0
    safe = np.where(flat, 1.0, span)
    out = s.low + (X - s.mins) / safe * (s.high - s.low)
    out = np.where(flat, 0.5 * (s.low + s.high), out)
    return np.clip(out, s.low, s.high)
