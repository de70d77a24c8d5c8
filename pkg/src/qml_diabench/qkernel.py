"""Fidelity quantum kernel and a soft-margin SVM trained by SMO (the QSVC)."""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .encoding import FeatureMapSpec, build_circuit, encode_batch
from .errors import DimensionMismatch, LabelEncoding, NotConverged


@dataclass(frozen=True)
class KernelMatrix:
    values: np.ndarray
    row_ids: list
    col_ids: list

    @property
    def shape(self):
        return self.values.shape

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["id"] + [str(c) for c in self.col_ids])
            for rid, row in zip(self.row_ids, self.values):
                w.writerow([str(rid)] + [f"{v:.12g}" for v in row])


def _as_2d(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return A[:, None] if A.ndim == 1 else A


def _unique_states(A: np.ndarray, spec: FeatureMapSpec) -> np.ndarray:
    # each distinct sample is simulated once
    uniq, inverse = np.unique(A, axis=0, return_inverse=True)
    return encode_batch(uniq, spec)[np.ravel(inverse)]


def kernel_matrix(A, B=None, spec: FeatureMapSpec | None = None,
                  row_ids=None, col_ids=None, strategy: str = "statevector") -> KernelMatrix:
    """K[i, j] = |<phi(a_i)|phi(b_j)>|^2.

    ``strategy="statevector"`` caches one statevector per sample and takes
    inner products; ``strategy="compiled"`` runs U(a)^dagger U(b)... per pair
    and reads the |0...0> amplitude (slow, kept as a cross-check).
    """
    spec = spec or FeatureMapSpec()
    A = _as_2d(A)
    same = B is None
    B = A if same else _as_2d(B)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"feature dimension {A.shape[1]} vs {B.shape[1]}")
    if strategy == "statevector":
        sa = _unique_states(A, spec)
        sb = sa if same else _unique_states(B, spec)
        values = np.abs(sa.conj() @ sb.T) ** 2
        if same:
            values = 0.5 * (values + values.T)
    elif strategy == "compiled":
        values = np.array([[kernel_entry_compiled(a, b, spec) for b in B] for a in A])
    else:
        raise ValueError(f"unknown kernel strategy {strategy!r}")
    row_ids = list(range(len(A))) if row_ids is None else list(row_ids)
    col_ids = (row_ids if same else list(range(len(B)))) if col_ids is None else list(col_ids)
    return KernelMatrix(values, row_ids, col_ids)


def kernel_entry_compiled(x, y, spec: FeatureMapSpec | None = None) -> float:
    """|<0| U(y)^dagger U(x) |0>|^2 from a single composed circuit."""
    spec = spec or FeatureMapSpec()
    c = build_circuit(x, spec).compose(build_circuit(y, spec).inverse())
    amp0 = qsim.run_circuit(c).amplitudes[0]
    return float(abs(amp0) ** 2)


@dataclass(frozen=True)
class SvmModel:
    dual_coefficients: np.ndarray  # alpha_i * y_i, y in {-1, +1}
    alphas: np.ndarray
    bias: float
    support_indices: np.ndarray
    C: float
    training_features: np.ndarray | None = None
    spec: FeatureMapSpec | None = None
    converged: bool = True
    iterations: int = 0


def _signed_labels(y) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1 or not np.all((y == 0) | (y == 1)):
        raise LabelEncoding("labels must be a vector of 0/1 values")
    if len(np.unique(y)) < 2:
        raise LabelEncoding("labels contain a single class")
    return np.where(y == 1, 1.0, -1.0)


def dual_objective(alpha, K, y) -> float:
    """sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij with y given as 0/1."""
    ys = _signed_labels(y)
    K = K.values if isinstance(K, KernelMatrix) else np.asarray(K)
    ay = np.asarray(alpha) * ys
    return float(np.sum(alpha) - 0.5 * ay @ K @ ay)


def svc_fit(K_train, y, C: float = 1.0, tol: float = 1e-3, max_iterations: int | None = None,
            training_features=None, spec: FeatureMapSpec | None = None) -> SvmModel:
    """Solve the soft-margin SVM dual with SMO.

    Working pairs are chosen as the maximal violating pair (first index on
    ties), so the iterate sequence is deterministic. Stops when the gap
    ``max_{I_up} -y G - min_{I_low} -y G`` drops below ``tol``. Hitting
    ``max_iterations`` (default ``10000 * N``) emits :class:`NotConverged`
    and returns the last iterate with ``converged=False``.
    """
    K = K_train.values if isinstance(K_train, KernelMatrix) else np.asarray(K_train, dtype=float)
    ys = _signed_labels(y)
    n = len(ys)
    if K.shape != (n, n):
        raise DimensionMismatch(f"kernel shape {K.shape} does not match {n} labels")
    if C <= 0:
        raise ValueError("C must be positive")
    if max_iterations is None:
        max_iterations = 10000 * n

    Q = (ys[:, None] * ys[None, :]) * K
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 1/2 a'Qa - e'a
    eps = 1e-12
    converged = False
    it = 0
    while it < max_iterations:
        up = ((ys > 0) & (alpha < C - eps)) | ((ys < 0) & (alpha > eps))
        low = ((ys > 0) & (alpha > eps)) | ((ys < 0) & (alpha < C - eps))
        score = -ys * grad
        s_up = np.where(up, score, -np.inf)
        s_low = np.where(low, score, np.inf)
        i = int(np.argmax(s_up))
        j = int(np.argmin(s_low))
        if s_up[i] - s_low[j] < tol:
            converged = True
            break
        it += 1
        # analytic two-variable step along y_i d_i = -y_j d_j
        quad = Q[i, i] + Q[j, j] - 2.0 * ys[i] * ys[j] * Q[i, j]
        quad = max(quad, 1e-12)
        step = (s_up[i] - s_low[j]) / quad
        # step bounds keep both alphas in the box
        lim_i = C - alpha[i] if ys[i] > 0 else alpha[i]
        lim_j = alpha[j] if ys[j] > 0 else C - alpha[j]
        step = min(step, lim_i, lim_j)
        d_i = ys[i] * step
        d_j = -ys[j] * step
        alpha[i] = min(max(alpha[i] + d_i, 0.0), C)
        alpha[j] = min(max(alpha[j] + d_j, 0.0), C)
        grad += Q[:, i] * d_i + Q[:, j] * d_j
    if not converged:
        warnings.warn(f"SMO stopped after {it} iterations without reaching tol={tol}",
                      NotConverged, stacklevel=2)

    yg = ys * grad
    free = (alpha > eps) & (alpha < C - eps)
    if free.any():
        rho = float(np.mean(yg[free]))
    else:
        up = ((ys > 0) & (alpha < C - eps)) | ((ys < 0) & (alpha > eps))
        low = ((ys > 0) & (alpha > eps)) | ((ys < 0) & (alpha < C - eps))
        bounds = []
        if up.any():
            bounds.append(np.min(yg[up]))
        if low.any():
            bounds.append(np.max(yg[low]))
        rho = float(np.mean(bounds))
    alpha[alpha <= eps] = 0.0
    tf = None if training_features is None else _as_2d(training_features).copy()
    return SvmModel(
        dual_coefficients=alpha * ys,
        alphas=alpha,
        bias=-rho,
        support_indices=np.flatnonzero(alpha > 0),
        C=float(C),
        training_features=tf,
        spec=spec,
        converged=converged,
        iterations=it,
    )


def decision_function(m: SvmModel, K_test_rows) -> np.ndarray:
    K = K_test_rows.values if isinstance(K_test_rows, KernelMatrix) else np.asarray(K_test_rows, dtype=float)
    K = np.atleast_2d(K)
    if K.shape[1] != len(m.dual_coefficients):
        raise DimensionMismatch(
            f"kernel rows have {K.shape[1]} columns, model has {len(m.dual_coefficients)} training samples"
        )
    return K @ m.dual_coefficients + m.bias


def svc_predict(m: SvmModel, K_test_rows) -> np.ndarray:
    """Label 1 when the decision value is >= 0 (ties go to class 1)."""
    return (decision_function(m, K_test_rows) >= 0).astype(int)


def kkt_residuals(m: SvmModel, K_train, y) -> np.ndarray:
    """Per-sample violation of the soft-margin KKT conditions."""
    ys = _signed_labels(y)
    margin = ys * decision_function(m, K_train)
    a = m.alphas
    res = np.abs(margin - 1.0)
    res = np.where(a == 0, np.maximum(0.0, 1.0 - margin), res)
    res = np.where(a >= m.C, np.maximum(0.0, margin - 1.0), res)
    return res


@dataclass
class QSVC:
    """Convenience wrapper: fidelity kernel + SMO on raw (angle-scaled) features."""

    spec: FeatureMapSpec = field(default_factory=FeatureMapSpec)
    C: float = 1.0
    tol: float = 1e-3
    model: SvmModel | None = None

    def fit(self, X, y) -> "QSVC":
        X = _as_2d(X)
        K = kernel_matrix(X, spec=self.spec)
        self.model = svc_fit(K, y, self.C, self.tol, training_features=X, spec=self.spec)
        return self

    def predict(self, X) -> np.ndarray:
        K = kernel_matrix(_as_2d(X), self.model.training_features, spec=self.spec)
        return svc_predict(self.model, K)
