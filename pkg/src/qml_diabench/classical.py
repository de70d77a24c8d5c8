"""Classical baselines: logistic regression, CART, Gaussian naive Bayes and k-NN."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidDistribution, KTooLarge, SingleClass

# ---------------------------------------------------------------- helpers


def _xy(X, y=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if y is None:
        return X
    y = np.asarray(y).astype(int).ravel()
    if len(y) != len(X):
        raise DimensionMismatch(f"{len(X)} samples but {len(y)} labels")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0/1")
    return X, y


def _require_two_classes(y):
    if len(np.unique(y)) < 2:
        raise SingleClass("training labels contain a single class")


def _check_width(X, d: int) -> np.ndarray:
    X = _xy(X)
    if X.shape[1] != d:
        raise DimensionMismatch(f"model expects {d} features, got {X.shape[1]}")
    return X


# ---------------------------------------------------------------- logistic regression


@dataclass(frozen=True)
class LogRegModel:
    weights: np.ndarray
    intercept: float
    loss_curve: tuple = ()


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    # split by sign so exp never overflows
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logreg_loss(weights, intercept, X, y) -> float:
    """Mean negative log-likelihood."""
    z = X @ weights + intercept
    # log(1 + e^z) - y z, computed stably
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def logreg_gradient(weights, intercept, X, y) -> tuple[np.ndarray, float]:
    r = sigmoid(X @ weights + intercept) - y
    return X.T @ r / len(y), float(np.mean(r))


def logreg_fit(X, y, lr: float = 0.1, iterations: int = 500) -> LogRegModel:
    """Batch gradient descent from all-zero coefficients."""
    X, y = _xy(X, y)
    _require_two_classes(y)
    w = np.zeros(X.shape[1])
    b = 0.0
    curve = [logreg_loss(w, b, X, y)]
    for _ in range(iterations):
        gw, gb = logreg_gradient(w, b, X, y)
        w = w - lr * gw
        b = b - lr * gb
        curve.append(logreg_loss(w, b, X, y))
    return LogRegModel(w, b, tuple(curve))


def logreg_predict_proba(m: LogRegModel, X) -> np.ndarray:
    X = _check_width(X, len(m.weights))
    return sigmoid(X @ m.weights + m.intercept)


def logreg_predict(m: LogRegModel, X) -> np.ndarray:
    """Label 1 iff P(y=1) >= 0.5."""
    return (logreg_predict_proba(m, X) >= 0.5).astype(int)


# ---------------------------------------------------------------- impurity


def _check_distribution(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise InvalidDistribution(f"not a probability distribution: {p}")
    return p


def entropy(p) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    p = _check_distribution(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz))) + 0.0


def gini(p) -> float:
    p = _check_distribution(p)
    return float(1.0 - np.sum(p * p))


def _binary_impurity(pos, total, criterion):
    """Vectorized impurity of nodes with ``pos`` positives out of ``total``."""
    p1 = np.divide(pos, total, out=np.zeros_like(pos, dtype=float), where=total > 0)
    p0 = 1.0 - p1
    if criterion == "gini":
        return 1.0 - p0 * p0 - p1 * p1
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(np.where(p0 > 0, p0 * np.log2(p0), 0.0) + np.where(p1 > 0, p1 * np.log2(p1), 0.0))
    return h


# ---------------------------------------------------------------- CART


@dataclass(frozen=True)
class Leaf:
    prediction: int
    counts: tuple  # (n_class0, n_class1)


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    left: "Leaf | Split"
    right: "Leaf | Split"


TreeNode = Leaf | Split

_GAIN_EPS = 1e-12


def _leaf(y) -> Leaf:
    n1 = int(y.sum())
    n0 = len(y) - n1
    return Leaf(1 if n1 >= n0 else 0, (n0, n1))


def best_split(X, y, min_leaf: int = 1, criterion: str = "entropy"):
    """Best (feature, threshold, gain) over midpoints of sorted distinct values.

    Ties go to the lowest feature index, then the lowest threshold. Returns
    None when no split keeps ``min_leaf`` samples on both sides.
    """
    n = len(y)
    parent = _binary_impurity(np.array([y.sum()]), np.array([n]), criterion)[0]
    best = None
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        xs, ys = X[order, f], y[order]
        # candidate cut after position i (left = first i+1 samples)
        cut = np.flatnonzero(xs[1:] > xs[:-1])
        if cut.size == 0:
            continue
        n_left = cut + 1
        n_right = n - n_left
        ok = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not ok.any():
            continue
        cum = np.cumsum(ys)
        pos_left = cum[cut]
        pos_right = cum[-1] - pos_left
        child = (n_left * _binary_impurity(pos_left, n_left, criterion)
                 + n_right * _binary_impurity(pos_right, n_right, criterion)) / n
        gain = np.where(ok, parent - child, -np.inf)
        k = int(np.argmax(gain))  # first max = lowest threshold
        if best is None or gain[k] > best[2] + _GAIN_EPS:
            best = (f, 0.5 * (xs[cut[k]] + xs[cut[k] + 1]), float(gain[k]))
    return best


def cart_fit(X, y, max_depth: int = 4, min_leaf: int = 2, criterion: str = "entropy") -> TreeNode:
    """Greedy binary tree; stops at max_depth, min_leaf, purity, or no positive gain.

    Single-class input yields a single leaf rather than an error.
    """
    if criterion not in ("entropy", "gini"):
        raise ValueError(f"criterion must be 'entropy' or 'gini', got {criterion!r}")
    X, y = _xy(X, y)
    return _grow(X, y, max_depth, min_leaf, criterion)


def _grow(X, y, depth_left, min_leaf, criterion) -> TreeNode:
    if depth_left <= 0 or len(np.unique(y)) < 2:
        return _leaf(y)
    found = best_split(X, y, min_leaf, criterion)
    if found is None or found[2] <= _GAIN_EPS:
        return _leaf(y)
    f, thr, _ = found
    go_left = X[:, f] <= thr
    return Split(
        f,
        thr,
        _grow(X[go_left], y[go_left], depth_left - 1, min_leaf, criterion),
        _grow(X[~go_left], y[~go_left], depth_left - 1, min_leaf, criterion),
    )


def tree_n_features(tree: TreeNode) -> int:
    if isinstance(tree, Leaf):
        return 0
    return max(tree.feature + 1, tree_n_features(tree.left), tree_n_features(tree.right))


def cart_predict(tree: TreeNode, X, n_features: int | None = None) -> np.ndarray:
    """Route each row left when value <= threshold, right otherwise."""
    X = _xy(X)
    need = tree_n_features(tree) if n_features is None else n_features
    if X.shape[1] < need or (n_features is not None and X.shape[1] != n_features):
        raise DimensionMismatch(f"tree uses {need} features, got {X.shape[1]}")
    out = np.empty(len(X), dtype=int)
    for i, row in enumerate(X):
        node = tree
        while isinstance(node, Split):
            node = node.left if row[node.feature] <= node.threshold else node.right
        out[i] = node.prediction
    return out


def tree_depth(tree: TreeNode) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.left), tree_depth(tree.right))


# ---------------------------------------------------------------- Gaussian naive Bayes

VAR_FLOOR = 1e-9


@dataclass(frozen=True)
class GnbModel:
    priors: np.ndarray  # (2,)
    means: np.ndarray  # (2, d)
    variances: np.ndarray  # (2, d)


def gnb_fit(X, y) -> GnbModel:
    X, y = _xy(X, y)
    _require_two_classes(y)
    counts = np.bincount(y, minlength=2)
    if counts.min() < 2:
        raise SingleClass("each class needs at least 2 samples")
    means = np.array([X[y == c].mean(axis=0) for c in (0, 1)])
    var = np.array([X[y == c].var(axis=0) for c in (0, 1)])
    return GnbModel(counts / counts.sum(), means, np.maximum(var, VAR_FLOOR))


def gnb_log_joint(m: GnbModel, X) -> np.ndarray:
    """log P(class) + sum_j log N(x_j | mean, var), shape (N, 2)."""
    X = _check_width(X, m.means.shape[1])
    diff = X[:, None, :] - m.means[None, :, :]
    ll = -0.5 * (np.log(2 * np.pi * m.variances)[None] + diff**2 / m.variances[None])
    return np.log(m.priors)[None, :] + ll.sum(axis=2)


def gnb_predict_proba(m: GnbModel, X) -> np.ndarray:
    lj = gnb_log_joint(m, X)
    lj -= lj.max(axis=1, keepdims=True)
    p = np.exp(lj)
    return p / p.sum(axis=1, keepdims=True)


def gnb_predict(m: GnbModel, X) -> np.ndarray:
    """argmax posterior; exact ties go to class 1."""
    lj = gnb_log_joint(m, X)
    return (lj[:, 1] >= lj[:, 0]).astype(int)


# ---------------------------------------------------------------- k-NN


@dataclass(frozen=True)
class KnnConfig:
    X_train: np.ndarray
    y_train: np.ndarray
    k: int = 5
    distance: str = field(default="euclidean")

    def __post_init__(self):
        X, y = _xy(self.X_train, self.y_train)
        object.__setattr__(self, "X_train", X)
        object.__setattr__(self, "y_train", y)
        if self.k < 1 or self.k % 2 == 0:
            raise ValueError(f"k must be an odd positive integer, got {self.k}")
        if self.k > len(y):
            raise KTooLarge(f"k={self.k} exceeds {len(y)} training samples")


def knn_fit(X, y, k: int = 5) -> KnnConfig:
    return KnnConfig(X, y, k)


def knn_predict(cfg: KnnConfig, X) -> np.ndarray:
    """Majority vote of the k nearest (Euclidean) training points.

    Equal distances are resolved in favour of the lower training index.
    """
    X = _check_width(X, cfg.X_train.shape[1])
    out = np.empty(len(X), dtype=int)
    for i, q in enumerate(X):
        d2 = np.sum((cfg.X_train - q) ** 2, axis=1)
        nearest = np.argsort(d2, kind="stable")[: cfg.k]
        out[i] = int(2 * cfg.y_train[nearest].sum() > cfg.k)
    return out
