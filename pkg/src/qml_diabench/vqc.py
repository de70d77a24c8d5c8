"""Variational quantum classifier.

Angle-encoded input, RY/RZ layers with a CZ ring, probability read from
<Z> on qubit 0, trained by full-batch gradient descent on binary
cross-entropy with parameter-shift gradients.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .encoding import FeatureMapSpec, encode_batch
from .errors import DimensionMismatch, EmptyBatch, NonFiniteLoss
from .qsim import Circuit

P_CLAMP = 1e-12
SHIFT = np.pi / 2


@dataclass(frozen=True)
class Ansatz:
    n_qubits: int
    depth: int = 3

    @property
    def n_params(self) -> int:
        return 2 * self.n_qubits * self.depth

    def entangling_pairs(self) -> list[tuple[int, int]]:
        n = self.n_qubits
        if n == 1:
            return []
        if n == 2:
            # a two-qubit "ring" would apply CZ(0,1) twice and cancel
            return [(0, 1)]
        return [(i, (i + 1) % n) for i in range(n)]

    def param_index(self, layer: int, qubit: int, rot: int) -> int:
        """Index of the RY (rot=0) or RZ (rot=1) angle on ``qubit`` in ``layer``."""
        return 2 * (layer * self.n_qubits + qubit) + rot

    def circuit(self, params) -> Circuit:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.n_params,):
            raise DimensionMismatch(f"ansatz needs {self.n_params} params, got {params.shape}")
        c = Circuit(self.n_qubits)
        for layer in range(self.depth):
            for q in range(self.n_qubits):
                c.ry(q, params[self.param_index(layer, q, 0)])
                c.rz(q, params[self.param_index(layer, q, 1)])
            for a, b in self.entangling_pairs():
                c.cz(a, b)
        return c


@dataclass
class VqcModel:
    params: np.ndarray
    ansatz: Ansatz
    axis: str = "RY"
    readout: int = 0
    threshold: float = 0.5
    seed: int | None = None
    loss_curve: list = field(default_factory=list)

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float)
        if self.params.shape != (self.ansatz.n_params,):
            raise DimensionMismatch(
                f"ansatz needs {self.ansatz.n_params} params, got {self.params.shape}"
            )

    def to_json(self) -> str:
        return json.dumps({
            "n_qubits": self.ansatz.n_qubits,
            "depth": self.ansatz.depth,
            "params": [float(p) for p in self.params],
            "seed": self.seed,
        })

    @classmethod
    def from_json(cls, text: str) -> "VqcModel":
        doc = json.loads(text)
        ansatz = Ansatz(int(doc["n_qubits"]), int(doc["depth"]))
        return cls(np.array(doc["params"], dtype=float), ansatz, seed=doc.get("seed"))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 100
    batch_size: int | None = None  # None = full batch
    seed: int = 0
    depth: int = 3
    axis: str = "RY"

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def _check_X(X, n_qubits: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :] if n_qubits > 1 or X.size == 1 else X[:, None]
    if X.shape[1] != n_qubits:
        raise DimensionMismatch(f"model has {n_qubits} qubits, input has {X.shape[1]} features")
    return X


def _run_ansatz(amps: np.ndarray, ansatz: Ansatz, param_sets: np.ndarray) -> np.ndarray:
    """amps (N, 2^n), param_sets (S, P) -> final states (S, N, 2^n)."""
    n = ansatz.n_qubits
    out = np.broadcast_to(amps, (len(param_sets),) + amps.shape).copy()
    for layer in range(ansatz.depth):
        for q in range(n):
            for rot, kind in ((0, "RY"), (1, "RZ")):
                theta = param_sets[:, ansatz.param_index(layer, q, rot)]
                m = qsim.rotation_matrices(kind, theta)[:, None]
                out = qsim.apply_1q(out, n, q, m)
        for a, b in ansatz.entangling_pairs():
            out = qsim.apply_cz(out, n, a, b)
    return out


def _expectations(X: np.ndarray, m: VqcModel, param_sets: np.ndarray) -> np.ndarray:
    """<Z_readout> for every parameter set and sample, shape (S, N)."""
    amps = encode_batch(X, FeatureMapSpec(kind="ANGLE", rotation_axis=m.axis))
    final = _run_ansatz(amps, m.ansatz, param_sets)
    return qsim.expectation_z_amplitudes(final, m.ansatz.n_qubits, m.readout)


def vqc_forward_batch(X, m: VqcModel) -> np.ndarray:
    X = _check_X(X, m.ansatz.n_qubits)
    z = _expectations(X, m, m.params[None, :])[0]
    return (1.0 + z) / 2.0


def vqc_forward(x, m: VqcModel) -> float:
    """Probability of class 1 for a single feature vector."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != m.ansatz.n_qubits:
        raise DimensionMismatch(f"model has {m.ansatz.n_qubits} qubits, input has {x.size} features")
    return float(vqc_forward_batch(x[None, :], m)[0])


def _bce(p: np.ndarray, y: np.ndarray) -> float:
    p = np.clip(p, P_CLAMP, 1.0 - P_CLAMP)
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))))


def vqc_loss(X, y, m: VqcModel) -> float:
    y = np.asarray(y, dtype=float).ravel()
    if y.size == 0:
        raise EmptyBatch("loss of an empty batch")
    return _bce(vqc_forward_batch(X, m), y)


def _loss_and_grad(X: np.ndarray, y: np.ndarray, m: VqcModel) -> tuple[float, np.ndarray]:
    n_p = m.ansatz.n_params
    shifts = np.concatenate([SHIFT * np.eye(n_p), -SHIFT * np.eye(n_p)])
    param_sets = np.vstack([m.params[None, :], m.params[None, :] + shifts])
    z = _expectations(X, m, param_sets)
    p_raw = (1.0 + z[0]) / 2.0
    p = np.clip(p_raw, P_CLAMP, 1.0 - P_CLAMP)
    loss = float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))))
    dl_dp = np.where(p == p_raw, -y / p + (1.0 - y) / (1.0 - p), 0.0)
    dz = (z[1:n_p + 1] - z[n_p + 1:]) / 2.0  # (P, N) exact d<Z>/dtheta
    grad = np.mean(dl_dp[None, :] * 0.5 * dz, axis=1)
    return loss, grad


def param_shift_grad(X, y, m: VqcModel) -> np.ndarray:
    """Gradient of :func:`vqc_loss` w.r.t. the ansatz parameters.

    d<Z>/dtheta_k = (<Z>(theta_k + pi/2) - <Z>(theta_k - pi/2)) / 2, chained
    through p = (1 + <Z>)/2 and the clamped cross-entropy.
    """
    y = np.asarray(y, dtype=float).ravel()
    if y.size == 0:
        raise EmptyBatch("gradient of an empty batch")
    X = _check_X(X, m.ansatz.n_qubits)
    if len(X) != len(y):
        raise DimensionMismatch("X and y have different lengths")
    return _loss_and_grad(X, y, m)[1]


def init_params(ansatz: Ansatz, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, ansatz.n_params)


def vqc_train(X, y, cfg: TrainConfig = TrainConfig()) -> VqcModel:
    """Gradient descent from uniform[0, 2pi) initial angles; deterministic in ``cfg.seed``.

    ``loss_curve`` holds the loss before each update plus the final loss.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=float).ravel()
    if len(y) == 0:
        raise EmptyBatch("cannot train on an empty set")
    ansatz = Ansatz(X.shape[1], cfg.depth)
    rng = np.random.default_rng(cfg.seed)
    m = VqcModel(init_params(ansatz, cfg.seed), ansatz, axis=cfg.axis, seed=cfg.seed)
    curve = []
    for epoch in range(cfg.epochs):
        if cfg.batch_size is None or cfg.batch_size >= len(y):
            batches = [np.arange(len(y))]
        else:
            order = rng.permutation(len(y))
            batches = [order[i:i + cfg.batch_size] for i in range(0, len(y), cfg.batch_size)]
        for idx in batches:
            loss, grad = _loss_and_grad(X[idx], y[idx], m)
            if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
                m.loss_curve = curve
                raise NonFiniteLoss(epoch, m)
            if len(batches) == 1:
                curve.append(loss)
            m = VqcModel(m.params - cfg.learning_rate * grad, ansatz, cfg.axis, seed=cfg.seed)
        if len(batches) > 1:
            curve.append(vqc_loss(X, y, m))
    curve.append(vqc_loss(X, y, m))
    m.loss_curve = curve
    return m


def vqc_predict(m: VqcModel, X) -> np.ndarray:
    """Label 1 iff p >= threshold (0.5 by default, boundary inclusive)."""
    return (vqc_forward_batch(X, m) >= m.threshold).astype(int)
