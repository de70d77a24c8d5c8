"""Circuits that load classical feature vectors into qubit states."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import qsim
from .errors import EmptyVector
from .qsim import Circuit, Gate

ANGLE = "ANGLE"
ZZ = "ZZ"


@dataclass(frozen=True)
class FeatureMapSpec:
    kind: str = ZZ
    reps: int = 2
    rotation_axis: str = "RY"

    def __post_init__(self):
        object.__setattr__(self, "kind", self.kind.upper())
        object.__setattr__(self, "rotation_axis", self.rotation_axis.upper())
        if self.kind not in (ANGLE, ZZ):
            raise ValueError(f"unknown feature map {self.kind!r}")
        if not 1 <= self.reps <= 4:
            raise ValueError(f"reps must be in [1, 4], got {self.reps}")
        if self.rotation_axis not in ("RX", "RY", "RZ"):
            raise ValueError(f"rotation axis must be RX, RY or RZ, got {self.rotation_axis!r}")


def _as_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise EmptyVector("cannot encode an empty feature vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("feature values must be finite")
    return x


def angle_encode(x, axis: str = "RY") -> Circuit:
    """One rotation per feature, feature i driving qubit i; no entanglers."""
    x = _as_vector(x)
    return Circuit(len(x), [Gate(axis, (i,), v) for i, v in enumerate(x)])


def zz_pair_angle(xi, xj):
    return 2.0 * (np.pi - xi) * (np.pi - xj)


def zz_feature_map(x, reps: int = 2) -> Circuit:
    """Second-order Pauli-Z feature map with linear-in-pairs entanglement.

    Each repetition: H on all qubits, PHASE(2 x_i) on qubit i, then for every
    pair i < j the sequence CX(i, j), PHASE(2 (pi - x_i)(pi - x_j)) on j, CX(i, j).
    """
    x = _as_vector(x)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    d = len(x)
    c = Circuit(d)
    for _ in range(reps):
        for i in range(d):
            c.h(i)
        for i in range(d):
            c.phase(i, 2.0 * x[i])
        for i, j in combinations(range(d), 2):
            c.cx(i, j)
            c.phase(j, zz_pair_angle(x[i], x[j]))
            c.cx(i, j)
    return c


def zz_gate_count(d: int, reps: int) -> int:
    return reps * (2 * d + 3 * d * (d - 1) // 2)


def build_circuit(x, spec: FeatureMapSpec) -> Circuit:
    if spec.kind == ZZ:
        return zz_feature_map(x, spec.reps)
    return angle_encode(x, spec.rotation_axis)


def encode_batch(X, spec: FeatureMapSpec) -> np.ndarray:
    """Statevectors of every row of ``X``, shape (N, 2^d).

    Gate for gate the same sequence as :func:`build_circuit`, but applied to
    all samples at once with per-sample angles.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] == 0:
        raise EmptyVector("cannot encode an empty feature vector")
    n_samples, d = X.shape
    amps = np.zeros((n_samples, 1 << d), dtype=complex)
    amps[:, 0] = 1.0
    if spec.kind == ANGLE:
        for i in range(d):
            amps = qsim.apply_1q(amps, d, i, qsim.rotation_matrices(spec.rotation_axis, X[:, i]))
        return amps
    h = qsim.rotation_matrices("H", None)
    for _ in range(spec.reps):
        for i in range(d):
            amps = qsim.apply_1q(amps, d, i, h)
        for i in range(d):
            amps = qsim.apply_1q(amps, d, i, qsim.rotation_matrices("PHASE", 2.0 * X[:, i]))
        for i, j in combinations(range(d), 2):
            amps = qsim.apply_cx(amps, d, i, j)
            amps = qsim.apply_1q(
                amps, d, j, qsim.rotation_matrices("PHASE", zz_pair_angle(X[:, i], X[:, j]))
            )
            amps = qsim.apply_cx(amps, d, i, j)
    return amps
