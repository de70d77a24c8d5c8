"""Dense statevector simulator.

Qubit ordering is little-endian: qubit 0 is the least significant bit of the
amplitude index, so on two qubits the basis order is |q1 q0> = 00, 01, 10, 11.

Gates are applied by reshaping the flat amplitude array so that the target
qubit's bit becomes its own axis; no 2^n x 2^n matrix is ever built. The
low-level ``apply_*`` kernels accept any number of leading batch axes, which
is what the kernel and VQC code use to push many samples through at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import QubitCountMismatch, QubitIndexOutOfRange, TooManyQubits

MAX_QUBITS = 24

ONE_QUBIT = frozenset({"H", "RX", "RY", "RZ", "PHASE"})
TWO_QUBIT = frozenset({"CX", "CZ"})
PARAMETRIC = frozenset({"RX", "RY", "RZ", "PHASE"})
GATE_KINDS = ONE_QUBIT | TWO_QUBIT

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def rotation_matrices(kind: str, angles) -> np.ndarray:
    """Unitaries for a one-qubit gate; shape (..., 2, 2) following ``angles``."""
    if kind == "H":
        return _H.copy()
    t = np.asarray(angles, dtype=float)
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    if kind == "RX":
        c, s = np.cos(t / 2), np.sin(t / 2)
        out[..., 0, 0] = c
        out[..., 0, 1] = -1j * s
        out[..., 1, 0] = -1j * s
        out[..., 1, 1] = c
    elif kind == "RY":
        c, s = np.cos(t / 2), np.sin(t / 2)
        out[..., 0, 0] = c
        out[..., 0, 1] = -s
        out[..., 1, 0] = s
        out[..., 1, 1] = c
    elif kind == "RZ":
        out[..., 0, 0] = np.exp(-0.5j * t)
        out[..., 1, 1] = np.exp(0.5j * t)
    elif kind == "PHASE":
        out[..., 0, 0] = 1.0
        out[..., 1, 1] = np.exp(1j * t)
    else:
        raise ValueError(f"{kind} is not a one-qubit gate")
    return out


def apply_1q(amps: np.ndarray, n: int, qubit: int, matrix: np.ndarray) -> np.ndarray:
    """Apply a 2x2 unitary to ``qubit``; ``matrix`` may carry the batch axes of ``amps``."""
    lead = amps.shape[:-1]
    v = amps.reshape(lead + (1 << (n - qubit - 1), 2, 1 << qubit))
    a0 = v[..., 0, :]
    a1 = v[..., 1, :]
    m = np.asarray(matrix)
    if m.ndim > 2:
        m = m[..., None, None, :, :]
    out = np.empty_like(v)
    out[..., 0, :] = m[..., 0, 0] * a0 + m[..., 0, 1] * a1
    out[..., 1, :] = m[..., 1, 0] * a0 + m[..., 1, 1] * a1
    return out.reshape(amps.shape)


def _pair_view(amps: np.ndarray, n: int, a: int, b: int):
    """View amps as (..., hi, 2, mid, 2, lo) with bit axes for qubits a and b."""
    lo_q, hi_q = min(a, b), max(a, b)
    lead = amps.shape[:-1]
    shape = lead + (1 << (n - hi_q - 1), 2, 1 << (hi_q - lo_q - 1), 2, 1 << lo_q)
    v = amps.reshape(shape)
    axis = {hi_q: -4, lo_q: -2}
    return v, axis[a], axis[b]


def _index(ndim: int, axes_vals: dict) -> tuple:
    idx = [slice(None)] * ndim
    for ax, val in axes_vals.items():
        idx[ndim + ax] = val
    return tuple(idx)


def apply_cx(amps: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    v, ac, at = _pair_view(amps, n, control, target)
    out = v.copy()
    nd = v.ndim
    out[_index(nd, {ac: 1, at: 0})] = v[_index(nd, {ac: 1, at: 1})]
    out[_index(nd, {ac: 1, at: 1})] = v[_index(nd, {ac: 1, at: 0})]
    return out.reshape(amps.shape)


def apply_cz(amps: np.ndarray, n: int, a: int, b: int) -> np.ndarray:
    v, aa, ab = _pair_view(amps, n, a, b)
    out = v.copy()
    out[_index(v.ndim, {aa: 1, ab: 1})] *= -1
    return out.reshape(amps.shape)


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple
    angle: float | None = None

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        targets = tuple(int(q) for q in np.atleast_1d(self.targets))
        object.__setattr__(self, "targets", targets)
        if kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = 2 if kind in TWO_QUBIT else 1
        if len(targets) != arity:
            raise ValueError(f"{kind} takes {arity} qubit(s), got {targets}")
        if arity == 2 and targets[0] == targets[1]:
            raise ValueError(f"{kind} needs distinct qubits, got {targets}")
        if any(q < 0 for q in targets):
            raise QubitIndexOutOfRange(f"negative qubit index in {targets}")
        if kind in PARAMETRIC:
            if self.angle is None:
                raise ValueError(f"{kind} requires an angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{kind} takes no angle")

    def inverse(self) -> "Gate":
        if self.kind in PARAMETRIC:
            return Gate(self.kind, self.targets, -self.angle)
        return self

    def to_text(self) -> str:
        parts = [str(q) for q in self.targets]
        if self.angle is not None:
            parts.append(repr(self.angle))
        return f"{self.kind} {','.join(parts)}"

    @classmethod
    def from_text(cls, line: str) -> "Gate":
        kind, _, rest = line.strip().partition(" ")
        fields = [f for f in rest.split(",") if f.strip()]
        kind = kind.upper()
        arity = 2 if kind in TWO_QUBIT else 1
        targets = tuple(int(f) for f in fields[:arity])
        angle = float(fields[arity]) if len(fields) > arity else None
        return cls(kind, targets, angle)


@dataclass
class Circuit:
    n_qubits: int
    gates: list = field(default_factory=list)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        gates, self.gates = list(self.gates), []
        for g in gates:
            self.append(g)

    def append(self, gate: Gate) -> "Circuit":
        if max(gate.targets) >= self.n_qubits:
            raise QubitIndexOutOfRange(f"{gate.to_text()} on a {self.n_qubits}-qubit circuit")
        self.gates.append(gate)
        return self

    def extend(self, gates) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def h(self, q):
        return self.append(Gate("H", (q,)))

    def rx(self, q, theta):
        return self.append(Gate("RX", (q,), theta))

    def ry(self, q, theta):
        return self.append(Gate("RY", (q,), theta))

    def rz(self, q, theta):
        return self.append(Gate("RZ", (q,), theta))

    def phase(self, q, theta):
        return self.append(Gate("PHASE", (q,), theta))

    def cx(self, control, target):
        return self.append(Gate("CX", (control, target)))

    def cz(self, a, b):
        return self.append(Gate("CZ", (a, b)))

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, [g.inverse() for g in reversed(self.gates)])

    def compose(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise QubitCountMismatch(f"{self.n_qubits} vs {other.n_qubits} qubits")
        return Circuit(self.n_qubits, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def to_text(self) -> str:
        """One gate per line: ``KIND q0[,q1][,angle]``."""
        return "".join(g.to_text() + "\n" for g in self.gates)

    @classmethod
    def from_text(cls, n_qubits: int, text: str) -> "Circuit":
        return cls(n_qubits, [Gate.from_text(l) for l in text.splitlines() if l.strip()])


@dataclass
class State:
    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if self.n_qubits < 1 or self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"{self.n_qubits} qubits need {1 << max(self.n_qubits, 0)} amplitudes, "
                f"got shape {self.amplitudes.shape}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def new_state(n_qubits: int) -> State:
    if n_qubits > MAX_QUBITS:
        raise TooManyQubits(f"{n_qubits} qubits exceeds the cap of {MAX_QUBITS}")
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[0] = 1.0
    return State(amps, n_qubits)


def apply_gate_amplitudes(amps: np.ndarray, n: int, gate: Gate) -> np.ndarray:
    if max(gate.targets) >= n:
        raise QubitIndexOutOfRange(f"{gate.to_text()} on {n} qubits")
    if gate.kind == "CX":
        return apply_cx(amps, n, *gate.targets)
    if gate.kind == "CZ":
        return apply_cz(amps, n, *gate.targets)
    return apply_1q(amps, n, gate.targets[0], rotation_matrices(gate.kind, gate.angle))


def apply_gate(state: State, gate: Gate) -> State:
    return State(apply_gate_amplitudes(state.amplitudes, state.n_qubits, gate), state.n_qubits)


def run_circuit_amplitudes(c: Circuit, amps: np.ndarray) -> np.ndarray:
    """Run ``c`` on a (..., 2^n) array of states."""
    if amps.shape[-1] != 1 << c.n_qubits:
        raise QubitCountMismatch(f"circuit has {c.n_qubits} qubits, amplitudes {amps.shape}")
    for g in c.gates:
        amps = apply_gate_amplitudes(amps, c.n_qubits, g)
    return amps


def run_circuit(c: Circuit, s: State | None = None) -> State:
    if s is None:
        s = new_state(c.n_qubits)
    if c.n_qubits != s.n_qubits:
        raise QubitCountMismatch(f"circuit has {c.n_qubits} qubits, state has {s.n_qubits}")
    return State(run_circuit_amplitudes(c, s.amplitudes.copy()), s.n_qubits)


def inner_product(a: State, b: State) -> complex:
    """<a|b>."""
    if a.n_qubits != b.n_qubits:
        raise QubitCountMismatch(f"{a.n_qubits} vs {b.n_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def z_signs(n: int, qubit: int) -> np.ndarray:
    """+1 where ``qubit`` is 0 in the basis index, -1 where it is 1."""
    bits = (np.arange(1 << n) >> qubit) & 1
    return 1.0 - 2.0 * bits


def expectation_z_amplitudes(amps: np.ndarray, n: int, qubit: int) -> np.ndarray:
    if not 0 <= qubit < n:
        raise QubitIndexOutOfRange(f"qubit {qubit} on {n} qubits")
    probs = amps.real**2 + amps.imag**2
    return probs @ z_signs(n, qubit)


def expectation_z(s: State, qubit: int) -> float:
    return float(expectation_z_amplitudes(s.amplitudes, s.n_qubits, qubit))


def sample_counts(s: State, shots: int, seed: int = 0) -> dict:
    """Seeded computational-basis sampling; keys are bitstrings with qubit 0 rightmost."""
    rng = np.random.default_rng(seed)
    p = s.probabilities()
    outcomes = rng.choice(len(p), size=shots, p=p / p.sum())
    counts = np.bincount(outcomes, minlength=len(p))
    return {format(i, f"0{s.n_qubits}b"): int(c) for i, c in enumerate(counts) if c}
