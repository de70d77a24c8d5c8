import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qml_diabench import qsim
from qml_diabench.errors import QubitCountMismatch, QubitIndexOutOfRange, TooManyQubits
from qml_diabench.qsim import Circuit, Gate, State

import oracles


def random_state(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return State(v / np.linalg.norm(v), n)


def to_circuit(n, gates):
    return Circuit(n, [Gate(k, t, a) for k, t, a in gates])


@pytest.mark.parametrize("n, expected", [(1, [1, 0]), (2, [1, 0, 0, 0])])
def test_new_state(n, expected):
    np.testing.assert_array_equal(qsim.new_state(n).amplitudes, expected)


def test_new_state_cap():
    with pytest.raises(TooManyQubits):
        qsim.new_state(25)


def test_hadamard_on_zero():
    s = qsim.apply_gate(qsim.new_state(1), Gate("H", (0,)))
    np.testing.assert_allclose(s.amplitudes, [2**-0.5, 2**-0.5], atol=1e-15)


def test_ry_pi_flips():
    s = qsim.apply_gate(qsim.new_state(1), Gate("RY", (0,), np.pi))
    np.testing.assert_allclose(s.amplitudes, [0, 1], atol=1e-12)


def test_apply_gate_returns_new_state():
    s = qsim.new_state(1)
    qsim.apply_gate(s, Gate("H", (0,)))
    np.testing.assert_array_equal(s.amplitudes, [1, 0])


def test_little_endian_ordering():
    # X-like flip of qubit 0 on 2 qubits lands on index 1 (binary 01)
    s = qsim.apply_gate(qsim.new_state(2), Gate("RY", (0,), np.pi))
    np.testing.assert_allclose(np.abs(s.amplitudes), [0, 1, 0, 0], atol=1e-12)
    s = qsim.apply_gate(qsim.new_state(2), Gate("RY", (1,), np.pi))
    np.testing.assert_allclose(np.abs(s.amplitudes), [0, 0, 1, 0], atol=1e-12)


@pytest.mark.parametrize("kind", ["H", "RX", "RY", "RZ", "PHASE", "CX", "CZ"])
def test_gate_preserves_norm(kind):
    rng = np.random.default_rng(3)
    s = random_state(rng, 3)
    targets = (0, 2) if kind in ("CX", "CZ") else (1,)
    angle = None if kind in ("H", "CX", "CZ") else 1.234
    out = qsim.apply_gate(s, Gate(kind, targets, angle))
    assert abs(out.norm() - 1) < 1e-12


def test_index_out_of_range():
    with pytest.raises(QubitIndexOutOfRange):
        qsim.apply_gate(qsim.new_state(2), Gate("H", (2,)))
    with pytest.raises(QubitIndexOutOfRange):
        Circuit(2).cx(0, 3)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("RY", (0,))
    with pytest.raises(ValueError):
        Gate("CX", (1, 1))
    with pytest.raises(ValueError):
        Gate("T", (0,))


def test_empty_circuit_is_identity():
    rng = np.random.default_rng(0)
    s = random_state(rng, 2)
    np.testing.assert_array_equal(qsim.run_circuit(Circuit(2), s).amplitudes, s.amplitudes)


def test_hh_is_identity():
    out = qsim.run_circuit(Circuit(1).h(0).h(0))
    np.testing.assert_allclose(out.amplitudes, [1, 0], atol=1e-12)


def test_run_circuit_qubit_mismatch():
    with pytest.raises(QubitCountMismatch):
        qsim.run_circuit(Circuit(2), qsim.new_state(3))


def test_ten_random_gates_match_dense_oracle():
    rng = np.random.default_rng(11)
    gates = oracles.random_gates(rng, 2, 10)
    s = random_state(rng, 2)
    expected = oracles.circuit_unitary(gates, 2) @ s.amplitudes
    got = qsim.run_circuit(to_circuit(2, gates), s).amplitudes
    assert np.max(np.abs(got - expected)) < 1e-10


def test_inner_product_basics():
    rng = np.random.default_rng(5)
    a, b = random_state(rng, 3), random_state(rng, 3)
    assert abs(qsim.inner_product(a, a) - 1) < 1e-12
    zero, one = qsim.new_state(1), qsim.run_circuit(Circuit(1).ry(0, np.pi))
    assert abs(qsim.inner_product(zero, one)) < 1e-12
    assert abs(qsim.inner_product(a, b)) <= 1 + 1e-12
    assert qsim.inner_product(a, b) == pytest.approx(np.conj(qsim.inner_product(b, a)))
    with pytest.raises(QubitCountMismatch):
        qsim.inner_product(a, qsim.new_state(2))


def test_expectation_z():
    assert qsim.expectation_z(qsim.new_state(1), 0) == 1.0
    plus = qsim.run_circuit(Circuit(1).h(0))
    assert abs(qsim.expectation_z(plus, 0)) < 1e-12
    s = qsim.run_circuit(Circuit(1).ry(0, 0.7))
    assert qsim.expectation_z(s, 0) == pytest.approx(0.7648421872844885, abs=1e-12)
    with pytest.raises(QubitIndexOutOfRange):
        qsim.expectation_z(s, 1)


@pytest.mark.parametrize("control", [0, 1])
def test_cx_truth_table(control):
    target = 1 - control
    for basis in range(4):
        amps = np.zeros(4, dtype=complex)
        amps[basis] = 1
        out = qsim.apply_gate(State(amps, 2), Gate("CX", (control, target))).amplitudes
        c_bit = (basis >> control) & 1
        expected = basis ^ (c_bit << target)
        assert out[expected] == 1 and np.count_nonzero(out) == 1


def test_cz_truth_table():
    for basis in range(4):
        amps = np.zeros(4, dtype=complex)
        amps[basis] = 1
        out = qsim.apply_gate(State(amps, 2), Gate("CZ", (0, 1))).amplitudes
        sign = -1 if basis == 3 else 1
        assert out[basis] == sign and np.count_nonzero(out) == 1


def test_cx_non_adjacent_three_qubits():
    # |q2 q1 q0> = |001>, CX(0 -> 2) gives |101> = index 5
    amps = np.zeros(8, dtype=complex)
    amps[1] = 1
    out = qsim.apply_gate(State(amps, 3), Gate("CX", (0, 2))).amplitudes
    assert out[5] == 1


def test_linearity():
    rng = np.random.default_rng(9)
    a = rng.normal(size=8) + 1j * rng.normal(size=8)
    b = rng.normal(size=8) + 1j * rng.normal(size=8)
    alpha, beta = 0.3 - 1.1j, 2.0 + 0.5j
    for gate in [Gate("RX", (1,), 0.4), Gate("CX", (2, 0)), Gate("PHASE", (0,), 2.2), Gate("CZ", (1, 2))]:
        lhs = qsim.apply_gate_amplitudes(alpha * a + beta * b, 3, gate)
        rhs = alpha * qsim.apply_gate_amplitudes(a, 3, gate) + beta * qsim.apply_gate_amplitudes(b, 3, gate)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_batch_matches_single():
    rng = np.random.default_rng(2)
    states = np.array([random_state(rng, 2).amplitudes for _ in range(5)])
    angles = rng.uniform(0, np.pi, 5)
    batch = qsim.apply_1q(states, 2, 1, qsim.rotation_matrices("RY", angles))
    for s, a, out in zip(states, angles, batch):
        single = qsim.apply_gate(State(s, 2), Gate("RY", (1,), a)).amplitudes
        np.testing.assert_allclose(out, single, atol=1e-14)


def test_text_roundtrip():
    c = Circuit(2).h(0).ry(1, 0.25).cx(0, 1).phase(1, -3.5).cz(1, 0)
    text = c.to_text()
    assert text.splitlines()[0] == "H 0"
    assert text.splitlines()[1] == "RY 1,0.25"
    assert text.splitlines()[2] == "CX 0,1"
    assert Circuit.from_text(2, text).gates == c.gates


def test_inverse_undoes_circuit():
    rng = np.random.default_rng(4)
    c = to_circuit(3, oracles.random_gates(rng, 3, 12))
    out = qsim.run_circuit(c.compose(c.inverse()))
    np.testing.assert_allclose(out.amplitudes, qsim.new_state(3).amplitudes, atol=1e-12)


def test_sample_counts_seeded():
    s = qsim.run_circuit(Circuit(2).h(0))
    a = qsim.sample_counts(s, 1000, seed=1)
    assert a == qsim.sample_counts(s, 1000, seed=1)
    assert set(a) <= {"00", "01"} and sum(a.values()) == 1000


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3), count=st.integers(0, 12))
def test_property_oracle_equivalence(seed, n, count):
    rng = np.random.default_rng(seed)
    gates = oracles.random_gates(rng, n, count)
    s = random_state(rng, n)
    got = qsim.run_circuit(to_circuit(n, gates), s).amplitudes
    expected = oracles.circuit_unitary(gates, n) @ s.amplitudes
    assert np.max(np.abs(got - expected)) < 1e-10
    assert abs(np.linalg.norm(got) - 1) < 1e-12
