import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qml_diabench import qsim
from qml_diabench.encoding import (
    FeatureMapSpec,
    angle_encode,
    encode_batch,
    zz_feature_map,
    zz_gate_count,
)
from qml_diabench.errors import EmptyVector

import oracles

angles = st.floats(0, np.pi, allow_nan=False)


def state_of(circuit):
    return qsim.run_circuit(circuit).amplitudes


def test_angle_zero_is_identity():
    np.testing.assert_array_equal(state_of(angle_encode([0, 0])), [1, 0, 0, 0])


def test_angle_pi_flips():
    np.testing.assert_allclose(state_of(angle_encode([np.pi])), [0, 1], atol=1e-12)


def test_angle_half_pi():
    np.testing.assert_allclose(state_of(angle_encode([np.pi / 2])),
                               [0.7071067811865476, 0.7071067811865476], atol=1e-12)


def test_angle_encode_structure():
    c = angle_encode([0.1, 0.2, 0.3], axis="RX")
    assert c.n_qubits == 3
    assert [(g.kind, g.targets) for g in c.gates] == [("RX", (0,)), ("RX", (1,)), ("RX", (2,))]


def test_empty_vector():
    with pytest.raises(EmptyVector):
        angle_encode([])
    with pytest.raises(EmptyVector):
        zz_feature_map([])


def test_zz_single_feature_has_no_two_qubit_gates():
    c = zz_feature_map([1.0], reps=2)
    assert all(len(g.targets) == 1 for g in c.gates)
    assert [g.kind for g in c.gates] == ["H", "PHASE", "H", "PHASE"]


def test_zz_pair_angles_at_origin():
    c = zz_feature_map([0.0, 0.0], reps=1)
    phases = [g.angle for g in c.gates if g.kind == "PHASE"]
    assert phases[:2] == [0.0, 0.0]
    assert phases[2] == pytest.approx(2 * np.pi**2)


def test_zz_fidelity_with_dense_oracle():
    x, y = np.array([0.0, 0.0]), np.array([np.pi / 2, np.pi / 2])
    sx, sy = state_of(zz_feature_map(x, 1)), state_of(zz_feature_map(y, 1))
    got = abs(np.vdot(sx, sy)) ** 2
    ox = oracles.circuit_unitary(oracles.zz_gates(x, 1), 2) @ oracles.zero_state(2)
    oy = oracles.circuit_unitary(oracles.zz_gates(y, 1), 2) @ oracles.zero_state(2)
    assert abs(got - abs(np.vdot(ox, oy)) ** 2) < 1e-10


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("reps", [1, 2, 3])
def test_zz_gate_count(d, reps):
    c = zz_feature_map(np.linspace(0.1, 1, d), reps)
    assert len(c) == reps * (d + d + 3 * d * (d - 1) // 2) == zz_gate_count(d, reps)


def test_feature_map_spec_validation():
    with pytest.raises(ValueError):
        FeatureMapSpec("ZZ", reps=5)
    with pytest.raises(ValueError):
        FeatureMapSpec("AMPLITUDE")
    assert FeatureMapSpec().reps == 2


@settings(max_examples=40, deadline=None)
@given(x=st.lists(angles, min_size=1, max_size=3), reps=st.integers(1, 3))
def test_zz_norm_and_self_fidelity(x, reps):
    s = state_of(zz_feature_map(x, reps))
    assert abs(np.linalg.norm(s) - 1) < 1e-12
    assert abs(abs(np.vdot(s, s)) ** 2 - 1) < 1e-12


@settings(max_examples=40, deadline=None)
@given(x=st.lists(angles, min_size=1, max_size=4), axis=st.sampled_from(["RX", "RY", "RZ"]))
def test_angle_encode_is_product_state(x, axis):
    s = state_of(angle_encode(x, axis))
    singles = [oracles.single(axis, v) @ np.array([1, 0]) for v in x]
    product = singles[0]
    for v in singles[1:]:
        product = np.kron(v, product)  # qubit i+1 is more significant
    np.testing.assert_allclose(s, product, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(x=st.lists(angles, min_size=3, max_size=3), y=st.lists(angles, min_size=3, max_size=3))
def test_zz_permutation_consistency(x, y):
    def fid(a, b):
        return abs(np.vdot(state_of(zz_feature_map(a, 2)), state_of(zz_feature_map(b, 2)))) ** 2

    perm = [2, 1, 0]
    assert abs(fid(x, y) - fid([x[p] for p in perm], [y[p] for p in perm])) < 1e-10


@pytest.mark.parametrize("spec", [FeatureMapSpec("ZZ", 2), FeatureMapSpec("ZZ", 1),
                                  FeatureMapSpec("ANGLE", rotation_axis="RX")])
def test_encode_batch_matches_circuits(spec):
    rng = np.random.default_rng(1)
    X = rng.uniform(0, np.pi, size=(7, 3))
    batch = encode_batch(X, spec)
    for row, got in zip(X, batch):
        circ = zz_feature_map(row, spec.reps) if spec.kind == "ZZ" else angle_encode(row, spec.rotation_axis)
        np.testing.assert_allclose(got, state_of(circ), atol=1e-13)
