import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmeasure.errors import DegenerateBranchError, InputError
from qmeasure.statevec import (StateVector, basis_state, embed, factor_out, fidelity,
                               from_amplitudes, from_json, kron, normalize, permute_qubits,
                               project, random_state, to_json)

from conftest import projector, vec

seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(1, 5)


def test_basis_state_index_convention():
    assert basis_state(1, "0").amps.tolist() == [1, 0]
    assert np.flatnonzero(basis_state(2, "11").amps).tolist() == [3]
    assert np.flatnonzero(basis_state(3, "010").amps).tolist() == [2]
    assert np.flatnonzero(basis_state(3, [1, 0, 0]).amps).tolist() == [4]


def test_basis_state_length_mismatch():
    with pytest.raises(InputError):
        basis_state(3, "01")
    with pytest.raises(InputError):
        basis_state(2, "0a")


def test_construction_checks():
    with pytest.raises(InputError):
        StateVector([1, 1])
    with pytest.raises(InputError):
        StateVector([1, 0, 0])
    with pytest.raises(InputError):
        StateVector([np.nan, 1])
    with pytest.raises(InputError):
        basis_state(21)
    s = basis_state(2)
    with pytest.raises(ValueError):
        s.amps[0] = 0


def test_project_examples():
    p, n2 = project(basis_state(1, "0"), 0, 0)
    assert n2 == 1.0 and p == basis_state(1, "0")

    bell = vec(1, 0, 0, 1)
    p, n2 = project(bell, 0, 1)
    assert n2 == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(p.amps, [0, 0, 0, 1 / np.sqrt(2)])

    # (3/5)|0>|+> + (4/5)|1>|->
    s = StateVector(np.array([3, 3, 4, -4]) / (5 * np.sqrt(2)))
    _, n2 = project(s, 0, 1)
    assert n2 == pytest.approx(0.64, abs=1e-12)


def test_project_range_check():
    with pytest.raises(InputError):
        project(basis_state(2), 2, 0)


def test_normalize_examples():
    assert normalize(StateVector.unnormalized([2, 0])) == basis_state(1, "0")
    n = normalize(StateVector.unnormalized([0, 1, 1, 0]))
    assert np.allclose(n.amps, np.array([0, 1, 1, 0]) / np.sqrt(2))
    with pytest.raises(DegenerateBranchError):
        normalize(StateVector.unnormalized([0, 0]))


def test_fidelity_examples():
    zero, one = basis_state(1, "0"), basis_state(1, "1")
    assert fidelity(zero, zero) == 1.0
    assert fidelity(zero, one) == 0.0
    for theta in np.linspace(0, 2 * np.pi, 7):
        assert fidelity(zero, StateVector([np.exp(1j * theta), 0])) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(InputError):
        fidelity(zero, basis_state(2))


@settings(max_examples=60, deadline=None)
@given(seeds, sizes, st.data())
def test_projector_completeness_idempotence_orthogonality(seed, n, data):
    s = random_state(n, np.random.default_rng(seed))
    q = data.draw(st.integers(0, n - 1))
    p0, n0 = project(s, q, 0)
    p1, n1 = project(s, q, 1)
    assert abs(n0 + n1 - 1) < 1e-10
    again, _ = project(p0, q, 0)
    assert np.array_equal(again.amps, p0.amps)
    cross, c2 = project(p0, q, 1)
    assert c2 == 0.0 and not np.any(cross.amps)
    # agrees with an explicit projector matrix
    assert np.allclose(p1.amps, projector(n, q, 1) @ s.amps, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(seeds, sizes, st.floats(0, 2 * np.pi))
def test_fidelity_symmetric_and_phase_invariant(seed, n, theta):
    rng = np.random.default_rng(seed)
    a, b = random_state(n, rng), random_state(n, rng)
    assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-14)
    b_phase = StateVector(b.amps * np.exp(1j * theta))
    assert fidelity(a, b_phase) == pytest.approx(fidelity(a, b), abs=1e-12)


def test_kron_permute_embed():
    a, b = basis_state(1, "1"), vec(1, 1)
    ab = kron(a, b)
    assert np.allclose(ab.amps, [0, 0, 1 / np.sqrt(2), 1 / np.sqrt(2)])
    ba = permute_qubits(ab, [1, 0])
    assert np.allclose(ba.amps, kron(b, a).amps)
    e = embed(basis_state(1, "1"), 3, [2])
    assert e == basis_state(3, "001")
    e = embed(basis_state(2, "10"), 3, [2, 0])
    assert e == basis_state(3, "001")


def test_factor_out_product_and_entangled(rng):
    a, b = random_state(1, rng), random_state(2, rng)
    s = kron(a, b)
    assert fidelity(factor_out(s, [0]), a) == pytest.approx(1, abs=1e-12)
    assert fidelity(factor_out(s, [1, 2]), b) == pytest.approx(1, abs=1e-12)
    with pytest.raises(InputError):
        factor_out(vec(1, 0, 0, 1), [0])


def test_json_roundtrip(rng):
    s = random_state(3, rng)
    assert from_json(to_json(s)) == s
    with pytest.raises(InputError):
        from_json({"n_qubits": 2, "amps": [[1, 0]]})


def test_from_amplitudes():
    assert np.allclose(from_amplitudes([3, 4]).amps, [0.6, 0.8])
