import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fsrlab import statevector as sv


def random_state(q, seed=0):
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=2 ** q) + 1j * rng.normal(size=2 ** q)
    return sv.StateVector(q, amp / np.linalg.norm(amp))


def test_init_basis():
    state = sv.init_basis(3)
    assert state.amp[0] == 1.0
    assert np.all(state.amp[1:] == 0.0)


def test_init_basis_capacity():
    with pytest.raises(sv.CapacityError):
        sv.init_basis(sv.MAX_QUBITS + 1)
    with pytest.raises(ValueError):
        sv.init_basis(0)


def test_load_amplitudes_prefix_and_normalization():
    state = sv.load_amplitudes(sv.init_basis(3), [3.0, 4.0])
    assert np.isclose(state.amp[0], 0.6)
    assert np.isclose(state.amp[1], 0.8)
    assert np.all(state.amp[2:] == 0.0)


def test_load_amplitudes_rejects_bad_lengths():
    with pytest.raises(ValueError):
        sv.load_amplitudes(sv.init_basis(2), [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        sv.load_amplitudes(sv.init_basis(2), np.zeros(4))


def test_inverse_qft_matches_direct_dft():
    # direct O(K^2) double loop, independent of the FFT implementation
    state = random_state(5, seed=1)
    out = sv.apply_inverse_qft(state, 0, 5)
    K = 32
    expected = np.array([sum(state.amp[k] * np.exp(-2j * np.pi * k * j / K)
                             for k in range(K)) for j in range(K)]) / np.sqrt(K)
    assert np.allclose(out.amp, expected, atol=1e-12)


def test_qft_inverse_qft_roundtrip():
    state = random_state(6, seed=2)
    back = sv.apply_qft(sv.apply_inverse_qft(state, 1, 4), 1, 4)
    assert np.allclose(back.amp, state.amp, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(2, 6), st.data())
def test_unitaries_preserve_norm(seed, q, data):
    state = random_state(q, seed=seed)
    op = data.draw(st.sampled_from(["qft", "h", "z", "fanout", "inc", "adder",
                                    "phase", "swap"]))
    if op == "qft":
        state = sv.apply_inverse_qft(state, 0, q)
    elif op == "h":
        state = sv.apply_hadamard(state, data.draw(st.integers(0, q - 1)))
    elif op == "z":
        state = sv.apply_pauli_z(state, data.draw(st.integers(0, q - 1)))
    elif op == "fanout":
        state = sv.apply_fanout_cnot(state, 0, range(1, q))
    elif op == "inc":
        state = sv.apply_incrementer(state, 0, q - 1, control=q - 1)
    elif op == "adder":
        state = sv.apply_modular_adder(state, 0, q, data.draw(st.integers(0, 2 ** q - 1)))
    elif op == "phase":
        state = sv.apply_phase_poly(state, 0, q, 2, 0.37, 1.0)
    else:
        state = sv.apply_swap_registers(state, 0, q // 2, q // 2)
    assert np.isclose(state.norm(), 1.0, atol=1e-12)


def test_hadamard_on_basis_state():
    state = sv.apply_hadamard(sv.init_basis(1), 0)
    assert np.allclose(state.amp, [1 / np.sqrt(2), 1 / np.sqrt(2)])


def test_fanout_cnot_flips_targets_on_control():
    state = sv.init_basis(3)
    amp = np.zeros(8, dtype=complex)
    amp[0b100] = 1.0   # control (qubit 2) set
    state = sv.StateVector(3, amp)
    out = sv.apply_fanout_cnot(state, 2, [0, 1])
    assert out.amp[0b111] == 1.0


def test_fanout_cnot_rejects_overlap():
    with pytest.raises(ValueError):
        sv.apply_fanout_cnot(sv.init_basis(3), 1, [1, 2])


def test_incrementer_cycles_basis():
    amp = np.zeros(4, dtype=complex)
    amp[3] = 1.0
    out = sv.apply_incrementer(sv.StateVector(2, amp), 0, 2)
    assert out.amp[0] == 1.0  # |3> -> |0> mod 4


def test_controlled_incrementer_leaves_control_zero_branch():
    state = random_state(3, seed=3)
    out = sv.apply_incrementer(state, 0, 2, control=2)
    assert np.allclose(out.amp[:4], state.amp[:4])
    assert np.allclose(out.amp[4:], np.roll(state.amp[4:], 1))


def test_modular_adder_is_roll():
    state = random_state(3, seed=4)
    out = sv.apply_modular_adder(state, 0, 3, 3)
    assert np.allclose(out.amp, np.roll(state.amp, 3))
    with pytest.raises(ValueError):
        sv.apply_modular_adder(state, 0, 3, 8)


def test_phase_poly_values():
    state = sv.StateVector(2, np.ones(4, dtype=complex) / 2)
    out = sv.apply_phase_poly(state, 0, 2, 1, 0.25, 1.0)
    k = np.arange(4)
    assert np.allclose(out.amp, 0.5 * np.exp(-2j * np.pi * (k - 1) * 0.25))
    with pytest.raises(ValueError):
        sv.apply_phase_poly(state, 0, 2, 0, 1.5, 1.0)


def test_swap_registers():
    state = random_state(4, seed=5)
    out = sv.apply_swap_registers(state, 0, 2, 2)
    view = state.amp.reshape(4, 4)
    assert np.allclose(out.amp.reshape(4, 4), view.T)


def test_cswap_registers_half_swaps():
    state = random_state(5, seed=6)
    out = sv.apply_cswap_registers(state, 4, 0, 2, 2)
    assert np.allclose(out.amp[:16], state.amp[:16])
    assert np.allclose(out.amp[16:].reshape(4, 4), state.amp[16:].reshape(4, 4).T)


def test_apply_controlled_open_and_closed():
    state = random_state(3, seed=7)
    flipped = sv.apply_controlled(state, 2, lambda s: sv.apply_pauli_z(s, 0))
    assert np.allclose(flipped.amp[:4], state.amp[:4])
    opened = sv.apply_controlled(state, 2, lambda s: sv.apply_pauli_z(s, 0),
                                 open_control=True)
    assert np.allclose(opened.amp[4:], state.amp[4:])


def test_apply_controlled_rejects_qubit_change():
    with pytest.raises(ValueError):
        sv.apply_controlled(random_state(3), 2, lambda s: sv.init_basis(3))


# -- extensions --

def test_even_extension_example():
    # worked example: f = (0, 1, 0, -1) doubles to its mirror image
    out = sv.apply_even_extension([0.0, 1.0, 0.0, -1.0], 2)
    expected = np.array([0, 1, 0, -1, 0, -1, 0, 1]) / (np.sqrt(2) * np.sqrt(2))
    assert np.allclose(out.amp, expected, atol=1e-12)


def test_odd_extension_example():
    out = sv.apply_odd_extension([0.0, 1.0, 0.0, -1.0], 2)
    expected = 1j * np.array([0, 1, 0, -1, 0, 1, 0, -1]) / 2
    assert np.allclose(out.amp, expected, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(1, 5))
def test_even_extension_symmetry(seed, n):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=2 ** n)
    values[0] = values[-1]  # matched endpoints keep the warning quiet
    if np.linalg.norm(values) < 1e-9:
        values[0] = values[-1] = 1.0
    out = sv.apply_even_extension(values, n)
    K = 2 ** (n + 1)
    idx = (K - np.arange(K)) % K
    assert np.allclose(out.amp, out.amp[idx], atol=1e-12)
    assert np.isclose(out.norm(), 1.0, atol=1e-12)


def test_even_extension_endpoint_warning():
    with pytest.warns(UserWarning, match="periodic"):
        sv.apply_even_extension(np.r_[np.zeros(15), 1.0], 4)


# -- sampling & post-selection --

def test_sample_shots_deterministic_and_consistent():
    state = sv.apply_even_extension([0.25, 0.0625, 0.0, 0.0625], 2)
    a = sv.sample_shots(state, 5000, 42)
    b = sv.sample_shots(state, 5000, 42)
    assert a.counts == b.counts
    assert sum(a.counts.values()) == 5000


def test_sample_shots_large_n_matches_probabilities():
    state = sv.load_amplitudes(sv.init_basis(2), [1.0, 2.0, 2.0, 4.0])
    hist = sv.sample_shots(state, 10 ** 7, 0)
    freq = np.array([hist.counts.get(i, 0) for i in range(4)]) / 1e7
    assert np.max(np.abs(freq - state.probabilities)) < 5 / np.sqrt(1e7)


def test_sample_shots_zero():
    hist = sv.sample_shots(sv.init_basis(2), 0, 0)
    assert hist.counts == {} and hist.total == 0


def test_postselect_rekeys_remaining_bits():
    hist = sv.ShotHistogram({0b101: 3, 0b001: 2, 0b111: 5}, 10, None, 3)
    sub, n_sum = sv.postselect(hist, [2], [1])
    assert n_sum == 8
    assert sub == {0b01: 3, 0b11: 5}


def test_postselect_all_rejected():
    hist = sv.ShotHistogram({0b11: 4}, 4, None, 2)
    sub, n_sum = sv.postselect(hist, [0, 1], [0, 0])
    assert sub == {} and n_sum == 0
