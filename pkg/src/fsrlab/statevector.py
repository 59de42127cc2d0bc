"""Exact statevector engine.

Little-endian convention throughout: qubit 0 is the least-significant bit of
the basis index, so an ancilla appended "on top" of an n-qubit register is
qubit n and contributes 2**n to the index.

All gate functions are pure: they take a StateVector and return a new one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 24


class CapacityError(ValueError):
    """Requested register exceeds the configured qubit cap."""


@dataclass(frozen=True)
class StateVector:
    q: int
    amp: np.ndarray  # complex, length 2**q

    def __post_init__(self):
        if len(self.amp) != 2 ** self.q:
            raise ValueError(f"amplitude length {len(self.amp)} != 2**{self.q}")

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amp) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))


@dataclass(frozen=True)
class ShotHistogram:
    counts: dict  # basis index -> count
    total: int
    seed: int | None
    q: int


def init_basis(q: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    """All-zeros computational basis state on q qubits."""
    if q < 1:
        raise ValueError(f"need at least one qubit, got q={q}")
    if q > max_qubits:
        raise CapacityError(f"q={q} exceeds cap of {max_qubits} qubits")
    amp = np.zeros(2 ** q, dtype=np.complex128)
    amp[0] = 1.0
    return StateVector(q, amp)


def load_amplitudes(state: StateVector, values) -> StateVector:
    """Normalize real values into the low part of the register (the rest stays 0).

    Realizes the state-preparation oracle by direct initialization; `values`
    may fill the whole register or a power-of-two prefix of it.
    """
    values = np.asarray(values, dtype=float).ravel()
    k = len(values)
    if k > len(state.amp) or k & (k - 1):
        raise ValueError(f"values length {k} does not fit a {state.q}-qubit register")
    norm = np.linalg.norm(values)
    if norm == 0.0:
        raise ValueError("cannot normalize a zero vector")
    amp = np.zeros_like(state.amp)
    amp[:k] = values / norm
    return StateVector(state.q, amp)


def _check_range(state: StateVector, lo: int, width: int):
    if width < 1 or lo < 0 or lo + width > state.q:
        raise ValueError(f"qubit range [{lo}, {lo + width}) invalid for q={state.q}")


def _split(amp: np.ndarray, q: int, lo: int, width: int) -> np.ndarray:
    # axes: (high bits, target sub-register, low bits)
    return amp.reshape(2 ** (q - lo - width), 2 ** width, 2 ** lo)


def apply_inverse_qft(state: StateVector, lo: int, width: int) -> StateVector:
    """Inverse QFT on the contiguous qubit range [lo, lo+width).

    Maps amplitudes a_k -> b_j = (1/sqrt(K)) sum_k a_k exp(-i 2pi k j / K)
    over the K = 2**width sub-basis, independently for every setting of the
    remaining qubits.  This sign convention makes the post-circuit amplitudes
    the quantum Fourier coefficients directly.
    """
    _check_range(state, lo, width)
    K = 2 ** width
    blocks = _split(state.amp, state.q, lo, width)
    out = np.fft.fft(blocks, axis=1) / np.sqrt(K)
    return StateVector(state.q, out.reshape(-1))


def apply_qft(state: StateVector, lo: int, width: int) -> StateVector:
    """Forward QFT: the adjoint of apply_inverse_qft."""
    _check_range(state, lo, width)
    K = 2 ** width
    blocks = _split(state.amp, state.q, lo, width)
    out = np.fft.ifft(blocks, axis=1) * np.sqrt(K)
    return StateVector(state.q, out.reshape(-1))


def apply_hadamard(state: StateVector, qubit: int) -> StateVector:
    _check_range(state, qubit, 1)
    blocks = _split(state.amp, state.q, qubit, 1)
    out = np.empty_like(blocks)
    r = 1.0 / np.sqrt(2.0)
    out[:, 0, :] = r * (blocks[:, 0, :] + blocks[:, 1, :])
    out[:, 1, :] = r * (blocks[:, 0, :] - blocks[:, 1, :])
    return StateVector(state.q, out.reshape(-1))


def apply_hadamard_range(state: StateVector, lo: int, width: int) -> StateVector:
    out = state
    for t in range(lo, lo + width):
        out = apply_hadamard(out, t)
    return out


def apply_pauli_z(state: StateVector, qubit: int) -> StateVector:
    _check_range(state, qubit, 1)
    blocks = _split(state.amp, state.q, qubit, 1).copy()
    blocks[:, 1, :] *= -1.0
    return StateVector(state.q, blocks.reshape(-1))


def apply_global_phase(state: StateVector, phase: float) -> StateVector:
    """Scalar phase factor exp(i*phase); kept explicit so controlled embeddings
    of phase-bearing subcircuits stay correct."""
    return StateVector(state.q, state.amp * np.exp(1j * phase))


def apply_fanout_cnot(state: StateVector, control: int, targets) -> StateVector:
    """CNOT fan-out: flip every target bit on the control=1 subspace."""
    targets = list(targets)
    if control in targets:
        raise ValueError("control qubit overlaps target set")
    _check_range(state, control, 1)
    for t in targets:
        _check_range(state, t, 1)
    mask = 0
    for t in targets:
        mask |= 1 << t
    idx = np.arange(len(state.amp))
    src = np.where((idx >> control) & 1 == 1, idx ^ mask, idx)
    return StateVector(state.q, state.amp[src])


def apply_incrementer(state: StateVector, lo: int, width: int,
                      control: int | None = None) -> StateVector:
    """|k> -> |k+1 mod K> on the target sub-register, optionally controlled."""
    _check_range(state, lo, width)
    if control is not None and lo <= control < lo + width:
        raise ValueError("control qubit lies inside the incremented range")
    K = 2 ** width
    if control is None:
        blocks = _split(state.amp, state.q, lo, width)
        return StateVector(state.q, np.roll(blocks, 1, axis=1).reshape(-1))
    idx = np.arange(len(state.amp))
    k = (idx >> lo) & (K - 1)
    src_k = (k - 1) % K
    src = (idx & ~((K - 1) << lo)) | (src_k << lo)
    on = (idx >> control) & 1 == 1
    return StateVector(state.q, np.where(on, state.amp[src], state.amp))


def apply_modular_adder(state: StateVector, lo: int, width: int, shift: int) -> StateVector:
    """|k> -> |k+shift mod K> on the target sub-register."""
    _check_range(state, lo, width)
    K = 2 ** width
    if not 0 <= shift < K:
        raise ValueError(f"shift {shift} out of range [0, {K})")
    blocks = _split(state.amp, state.q, lo, width)
    return StateVector(state.q, np.roll(blocks, shift, axis=1).reshape(-1))


def apply_phase_poly(state: StateVector, lo: int, width: int,
                     k0: int, x: float, length: float) -> StateVector:
    """Diagonal phase exp(-i 2pi (k - k0) x / length) on sub-basis index k."""
    _check_range(state, lo, width)
    if not 0.0 <= x <= length:
        raise ValueError(f"x={x} outside domain [0, {length}]")
    K = 2 ** width
    k = np.arange(K)
    phases = np.exp(-2j * np.pi * (k - k0) * x / length)
    blocks = _split(state.amp, state.q, lo, width) * phases[None, :, None]
    return StateVector(state.q, blocks.reshape(-1))


def apply_swap_registers(state: StateVector, lo_a: int, lo_b: int, width: int) -> StateVector:
    """Exchange two equally sized, disjoint sub-registers."""
    _check_range(state, lo_a, width)
    _check_range(state, lo_b, width)
    if abs(lo_a - lo_b) < width:
        raise ValueError("registers overlap")
    mask = (1 << width) - 1
    idx = np.arange(len(state.amp))
    a = (idx >> lo_a) & mask
    b = (idx >> lo_b) & mask
    src = (idx & ~((mask << lo_a) | (mask << lo_b))) | (b << lo_a) | (a << lo_b)
    return StateVector(state.q, state.amp[src])


def apply_cswap_registers(state: StateVector, control: int,
                          lo_a: int, lo_b: int, width: int) -> StateVector:
    """Register-wise controlled swap (the swap-test workhorse)."""
    _check_range(state, control, 1)
    if lo_a <= control < lo_a + width or lo_b <= control < lo_b + width:
        raise ValueError("control qubit lies inside a swapped register")
    mask = (1 << width) - 1
    idx = np.arange(len(state.amp))
    a = (idx >> lo_a) & mask
    b = (idx >> lo_b) & mask
    src = (idx & ~((mask << lo_a) | (mask << lo_b))) | (b << lo_a) | (a << lo_b)
    on = (idx >> control) & 1 == 1
    return StateVector(state.q, np.where(on, state.amp[src], state.amp))


def apply_controlled(state: StateVector, control: int, inner, open_control=False) -> StateVector:
    """Apply `inner` on the subspace where the control bit is 1 (or 0 if open).

    `inner` is a callable StateVector -> StateVector acting on the (q-1)-qubit
    state with the control qubit removed; qubit indices above the control shift
    down by one inside `inner`.  In the circuits here the control is always the
    most-significant qubit, so inner indices coincide with the outer ones.
    """
    _check_range(state, control, 1)
    blocks = _split(state.amp, state.q, control, 1)
    branch = 0 if open_control else 1
    sub_amp = blocks[:, branch, :].reshape(-1).copy()
    sub = StateVector(state.q - 1, sub_amp)
    new_sub = inner(sub)
    if new_sub.q != state.q - 1:
        raise ValueError("controlled inner operation changed the qubit count")
    out = blocks.copy()
    out[:, branch, :] = new_sub.amp.reshape(blocks.shape[0], blocks.shape[2])
    return StateVector(state.q, out.reshape(-1))


def extension_circuit(state: StateVector, values, lo: int, n: int,
                      prepare: bool = True) -> StateVector:
    """The even-extension gate sequence on qubits [lo, lo+n] of `state`.

    Composes amplitude loading (when `prepare`), a Hadamard on the extension
    ancilla (qubit lo+n), the fan-out CNOT, and the controlled incrementer.
    With `prepare=False` this is the bare extension operator acting on an
    already loaded register (the multi-dimensional circuits need that form).
    """
    if prepare:
        values = np.asarray(values, dtype=float).ravel()
        if len(values) != 2 ** n:
            raise ValueError(f"expected 2**{n} samples, got {len(values)}")
        if lo != 0:
            raise ValueError("state preparation only supported at the low end")
        state = load_amplitudes(state, values)
    anc = lo + n
    state = apply_hadamard(state, anc)
    state = apply_fanout_cnot(state, anc, range(lo, lo + n))
    state = apply_incrementer(state, lo, n, control=anc)
    return state


def apply_even_extension(values, n: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    """Extend f on N=2**n points to its even reflection on 2N points.

    Returns (1/(sqrt(2) A_N)) (sum_j f(x_j)|j> + sum_j f(x_{N-j})|N+j>) on
    n+1 qubits, built from the literal gate sequence, not an index shortcut.
    The circuit assumes matching domain endpoints f(0)=f(L); a heuristic
    mismatch warning is emitted but nothing is enforced.
    """
    values = np.asarray(values, dtype=float).ravel()
    N = 2 ** n
    if len(values) != N:
        raise ValueError(f"expected {N} samples, got {len(values)}")
    vmax = np.max(np.abs(values))
    if vmax > 0 and abs(values[0] - values[-1]) > 10.0 * vmax / N:
        warnings.warn("samples look far from periodic at the endpoints; the even "
                      "extension assumes f(0)=f(L)", stacklevel=2)
    state = init_basis(n + 1, max_qubits=max_qubits)
    return extension_circuit(state, values, 0, n, prepare=True)


def apply_odd_extension(values, n: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    """Antisymmetric extension: even-extension circuit, then Pauli-Z on the
    ancilla and an explicit global phase of pi/2."""
    state = apply_even_extension(values, n, max_qubits=max_qubits)
    state = apply_pauli_z(state, state.q - 1)
    return apply_global_phase(state, np.pi / 2)


def sample_shots(state: StateVector, n_shot: int, seed) -> ShotHistogram:
    """n_shot i.i.d. Z-basis outcomes drawn in a single multinomial pass."""
    if n_shot < 0:
        raise ValueError("negative shot count")
    if n_shot == 0:
        return ShotHistogram({}, 0, seed, state.q)
    p = state.probabilities
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    vec = rng.multinomial(n_shot, p)
    nz = np.flatnonzero(vec)
    counts = {int(i): int(vec[i]) for i in nz}
    return ShotHistogram(counts, n_shot, seed, state.q)


def postselect(hist: ShotHistogram, positions, required):
    """Keep shots whose bits at `positions` equal `required`; re-key the rest.

    Returns (sub-histogram over the remaining bits, N_sum).  Remaining bits
    keep their relative order in the compacted keys.
    """
    positions = list(positions)
    required = list(required)
    if len(positions) != len(required):
        raise ValueError("positions and required bit values differ in length")
    for p in positions:
        if not 0 <= p < hist.q:
            raise ValueError(f"bit position {p} out of range for q={hist.q}")
    keep = [b for b in range(hist.q) if b not in positions]
    sub: dict = {}
    n_sum = 0
    for key, count in hist.counts.items():
        if any((key >> p) & 1 != r for p, r in zip(positions, required)):
            continue
        new_key = 0
        for i, b in enumerate(keep):
            new_key |= ((key >> b) & 1) << i
        sub[new_key] = sub.get(new_key, 0) + count
        n_sum += count
    return sub, n_sum
