"""Swap-test overlap readout: per-point function estimation from the overlap
of the Fourier-transformed input state with a phase-ramp reference state.

Two variants: the exact one compares full n-qubit registers (shot cost grows
with N), the approximate one compares only the m lowest qubits after a
modular-adder shift centers the dominant coefficients (cost grows with M).
Both return magnitudes; sign recovery is out of scope.

In statevector mode the success probability is evaluated through the exact
swap-test identity P(0) = (1 + |overlap|^2)/2 with the overlap computed at
amplitude level; squaring first and recovering the overlap from a sum of
probabilities would lose half the floating-point digits for near-zero
function values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import statevector as sv
from .functions import GridFunction


@dataclass(frozen=True)
class OverlapEstimate:
    x: float
    raw_p0: float          # post-selection success frequency
    overlap: float
    value: float           # reconstructed |f(x)|
    C_M: float | None = None   # dominant-mass estimate (approximate variant)
    clamped: bool = False      # overlap estimate went below 0 and was clamped


def _require_1d(gf: GridFunction):
    if gf.dims != 1:
        raise ValueError("overlap readout handles 1D grid functions only")


def _check_x(x: float, L: float):
    if not 0.0 <= x <= L:
        raise ValueError(f"x={x} outside domain [0, {L}]")


def _clamp_overlap(sq: float):
    if sq < 0.0:
        return 0.0, True
    return float(np.sqrt(sq)), False


def _phase_ramp(width: int, k0: int, x: float, L: float) -> np.ndarray:
    """Reference-register amplitudes: Hadamards then the polynomial phase gate."""
    state = sv.apply_hadamard_range(sv.init_basis(width), 0, width)
    state = sv.apply_phase_poly(state, 0, width, k0, x, L)
    return state.amp


def fqfsr_exact(gf: GridFunction, x: float, n_shot: int = 0, seed=None,
                statevector: bool = False) -> OverlapEstimate:
    """Full-register swap test: P(ancilla=0) = (1 + overlap^2)/2 with
    overlap = |<phi_x| QFT^dag |psi>|; value = A * overlap.

    At grid points x_j the overlap equals |f(x_j)|/A exactly.
    """
    _require_1d(gf)
    (N,) = gf.N_per_dim
    (L,) = gf.L
    n = int(np.log2(N))
    _check_x(x, L)
    phi = _phase_ramp(n, 0, x, L)
    if statevector:
        psi = sv.apply_inverse_qft(sv.load_amplitudes(sv.init_basis(n), gf.samples), 0, n)
        overlap = abs(np.vdot(phi, psi.amp))
        p0 = (1.0 + overlap ** 2) / 2.0
        return OverlapEstimate(x, p0, float(overlap), gf.A * float(overlap))
    else:
        q = 2 * n + 1
        anc = q - 1
        state = sv.load_amplitudes(sv.init_basis(q), gf.samples)
        state = sv.apply_inverse_qft(state, 0, n)
        state = sv.apply_hadamard_range(state, n, n)
        state = sv.apply_phase_poly(state, n, n, 0, x, L)
        state = sv.apply_hadamard(state, anc)
        state = sv.apply_cswap_registers(state, anc, 0, n, n)
        state = sv.apply_hadamard(state, anc)
        hist = sv.sample_shots(state, n_shot, seed)
        _, kept = sv.postselect(hist, [anc], [0])
        p0 = kept / max(n_shot, 1)
    overlap, clamped = _clamp_overlap(2.0 * p0 - 1.0)
    return OverlapEstimate(x, p0, overlap, gf.A * overlap, clamped=clamped)


def fqfsr_approx(gf: GridFunction, x: float, m: int, n_shot: int = 0, seed=None,
                 statevector: bool = False) -> OverlapEstimate:
    """Truncated swap test on m qubits after a modular-adder shift by M/2.

    P(top n-m input bits = 0 and ancilla = 0) = (C_M/2)(1 + overlap^2) with
    C_M the dominant coefficient mass, estimated from the top-register-zero
    rate alone; value = (A sqrt(M C_M) / sqrt(N)) * overlap.
    """
    _require_1d(gf)
    (N,) = gf.N_per_dim
    (L,) = gf.L
    n = int(np.log2(N))
    if m >= n:
        raise ValueError(f"need m < n, got m={m}, n={n}")
    _check_x(x, L)
    M = 2 ** m
    phi = _phase_ramp(m, M // 2, x, L)
    if statevector:
        psi = sv.load_amplitudes(sv.init_basis(n), gf.samples)
        psi = sv.apply_inverse_qft(psi, 0, n)
        psi = sv.apply_modular_adder(psi, 0, n, M // 2)
        block = psi.amp[:M]
        c_m = float(np.sum(np.abs(block) ** 2))
        if c_m <= 1e-20:  # exact zero up to accumulated rounding dust
            raise ValueError("dominant-coefficient block carries no mass")
        overlap = abs(np.vdot(phi, block)) / np.sqrt(c_m)
        p0 = (c_m / 2.0) * (1.0 + overlap ** 2)
        clamped = False
    else:
        q = n + m + 1
        anc = q - 1
        state = sv.load_amplitudes(sv.init_basis(q), gf.samples)
        state = sv.apply_inverse_qft(state, 0, n)
        state = sv.apply_modular_adder(state, 0, n, M // 2)
        state = sv.apply_hadamard_range(state, n, m)
        state = sv.apply_phase_poly(state, n, m, M // 2, x, L)
        state = sv.apply_hadamard(state, anc)
        state = sv.apply_cswap_registers(state, anc, 0, n, m)
        state = sv.apply_hadamard(state, anc)
        top_bits = list(range(m, n))
        hist = sv.sample_shots(state, n_shot, seed)
        _, kept_top = sv.postselect(hist, top_bits, [0] * len(top_bits))
        _, kept_both = sv.postselect(hist, top_bits + [anc], [0] * (len(top_bits) + 1))
        c_m = kept_top / max(n_shot, 1)
        p0 = kept_both / max(n_shot, 1)
        if c_m <= 0.0:
            raise ValueError("no shots retained the dominant-coefficient block; "
                             "cannot estimate C_M")
        overlap, clamped = _clamp_overlap(2.0 * p0 / c_m - 1.0)
    value = gf.A * np.sqrt(M * c_m / N) * overlap
    return OverlapEstimate(x, float(p0), float(overlap), float(value),
                           C_M=float(c_m), clamped=clamped)
