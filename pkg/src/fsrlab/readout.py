"""1D readout pipelines: real-space readout (plain and post-processed) and
Fourier-space readout (magnitude circuit, sign circuit, adaptive truncation,
cosine-series reconstruction).

Every sampled operation accepts ``statevector=True`` to replace shot sampling
with the exact outcome probabilities, isolating truncation error from shot
noise.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import statevector as sv
from .analysis import l2ns, rmse
from .functions import GridFunction

# delta stand-in for exact-probability runs: sign flips exactly at c < 0
EXACT_DELTA = 1e-12


def _seed_seq(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


@dataclass(frozen=True)
class FourierReadout:
    """Estimated truncated Fourier data of one readout run."""
    M: int
    d: np.ndarray          # magnitude estimates, length M
    e: np.ndarray          # shifted-magnitude estimates, length M
    g: np.ndarray          # 2e - d - 1/sqrt(M)
    signs: np.ndarray      # +-1, length M
    coeffs: np.ndarray     # signs * d
    delta: float
    N_sum: int
    N_shot1: int
    N_shot2: int
    N_iter: int


@dataclass(frozen=True)
class Reconstruction:
    points: np.ndarray
    values: np.ndarray
    method: str
    rmse: float | None = None
    l2ns: float | None = None

    def with_metrics(self, truth, A: float) -> "Reconstruction":
        return replace(self, rmse=rmse(self.values, truth),
                       l2ns=l2ns(self.values, truth, A))


def _require_1d(gf: GridFunction):
    if gf.dims != 1:
        raise ValueError("this pipeline handles 1D grid functions only")


def _counts_vector(hist: sv.ShotHistogram, size: int) -> np.ndarray:
    vec = np.zeros(size)
    for key, count in hist.counts.items():
        if key < size:
            vec[key] = count
    return vec


# -- real space readout --

def rsr_readout(gf: GridFunction, n_shot: int, seed=None,
                statevector: bool = False) -> Reconstruction:
    """Histogram all qubits in the Z basis; values are A * sqrt(frequency).

    Magnitude-only by construction: sign-changing functions come out as |f|.
    """
    _require_1d(gf)
    (N,) = gf.N_per_dim
    n = int(np.log2(N))
    state = sv.load_amplitudes(sv.init_basis(n), gf.samples)
    x = gf.grid()[0]
    if statevector:
        values = gf.A * np.abs(state.amp.real)
    elif n_shot == 0:
        values = np.zeros(N)
    else:
        hist = sv.sample_shots(state, n_shot, seed)
        values = gf.A * np.sqrt(_counts_vector(hist, N) / n_shot)
    rec = Reconstruction(x, values, "rsr")
    return rec.with_metrics(gf.samples, gf.A)


def rsr_postprocess(rec: Reconstruction, cutoff: int,
                    truth=None, A: float | None = None) -> Reconstruction:
    """Low-pass the full-grid RSR values: FFT, zero bins with
    min(k, N-k) >= cutoff, inverse FFT, real part."""
    N = len(rec.values)
    if cutoff > N // 2:
        raise ValueError(f"cutoff {cutoff} exceeds N/2 = {N // 2}")
    spec = np.fft.fft(rec.values)
    k = np.arange(N)
    spec[np.minimum(k, N - k) >= cutoff] = 0.0
    out = Reconstruction(rec.points, np.fft.ifft(spec).real, "rsr-post")
    if truth is not None and A is not None:
        out = out.with_metrics(truth, A)
    return out


# -- Fourier space readout circuits --

def fourier_state(gf: GridFunction) -> sv.StateVector:
    """Even extension followed by the inverse QFT over all n+1 qubits; the
    amplitudes are the (real) Fourier coefficients of the extended samples."""
    _require_1d(gf)
    (N,) = gf.N_per_dim
    n = int(np.log2(N))
    state = sv.apply_even_extension(gf.samples, n)
    return sv.apply_inverse_qft(state, 0, n + 1)


def fsr_magnitudes(gf: GridFunction, m: int, n_shot1: int, seed=None,
                   statevector: bool = False) -> np.ndarray:
    """Magnitude circuit: d_j ~ |c_j| for j < M = 2**m, from shots whose top
    n-m+1 bits post-select to zero.  The denominator is the total shot count
    because |c_j|^2 is an unconditional outcome probability."""
    (N,) = gf.N_per_dim
    n = int(np.log2(N))
    if m > n:
        raise ValueError(f"m={m} exceeds register size n={n}")
    M = 2 ** m
    state = fourier_state(gf)
    if statevector:
        return np.abs(state.amp[:M])
    hist = sv.sample_shots(state, n_shot1, seed)
    return np.sqrt(_counts_vector(hist, M) / max(n_shot1, 1))


def sign_circuit_state(gf: GridFunction, m: int, form: str = "right") -> sv.StateVector:
    """The coefficient-shift circuit on n+2 qubits (extension register plus
    one mixing ancilla on top).

    "left": controlled inverse QFT plus an open-controlled H block on the low
    m qubits.  "right": uncontrolled inverse QFT plus an open-controlled H
    block on the top n-m+1 register qubits.  Both produce amplitudes
    (1/2)(c_j + 1/sqrt(M)) on the post-selected block.
    """
    _require_1d(gf)
    (N,) = gf.N_per_dim
    n = int(np.log2(N))
    if m > n:
        raise ValueError(f"m={m} exceeds register size n={n}")
    anc = n + 1
    ext = sv.apply_even_extension(gf.samples, n)

    def controlled_extension(sub: sv.StateVector) -> sv.StateVector:
        coeff = sub.amp[0]
        if np.linalg.norm(sub.amp[1:]) > 1e-9 * max(1.0, abs(coeff)):
            raise ValueError("extension branch is not a |0...0> ray")
        return sv.StateVector(sub.q, coeff * ext.amp)

    state = sv.init_basis(n + 2)
    state = sv.apply_hadamard(state, anc)
    state = sv.apply_controlled(state, anc, controlled_extension)
    if form == "left":
        state = sv.apply_controlled(state, anc, lambda s: sv.apply_inverse_qft(s, 0, n + 1))
        state = sv.apply_controlled(state, anc, lambda s: sv.apply_hadamard_range(s, 0, m),
                                    open_control=True)
    elif form == "right":
        state = sv.apply_inverse_qft(state, 0, n + 1)
        state = sv.apply_controlled(state, anc,
                                    lambda s: sv.apply_hadamard_range(s, m, n + 1 - m),
                                    open_control=True)
    else:
        raise ValueError(f"unknown circuit form {form!r}")
    return sv.apply_hadamard(state, anc)


def fsr_signs(gf: GridFunction, m: int, n_shot2: int, n_iter: int = 1, seed=None,
              statevector: bool = False, form: str = "right"):
    """Sign circuit: e_j ~ (1/2)|c_j + 1/sqrt(M)|, averaged over n_iter runs.

    Returns (e, N_sum) with N_sum the post-selected count of the last run
    (n_shot2 in statevector mode, where nothing is discarded conceptually).
    """
    M = 2 ** m
    state = sign_circuit_state(gf, m, form=form)
    if statevector:
        return np.abs(state.amp[:M]), n_shot2
    seeds = _seed_seq(seed).spawn(n_iter)
    e_sum = np.zeros(M)
    n_sum = 0
    for s in seeds:
        hist = sv.sample_shots(state, n_shot2, s)
        counts = _counts_vector(hist, M)
        e_sum += np.sqrt(counts / max(n_shot2, 1))
        n_sum = int(counts.sum())
    return e_sum / n_iter, n_sum


def resolve_signs(d, e, delta: float):
    """Sign rule: g = 2e - d - 1/sqrt(M); negative iff g <= -delta
    (the boundary g = -delta counts as negative)."""
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    if d.shape != e.shape:
        raise ValueError("d and e must have equal length")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    M = len(d)
    g = 2.0 * e - d - 1.0 / np.sqrt(M)
    signs = np.where(g > -delta, 1.0, -1.0)
    return g, signs, signs * d


def default_delta(n_sum: int) -> float:
    """delta = 2/sqrt(N_sum); all-plus fallback when nothing post-selected."""
    return 2.0 / np.sqrt(n_sum) if n_sum > 0 else np.inf


def reconstruct_1d(coeffs, A: float, N: int, L: float, points) -> Reconstruction:
    """Cosine-series reconstruction f(x) ~ (A/sqrt(N)) (c_0 + 2 sum c_k cos(k pi x / L)).

    The extension doubles the period, which the cos(k pi x / L) argument
    already encodes.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return Reconstruction(points, np.zeros(0), "fsr")
    k = np.arange(1, len(coeffs))
    values = coeffs[0] + 2.0 * np.cos(np.pi * np.outer(points, k) / L) @ coeffs[1:]
    return Reconstruction(points, A / np.sqrt(N) * values, "fsr")


def recover_A(value: float, x_star: float, coeffs, N: int, L: float) -> float:
    """Normalization from a single known function value f(x*)."""
    coeffs = np.asarray(coeffs, dtype=float)
    k = np.arange(1, len(coeffs))
    series = coeffs[0] + 2.0 * np.dot(np.cos(np.pi * k * x_star / L), coeffs[1:])
    if abs(series) < 1e-12:
        raise ValueError("reconstruction series vanishes at x*; pick another point")
    return float(np.sqrt(N) * value / series)


def fsr_readout(gf: GridFunction, m: int, n_shot1: int = 0, n_shot2: int = 0,
                n_iter: int = 1, seed=None, delta: float | None = None,
                statevector: bool = False, points=None):
    """Fixed-M FSR pipeline: magnitudes, signs, reconstruction, metrics.

    Returns (FourierReadout, Reconstruction); metrics are filled when the
    reconstruction points are the native grid.
    """
    _require_1d(gf)
    (N,) = gf.N_per_dim
    (L,) = gf.L
    M = 2 ** m
    seeds = _seed_seq(seed).spawn(2)
    d = fsr_magnitudes(gf, m, n_shot1, seeds[0], statevector=statevector)
    e, n_sum = fsr_signs(gf, m, n_shot2, n_iter, seeds[1], statevector=statevector)
    if delta is None:
        delta = EXACT_DELTA if statevector else default_delta(n_sum)
    if not statevector and n_sum == 0:
        warnings.warn("sign circuit retained no shots; defaulting all signs to +",
                      stacklevel=2)
    g, signs, coeffs = resolve_signs(d, e, 0.0 if np.isinf(delta) else delta)
    if np.isinf(delta):
        signs = np.ones(M)
        coeffs = d.copy()
    readout = FourierReadout(M, d, e, g, signs, coeffs, delta, n_sum,
                             n_shot1, n_shot2, n_iter)
    on_grid = points is None
    pts = gf.grid()[0] if on_grid else np.asarray(points, dtype=float)
    rec = reconstruct_1d(coeffs, gf.A, N, L, pts)
    if on_grid:
        rec = rec.with_metrics(gf.samples, gf.A)
    return readout, rec


# -- adaptive truncation --

def adaptive_m(d_full, N: int, margin: int = 0) -> int:
    """Truncation from the highest observed nonzero magnitude index.

    With a positive margin, isolated single-shot indices (no nonzero neighbor
    within `margin` on either side) are ignored.  Returns a power of two
    clamped to [1, N].
    """
    d_full = np.asarray(d_full, dtype=float)
    if len(d_full) != N:
        raise ValueError(f"expected {N} magnitudes, got {len(d_full)}")
    nonzero = d_full != 0.0
    k0 = -1
    for k in np.flatnonzero(nonzero)[::-1]:
        if margin == 0:
            k0 = int(k)
            break
        lo, hi = max(k - margin, 0), min(k + margin, N - 1)
        window = np.concatenate([nonzero[lo:k], nonzero[k + 1:hi + 1]])
        if window.any() or k == 0:
            k0 = int(k)
            break
    if k0 < 0:
        warnings.warn("no nonzero magnitudes observed; falling back to M=1",
                      stacklevel=2)
        return 1
    return int(min(max(2 ** int(np.ceil(np.log2(k0 + 1))), 1), N))


def fsr_adaptive(gf: GridFunction, n_shot: int, seed=None, margin: int = 0,
                 delta: float | None = None, statevector: bool = False,
                 points=None, n_iter: int = 1):
    """Shot-budget-adaptive FSR: one full-resolution magnitude run picks M,
    then the sign circuit runs at that M.

    Returns (FourierReadout, Reconstruction).
    """
    _require_1d(gf)
    (N,) = gf.N_per_dim
    (L,) = gf.L
    n = int(np.log2(N))
    seeds = _seed_seq(seed).spawn(2)
    state = fourier_state(gf)
    if statevector:
        d_full = np.abs(state.amp[:N])
        d_full[d_full < 1e-12] = 0.0
    else:
        hist = sv.sample_shots(state, n_shot, seeds[0])
        d_full = np.sqrt(_counts_vector(hist, N) / max(n_shot, 1))
    M = adaptive_m(d_full, N, margin=margin)
    m = int(np.log2(M))
    d = d_full[:M]
    e, n_sum = fsr_signs(gf, m, n_shot, n_iter, seeds[1], statevector=statevector)
    if delta is None:
        delta = EXACT_DELTA if statevector else default_delta(n_sum)
    g, signs, coeffs = resolve_signs(d, e, 0.0 if np.isinf(delta) else delta)
    if np.isinf(delta):
        signs = np.ones(M)
        coeffs = d.copy()
    readout = FourierReadout(M, d, e, g, signs, coeffs, delta, n_sum,
                             n_shot, n_shot, n_iter)
    on_grid = points is None
    pts = gf.grid()[0] if on_grid else np.asarray(points, dtype=float)
    rec = reconstruct_1d(coeffs, gf.A, N, L, pts)
    rec = replace(rec, method="fsr-adaptive")
    if on_grid:
        rec = rec.with_metrics(gf.samples, gf.A)
    return readout, rec
