"""Classical oracles, error metrics, and coefficient-decay bound calculators.

The DFT here is a deliberate O(K^2) direct evaluation so it stays independent
of the FFT-based circuit path it is used to check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functions import FunctionSpec, evaluate


@dataclass(frozen=True)
class CoefficientSet:
    """The three related Fourier coefficient families of one sampled function.

    quantum_k  = (1 / (sqrt(K) A)) sum_j f_j exp(-i 2pi k j / K)
    discrete_k = (A / sqrt(K)) quantum_k
    continuous_k (optional) by trapezoid quadrature of the analytic function.
    """
    K: int
    L: float
    A: float
    quantum: np.ndarray
    discrete: np.ndarray
    continuous: np.ndarray | None = None


def dft_oracle(samples, A: float | None = None, spec: FunctionSpec | None = None,
               L: float = 1.0, k_max: int | None = None,
               oversample: int = 8) -> CoefficientSet:
    """Direct double-sum DFT of real samples, plus quadrature continuous
    coefficients when an analytic spec is supplied.

    `k_max` limits how many continuous coefficients are computed (all K
    discrete/quantum coefficients are always returned).
    """
    samples = np.asarray(samples, dtype=float).ravel()
    K = len(samples)
    if K & (K - 1):
        raise ValueError("sample count must be a power of two")
    if A is None:
        A = float(np.linalg.norm(samples))
    k = np.arange(K)
    # O(K^2) direct evaluation: explicit exponential matrix, no FFT.
    E = np.exp(-2j * np.pi * np.outer(k, k) / K)
    quantum = E @ samples.astype(complex) / (np.sqrt(K) * A)
    discrete = A / np.sqrt(K) * quantum
    continuous = None
    if spec is not None:
        continuous = continuous_coefficients(spec, L, k_max if k_max is not None else K // 2,
                                             base_points=oversample * K)
    return CoefficientSet(K, L, A, quantum, discrete, continuous)


def continuous_coefficients(spec: FunctionSpec, L: float, k_max: int,
                            base_points: int = 4096, rtol: float = 1e-9) -> np.ndarray:
    """c_k = (1/L) int_0^L f(x) exp(-i 2pi k x / L) dx for k = 0..k_max,
    composite trapezoid with a Richardson step-halving check."""
    def quad(n):
        x = np.linspace(0.0, L, n + 1)
        fx = evaluate(spec, x)
        k = np.arange(k_max + 1)
        ker = np.exp(-2j * np.pi * np.outer(k, x) / L)
        w = np.full(n + 1, L / n)
        w[0] = w[-1] = L / (2 * n)
        return (ker * fx) @ w / L

    coarse = quad(base_points)
    fine = quad(2 * base_points)
    if np.max(np.abs(fine - coarse)) > max(rtol, rtol * np.max(np.abs(fine))):
        raise ValueError("quadrature did not converge; increase base_points")
    return fine


def rmse(values, truth) -> float:
    values = np.asarray(values, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if values.shape != truth.shape:
        raise ValueError(f"shape mismatch {values.shape} vs {truth.shape}")
    return float(np.sqrt(np.mean((values - truth) ** 2)))


def l2ns(values, truth, A: float) -> float:
    """l2 error of the unit-normalized solution: rmse * sqrt(N) / A."""
    values = np.asarray(values, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if values.shape != truth.shape:
        raise ValueError(f"shape mismatch {values.shape} vs {truth.shape}")
    return float(np.sqrt(np.sum(((values - truth) / A) ** 2)))


@dataclass(frozen=True)
class BoundInputs:
    """Smoothness data feeding the coefficient-decay and error bounds.

    p:               highest weak-derivative order available (>= 1)
    p0:              first order with a boundary jump (p >= p0 >= 1)
    boundary_jumps:  |f^(q)(L) - f^(q)(0)| for q = p0-1 .. p-1
    derivative_l1:   L1 norm of f^(p) on (0, L)
    piecewise_jump / piecewise_l1: optional V(f) and piecewise |f'| data for
                     the O(1/k) bound on merely piecewise-smooth functions.
    """
    p: int
    p0: int
    boundary_jumps: tuple
    derivative_l1: float
    L: float = 1.0
    piecewise_jump: float | None = None
    piecewise_l1: float | None = None

    def __post_init__(self):
        if not self.p >= self.p0 >= 1:
            raise ValueError("need p >= p0 >= 1")
        if len(self.boundary_jumps) != self.p - self.p0 + 1:
            raise ValueError("boundary_jumps must cover q = p0-1 .. p-1")


def coeff_decay_bound(b: BoundInputs, k: int) -> float:
    """Smallest applicable upper bound on |c_{k,c}|."""
    if k < 1:
        raise ValueError("decay bounds are defined for k >= 1 only")
    bounds = []
    if b.piecewise_jump is not None and b.piecewise_l1 is not None:
        bounds.append((b.piecewise_jump + b.piecewise_l1) / (2 * np.pi * k))
    smooth = 0.0
    for i, jump in enumerate(b.boundary_jumps):
        q = b.p0 - 1 + i
        smooth += (b.L / (2 * np.pi * k)) ** (q + 1) * jump / b.L
    smooth += (b.L / (2 * np.pi * k)) ** b.p * b.derivative_l1 / b.L
    bounds.append(smooth)
    return float(min(bounds))


def decay_constant(b: BoundInputs) -> tuple[float, int]:
    """(C, p0) with |c_{k,c}| <= C k^{-p0} for all k >= 1.

    Every term of the smoothness bound has a k-power >= p0, so replacing each
    power by p0 gives a valid k-independent prefactor.
    """
    C = 0.0
    for i, jump in enumerate(b.boundary_jumps):
        q = b.p0 - 1 + i
        C += (b.L / (2 * np.pi)) ** (q + 1) * jump / b.L
    C += (b.L / (2 * np.pi)) ** b.p * b.derivative_l1 / b.L
    if b.piecewise_jump is not None and b.piecewise_l1 is not None and b.p0 == 1:
        C = min(C, (b.piecewise_jump + b.piecewise_l1) / (2 * np.pi))
    return float(C), b.p0


def truncation_error_bound(b: BoundInputs, M: int, N: int, A: float) -> tuple[float, float]:
    """(rmse_bound, l2ns_bound) for dropping Fourier modes past M out of N/2."""
    if not 2 <= M <= N // 2:
        raise ValueError(f"need 2 <= M <= N/2, got M={M}, N={N}")
    C, p = decay_constant(b)
    tail = np.sqrt(1.0 / (M - 1) ** (2 * p - 1) - 1.0 / (N // 2) ** (2 * p - 1))
    rmse_bound = np.sqrt(2.0 / (2 * p - 1)) * C * tail
    return float(rmse_bound), float(rmse_bound * np.sqrt(N) / A)


def shots_bound(b: BoundInputs, M: int, n_shot: int, beta: float = 2.0,
                N: int | None = None, A: float | None = None) -> tuple[float, float]:
    """Combined truncation + sampling bound.

    l2ns_bound = 2 sqrt(C^2 M^{1-2p} + beta^2 M / n_shot); the rmse form
    carries the extra A/sqrt(N) prefactor and needs N, A.
    """
    if n_shot < 1:
        raise ValueError("need at least one shot")
    if beta <= 0:
        raise ValueError("beta must be positive")
    C, p = decay_constant(b)
    l2ns_bound = 2.0 * np.sqrt(C ** 2 * float(M) ** (1 - 2 * p) + beta ** 2 * M / n_shot)
    rmse_bound = None
    if N is not None and A is not None:
        rmse_bound = l2ns_bound * A / np.sqrt(N)
    return (float(rmse_bound) if rmse_bound is not None else float("nan"),
            float(l2ns_bound))
