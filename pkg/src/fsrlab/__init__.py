"""Readout toolkit for amplitude-encoded functions on a statevector simulator.

Real-space readout histograms the state directly; Fourier-space readout
applies an even extension and inverse QFT so that a handful of real Fourier
coefficients reconstruct the function everywhere.  The package also carries
the swap-test overlap variant, 2D pipelines, classical oracles, decay/error
bounds, and a CSV-producing experiment CLI.
"""

from .analysis import (BoundInputs, CoefficientSet, coeff_decay_bound,
                       decay_constant, dft_oracle, l2ns, rmse, shots_bound,
                       truncation_error_bound)
from .experiments import ExperimentConfig, SweepRecord, render_data, run, sweep
from .functions import FunctionSpec, GridFunction, evaluate, f1, f2, f3, f4, sample
from .multidim import (MultiFourierReadout, fsr_adaptive_2d, fsr_magnitudes_2d,
                       fsr_readout_2d, fsr_signs_2d, reconstruct_2d,
                       rsr_readout_2d)
from .overlap import OverlapEstimate, fqfsr_approx, fqfsr_exact
from .readout import (FourierReadout, Reconstruction, adaptive_m, fsr_adaptive,
                      fsr_magnitudes, fsr_readout, fsr_signs, reconstruct_1d,
                      recover_A, resolve_signs, rsr_postprocess, rsr_readout)
from .statevector import CapacityError, ShotHistogram, StateVector

__all__ = [
    "BoundInputs", "CapacityError", "CoefficientSet", "ExperimentConfig",
    "FourierReadout", "FunctionSpec", "GridFunction", "MultiFourierReadout",
    "OverlapEstimate", "Reconstruction", "ShotHistogram", "StateVector",
    "SweepRecord", "adaptive_m", "coeff_decay_bound", "decay_constant",
    "dft_oracle", "evaluate", "f1", "f2", "f3", "f4", "fqfsr_approx",
    "fqfsr_exact", "fsr_adaptive", "fsr_adaptive_2d", "fsr_magnitudes",
    "fsr_magnitudes_2d", "fsr_readout", "fsr_readout_2d", "fsr_signs",
    "fsr_signs_2d", "l2ns", "reconstruct_1d", "reconstruct_2d", "recover_A",
    "render_data", "resolve_signs", "rmse", "rsr_postprocess", "rsr_readout",
    "rsr_readout_2d", "run", "sample", "shots_bound", "sweep",
    "truncation_error_bound",
]

__version__ = "0.1.0"
