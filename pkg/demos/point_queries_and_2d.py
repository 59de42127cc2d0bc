"""Two shorter tours: swap-test point queries (read one function value
without tomography of the whole state) and the 2D readout pipeline.

Run with:  python demos/point_queries_and_2d.py
"""

import numpy as np

import fsrlab


def point_queries():
    N = 1024
    gf = fsrlab.sample(fsrlab.f2(), 1.0, N)
    print(f"swap-test point queries, exp(-(x-1/2)^2/0.02) on {N} points")
    # the full-register overlap is f(x)/A ~ 1/sqrt(N), so at this shot count
    # its estimate is visibly noisy; the truncated variant concentrates the
    # comparison on M coefficients and is far more shot-efficient

    for x in (0.25, 0.5, 0.61):
        truth = abs(fsrlab.evaluate(fsrlab.f2(), x))
        full = fsrlab.fqfsr_exact(gf, x, 200000, seed=0)
        trunc = fsrlab.fqfsr_approx(gf, x, 5, 200000, seed=0)
        print(f"  x={x:4.2f}: truth {truth:.4f}   full-register {full.value:.4f}"
              f"   m=5 truncated {trunc.value:.4f} (C_M={trunc.C_M:.3f})")


def two_dimensional():
    N = 64
    gf = fsrlab.sample(fsrlab.f4(), 1.0, (N, N))
    print(f"\n2D readout, cos(2 pi x) cos(2 pi y) gaussian-bump mix on {N}x{N}")
    fr, rec = fsrlab.fsr_readout_2d(gf, 4, 4, 100000, 100000, seed=0)
    rsr = fsrlab.rsr_readout_2d(gf, 200000, seed=0)
    print(f"  fsr (M=16x16) rmse {rec.rmse:.3e}")
    print(f"  rsr same budget rmse {rsr.rmse:.3e}")
    mr, arec = fsrlab.fsr_adaptive_2d(gf, 100000, seed=1, margin=4)
    print(f"  adaptive picked M = {mr.M_per_dim} with rmse {arec.rmse:.3e}")


if __name__ == "__main__":
    point_queries()
    two_dimensional()
