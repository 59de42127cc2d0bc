"""Shot-count and grid-size scaling of the two readout methods.

Reproduces the two headline trends with the experiment runner: real-space
readout error grows like sqrt(N) and shrinks like 1/sqrt(N_shot), while the
Fourier-space error is N-independent and saturates at the truncation floor.

Run with:  python demos/scaling_study.py
"""

import numpy as np

from fsrlab import experiments as ex


def fit(records):
    xs = np.log([r.axis_value for r in records])
    ys = np.log([r.rmse for r in records])
    return np.polyfit(xs, ys, 1)[0]


def main():
    shots = [10000, 40000, 160000, 640000]

    print("shot sweep on f2, N = 1024 (median over 3 seeds):")
    for method, extra in [("rsr", []), ("fsr", ["M=64"])]:
        cfg = ex.parse_config([f"method={method}", "function=f2", "N=1024",
                               "seeds=0,1,2", *extra])
        records, slope = ex.sweep(cfg, "n_shot", shots)
        print(f"  {method:3s}: slope {slope:+.2f}", end="")
        for s in shots:
            rows = [r.rmse for r in records if r.axis_value == s]
            print(f"   {np.median(rows):.2e}", end="")
        print()

    print("\ngrid-size sweep at n_shot = 160000, single seed:")
    ns = [256, 1024, 4096, 16384]
    for method, extra in [("rsr", []), ("fsr", ["M=64"])]:
        cfg = ex.parse_config([f"method={method}", "function=f1",
                               "n-shot=160000", "seeds=0", *extra])
        records, slope = ex.sweep(cfg, "N", ns)
        rmses = "  ".join(f"{r.rmse:.2e}" for r in records)
        print(f"  {method:3s}: slope {slope:+.2f}   {rmses}")

    print("\nstatevector truncation floor (no shot noise), f1:")
    cfg = ex.parse_config(["method=fsr", "function=f1", "N=4096",
                           "statevector=1", "seeds=0"])
    records, slope = ex.sweep(cfg, "M", [8, 32, 128, 512])
    for r in records:
        print(f"  M={r.axis_value:4d}  rmse {r.rmse:.2e}")
    print(f"  slope {slope:+.2f}  (theory: -3/2 for a C^1 function)")


if __name__ == "__main__":
    main()
