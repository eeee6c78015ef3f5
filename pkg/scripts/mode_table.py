"""Transform vs ODE oracle on separable problems, including a beam mode."""

import time

import numpy as np

from dskg.kernels import phi
from dskg.verify import mode_transform
from dskg.wave_oracles import ModeProblem, ode_oracle

T_GRID = np.linspace(0.0, 2.0, 41)
BEAM_K = 1.3


def problems():
    g = lambda t: np.exp(-t)
    return [
        ModeProblem(-1.0, 0.5, 0.0, 1.0, label="lam1_M1/2_c1"),
        ModeProblem(-1.0, 0.5, 1.0, 0.0, label="lam1_M1/2_c0"),
        ModeProblem(-4.0, 0.25, 1.0, 0.0, label="lam2_M1/4"),
        ModeProblem(-1.0, 0.25, 1.0, 0.5, g, label="lam1_M1/4_forced"),
        ModeProblem(0.0, 1.0, 1.0, 0.0, label="mu0_M1"),
        ModeProblem(-BEAM_K**4, 0.0, 1.0, 0.0, label="beam_M0"),
        ModeProblem(-4.0, 0.7j, 0.0, 1.0, g, label="lam2_M0.7i_forced"),
        ModeProblem(-1.0, 1.0, 1.0, 0.5, lambda t: np.sin(t), label="lam1_M1_sin"),
    ]


def main():
    print(f"{'problem':<20}{'max rel err':>14}{'seconds':>10}")
    for prob in problems():
        t0 = time.perf_counter()
        u = mode_transform(prob, T_GRID)
        y = ode_oracle(prob, T_GRID[-1])(T_GRID)
        err = np.max(np.abs(u - y)) / np.max(np.abs(y))
        print(f"{prob.label:<20}{err:14.2e}{time.perf_counter() - t0:10.2f}")

    # closed forms at M = 1/2
    lam = 1.0
    ph = phi(T_GRID)
    exact_c1 = np.exp(T_GRID / 2) * np.sin(lam * ph) / lam
    exact_c0 = np.exp(T_GRID / 2) * (np.cos(lam * ph) - np.sin(lam * ph) / (2 * lam))
    u1 = mode_transform(ModeProblem(-1.0, 0.5, 0.0, 1.0), T_GRID)
    u0 = mode_transform(ModeProblem(-1.0, 0.5, 1.0, 0.0), T_GRID)
    print(f"\nM=1/2 closed forms: c1 {np.max(np.abs(u1 - exact_c1)):.2e}, c0 {np.max(np.abs(u0 - exact_c0)):.2e}")


if __name__ == "__main__":
    main()
