"""Precision of K0 near the end of its strip.

Compares the closed two-term formula evaluated directly, the blended
evaluation used by the package, and the cancellation-free swapped-time form.
"""

import numpy as np

from dskg import kernels as K

MASSES = (0.0, 0.25, 1.0, 1.7j)
T = 1.5


def main():
    ph = K.phi(T)
    gaps = np.logspace(-1, -12, 12)
    for m in MASSES:
        mass = K.as_mass(m)
        print(f"M = {mass}")
        print(f"{'phi - z':>10}{'direct':>12}{'blended':>12}")
        for gap in gaps:
            z = ph * (1 - gap)
            ref = K.kernel_K0_symmetric(z, T, mass)
            direct = K._finish(*K._k0_direct_terms(np.asarray(z), np.asarray(T), mass.value), mass)
            blend = K.kernel_K0(z, T, mass)
            print(f"{gap * ph:10.1e}{abs(direct - ref) / abs(ref):12.1e}{abs(blend - ref) / abs(ref):12.1e}")
        print()


if __name__ == "__main__":
    main()
