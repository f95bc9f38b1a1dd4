#!/usr/bin/env python3
"""Closed-form observable curves across the quantum phase transition.

Demonstrates:
1. Fourier-mode occupation <B>, its derivative and variance vs g = B/J
2. Magnetization <M> and the contrast in derivative growth with N
3. The sharpening of both curves around g = 1 as the chain grows

Run with: python3 demos/observable_curves.py
"""

import numpy as np

from compressed_metrology import ising


def main():
    print("=" * 72)
    print("Transverse-field Ising chain: H = -J sum XX - B sum Z, g = B/J")
    print("Even-parity ground-state curves (the branch adiabatic evolution prepares)")
    print("=" * 72)

    n = 64
    print(f"\nN = {n}")
    print(f"{'g':>6} {'<B>':>12} {'d<B>/dg':>12} {'Var B':>12} {'<M>':>12} {'d<M>/dg':>12}")
    for g in np.arange(0.0, 2.01, 0.25):
        print(f"{g:6.2f} {ising.expected_b(g, n):12.6f} "
              f"{ising.expected_b_derivative(g, n):12.4f} {ising.variance_b(g, n):12.6f} "
              f"{ising.expected_m(g, n):12.6f} {ising.expected_m_derivative(g, n):12.4f}")

    print("\nDerivative growth at the transition (the metrological resource):")
    print(f"{'N':>6} {'|d<B>/dg|':>12} {'N/(4 pi)':>12} {'d<M>/dg':>12} {'log N':>8}")
    for n in (8, 32, 128, 512, 2048):
        print(f"{n:6d} {abs(ising.expected_b_derivative(1.0, n)):12.4f} "
              f"{n / (4 * np.pi):12.4f} {ising.expected_m_derivative(1.0, n):12.4f} "
              f"{np.log(n):8.3f}")

    print("\nThe mode-occupation slope grows linearly with N while the variance")
    print("saturates at 1/4: that combination is what yields 1/N^2 precision.")


if __name__ == "__main__":
    main()
