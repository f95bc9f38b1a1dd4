#!/usr/bin/env python3
"""Digital-adiabatic preparation quality vs the Trotter step count.

Demonstrates:
1. the measured |<B> - target| falling with the proxy L * Delta^2 at fixed T,
2. the squared overlap with the exact even-parity ground state,
3. the residual floor set by the finite duration T itself.

Run with: python3 demos/adiabatic_convergence.py
"""

import numpy as np

from compressed_metrology import adiabatic, dense, ising, matchgate


def main():
    n, g = 4, 1.0
    total_time = 10.0 * n * n
    params = ising.IsingParams(n, field_b=g, coupling_j=1.0)
    target = ising.expected_b(g, n)
    ground = dense.ground_state_even(params)
    obs = matchgate.observable_b_coefficients(n)

    print(f"N = {n}, g = {g}, T = {total_time:.0f} (the 10 N^2 desk default)")
    print(f"analytic target <B> = {target:.7f}")
    print(f"\n{'L':>7} {'L*Delta^2':>10} {'|<B> - target|':>15} {'overlap^2':>10}")
    for steps in (256, 512, 1024, 2048, 4096, 16384):
        sch = adiabatic.TrotterSchedule(total_time=total_time, steps=steps)
        rot = adiabatic.adiabatic_rotation(params, sch)
        bias = abs(matchgate.expectation_quadratic(rot, obs) - target)
        overlap = abs(np.vdot(ground, dense.trotter_evolve(params, sch))) ** 2
        print(f"{steps:7d} {adiabatic.trotter_error_bound(sch):10.3f} "
              f"{bias:15.3e} {overlap:10.6f}")

    print("\nPast L ~ 16k the bias flattens near 3e-4: that is the adiabatic")
    print("floor of T = 160 itself, not a Trotter artifact (it shrinks with T).")


if __name__ == "__main__":
    main()
