"""Compressed quantum-metrology simulator for the transverse-field Ising chain.

Submodules
----------
ising      closed-form dispersion, Bogoliubov angles and observable curves
matchgate  SO(2N) compression engine and quadratic-observable expectations
adiabatic  Trotter schedules and the compressed rotation product
circuit    gate-level (m+2)-qubit realization of the compressed protocol
dense      brute-force state-vector oracle (small N)
metrology  error propagation, scaling fits, moment estimation of g
cli        batch front-end (sweep / scaling / compare / estimate / dump / oracle)
"""

from .adiabatic import TrotterSchedule, adiabatic_rotation, build_schedule, trotter_error_bound
from .circuit import (
    CompressedRegister,
    Gate,
    GateProgram,
    decompose_shift,
    dump_program,
    expectation_b_gate,
    full_program,
    initial_state,
    measure_ym,
    parse_program,
    run_circuit,
    sample_ym,
)
from .ising import (
    IsingParams,
    ModeData,
    bogoliubov_angle,
    expected_b,
    expected_b_derivative,
    expected_m,
    expected_m_derivative,
    mode_energy,
    variance_b,
    variance_m,
)
from .matchgate import (
    QuadraticObservable,
    exp_generator,
    expectation_quadratic,
    expectation_z0,
    majorana_two_point,
    observable_b_coefficients,
    vacuum_covariance,
)
from .metrology import (
    GEstimate,
    PrecisionPoint,
    ScalingFit,
    cramer_rao,
    error_propagation,
    estimate_g,
    fit_power_law,
    fit_scaling,
    invert_expected_b,
    precision_b,
    precision_m,
    sequential_reference,
)

__version__ = "0.1.0"
