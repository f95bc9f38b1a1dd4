"""Schedules, per-step rotations (signs pinned by the dense oracle), products."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

from compressed_metrology import dense, ising, matchgate
from compressed_metrology.adiabatic import (
    TrotterSchedule,
    adiabatic_rotation,
    block_rotation,
    build_schedule,
    h0_generator,
    h1_generator,
    r0_rotation,
    r1_rotation,
    shift_matrix,
    trotter_error_bound,
)
from compressed_metrology.ising import IsingParams


class TestSchedule:
    def test_arithmetic(self):
        sch = TrotterSchedule(total_time=12.0, steps=2)
        assert sch.delta == 4.0
        assert sch.taus().tolist() == [0.0, 4.0, 8.0]

    def test_small(self):
        sch = TrotterSchedule(total_time=1.0, steps=1)
        assert sch.delta == 0.5
        assert sch.taus().tolist() == [0.0, 1.0]

    @pytest.mark.parametrize("total_time,steps", [(3.7, 5), (160.0, 1024), (1.0, 99991)])
    def test_interaction_time_sums_to_total(self, total_time, steps):
        sch = TrotterSchedule(total_time=total_time, steps=steps)
        assert math.fsum(sch.taus()) == pytest.approx(total_time, rel=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError):
            TrotterSchedule(total_time=0.0, steps=4)
        with pytest.raises(ValueError):
            TrotterSchedule(total_time=1.0, steps=-1)
        with pytest.raises(ValueError):
            TrotterSchedule(total_time=1.0, steps=2).tau(3)

    def test_degenerate_single_step(self):
        assert TrotterSchedule(total_time=2.0, steps=0).tau(0) == 0.0


class TestBuildSchedule:
    def test_desk_defaults(self):
        sch = build_schedule(4)
        assert sch.total_time == 160.0
        assert sch.steps == 1024

    def test_step_cap(self):
        assert build_schedule(16).steps == 10**6

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            build_schedule(4, total_time=-1.0)
        with pytest.raises(ValueError):
            build_schedule(4, steps=0)

    def test_error_budget_warning(self):
        with pytest.warns(UserWarning, match="exceeds"):
            build_schedule(4, total_time=100.0, steps=10, error_budget=1e-3)


class TestGenerators:
    def test_h0_block(self):
        assert np.array_equal(h0_generator(1), np.array([[0.0, 0.5], [-0.5, 0.0]]))

    def test_exact_antisymmetry(self):
        for gen in (h0_generator(4), h1_generator(4)):
            assert np.array_equal(gen, -gen.T)

    def test_h1_is_shift_conjugation(self):
        n = 4
        shift = shift_matrix(2 * n)
        assert np.allclose(h1_generator(n), shift @ h0_generator(n) @ shift.T, atol=1e-15)

    def test_h1_spectrum_and_distinctness(self):
        n = 2
        evals = np.sort_complex(np.linalg.eigvals(h1_generator(n)))
        assert np.allclose(np.abs(evals.imag), 0.5, atol=1e-12)
        assert not np.array_equal(h1_generator(n), h0_generator(n))

    def test_shift_order(self):
        shift = shift_matrix(8)
        assert np.array_equal(np.linalg.matrix_power(shift, 8), np.eye(8))
        assert not np.array_equal(np.linalg.matrix_power(shift, 4), np.eye(8))

    def test_quarter_turn_block(self):
        # exp(4 c h0) rotates every cell by 2c: a quarter turn at c = pi/4
        rot = matchgate.exp_generator(np.pi / 4.0 * h0_generator(2))
        expected = block_rotation(2, np.pi / 2.0)
        assert np.abs(rot - expected).max() < 1e-15


class TestStepRotations:
    def test_r0_zero_field(self):
        sch = TrotterSchedule(total_time=1.0, steps=3)
        assert np.array_equal(r0_rotation(0.0, sch, 4), np.eye(8))

    def test_r0_closed_form_vs_expm(self):
        sch = TrotterSchedule(total_time=2.1, steps=4)
        field_b = 0.8
        rot = r0_rotation(field_b, sch, 2)
        assert np.abs(rot - expm(4.0 * field_b * sch.delta * h0_generator(2))).max() < 1e-13
        assert np.abs(rot @ rot.T - np.eye(4)).max() < 1e-12

    def test_r0_sign_pinned_by_dense_conjugation(self):
        # U0 = exp(i B Delta H0) acts on Majoranas as R0 = exp(+4 B Delta h0).
        n, b_delta = 2, 0.3
        field = sum(dense.pauli_string(n, {j: "Z"}) for j in range(n))
        rot_ref = dense.conjugation_rotation(n, expm(1j * b_delta * field))
        sch = TrotterSchedule(total_time=b_delta, steps=0)
        assert np.abs(r0_rotation(1.0, sch, n) - rot_ref).max() < 1e-12

    def test_r1_trivial_at_step_zero(self):
        sch = TrotterSchedule(total_time=3.0, steps=5)
        assert np.array_equal(r1_rotation(1.3, 0, sch, 4), np.eye(8))

    def test_r1_final_step_angle(self):
        sch = TrotterSchedule(total_time=3.0, steps=5)
        coupling = 0.7
        rot = r1_rotation(coupling, 5, sch, 4)
        shift = shift_matrix(8)
        expected = shift @ block_rotation(4, 2.0 * coupling * sch.delta) @ shift.T
        assert np.abs(rot - expected).max() < 1e-14

    def test_r1_sign_pinned_by_dense_conjugation(self):
        # U1 = exp(i theta H1) with H1 = sum XX (wrapped) gives exp(+4 theta h1).
        n, theta = 2, 0.41
        ham1 = dense.build_hamiltonian(IsingParams(n, field_b=0.0, coupling_j=-1.0))
        rot_ref = dense.conjugation_rotation(n, expm(1j * theta * ham1))
        assert np.abs(expm(4.0 * theta * h1_generator(n)) - rot_ref).max() < 1e-12


class TestAdiabaticRotation:
    def test_pure_field_collapses(self):
        params = IsingParams(4, field_b=0.9, coupling_j=0.0)
        sch = TrotterSchedule(total_time=2.0, steps=6)
        rot = adiabatic_rotation(params, sch)
        expected = block_rotation(4, 2.0 * 0.9 * sch.delta * (sch.steps + 1))
        assert np.abs(rot - expected).max() < 1e-12

    def test_single_step_is_r0(self):
        params = IsingParams(4, field_b=1.1, coupling_j=0.7)
        sch = TrotterSchedule(total_time=2.0, steps=0)
        assert np.abs(adiabatic_rotation(params, sch) - r0_rotation(1.1, sch, 4)).max() < 1e-14

    def test_ordering_pinned_by_explicit_product(self):
        # Step l applies R0 then R1(l); l ascending, so l = 0 is right-most.
        params = IsingParams(4, field_b=0.8, coupling_j=1.2)
        sch = TrotterSchedule(total_time=1.7, steps=2)
        r0 = r0_rotation(params.field_b, sch, 4)
        explicit = np.eye(8)
        for l in (0, 1, 2):
            explicit = r1_rotation(params.coupling_j, l, sch, 4) @ r0 @ explicit
        assert np.abs(adiabatic_rotation(params, sch) - explicit).max() < 1e-13

    def test_orthogonality(self):
        params = IsingParams(8, field_b=1.0, coupling_j=1.0)
        rot = adiabatic_rotation(params, TrotterSchedule(total_time=40.0, steps=257))
        matchgate.assert_rotation(rot)

    def test_commuting_interaction_hook(self):
        params = IsingParams(4, field_b=0.6, coupling_j=1.1)
        sch = TrotterSchedule(total_time=2.0, steps=5)
        rot = adiabatic_rotation(params, sch, shifted_interaction=False)
        total = 2.0 * 0.6 * sch.delta * (sch.steps + 1) + 1.1 * math.fsum(sch.taus())
        assert np.abs(rot - block_rotation(4, total)).max() < 1e-12

    @pytest.mark.parametrize("n_spins", [4, 8, 16])
    @pytest.mark.parametrize("steps", [64, 333, 4097])
    def test_momentum_equals_direct(self, n_spins, steps):
        params = IsingParams(n_spins, field_b=1.1, coupling_j=0.9)
        sch = TrotterSchedule(total_time=5.0, steps=steps)
        direct = adiabatic_rotation(params, sch, method="direct")
        momentum = adiabatic_rotation(params, sch, method="momentum")
        assert np.abs(direct - momentum).max() < 1e-12

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            adiabatic_rotation(IsingParams(4, 1.0, 1.0), TrotterSchedule(1.0, 1), method="x")


class TestTrotterErrorProxy:
    def test_arithmetic(self):
        assert trotter_error_bound(TrotterSchedule(total_time=12.0, steps=2)) == 32.0

    def test_doubling_halves_proxy(self):
        coarse = trotter_error_bound(TrotterSchedule(total_time=10.0, steps=100))
        fine = trotter_error_bound(TrotterSchedule(total_time=10.0, steps=200))
        assert fine == pytest.approx(coarse / 2.0, rel=0.02)

    def test_error_tracks_proxy(self):
        # Once the per-step angles stop wrapping (2 B Delta < pi/2), the
        # measured bias decreases together with the proxy.
        params = IsingParams(4, field_b=1.0, coupling_j=1.0)
        obs = matchgate.observable_b_coefficients(4)
        target = ising.expected_b(1.0, 4)
        errors, proxies = [], []
        for steps in (256, 512, 1024, 2048, 4096):
            sch = TrotterSchedule(total_time=160.0, steps=steps)
            val = matchgate.expectation_quadratic(adiabatic_rotation(params, sch), obs)
            errors.append(abs(val - target))
            proxies.append(trotter_error_bound(sch))
        assert all(p2 < p1 for p1, p2 in zip(proxies, proxies[1:]))
        assert all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))


@pytest.mark.slow
@pytest.mark.parametrize("n_spins", [4, 8])
@pytest.mark.parametrize("g", [0.8, 1.0, 1.2])
def test_desk_scale_adiabatic_correctness(n_spins, g):
    """T = 10 N^2 with the proxy L Delta^2 < 1e-2 lands within 1e-2 of the curve."""
    total_time = 10.0 * n_spins**2
    steps = int(100 * total_time**2)
    sch = TrotterSchedule(total_time=total_time, steps=steps)
    assert trotter_error_bound(sch) < 1e-2
    params = IsingParams(n_spins, field_b=g, coupling_j=1.0)
    rot = adiabatic_rotation(params, sch)
    matchgate.assert_rotation(rot)
    val = matchgate.expectation_quadratic(rot, matchgate.observable_b_coefficients(n_spins))
    assert abs(val - ising.expected_b(g, n_spins)) < 1e-2
