"""Matchgate compression engine on the 2N Majorana labels.

A product of nearest-neighbour matchgates U = exp(-iH), H = i sum h_{jk} x_j x_k
with h real antisymmetric, acts on the generators as U^dag x_j U = sum_k R_{jk} x_k
with R = exp(4h) in SO(2N).  Expectations of quadratic observables in U|0..0>
then reduce to the vacuum covariance S = 1_N (x) iY:

    <0..0| U^dag (sum_{lm} b_{lm} x_l x_m) U |0..0> = sum_{lm} b_{lm} Gamma_{lm},
    Gamma = I + i R S R^T.
"""

from __future__ import annotations

import numpy as np


def _check_even_square(mat: np.ndarray, name: str) -> int:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2:
        raise ValueError(f"{name} must be square with even dimension, got {mat.shape}")
    return mat.shape[0]


class QuadraticObservable:
    """Coefficient matrix b of a Hermitian quadratic form sum_{lm} b_{lm} x_l x_m."""

    def __init__(self, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=complex)
        _check_even_square(coeffs, "coeffs")
        if not np.allclose(coeffs, coeffs.conj().T, atol=1e-12):
            raise ValueError("coefficient matrix must be Hermitian")
        self.coeffs = coeffs

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]


def vacuum_covariance(n_modes: int) -> np.ndarray:
    """S with S_{jk} = <0..0| -i x_j x_k |0..0> off the diagonal: 1_N (x) iY."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    cov = np.zeros((2 * n_modes, 2 * n_modes))
    even = np.arange(0, 2 * n_modes, 2)
    cov[even, even + 1] = 1.0
    cov[even + 1, even] = -1.0
    return cov


def _is_cell_block(h: np.ndarray) -> bool:
    mask = np.zeros(h.shape, dtype=bool)
    even = np.arange(0, h.shape[0], 2)
    mask[even, even + 1] = True
    mask[even + 1, even] = True
    return not h[~mask].any()


def exp_generator(h: np.ndarray) -> np.ndarray:
    """R = exp(4h) for a real antisymmetric generator h.

    Generators supported on the (2j, 2j+1) cells exponentiate in closed form
    as independent planar rotations; anything else falls back to
    scaling-and-squaring (scipy's expm).
    """
    h = np.asarray(h, dtype=float)
    _check_even_square(h, "h")
    if (h != -h.T).any():
        raise ValueError("generator must be exactly antisymmetric")
    if _is_cell_block(h):
        even = np.arange(0, h.shape[0], 2)
        angles = 4.0 * h[even, even + 1]
        rot = np.zeros_like(h)
        rot[even, even] = np.cos(angles)
        rot[even + 1, even + 1] = np.cos(angles)
        rot[even, even + 1] = np.sin(angles)
        rot[even + 1, even] = -np.sin(angles)
        return rot
    from scipy.linalg import expm

    return expm(4.0 * h)


def assert_rotation(rot: np.ndarray, *, ortho_tol: float = 1e-10, det_tol: float = 1e-8) -> None:
    """Raise unless rot is special orthogonal within the stated tolerances."""
    dim = _check_even_square(rot, "rotation")
    defect = np.abs(rot @ rot.T - np.eye(dim)).max()
    if defect >= ortho_tol:
        raise ValueError(f"orthogonality defect {defect:.3e} >= {ortho_tol:.1e}")
    sign, logdet = np.linalg.slogdet(rot)
    if sign <= 0 or abs(logdet) > det_tol:
        raise ValueError(f"determinant not +1 (sign {sign}, |log det| {abs(logdet):.3e})")


def conjugate_modes(rot: np.ndarray, j: int) -> np.ndarray:
    """Row j of R: the coefficients of U^dag x_j U = sum_k R_{jk} x_k."""
    dim = _check_even_square(rot, "rotation")
    if not 0 <= j < dim:
        raise IndexError(f"mode index {j} out of range for dim {dim}")
    return rot[j].copy()


def expectation_z0(rot: np.ndarray) -> float:
    """<Z_0> = [R S R^T]_{0,1} of the evolved vacuum; stays in [-1, 1]."""
    dim = _check_even_square(rot, "rotation")
    if dim < 2:
        raise ValueError("need dim >= 2")
    even = np.arange(0, dim, 2)
    return float(np.sum(rot[0, even] * rot[1, even + 1] - rot[0, even + 1] * rot[1, even]))


def majorana_two_point(rot: np.ndarray) -> np.ndarray:
    """Gamma_{jk} = <U^dag x_j x_k U> = delta_{jk} + i [R S R^T]_{jk}.

    The antisymmetric part is symmetrized after the matrix products so the
    diagonal of Gamma is exactly 1; Gamma/2 is the (projector) correlation
    matrix of the pure Gaussian state.
    """
    dim = _check_even_square(rot, "rotation")
    shuffled = np.empty_like(rot)
    shuffled[:, 0::2] = -rot[:, 1::2]
    shuffled[:, 1::2] = rot[:, 0::2]
    kern = shuffled @ rot.T
    kern = 0.5 * (kern - kern.T)
    return np.eye(dim) + 1j * kern


def expectation_quadratic(rot: np.ndarray, obs: QuadraticObservable) -> float:
    """Re sum_{jk} b_{jk} Gamma_{jk}; the imaginary part must vanish (Hermitian b)."""
    dim = _check_even_square(rot, "rotation")
    if dim != obs.dim:
        raise ValueError(f"dimension mismatch: rotation {dim}, observable {obs.dim}")
    value = complex(np.sum(obs.coeffs * majorana_two_point(rot)))
    if abs(value.imag) > 1e-10:
        raise AssertionError(f"quadratic expectation has imaginary part {value.imag:.3e}")
    return value.real


def observable_b_coefficients(n_spins: int) -> QuadraticObservable:
    """Majorana coefficients of the k=1 Fourier-mode occupation b_1^dag b_1.

    b_{2j,2k} = b_{2j+1,2k+1} = p_{jk}, b_{2j,2k+1} = i p_{jk},
    b_{2j+1,2k} = -i p_{jk} with p_{jk} = exp(i 2 pi (k-j)/N)/(4N).  The
    (2j+1, 2k+1) sector is required for Hermiticity and for the dense
    reconstruction to reproduce b_1^dag b_1 (and for the correct trace 1/2).
    """
    if n_spins < 4 or n_spins & (n_spins - 1):
        raise ValueError(f"need N a power of two >= 4, got {n_spins}")
    idx = np.arange(n_spins)
    phases = np.exp(2j * np.pi * (idx[None, :] - idx[:, None]) / n_spins) / (4.0 * n_spins)
    coeffs = np.empty((2 * n_spins, 2 * n_spins), dtype=complex)
    coeffs[0::2, 0::2] = phases
    coeffs[1::2, 1::2] = phases
    coeffs[0::2, 1::2] = 1j * phases
    coeffs[1::2, 0::2] = -1j * phases
    return QuadraticObservable(coeffs)
