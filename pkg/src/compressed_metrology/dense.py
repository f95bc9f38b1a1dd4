# Brute-force 2^N state-vector reference for the transverse-field Ising chain.
#
# Conventions (fixed here once, inherited by every other module):
#   Spin Hamiltonian:  H = -J * sum_j X_j X_{j+1}  -  B * sum_j Z_j
#   with the wrapped bond X_N = Ztilde X_0, Ztilde = prod_j Z_j.  After the
#   Jordan-Wigner map this boundary makes the fermion couplings strictly
#   periodic, so momenta are 2*pi*j/N with no parity-dependent twist.
#   Majoranas:  x_{2j} = Z..Z X_j,  x_{2j+1} = Z..Z Y_j
#   Fermions:   c_j = (x_{2j} + i x_{2j+1})/2, which annihilate |0..0>.
#   Parity:     Ztilde = (-1)^(number of fermions); |0..0> is in the +1 sector.
#
# Everything here is deliberately dense and small (N <= 12 operators,
# N <= 10 evolution): this module is the oracle, not the product path.

from __future__ import annotations

import numpy as np

from .adiabatic import TrotterSchedule
from .ising import IsingParams

_MAX_OPERATOR_SPINS = 12
_MAX_EVOLVE_SPINS = 10

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def _check_operator_size(n_spins: int) -> None:
    if n_spins > _MAX_OPERATOR_SPINS:
        raise ValueError(f"dense operators capped at N={_MAX_OPERATOR_SPINS}, got {n_spins}")


def pauli_string(n_spins: int, ops: dict[int, str]) -> np.ndarray:
    """Dense operator for a Pauli string, ``ops`` mapping site -> 'X'|'Y'|'Z'."""
    _check_operator_size(n_spins)
    out = np.ones((1, 1), dtype=complex)
    for site in range(n_spins):
        out = np.kron(out, _PAULI[ops.get(site, "I")])
    return out


def majoranas(n_spins: int) -> list[np.ndarray]:
    """The 2N Majorana generators x_0 .. x_{2N-1} as dense matrices."""
    _check_operator_size(n_spins)
    out = []
    for j in range(n_spins):
        string = {k: "Z" for k in range(j)}
        out.append(pauli_string(n_spins, string | {j: "X"}))
        out.append(pauli_string(n_spins, string | {j: "Y"}))
    return out


def popcounts(n_spins: int) -> np.ndarray:
    """Number of 1-bits (fermions / down spins) per computational basis index."""
    idx = np.arange(1 << n_spins, dtype=np.uint64)
    counts = np.zeros(idx.shape, dtype=np.int64)
    while idx.any():
        counts += (idx & 1).astype(np.int64)
        idx >>= 1
    return counts


def parity_diag(n_spins: int) -> np.ndarray:
    """Diagonal of Ztilde = prod_j Z_j: +1 on even-fermion-number states."""
    return np.where(popcounts(n_spins) % 2 == 0, 1.0, -1.0)


def build_hamiltonian(params: IsingParams) -> np.ndarray:
    """Dense H(J, B) including the Jordan-Wigner wrapped bond.

    The j = N-1 bond is X_{N-1} (Ztilde X_0), which reduces to the string
    Y_0 Z_1 .. Z_{N-2} Y_{N-1}; for N = 2 it is Y_0 Y_1.
    """
    n = params.n_spins
    _check_operator_size(n)
    dim = 1 << n
    ham = np.zeros((dim, dim), dtype=complex)
    for j in range(n - 1):
        ham -= params.coupling_j * pauli_string(n, {j: "X", j + 1: "X"})
    boundary = {0: "Y", n - 1: "Y"} | {k: "Z" for k in range(1, n - 1)}
    ham -= params.coupling_j * pauli_string(n, boundary)
    field = params.field_b * (popcounts(n) * (-2.0) + n)
    ham -= np.diag(field.astype(complex))
    return ham


def sector_eigh(params: IsingParams, parity: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of H restricted to a Ztilde parity sector.

    Projecting before solving avoids any ambiguity from the even/odd level
    crossing at g = 1.  Returns (eigenvalues, eigenvectors embedded in the
    full 2^N space, one per column), both sorted ascending.
    """
    if parity not in (+1, -1):
        raise ValueError("parity must be +1 or -1")
    ham = build_hamiltonian(params)
    keep = np.flatnonzero(parity_diag(params.n_spins) == parity)
    evals, sector_vecs = np.linalg.eigh(ham[np.ix_(keep, keep)])
    vecs = np.zeros((ham.shape[0], keep.size), dtype=complex)
    vecs[keep, :] = sector_vecs
    return evals, vecs


def ground_state_even(params: IsingParams) -> np.ndarray:
    """Lowest eigenvector of H in the even-parity sector.

    This is the branch the adiabatic evolution from |0..0> tracks; for g < 1
    it is *not* the global ground state (that one is odd).  Phase convention:
    the largest-magnitude amplitude is made real positive.
    """
    evals, vecs = sector_eigh(params, +1)
    if evals.size > 1 and evals[1] - evals[0] < 1e-10:
        raise RuntimeError(
            f"even-sector ground state degenerate within 1e-10 at g={params.g}"
        )
    state = vecs[:, 0]
    pivot = int(np.argmax(np.abs(state)))
    state = state * (np.abs(state[pivot]) / state[pivot])
    return state / np.linalg.norm(state)


def ground_energy(params: IsingParams, parity: int = +1) -> float:
    return float(sector_eigh(params, parity)[0][0])


def observable_b_dense(n_spins: int) -> np.ndarray:
    """Occupation of the first Fourier fermion mode, b_1^dag b_1, as a dense matrix.

    The mode phase is e^{+i 2 pi k / N}, the convention of the compressed
    circuit's coefficient matrix; the opposite sign labels the mirror mode
    N-1, which has the identical expectation on every reflection-symmetric
    state considered here (ground branch and the Trotter-evolved vacuum).
    """
    _check_operator_size(n_spins)
    xs = majoranas(n_spins)
    dim = 1 << n_spins
    b1 = np.zeros((dim, dim), dtype=complex)
    for k in range(n_spins):
        ck = 0.5 * (xs[2 * k] + 1j * xs[2 * k + 1])
        b1 += np.exp(2j * np.pi * k / n_spins) * ck
    b1 /= np.sqrt(n_spins)
    return b1.conj().T @ b1


def observable_m_dense(n_spins: int) -> np.ndarray:
    """Average magnetization M = (1/N) sum_j Z_j (diagonal)."""
    _check_operator_size(n_spins)
    diag = (n_spins - 2.0 * popcounts(n_spins)) / n_spins
    return np.diag(diag.astype(complex))


def expectation(state: np.ndarray, op: np.ndarray) -> float:
    if state.shape[0] != op.shape[0]:
        raise ValueError("state/operator dimension mismatch")
    val = np.vdot(state, op @ state)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"expectation of a non-Hermitian operator (imag {val.imag:.2e})")
    return float(val.real)


def variance(state: np.ndarray, op: np.ndarray) -> float:
    applied = op @ state
    mean = np.vdot(state, applied)
    var = float(np.vdot(applied, applied).real - abs(mean) ** 2)
    if var < -1e-12:
        raise ValueError(f"negative variance {var:.2e}")
    return var


def trotter_evolve(params: IsingParams, schedule: TrotterSchedule) -> np.ndarray:
    """Apply the digital-adiabatic product to |0..0>.

    Step l applies U0 = exp(i B Delta H0) first, then U1 = exp(i J (l/L) Delta H1),
    for l = 0 .. L in that order, the same convention as the compressed product.
    """
    n = params.n_spins
    if n > _MAX_EVOLVE_SPINS:
        raise ValueError(f"dense evolution capped at N={_MAX_EVOLVE_SPINS}, got {n}")
    dim = 1 << n
    # H0 = sum_j Z_j is diagonal; H1 is eigen-decomposed once and re-phased per step.
    h0_diag = n - 2.0 * popcounts(n)
    h1 = build_hamiltonian(IsingParams(n, field_b=0.0, coupling_j=-1.0))  # = +sum XX
    w1, v1 = np.linalg.eigh(h1)
    state = np.zeros(dim, dtype=complex)
    state[0] = 1.0
    delta = schedule.delta
    u0 = np.exp(1j * params.field_b * delta * h0_diag)
    for l in range(schedule.steps + 1):
        state = u0 * state
        phases = np.exp(1j * params.coupling_j * schedule.tau(l) / 2.0 * w1)
        state = v1 @ (phases * (v1.conj().T @ state))
    return state


def matchgate_unitary(n_spins: int, h: np.ndarray) -> np.ndarray:
    """Dense unitary exp(-iH) for the quadratic H = i sum_{j!=k} h_{jk} x_j x_k."""
    from scipy.linalg import expm

    xs = majoranas(n_spins)
    if h.shape != (2 * n_spins, 2 * n_spins):
        raise ValueError("generator dimension mismatch")
    gen = np.zeros_like(xs[0])
    for j in range(2 * n_spins):
        for k in range(j + 1, 2 * n_spins):
            if h[j, k] != 0.0:
                gen += 2.0 * h[j, k] * (xs[j] @ xs[k])
    return expm(gen)


def conjugation_rotation(n_spins: int, unitary: np.ndarray) -> np.ndarray:
    """Extract R with U^dag x_j U = sum_k R_{jk} x_k by tracing against the x_k."""
    xs = majoranas(n_spins)
    dim = 1 << n_spins
    rot = np.empty((2 * n_spins, 2 * n_spins))
    for j in range(2 * n_spins):
        conj = unitary.conj().T @ xs[j] @ unitary
        for k in range(2 * n_spins):
            rot[j, k] = np.trace(conj @ xs[k]).real / dim
    return rot


def qfi_pure(params: IsingParams, fd_step: float = 1e-4) -> float:
    """Quantum Fisher information of the even-parity ground state w.r.t. g.

    Pure-state formula 4*(<d psi|d psi> - |<psi|d psi>|^2) with |d psi> from
    central differences of gauge-fixed ground states (each neighbour's phase
    is fixed so its overlap with psi(g) is real positive; the QFI itself is
    gauge invariant but naive differencing is not).  A step-halving check
    guards the step size: the two estimates must agree within 1 percent.
    """
    if params.n_spins > _MAX_EVOLVE_SPINS:
        raise ValueError("QFI oracle capped at N=10")

    def _estimate(step: float) -> float:
        center = ground_state_even(params)
        sides = []
        for sign in (-1.0, +1.0):
            g_side = params.g + sign * step
            side = ground_state_even(
                IsingParams(params.n_spins, field_b=g_side * params.coupling_j,
                            coupling_j=params.coupling_j)
            )
            ov = np.vdot(center, side)
            side = side * (abs(ov) / ov)
            sides.append(side)
        dpsi = (sides[1] - sides[0]) / (2.0 * step)
        # Re/Im split: <psi|dpsi> is purely imaginary after gauge fixing.
        return float(4.0 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(center, dpsi)) ** 2))

    coarse = _estimate(fd_step)
    fine = _estimate(fd_step / 2.0)
    if abs(coarse - fine) > 0.01 * max(abs(fine), 1e-30):
        raise RuntimeError(
            f"QFI finite-difference step {fd_step} not converged "
            f"(coarse {coarse:.6g} vs halved {fine:.6g})"
        )
    return fine
