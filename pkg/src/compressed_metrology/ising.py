"""Closed-form results for the transverse-field Ising chain.

Model:  H = -J sum_j X_j X_{j+1} - B sum_j Z_j  on N spins, with the
Jordan-Wigner wrapped bond X_N = Ztilde X_0 so that fermion momenta are
xi_j = 2*pi*j/N.  Everything below refers to the even-parity ground-state
branch, i.e. the state adiabatic evolution from |0..0> actually prepares:
the unpaired modes j = 0 and j = N/2 stay empty for every g, which keeps
these curves smooth across the transition at g = B/J = 1.

All curves are functions of g alone; B and J individually enter only the
mode energies.  Mode-sum accumulations use math.fsum (exactly rounded, so
results are platform independent).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Radicand threshold below which (g, xi) sits on the removable singularity
#: of the Bogoliubov angle (g = 1, xi = 0, where the gap closes).
SINGULAR_RADICAND = 1e-300


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _check_curve_size(n_spins: int) -> None:
    # The compression stack needs N = 2^m, but the closed forms only need the
    # momentum grid to contain the modes 0, 1 and N/2: any even N >= 4 works.
    if n_spins < 4 or n_spins % 2:
        raise ValueError(f"mode-1 observables need even N >= 4, got {n_spins}")


@dataclass(frozen=True)
class IsingParams:
    """Chain size and couplings; g = B/J is the only combination the curves use."""

    n_spins: int
    field_b: float
    coupling_j: float

    def __post_init__(self) -> None:
        if not _is_power_of_two(self.n_spins) or self.n_spins < 2:
            raise ValueError(f"n_spins must be a power of two >= 2, got {self.n_spins}")
        if not (math.isfinite(self.field_b) and math.isfinite(self.coupling_j)):
            raise ValueError("couplings must be finite")

    @property
    def g(self) -> float:
        if self.coupling_j == 0.0:
            raise ValueError("g = B/J undefined at J = 0")
        return self.field_b / self.coupling_j


@dataclass(frozen=True)
class ModeData:
    """Momentum, Bogoliubov angle and quasiparticle energy of one fermion mode."""

    mode_index: int
    xi: float
    cos_theta: float
    sin_theta: float
    energy: float
    singular: bool = False


def mode_xi(n_spins: int, j: int) -> float:
    return 2.0 * math.pi * j / n_spins


def _radicand(g: float, xi: float) -> float:
    # 1 + g^2 - 2 g cos(xi), written to avoid the cancellation at g ~ 1,
    # xi ~ 0 (the naive form loses ~half the digits for N ~ 2^20).
    return (1.0 - g) ** 2 + 4.0 * g * math.sin(0.5 * xi) ** 2


def bogoliubov_angle(params: IsingParams, j: int) -> tuple[float, float]:
    """(cos theta_j, sin theta_j) of the Bogoliubov rotation for mode j.

    cos theta = (g - cos xi)/r, sin theta = -sin(xi)/r with
    r = sqrt(1 + g^2 - 2 g cos xi).  At the gap-closing point (g = 1, j = 0)
    the angle is undefined; by continuity from g > 1 we fix (1, 0), which is
    the convention of the even-parity branch.
    """
    if not 0 <= j < params.n_spins:
        raise ValueError(f"mode index {j} out of range for N={params.n_spins}")
    g = params.g
    xi = mode_xi(params.n_spins, j)
    rad = _radicand(g, xi)
    if rad < SINGULAR_RADICAND:
        return 1.0, 0.0
    root = math.sqrt(rad)
    return (g - math.cos(xi)) / root, -math.sin(xi) / root


def is_singular_mode(params: IsingParams, j: int) -> bool:
    return _radicand(params.g, mode_xi(params.n_spins, j)) < SINGULAR_RADICAND


def mode_energy(params: IsingParams, j: int) -> float:
    """Quasiparticle energy 2*sqrt(J^2 + B^2 - 2 J B cos xi_j).

    Equals 2J*sqrt(1 + g^2 - 2 g cos xi) for J > 0 but stays well defined
    (and nonnegative) at J = 0.
    """
    if not 0 <= j < params.n_spins:
        raise ValueError(f"mode index {j} out of range for N={params.n_spins}")
    xi = mode_xi(params.n_spins, j)
    b, j_ = params.field_b, params.coupling_j
    return 2.0 * math.sqrt(max(j_ * j_ + b * b - 2.0 * j_ * b * math.cos(xi), 0.0))


def mode_data(params: IsingParams, j: int) -> ModeData:
    cos_t, sin_t = bogoliubov_angle(params, j)
    return ModeData(
        mode_index=j,
        xi=mode_xi(params.n_spins, j),
        cos_theta=cos_t,
        sin_theta=sin_t,
        energy=mode_energy(params, j),
        singular=is_singular_mode(params, j),
    )


# ---------------------------------------------------------------------------
# Fourier-mode occupation  B = b_1^dag b_1
# ---------------------------------------------------------------------------

def expected_b(g: float, n_spins: int) -> float:
    """Ground-state occupation of the k=1 Fourier mode, (1 - cos theta_1)/2."""
    _check_curve_size(n_spins)
    xi = mode_xi(n_spins, 1)
    return 0.5 * (1.0 + (math.cos(xi) - g) / math.sqrt(_radicand(g, xi)))


def expected_b_derivative(g: float, n_spins: int) -> float:
    """d<B>/dg = -sin^2(xi_1) / (2 r^3); strictly negative, ~ -N/(4 pi) at g=1."""
    _check_curve_size(n_spins)
    xi = mode_xi(n_spins, 1)
    return -math.sin(xi) ** 2 / (2.0 * _radicand(g, xi) ** 1.5)


def variance_b(g: float, n_spins: int) -> float:
    """Var B = sin^2(xi_1) / (4 r^2); equals <B>(1 - <B>) since B is a projector."""
    _check_curve_size(n_spins)
    xi = mode_xi(n_spins, 1)
    return math.sin(xi) ** 2 / (4.0 * _radicand(g, xi))


# ---------------------------------------------------------------------------
# Average magnetization  M = (1/N) sum_j Z_j
# ---------------------------------------------------------------------------

def expected_m(g: float, n_spins: int) -> float:
    """<M> = (2/N) [1 + sum_{j=1}^{N/2-1} (g - cos xi_j)/r_j] on the even branch."""
    _check_curve_size(n_spins)
    total = math.fsum(
        (g - math.cos(mode_xi(n_spins, j))) / math.sqrt(_radicand(g, mode_xi(n_spins, j)))
        for j in range(1, n_spins // 2)
    )
    return 2.0 / n_spins * (1.0 + total)


def expected_m_derivative(g: float, n_spins: int) -> float:
    """d<M>/dg = (2/N) sum_j sin^2(xi_j)/r_j^3; positive, ~ O(log N) at g=1."""
    _check_curve_size(n_spins)
    total = math.fsum(
        math.sin(mode_xi(n_spins, j)) ** 2 / _radicand(g, mode_xi(n_spins, j)) ** 1.5
        for j in range(1, n_spins // 2)
    )
    return 2.0 / n_spins * total


def variance_m(g: float, n_spins: int) -> float:
    """Var M = (4/N^2) [1 + sum_{j=1}^{N/2-1} sin^2(xi_j)/r_j^2].

    The leading constant 1 inside the bracket follows the conventional
    closed form, but it is spurious: the exact even-branch variance is
    (4/N^2) * sum_j sin^2(theta_j), i.e. this value minus 4/N^2 (at
    g -> infinity the state is a product state and the variance vanishes
    exactly, while this expression tends to 4/N^2).  The dense oracle pins
    the offset; the O(1/N) scaling at g = 1 is unaffected.
    """
    _check_curve_size(n_spins)
    total = math.fsum(
        math.sin(mode_xi(n_spins, j)) ** 2 / _radicand(g, mode_xi(n_spins, j))
        for j in range(1, n_spins // 2)
    )
    return 4.0 / n_spins**2 * (1.0 + total)
