"""Kitagawa and Wineland squeezing parameters, numeric and closed form.

For a state with mean spin direction n0 = (sin t cos p, sin t sin p, cos t),
the transverse frame is

    n1 = (-sin p, cos p, 0),    n2 = (cos t cos p, cos t sin p, -sin t)

and the minimal transverse variance is (C - sqrt(A^2 + B^2)) / 2 with
A = <I_n1^2 - I_n2^2>, B = <{I_n1, I_n2}>, C = <I_n1^2 + I_n2^2>.
Only the bath collective spin enters; the central spin is traced out.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, build_central_spin_h, build_lmg_h, derived_couplings
from .spinspace import CentralSpinBasis, DickeBasis, StateVector, apply_collective, bath_blocks


class SqueezingError(ValueError):
    pass


@dataclass(frozen=True)
class SpinMoments:
    """First moments and symmetrized covariance of the bath collective spin."""

    n_bath: int
    mean: np.ndarray  # (<Ix>, <Iy>, <Iz>)
    second: np.ndarray  # Re <Ia Ib>, symmetric 3x3

    @property
    def covariance(self) -> np.ndarray:
        return self.second - np.outer(self.mean, self.mean)


def spin_moments(state: StateVector) -> SpinMoments:
    blocks = bath_blocks(state)
    applied = apply_collective(blocks)
    mean = np.array([np.vdot(blocks, w).real for w in applied])
    second = np.empty((3, 3))
    for a in range(3):
        for b in range(a, 3):
            # <v|Ia Ib|v> = <Ia v|Ib v>; real part is the symmetrized product
            second[a, b] = second[b, a] = np.vdot(applied[a], applied[b]).real
    return SpinMoments(state.n_bath, mean, second)


@dataclass(frozen=True)
class SqueezingReport:
    xi_s2: float
    xi_r2: float  # nan when the mean spin vanishes
    mean_spin_dir: np.ndarray
    min_variance: float
    optimal_angle: float
    mean_spin_length: float


def transverse_frame(direction) -> tuple[np.ndarray, np.ndarray]:
    x, y, z = direction
    theta = math.atan2(math.hypot(x, y), z)
    phi = math.atan2(y, x)
    n1 = np.array([-math.sin(phi), math.cos(phi), 0.0])
    n2 = np.array([math.cos(theta) * math.cos(phi), math.cos(theta) * math.sin(phi),
                   -math.sin(theta)])
    return n1, n2


def report_from_moments(mom: SpinMoments, zero_tol: float = 1e-10) -> SqueezingReport:
    N = mom.n_bath
    length = float(np.linalg.norm(mom.mean))
    cov = mom.covariance
    if length <= zero_tol * N:
        # no mean spin: every direction is transverse
        evals, evecs = np.linalg.eigh(cov)
        min_var = max(float(evals[0]), 0.0)
        return SqueezingReport(4 * min_var / N, math.nan, np.full(3, math.nan),
                               min_var, math.nan, length)
    n0 = mom.mean / length
    n1, n2 = transverse_frame(n0)
    a = n1 @ cov @ n1
    d = n2 @ cov @ n2
    b = n1 @ cov @ n2
    C, A, B = a + d, a - d, 2 * b
    min_var = max(0.5 * (C - math.hypot(A, B)), 0.0)
    # direction cos(angle) n1 + sin(angle) n2 attains the minimum
    angle = 0.5 * math.atan2(B, A) + math.pi / 2
    return SqueezingReport(
        xi_s2=4 * min_var / N,
        xi_r2=N * min_var / length ** 2,
        mean_spin_dir=n0,
        min_variance=min_var,
        optimal_angle=angle,
        mean_spin_length=length,
    )


def squeezing_report(state: StateVector) -> SqueezingReport:
    return report_from_moments(spin_moments(state))


def mean_spin_direction(state: StateVector) -> np.ndarray:
    mean = spin_moments(state).mean
    length = np.linalg.norm(mean)
    if length == 0:
        raise SqueezingError("mean spin vanishes; direction undefined")
    return mean / length


def min_variance_along_z(state: StateVector, tol: float = 1e-6) -> float:
    """Minimal transverse variance for a state whose mean spin lies along +-z."""
    mom = spin_moments(state)
    mean = mom.mean
    length = np.linalg.norm(mean)
    if length == 0 or np.hypot(mean[0], mean[1]) > tol * length:
        raise SqueezingError("mean spin is not along the z axis")
    cov = mom.covariance
    return 0.5 * (cov[0, 0] + cov[1, 1]
                  - math.sqrt((cov[0, 0] - cov[1, 1]) ** 2 + 4 * cov[0, 1] ** 2))


# --- closed forms -----------------------------------------------------------------

def isotropic_ground_xi(params: ModelParams, sector=None) -> tuple[float, float]:
    """(xi_S^2, xi_R^2) of the lam = 0 ground state from its excitation number.

    The bath is treated as the Dicke state |n> with n the integer excitation
    number of the lowest two-level sector (even sector by default):

        xi_S^2 = -2 (n - N/2)^2 / N + N/2 + 1
        xi_R^2 = -N/2 + N^2 (N + 2) / (8 (n - N/2)^2)
    """
    from .spectrum import EVEN, ground_sector_number

    if params.lam != 0:
        raise ValueError("isotropic closed form requires lambda = 0")
    N = params.n_bath
    n = ground_sector_number(params, EVEN if sector is None else sector)
    dz2 = (n - N / 2) ** 2
    if dz2 == 0:
        raise SqueezingError("n = N/2: mean spin vanishes and xi_R^2 diverges")
    return -2 * dz2 / N + N / 2 + 1, -N / 2 + N ** 2 * (N + 2) / (8 * dz2)


@dataclass(frozen=True)
class MeanFieldAngles:
    theta0: float
    phi0: float
    phase_label: str  # "normal" or "broken"


def mean_field_angles(params: ModelParams) -> MeanFieldAngles:
    """Energy-minimizing coherent-state angles of the LMG block.

    Normal phase: theta0 = pi. Broken phase: cos(theta0) = -omega / gamma_x
    with phi0 in {0, pi}; phi0 = 0 is returned.
    """
    c = derived_couplings(params)
    if params.g_tilde <= c.g_critical:
        return MeanFieldAngles(math.pi, 0.0, "normal")
    return MeanFieldAngles(math.acos(-params.omega / c.gamma_x), 0.0, "broken")


@dataclass(frozen=True)
class AnalyticSqueezing:
    xi_s2: float
    phase_label: str
    squeezed: bool  # xi_s2 < 1


def anisotropic_ground_xi_analytic(params: ModelParams) -> AnalyticSqueezing:
    """Large-N Holstein-Primakoff squeezing of the anisotropic ground state.

    Normal phase:  xi^2 = sqrt((gc^2 - g^2) / (gc^2 - gamma g^2)), gamma = gamma_y / gamma_x
    Broken phase:  xi^2 = sqrt((g^2/gc^2 - gc^2/g^2) / (g^2 lam))

    Both branches vanish at g = gc, where the expansion breaks down; a
    warning is issued and 0 is returned.
    """
    lam, g = params.lam, params.g_tilde
    if not 0 < lam <= 1:
        raise ValueError("anisotropic closed form requires 0 < lambda <= 1")
    c = derived_couplings(params)
    gc = c.g_critical
    if math.isclose(g, gc, rel_tol=1e-12, abs_tol=1e-14):
        warnings.warn("squeezing formula breaks down at the critical coupling", RuntimeWarning,
                      stacklevel=2)
        return AnalyticSqueezing(0.0, "critical", True)
    if g < gc:
        gamma = c.gamma_y / c.gamma_x if c.gamma_x > 0 else 0.0
        xi = math.sqrt((gc ** 2 - g ** 2) / (gc ** 2 - gamma * g ** 2))
        label = "normal"
    else:
        xi = math.sqrt((g ** 2 / gc ** 2 - gc ** 2 / g ** 2) / (g ** 2 * lam))
        label = "broken"
    return AnalyticSqueezing(xi, label, xi < 1)


def hp_gap(params: ModelParams) -> float:
    """Lowest excitation energy of the LMG block in the Holstein-Primakoff limit."""
    c = derived_couplings(params)
    w = params.omega
    if mean_field_angles(params).phase_label == "normal":
        disc = (w - c.gamma_x) * (w - c.gamma_y)
    else:
        disc = w ** 2 * params.g_tilde ** 2 * params.lam * (c.gamma_x / w - w / c.gamma_x)
    if disc < 0:
        raise SqueezingError("negative discriminant: parameters outside the branch")
    return math.sqrt(disc)


# --- ground-state squeezing ---------------------------------------------------------

def ground_squeezing(params: ModelParams, model: str = "lmg") -> SqueezingReport:
    """Squeezing of the even-parity ground state of either model."""
    from .spectrum import ground_state_in_sector

    if model == "lmg":
        h, basis = build_lmg_h(params), DickeBasis(params.n_bath)
    elif model == "central":
        h, basis = build_central_spin_h(params), CentralSpinBasis(params.n_bath)
    else:
        raise ValueError(f"unknown model {model!r}")
    return squeezing_report(ground_state_in_sector(h, basis, check=False).state)


@dataclass(frozen=True)
class GroundOptimum:
    g_tilde: float
    xi_s2: float


def optimal_ground_squeezing(params: ModelParams, g_range: tuple[float, float],
                             points: int = 51, model: str = "lmg") -> GroundOptimum:
    """Minimum of the ground-state xi_S^2 over g_tilde: grid scan, then Brent refinement."""
    from scipy.optimize import minimize_scalar

    def xi(g):
        return ground_squeezing(params.with_g(float(g)), model).xi_s2

    gs = np.linspace(*g_range, points)
    xs = np.array([xi(g) for g in gs])
    i = int(np.argmin(xs))
    if i == 0 or i == points - 1:
        raise SqueezingError("ground-state squeezing minimum at the scan boundary")
    res = minimize_scalar(xi, bracket=(gs[i - 1], gs[i], gs[i + 1]))
    if res.fun > xs[i]:
        return GroundOptimum(float(gs[i]), float(xs[i]))
    return GroundOptimum(float(res.x), float(res.fun))
