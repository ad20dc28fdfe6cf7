"""Exact diagonalization, parity-resolved ground states and the isotropic analytic ground state."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sl

from .model import ModelParams
from .spinspace import (
    CentralSpinBasis,
    DOWN,
    UP,
    Basis,
    StateVector,
    basis_state,
    check_hermitian,
    parity_diagonal,
)

EVEN = 1
ODD = -1


@dataclass(frozen=True)
class EigenPair:
    energy: float
    state: StateVector


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude component is real positive."""
    k = int(np.argmax(np.abs(vec)))
    return vec * (abs(vec[k]) / vec[k])


def eigensystem(h: np.ndarray, basis: Basis) -> list[EigenPair]:
    h = check_hermitian(h)
    if h.shape[0] != basis.dimension:
        raise ValueError("Hamiltonian does not match basis dimension")
    energies, vecs = np.linalg.eigh(h)
    return [EigenPair(float(e), StateVector(basis, fix_phase(vecs[:, k].astype(complex))))
            for k, e in enumerate(energies)]


def sector_indices(basis: Basis, sector: int) -> np.ndarray:
    """Basis indices of a parity sector, ordered by bath index ``n``.

    In this order both model Hamiltonians restrict to tridiagonal matrices.
    """
    if sector not in (EVEN, ODD):
        raise ValueError(f"sector must be +1 or -1, got {sector}")
    idx = np.flatnonzero(parity_diagonal(basis) == sector)
    if isinstance(basis, CentralSpinBasis):
        idx = idx[np.argsort(idx % (basis.n_bath + 1), kind="stable")]
    return idx


def _lowest(sub: np.ndarray) -> tuple[float, np.ndarray]:
    off = np.diagonal(sub, offset=1)
    if np.isrealobj(sub) and sub.shape[0] > 2 and not np.any(np.triu(sub, 2)):
        e, v = sl.eigh_tridiagonal(np.diagonal(sub).copy(), off.copy(),
                                   select="i", select_range=(0, 0))
    else:
        e, v = sl.eigh(sub, subset_by_index=[0, 0])
    return float(e[0]), v[:, 0]


def ground_state_in_sector(h: np.ndarray, basis: Basis, sector: int = EVEN,
                           check: bool = True) -> EigenPair:
    """Lowest eigenpair of ``h`` restricted to a parity sector.

    ``h`` must commute with the parity operator; with ``check`` the coupling
    between sectors is verified to vanish.
    """
    idx = sector_indices(basis, sector)
    if idx.size == 0:
        raise RuntimeError("empty parity sector")
    if check:
        h = check_hermitian(h)
        other = np.flatnonzero(parity_diagonal(basis) != sector)
        if other.size and np.max(np.abs(h[np.ix_(idx, other)])) > 1e-12 * max(np.max(np.abs(h)), 1.0):
            raise ValueError("Hamiltonian does not commute with parity")
    energy, vec = _lowest(h[np.ix_(idx, idx)])
    amps = np.zeros(basis.dimension, dtype=complex)
    amps[idx] = vec
    return EigenPair(energy, StateVector(basis, fix_phase(amps)))


def ground_state(h: np.ndarray, basis: Basis, sector: int | None = EVEN) -> EigenPair:
    """Sector-locked ground state; ``sector=None`` returns the lower of the two sectors."""
    if sector is not None:
        return ground_state_in_sector(h, basis, sector)
    pairs = [ground_state_in_sector(h, basis, s) for s in (EVEN, ODD)]
    return min(pairs, key=lambda p: p.energy)


# --- isotropic analytic ground state ----------------------------------------

@dataclass(frozen=True)
class IsotropicGroundParams:
    omega_tilde: float  # mixing ratio of the two-level sector at n_sector
    p_up: float
    p_down: float
    n_star: float  # continuous excitation number minimizing the sector energy
    n_sector: int  # integer excitation number of the ground-state sector
    n_limit: float  # closed-form large-N excitation number


def sector_energy(params: ModelParams, n) -> np.ndarray:
    """Lower eigenvalue of the lam = 0 two-level block {|up, n-1>, |down, n>}.

    ``n`` may be continuous. At ``n = 0`` the block is the single state |down, 0>.
    """
    N, w = params.n_bath, params.omega
    n = np.asarray(n, dtype=float)
    detuning = params.Omega - w
    k = np.clip(n * (N - n + 1), 0.0, None)
    two_level = w * (n - N / 2 - 0.5) - 0.5 * np.sqrt(detuning ** 2 + 4 * params.A ** 2 * k)
    return np.where(n == 0, -params.Omega / 2 - w * N / 2, two_level)


def excitation_number_limit(params: ModelParams) -> float:
    """Closed-form ground-state excitation number for N -> infinity at fixed eta.

    Minimizing the two-level sector energy with n << N gives
    n = (eta / 4) (g^2 - g^-2) with g = g_tilde / 2, zero below g_tilde = 2.
    """
    g = params.g_tilde / 2
    if g <= 1:
        return 0.0
    return params.eta / 4 * (g ** 2 - g ** -2)


def _continuous_minimizer(params: ModelParams) -> float:
    from scipy.optimize import minimize_scalar

    N = params.n_bath
    # omega n minus the square root of a concave quadratic: convex on [0, N]
    res = minimize_scalar(lambda x: float(sector_energy(params, x)), bounds=(0.0, float(N)),
                          method="bounded", options={"xatol": 1e-10 * max(1.0, N)})
    if float(sector_energy(params, 0.0)) <= res.fun:
        return 0.0
    return float(res.x)


def ground_sector_number(params: ModelParams, sector: int | None = EVEN) -> int:
    """Integer excitation number of the lowest lam = 0 sector with the requested parity."""
    N = params.n_bath
    # convexity in n: the integer optimum neighbours the continuous one
    x = _continuous_minimizer(params)
    base = int(math.floor(x))
    n = np.array(sorted({0, *[k for k in range(base - 2, base + 4) if 0 <= k <= N]}))
    if sector is not None:
        n = n[(n % 2 == 0) == (sector == EVEN)]
    e = sector_energy(params, n)
    return int(n[int(np.argmin(e))])


def mixing_ratio(params: ModelParams, n: float) -> float:
    """(Omega - omega) / (2 A sqrt(n (N - n + 1))): detuning over coupling in sector n."""
    k = n * (params.n_bath - n + 1)
    if k <= 0 or params.A == 0:
        return math.inf
    return (params.Omega - params.omega) / (2 * params.A * math.sqrt(k))


def sector_amplitudes(omega_tilde: float) -> tuple[float, float]:
    if math.isinf(omega_tilde):
        return 0.0, 1.0
    root = math.sqrt(1 + omega_tilde ** 2)
    norm = math.sqrt(2 * (1 + omega_tilde ** 2) - 2 * omega_tilde * root)
    return (omega_tilde - root) / norm, 1.0 / norm


def isotropic_ground_params(params: ModelParams, sector: int | None = EVEN) -> IsotropicGroundParams:
    if params.lam != 0:
        raise ValueError("isotropic analytic ground state requires lambda = 0")
    n_int = ground_sector_number(params, sector)
    x = mixing_ratio(params, n_int)
    p_up, p_down = sector_amplitudes(x)
    return IsotropicGroundParams(
        omega_tilde=x, p_up=p_up, p_down=p_down,
        n_star=_continuous_minimizer(params), n_sector=n_int,
        n_limit=excitation_number_limit(params),
    )


def isotropic_ground_analytic(params: ModelParams, sector: int | None = EVEN
                              ) -> tuple[IsotropicGroundParams, StateVector]:
    """Two-component ground state P_up |up, n-1> + P_down |down, n> at lam = 0."""
    gp = isotropic_ground_params(params, sector)
    basis = CentralSpinBasis(params.n_bath)
    n = gp.n_sector
    if n == 0:
        return gp, basis_state(basis, basis.index(DOWN, 0))
    amps = np.zeros(basis.dimension, dtype=complex)
    amps[basis.index(DOWN, n)] = gp.p_down
    amps[basis.index(UP, n - 1)] = gp.p_up
    return gp, StateVector.normalized(basis, amps)
