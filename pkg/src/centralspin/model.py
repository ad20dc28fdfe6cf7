"""Central spin and anisotropic LMG Hamiltonians and their parameter conversions.

The canonical parameterization is ``(N, omega, eta, g_tilde, lambda)``; the
bare coupling ``A`` and the central-spin splitting ``Omega`` are derived:

    Omega = eta * omega
    g_tilde = 2 A sqrt(N) / sqrt(Omega omega)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import reduce

import numpy as np

from .spinspace import CentralSpinBasis, DickeBasis, ladder_elements


@dataclass(frozen=True)
class ModelParams:
    n_bath: int
    eta: float
    g_tilde: float
    lam: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if int(self.n_bath) != self.n_bath or self.n_bath < 1:
            raise ValueError(f"n_bath must be a positive integer, got {self.n_bath!r}")
        object.__setattr__(self, "n_bath", int(self.n_bath))
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not self.g_tilde >= 0:
            raise ValueError(f"g_tilde must be non-negative, got {self.g_tilde}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")

    @property
    def Omega(self) -> float:
        return self.eta * self.omega

    @property
    def A(self) -> float:
        return coupling_from_g(self.g_tilde, self.n_bath, self.Omega, self.omega)

    @property
    def g_critical(self) -> float:
        return 2.0 / (1.0 + self.lam)

    def couplings(self) -> "DerivedCouplings":
        return derived_couplings(self)

    def with_g(self, g_tilde: float) -> "ModelParams":
        return replace(self, g_tilde=g_tilde)

    @classmethod
    def from_coupling(cls, n_bath, A, Omega, omega=1.0, lam=0.0) -> "ModelParams":
        return cls(n_bath=n_bath, eta=Omega / omega, lam=lam, omega=omega,
                   g_tilde=g_from_coupling(A, n_bath, Omega, omega))


def coupling_from_g(g_tilde, n_bath, Omega, omega):
    return g_tilde * np.sqrt(Omega * omega) / (2.0 * np.sqrt(n_bath))


def g_from_coupling(A, n_bath, Omega, omega):
    return 2.0 * A * np.sqrt(n_bath) / np.sqrt(Omega * omega)


@dataclass(frozen=True)
class DerivedCouplings:
    gamma_x: float
    gamma_y: float
    gamma_z: float
    g_critical: float


def derived_couplings(params: ModelParams) -> DerivedCouplings:
    g2, lam, w, N = params.g_tilde ** 2, params.lam, params.omega, params.n_bath
    return DerivedCouplings(
        gamma_x=g2 * w * (1 + lam) ** 2 / 4,
        gamma_y=g2 * w * (1 - lam) ** 2 / 4,
        gamma_z=w - g2 * (1 + lam) * (1 - lam) * w / (4 * N),
        g_critical=2.0 / (1.0 + lam),
    )


def build_central_spin_h(params: ModelParams) -> np.ndarray:
    """H = (Omega/2) sz + omega Iz + A[(I+ s- + I- s+) + lam (I+ s+ + I- s-)].

    Real symmetric matrix on ``CentralSpinBasis`` (down block first).
    """
    N = params.n_bath
    dim = N + 1
    basis = CentralSpinBasis(N)
    m = np.arange(dim) - N / 2
    h = np.zeros((basis.dimension, basis.dimension))
    diag = np.concatenate([-params.Omega / 2 + params.omega * m,
                           params.Omega / 2 + params.omega * m])
    h[np.diag_indices_from(h)] = diag

    lad = params.A * ladder_elements(N)  # <n+1|I+|n>
    n = np.arange(N)
    down = n  # (down, n) indices
    up = dim + n  # (up, n) indices
    # I- s+ : (down, n+1) -> (up, n); A-term, hermitian partner I+ s-
    h[up, down + 1] = lad
    h[down + 1, up] = lad
    # lam I+ s+ : (down, n) -> (up, n+1); hermitian partner I- s-
    h[up + 1, down] = params.lam * lad
    h[down, up + 1] = params.lam * lad
    return h


def build_lmg_h(params: ModelParams) -> np.ndarray:
    """H_down = -Omega/2 + gamma_z Iz - (gamma_x Ix^2 + gamma_y Iy^2) / N on ``DickeBasis``."""
    N = params.n_bath
    c = derived_couplings(params)
    m = np.arange(N + 1) - N / 2
    lad = ladder_elements(N)
    # Ix^2 + Iy^2 = I^2 - Iz^2 ; Ix^2 - Iy^2 = (I+^2 + I-^2) / 2
    casimir = N / 2 * (N / 2 + 1)
    sum_sq = casimir - m ** 2
    diff_sq_band = 0.5 * lad[:-1] * lad[1:]  # <n+2|I+^2|n> / 2
    xx_diag = 0.5 * sum_sq
    xx_band = 0.5 * diff_sq_band
    yy_diag = 0.5 * sum_sq
    yy_band = -0.5 * diff_sq_band

    h = np.diag(-params.Omega / 2 + c.gamma_z * m
                - (c.gamma_x * xx_diag + c.gamma_y * yy_diag) / N)
    band = -(c.gamma_x * xx_band + c.gamma_y * yy_band) / N
    h += np.diag(band, k=2) + np.diag(band, k=-2)
    return h


def excitation_number_operator(basis: CentralSpinBasis) -> np.ndarray:
    """sigma+ sigma- + Iz + N/2, conserved at lam = 0."""
    n = np.arange(basis.n_bath + 1)
    return np.diag(np.concatenate([n, n + 1]).astype(float))


# --- product-space oracle -------------------------------------------------

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),  # |0> = up
}
MAX_ORACLE_BATH = 6


def _site_op(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    mats = [np.eye(2)] * n_sites
    mats[site] = op
    return reduce(np.kron, mats)


def product_space_h(params: ModelParams) -> np.ndarray:
    """Individual-spin Hamiltonian on (central) x (bath 1) x ... x (bath N).

    Uses Ax = (1 + lam) A, Ay = (1 - lam) A, Az = 0.
    """
    N = params.n_bath
    sites = N + 1
    Ax = (1 + params.lam) * params.A
    Ay = (1 - params.lam) * params.A
    h = 0.5 * params.Omega * _site_op(_PAULI["z"], 0, sites)
    for k in range(1, sites):
        h = h + 0.5 * params.omega * _site_op(_PAULI["z"], k, sites)
        h = h + 0.5 * Ax * _site_op(_PAULI["x"], k, sites) @ _site_op(_PAULI["x"], 0, sites)
        h = h + 0.5 * Ay * _site_op(_PAULI["y"], k, sites) @ _site_op(_PAULI["y"], 0, sites)
    return h


def symmetric_isometry(n_bath: int) -> np.ndarray:
    """Columns span central spin (x) permutation-symmetric bath states.

    Each symmetric bath vector is the normalized sum over all computational
    states with a fixed number of up spins.
    """
    n_sites = n_bath + 1
    dim = 2 ** n_sites
    cols = []
    for central_up in (False, True):
        for n_up in range(n_bath + 1):
            v = np.zeros(dim)
            for ups in itertools.combinations(range(n_bath), n_up):
                bits = ["1"] * n_sites  # '1' = down
                bits[0] = "0" if central_up else "1"
                for k in ups:
                    bits[k + 1] = "0"
                v[int("".join(bits), 2)] = 1.0
            cols.append(v / np.linalg.norm(v))
    return np.array(cols).T


def brute_force_ground_energy(params: ModelParams) -> float:
    """Lowest eigenvalue of the individual-spin Hamiltonian in the symmetric sector."""
    if params.n_bath > MAX_ORACLE_BATH:
        raise ValueError(f"product-space oracle limited to N <= {MAX_ORACLE_BATH}")
    P = symmetric_isometry(params.n_bath)
    h_sym = P.T @ product_space_h(params) @ P
    return float(np.linalg.eigvalsh(h_sym)[0])
