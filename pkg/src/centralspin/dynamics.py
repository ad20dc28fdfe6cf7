"""Squeezing dynamics from |down> (x) spin-coherent initial states.

Three routes produce the same five bath moments
<Iz>, <Iz^2>, <I+>, <I+^2>, <I+(2Iz+1)>:

* ``analytic``: the exact lam = 0 propagator, a sum over two-level sectors;
* ``moments``: large-eta closed forms for the moments (one-axis twisting limit);
* ``numeric``: spectral propagation under any model Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, build_central_spin_h, build_lmg_h
from .spinspace import (
    CentralSpinBasis,
    DickeBasis,
    StateVector,
    apply_collective,
    check_hermitian,
    coherent_amplitudes,
    ladder_elements,
)
from .squeezing import SpinMoments, report_from_moments

MOMENT_KEYS = ("iz", "iz2", "iplus", "iplus2", "iplus_2iz1")


@dataclass(frozen=True)
class IsotropicPropagatorTerms:
    """Per-sector quantities of the exact lam = 0 propagator.

    Sector ``m`` couples |down, m> to |up, m-1> with coupling A sqrt(k_m);
    the two levels are split by ``detuning = Omega - omega`` once the
    conserved excitation energy is factored out.
    """

    n_bath: int
    omega: float
    A: float
    detuning: float
    k: np.ndarray
    Omega_m: np.ndarray

    def amplitudes(self, t) -> tuple[np.ndarray, np.ndarray]:
        """(P_down, P_up), each of shape ``(len(t), N + 1)``."""
        t = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
        half = self.Omega_m * t / 2
        # sin(Omega_m t / 2) / Omega_m, finite when Omega_m vanishes
        s_over = 0.5 * t * np.sinc(half / np.pi)
        p_down = np.cos(half) + 1j * self.detuning * s_over
        p_up = -2j * np.sqrt(self.k) * self.A * s_over
        return p_down, p_up


def isotropic_propagator_terms(params: ModelParams) -> IsotropicPropagatorTerms:
    N = params.n_bath
    m = np.arange(N + 1)
    k = m * (N - m + 1.0)
    detuning = params.Omega - params.omega
    return IsotropicPropagatorTerms(
        n_bath=N, omega=params.omega, A=params.A, detuning=detuning, k=k,
        Omega_m=np.sqrt(detuning ** 2 + 4 * k * params.A ** 2),
    )


def _require_isotropic(params: ModelParams):
    if params.lam != 0:
        raise ValueError("the analytic propagator requires lambda = 0")


def isotropic_amplitudes(params: ModelParams, theta0: float, times) -> np.ndarray:
    """Central-spin amplitudes, shape ``(len(times), 2(N+1))``."""
    _require_isotropic(params)
    terms = isotropic_propagator_terms(params)
    N = params.n_bath
    m = np.arange(N + 1)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    weights = coherent_amplitudes(N, theta0)
    phase = np.exp(-1j * np.outer(t, m - N / 2 - 0.5) * params.omega)
    p_down, p_up = terms.amplitudes(t)
    out = np.zeros((t.size, 2 * (N + 1)), dtype=complex)
    out[:, : N + 1] = weights * phase * p_down
    # |up, m-1> for m = 1..N
    out[:, N + 1: 2 * N + 1] = (weights * phase * p_up)[:, 1:]
    return out


def evolve_isotropic_analytic(params: ModelParams, theta0: float, t: float) -> StateVector:
    amps = isotropic_amplitudes(params, theta0, [t])[0]
    return StateVector(CentralSpinBasis(params.n_bath), amps)


@dataclass(frozen=True)
class SpectralPropagator:
    energies: np.ndarray
    vectors: np.ndarray

    @classmethod
    def from_hamiltonian(cls, h: np.ndarray) -> "SpectralPropagator":
        e, v = np.linalg.eigh(check_hermitian(h))
        return cls(e, v)

    def propagate(self, psi0: np.ndarray, times) -> np.ndarray:
        """exp(-iHt) psi0 for every t, shape ``(len(times), dim)``."""
        t = np.atleast_1d(np.asarray(times, dtype=float))
        coeff = self.vectors.conj().T @ np.asarray(psi0, dtype=complex)
        return (np.exp(-1j * np.outer(t, self.energies)) * coeff) @ self.vectors.T


def evolve_numeric(h: np.ndarray, psi0: StateVector, times) -> list[StateVector]:
    if h.shape != (psi0.basis.dimension,) * 2:
        raise ValueError("Hamiltonian and state dimensions differ")
    amps = SpectralPropagator.from_hamiltonian(h).propagate(psi0.amplitudes, times)
    return [StateVector.normalized(psi0.basis, a) for a in amps]


def initial_amplitudes(n_bath: int, theta0: float, model: str) -> np.ndarray:
    cs = coherent_amplitudes(n_bath, theta0)
    if model == "lmg":
        return cs.astype(complex)
    out = np.zeros(2 * (n_bath + 1), dtype=complex)
    out[: n_bath + 1] = cs
    return out


# --- moments ----------------------------------------------------------------

def moments_from_amplitudes(amps: np.ndarray, n_bath: int) -> dict[str, np.ndarray]:
    """Five bath moments for a stack of states, amplitudes shape ``(T, dim)``."""
    amps = np.atleast_2d(amps)
    v = amps.reshape(amps.shape[0], -1, n_bath + 1)
    m = np.arange(n_bath + 1) - n_bath / 2
    lad = ladder_elements(n_bath)
    prob = np.abs(v) ** 2
    iz = (prob * m).sum(axis=(1, 2))
    iz2 = (prob * m ** 2).sum(axis=(1, 2))
    # <I+> = sum_n conj(v[n+1]) lad[n] v[n]
    cross1 = np.conj(v[..., 1:]) * v[..., :-1]
    iplus = (cross1 * lad).sum(axis=(1, 2))
    cross2 = np.conj(v[..., 2:]) * v[..., :-2]
    iplus2 = (cross2 * lad[:-1] * lad[1:]).sum(axis=(1, 2))
    # I+(2Iz+1) acting on |n> gives (2 m_n + 1) I+|n>
    iplus_2iz1 = (cross1 * lad * (2 * m[:-1] + 1)).sum(axis=(1, 2))
    return {"iz": iz, "iz2": iz2, "iplus": iplus, "iplus2": iplus2, "iplus_2iz1": iplus_2iz1}


def spin_moments_from_five(n_bath: int, mom: dict, index: int) -> SpinMoments:
    casimir = n_bath / 2 * (n_bath / 2 + 1)
    iz, iz2 = float(np.real(mom["iz"][index])), float(np.real(mom["iz2"][index]))
    ip, ip2, q = mom["iplus"][index], mom["iplus2"][index], mom["iplus_2iz1"][index]
    perp = casimir - iz2  # <Ix^2 + Iy^2>
    second = np.empty((3, 3))
    second[0, 0] = 0.5 * (perp + ip2.real)
    second[1, 1] = 0.5 * (perp - ip2.real)
    second[2, 2] = iz2
    second[0, 1] = second[1, 0] = 0.5 * ip2.imag
    second[0, 2] = second[2, 0] = 0.5 * q.real
    second[1, 2] = second[2, 1] = 0.5 * q.imag
    mean = np.array([ip.real, ip.imag, iz])
    return SpinMoments(n_bath, mean, second)


def analytic_moments(params: ModelParams, theta0: float, times) -> dict[str, np.ndarray]:
    """Large-eta closed forms of the five moments at lam = 0.

    With a = A^2 t / Omega and rotation phase (omega - A^2 / Omega) t the bath
    undergoes one-axis twisting; P_up is neglected.
    """
    _require_isotropic(params)
    N = params.n_bath
    t = np.atleast_1d(np.asarray(times, dtype=float))
    a = params.A ** 2 * t / params.Omega
    rot = np.exp(1j * (params.omega - params.A ** 2 / params.Omega) * t)
    ct, st = math.cos(theta0), math.sin(theta0)
    base1 = np.cos(a) + 1j * ct * np.sin(a)
    base2 = np.cos(2 * a) + 1j * ct * np.sin(2 * a)
    iz = np.full(t.shape, N / 2 * ct)
    iz2 = np.full(t.shape, N / 8 * (N + 1 + (N - 1) * math.cos(2 * theta0)))
    iplus = 0.5 * N * rot * base1 ** (N - 1) * st
    iplus2 = 0.25 * rot ** 2 * N * (N - 1) * base2 ** (N - 2) * st ** 2
    iplus_2iz1 = (0.5 * rot * N * (N - 1) * base1 ** (N - 2)
                  * (ct * np.cos(a) + 1j * np.sin(a)) * st)
    return {"iz": iz, "iz2": iz2, "iplus": iplus, "iplus2": iplus2, "iplus_2iz1": iplus_2iz1}


def oat_abc(params: ModelParams, times) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Closed-form transverse second moments at theta0 = pi/2.

    Returns (A, B, C) so that xi_S^2 = 2 (C - sqrt(A^2 + B^2)) / N.
    """
    N = params.n_bath
    a = params.A ** 2 * np.asarray(times, dtype=float) / params.Omega
    A_ = N * (N - 1) / 8 * (1 - np.cos(2 * a) ** (N - 2))
    B_ = N / 2 * (N - 1) * np.cos(a) ** (N - 2) * np.sin(a)
    return A_, B_, A_ + N / 2


# --- time series ----------------------------------------------------------------

@dataclass(frozen=True)
class SqueezingTimeSeries:
    times: np.ndarray
    xi_s2: np.ndarray
    xi_r2: np.ndarray
    moments: dict = field(repr=False)


def series_from_moments(n_bath: int, times, mom: dict) -> SqueezingTimeSeries:
    times = np.asarray(times, dtype=float)
    xs, xr = np.empty(times.size), np.empty(times.size)
    for i in range(times.size):
        r = report_from_moments(spin_moments_from_five(n_bath, mom, i))
        xs[i], xr[i] = r.xi_s2, r.xi_r2
    return SqueezingTimeSeries(times, xs, xr, mom)


METHODS = ("analytic", "moments", "numeric")


def squeezing_time_series(params: ModelParams, times, theta0: float = math.pi / 2,
                          method: str = "numeric", model: str = "central"
                          ) -> SqueezingTimeSeries:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise ValueError("time grid needs at least two points")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if model not in ("central", "lmg"):
        raise ValueError(f"unknown model {model!r}")
    N = params.n_bath
    if method == "analytic":
        if model != "central":
            raise ValueError("the analytic propagator describes the central spin model")
        mom = moments_from_amplitudes(isotropic_amplitudes(params, theta0, times), N)
    elif method == "moments":
        mom = analytic_moments(params, theta0, times)
    else:
        h = build_lmg_h(params) if model == "lmg" else build_central_spin_h(params)
        prop = SpectralPropagator.from_hamiltonian(h)
        mom = moments_from_amplitudes(prop.propagate(initial_amplitudes(N, theta0, model), times), N)
    return series_from_moments(N, times, mom)


@dataclass(frozen=True)
class OptimalSqueezing:
    t_min: float
    xi_min2: float


class WindowError(RuntimeError):
    """The squeezing minimum sits on the edge of the sampled window."""


def optimal_squeezing(series: SqueezingTimeSeries) -> OptimalSqueezing:
    xs, ts = series.xi_s2, series.times
    i = int(np.argmin(xs))
    if i == 0 or i == xs.size - 1:
        raise WindowError("squeezing minimum at the window boundary; widen the time grid")
    # vertex of the parabola through the three bracketing samples
    (t0, t1, t2), (y0, y1, y2) = ts[i - 1: i + 2], xs[i - 1: i + 2]
    denom = (t0 - t1) * (t0 - t2) * (t1 - t2)
    a = (t2 * (y1 - y0) + t1 * (y0 - y2) + t0 * (y2 - y1)) / denom
    b = (t2 ** 2 * (y0 - y1) + t1 ** 2 * (y2 - y0) + t0 ** 2 * (y1 - y2)) / denom
    if a <= 0:
        return OptimalSqueezing(float(t1), float(y1))
    tv = -b / (2 * a)
    yv = y1 + a * (tv - t1) ** 2 + (2 * a * t1 + b) * (tv - t1)
    return OptimalSqueezing(float(tv), float(min(yv, y1)))


def predicted_optimum(params: ModelParams) -> OptimalSqueezing:
    """One-axis-twisting optimum: xi^2 = (N/3)^(-2/3) / 2 at t = 4 3^(1/6) N^(1/3) / (g^2 omega)."""
    N = params.n_bath
    t = 4 * 3 ** (1 / 6) * N ** (1 / 3) / (params.g_tilde ** 2 * params.omega)
    return OptimalSqueezing(t, 0.5 * (N / 3) ** (-2 / 3))


def default_time_grid(params: ModelParams, points: int = 2000) -> np.ndarray:
    return np.linspace(0.0, 2 * predicted_optimum(params).t_min, points)
