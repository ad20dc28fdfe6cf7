"""Ground-state quantum Fisher information, its peak, and scaling fits.

The QFI with respect to g_tilde is evaluated from the fidelity between
neighbouring ground states,

    F(g) ~ 8 (1 - |<psi(g - d/2)|psi(g + d/2)>|) / d^2,

which is insensitive to eigenvector phases. The infidelity is computed as
||b - a <a|b>/|<a|b>| ||^2 / 2 to avoid cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import ModelParams, build_central_spin_h, build_lmg_h
from .spectrum import EVEN, ground_state_in_sector
from .spinspace import CentralSpinBasis, DickeBasis

GroundFamily = Callable[[float], np.ndarray]


class CriticalityError(RuntimeError):
    """Non-convergent derivative or a peak on the scan boundary."""


def infidelity(a: np.ndarray, b: np.ndarray) -> float:
    """1 - |<a|b>| for unit vectors, free of cancellation."""
    ov = np.vdot(a, b)
    if ov == 0:
        return 1.0
    return 0.5 * float(np.linalg.norm(b - a * (ov / abs(ov))) ** 2)


def ground_family(params: ModelParams, model: str = "central") -> GroundFamily:
    """g_tilde -> even-parity ground-state amplitudes at the other parameters fixed."""
    if model == "central":
        build, basis = build_central_spin_h, CentralSpinBasis(params.n_bath)
    elif model == "lmg":
        build, basis = build_lmg_h, DickeBasis(params.n_bath)
    else:
        raise ValueError(f"unknown model {model!r}")

    def psi(g: float) -> np.ndarray:
        h = build(params.with_g(float(g)))
        return ground_state_in_sector(h, basis, EVEN, check=False).state.amplitudes

    return psi


def _fidelity_qfi(psi: GroundFamily, g: float, delta: float) -> float:
    return 8 * infidelity(psi(g - delta / 2), psi(g + delta / 2)) / delta ** 2


def qfi_of_family(psi: GroundFamily, g: float, delta: float | None = None,
                  rtol: float = 0.01, max_halvings: int = 6) -> float:
    """Richardson-extrapolated fidelity QFI of an arbitrary state family."""
    d = 1e-4 * max(1.0, abs(g)) if delta is None else delta
    f_prev = _fidelity_qfi(psi, g, d)
    for _ in range(max_halvings):
        f_half = _fidelity_qfi(psi, g, d / 2)
        if abs(f_half - f_prev) <= rtol * max(abs(f_half), 1e-12):
            return max((4 * f_half - f_prev) / 3, 0.0)
        d, f_prev = d / 2, f_half
    raise CriticalityError(f"QFI did not converge at g = {g} after {max_halvings} halvings")


def qfi_at(params: ModelParams, g: float, delta: float | None = None,
           model: str = "central") -> float:
    return qfi_of_family(ground_family(params, model), g, delta)


@dataclass(frozen=True)
class QfiCurve:
    g_values: np.ndarray
    f_values: np.ndarray
    params: ModelParams
    model: str = "central"


@dataclass(frozen=True)
class QfiPeak:
    g_m: float
    f_max: float


def qfi_scan(params: ModelParams, g_range: tuple[float, float], n_points: int,
             model: str = "central") -> QfiCurve:
    if n_points < 3:
        raise ValueError("a QFI scan needs at least three points")
    psi = ground_family(params, model)
    gs = np.linspace(g_range[0], g_range[1], n_points)
    return QfiCurve(gs, np.array([qfi_of_family(psi, g) for g in gs]), params, model)


def golden_max(f: Callable[[float], float], lo: float, hi: float,
               tol: float = 1e-4) -> tuple[float, float]:
    """Golden-section search for the maximum of a unimodal f on [lo, hi]."""
    inv = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def peak_of(g_values, f_values, f: Callable[[float], float], tol: float = 1e-4) -> QfiPeak:
    g_values, f_values = np.asarray(g_values), np.asarray(f_values)
    i = int(np.argmax(f_values))
    if i == 0 or i == len(g_values) - 1:
        raise CriticalityError("QFI maximum on the scan boundary; widen the g range")
    g_m, f_m = golden_max(f, g_values[i - 1], g_values[i + 1], tol)
    if f_m < f_values[i]:
        return QfiPeak(float(g_values[i]), float(f_values[i]))
    return QfiPeak(float(g_m), float(f_m))


def qfi_peak(curve: QfiCurve, tol: float = 1e-4) -> QfiPeak:
    psi = ground_family(curve.params, curve.model)
    return peak_of(curve.g_values, curve.f_values, lambda g: qfi_of_family(psi, g), tol)


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    log_prefactor: float
    r_squared: float
    points: tuple


def loglog_fit(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Least squares of ln y against ln x."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise ValueError("a scaling fit needs at least three points")
    x, y = np.array(pts).T
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit requires positive data")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(float(slope), float(intercept), min(max(r2, 0.0), 1.0), tuple(pts))


def pairwise_exponents(points: Sequence[tuple[float, float]]) -> list[tuple[int, int, float]]:
    """Two-point exponents over consecutive windows [N1, N2]."""
    pts = sorted(points)
    out = []
    for (n1, f1), (n2, f2) in zip(pts, pts[1:]):
        out.append((int(n1), int(n2), math.log(f2 / f1) / math.log(n2 / n1)))
    return out


def peak_for_size(params: ModelParams, n_bath: int, g_range=(0.9, 1.1), n_points: int = 41,
                  model: str = "central") -> QfiPeak:
    p = ModelParams(n_bath, eta=params.eta, g_tilde=params.g_tilde, lam=params.lam,
                    omega=params.omega)
    return qfi_peak(qfi_scan(p, g_range, n_points, model))


def critical_exponent(params: ModelParams, n_list: Sequence[int], g_range=(0.9, 1.1),
                      n_points: int = 41, model: str = "central",
                      peaks: Sequence[QfiPeak] | None = None) -> ScalingFit:
    """Fit F(g_m) ~ N^mu over ``n_list``; precomputed ``peaks`` may be supplied."""
    if len(n_list) < 3:
        raise ValueError("critical exponent needs at least three system sizes")
    if peaks is None:
        peaks = [peak_for_size(params, n, g_range, n_points, model) for n in n_list]
    return loglog_fit([(n, pk.f_max) for n, pk in zip(n_list, peaks)])
