"""Numerical check of the Schrieffer-Wolff reduction of the central spin model.

With H = H0 + A V, H0 = (Omega/2) sz + omega Iz and
V = (1 + lam) Ix sx + (1 - lam) Iy sy, the generator

    S = -i (1 + lam) / Omega * Ix sy + i (1 - lam) / Omega * Iy sx

satisfies [(Omega/2) sz, A S] = -A V. Conjugating with the exact unitary
exp(A S) removes the block-off-diagonal coupling to first order and leaves
the anisotropic LMG Hamiltonian in the central spin-down block, up to
corrections that vanish as eta = Omega / omega grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, build_central_spin_h, build_lmg_h
from .spinspace import (
    DOWN,
    UP,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    CentralSpinBasis,
    DickeBasis,
    collective_ops,
    embed_with_central,
)


@dataclass(frozen=True)
class SwGenerator:
    """Coupling-free generator ``matrix``; the unitary is exp(A * matrix)."""

    matrix: np.ndarray
    A: float

    @property
    def scaled(self) -> np.ndarray:
        return self.A * self.matrix

    def unitary(self) -> np.ndarray:
        # A S is anti-Hermitian, so A S = -i K with K Hermitian
        k = 1j * self.scaled
        w, v = np.linalg.eigh(0.5 * (k + k.conj().T))
        return (v * np.exp(-1j * w)) @ v.conj().T


def build_sw_generator(params: ModelParams) -> SwGenerator:
    ops = collective_ops(DickeBasis(params.n_bath))
    lam, Om = params.lam, params.Omega
    s = (-1j * (1 + lam) / Om * embed_with_central(ops.Ix, SIGMA_Y)
         + 1j * (1 - lam) / Om * embed_with_central(ops.Iy, SIGMA_X))
    return SwGenerator(s, params.A)


def interaction_operator(params: ModelParams) -> np.ndarray:
    """V = (1 + lam) Ix sx + (1 - lam) Iy sy, so that H = H0 + A V."""
    ops = collective_ops(DickeBasis(params.n_bath))
    return ((1 + params.lam) * embed_with_central(ops.Ix, SIGMA_X)
            + (1 - params.lam) * embed_with_central(ops.Iy, SIGMA_Y))


def free_hamiltonian(params: ModelParams, include_bath: bool = True) -> np.ndarray:
    ops = collective_ops(DickeBasis(params.n_bath))
    eye_b = np.eye(params.n_bath + 1)
    h0 = 0.5 * params.Omega * embed_with_central(eye_b, SIGMA_Z)
    if include_bath:
        h0 = h0 + params.omega * embed_with_central(ops.Iz, np.eye(2))
    return h0


def commutator_residual(params: ModelParams, include_bath: bool = False) -> float:
    """||[H0, A S] + A V||_F / ||A V||_F.

    Vanishes identically when H0 keeps only the central-spin splitting; with
    the bath Zeeman term it equals the O(1/eta) remainder.
    """
    gen = build_sw_generator(params)
    h0 = free_hamiltonian(params, include_bath)
    av = params.A * interaction_operator(params)
    norm = np.linalg.norm(av)
    if norm == 0:
        return 0.0
    comm = h0 @ gen.scaled - gen.scaled @ h0
    return float(np.linalg.norm(comm + av) / norm)


def conjugated_hamiltonian(params: ModelParams) -> np.ndarray:
    """H' = exp(-A S) H exp(A S), Hermitian to rounding."""
    u = build_sw_generator(params).unitary()
    hp = u.conj().T @ build_central_spin_h(params) @ u
    return 0.5 * (hp + hp.conj().T)


def split_blocks(op: np.ndarray, basis: CentralSpinBasis) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(down block, up block, down-up coupling block)."""
    d, u = basis.block(DOWN), basis.block(UP)
    return op[d, d], op[u, u], op[d, u]


@dataclass(frozen=True)
class MappingReport:
    residual_offdiag: float
    block_error: float
    eta: float


def mapping_report(params: ModelParams) -> MappingReport:
    """Off-block weight of H' and distance of its down block from the LMG block.

    ``residual_offdiag`` is ||off-block part||_F / ||H'||_F. ``block_error``
    compares the down block with H_down after removing the common constant
    -Omega/2, which would otherwise dominate the norm and hide the mapping
    error: ||down + Omega/2 - (H_down + Omega/2)||_F / ||H_down + Omega/2||_F.
    """
    basis = CentralSpinBasis(params.n_bath)
    hp = conjugated_hamiltonian(params)
    down, _, off = split_blocks(hp, basis)
    residual = np.sqrt(2) * np.linalg.norm(off) / np.linalg.norm(hp)
    shift = 0.5 * params.Omega * np.eye(params.n_bath + 1)
    lmg = build_lmg_h(params) + shift
    block_error = np.linalg.norm(down + shift - lmg) / np.linalg.norm(lmg)
    return MappingReport(float(residual), float(block_error), params.eta)


def low_energy_comparison(params: ModelParams, count: int = 5) -> tuple[np.ndarray, np.ndarray]:
    """Lowest ``count`` eigenvalues of the central spin model and of the LMG block."""
    e_cs = np.linalg.eigvalsh(build_central_spin_h(params))[:count]
    e_lmg = np.linalg.eigvalsh(build_lmg_h(params))[:count]
    return e_cs, e_lmg
