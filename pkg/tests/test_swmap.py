import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centralspin.model import ModelParams, build_central_spin_h, build_lmg_h, derived_couplings
from centralspin.spinspace import SIGMA_Y, CentralSpinBasis, DickeBasis, collective_ops, embed_with_central
from centralspin.swmap import (
    build_sw_generator,
    commutator_residual,
    conjugated_hamiltonian,
    low_energy_comparison,
    mapping_report,
    split_blocks,
)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 25), st.floats(1, 1e5), st.floats(0, 3), st.floats(0, 1))
def test_generator_structure(n_bath, eta, g, lam):
    p = ModelParams(n_bath, eta, g, lam)
    s = build_sw_generator(p).matrix
    assert np.abs(s + s.conj().T).max() <= 1e-12 * max(np.abs(s).max(), 1e-300)
    down, up, _ = split_blocks(s, CentralSpinBasis(n_bath))
    assert np.all(down == 0) and np.all(up == 0)


def test_generator_maximal_anisotropy():
    p = ModelParams(6, 40, 1.0, 1.0)
    ix = collective_ops(DickeBasis(6)).Ix
    expected = -1j * 2 / p.Omega * embed_with_central(ix, SIGMA_Y)
    np.testing.assert_allclose(build_sw_generator(p).matrix, expected, atol=1e-15)


@pytest.mark.parametrize("lam", [0.0, 0.3, 1.0])
def test_generator_single_bath_spin(lam):
    # basis |down,0>, |down,1>, |up,0>, |up,1>; Omega = 2
    p = ModelParams(1, 2.0, 1.0, lam)
    expected = np.array([[0, 0, 0, lam / 2],
                         [0, 0, 0.5, 0],
                         [0, -0.5, 0, 0],
                         [-lam / 2, 0, 0, 0]])
    np.testing.assert_allclose(build_sw_generator(p).matrix, expected, atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 20), st.floats(2, 1e5), st.floats(0.1, 3), st.floats(0, 1))
def test_commutator_identity(n_bath, eta, g, lam):
    p = ModelParams(n_bath, eta, g, lam)
    assert commutator_residual(p, include_bath=False) <= 1e-10
    # the bath Zeeman term leaves a remainder of relative size omega / Omega
    assert commutator_residual(p, include_bath=True) <= 1.0001 / eta


@pytest.mark.parametrize("eta", [1e2, 1e3, 1e4])
def test_commutator_remainder_maximal_anisotropy(eta):
    assert commutator_residual(ModelParams(10, eta, 1.0, 1.0), True) == pytest.approx(1 / eta, rel=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 20), st.floats(2, 1e4), st.floats(0, 3), st.floats(0, 1))
def test_conjugation_is_unitary(n_bath, eta, g, lam):
    p = ModelParams(n_bath, eta, g, lam)
    gen = build_sw_generator(p)
    u = gen.unitary()
    assert np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() <= 1e-11
    h = build_central_spin_h(p)
    hp = conjugated_hamiltonian(p)
    scale = np.abs(h).max()
    assert np.abs(hp - hp.conj().T).max() <= 1e-11 * scale
    np.testing.assert_allclose(np.linalg.eigvalsh(hp), np.linalg.eigvalsh(h), atol=1e-10 * scale)
    assert abs(np.trace(hp) - np.trace(h)) <= 1e-10 * max(abs(np.trace(h)), scale)


def test_uncoupled_limit_is_unchanged():
    p = ModelParams(8, 100, 0.0, 0.5)
    np.testing.assert_array_equal(conjugated_hamiltonian(p), build_central_spin_h(p))
    rep = mapping_report(p)
    assert rep.residual_offdiag == 0


def test_residuals_shrink_with_eta():
    reps = [mapping_report(ModelParams(20, eta, 1.0, 1.0)) for eta in (1e2, 1e3, 1e4)]
    assert all(r.residual_offdiag >= 0 and r.block_error >= 0 for r in reps)
    assert reps[1].residual_offdiag < reps[0].residual_offdiag
    assert reps[2].residual_offdiag < reps[1].residual_offdiag
    slopes = [math.log10(a.block_error / b.block_error) for a, b in zip(reps, reps[1:])]
    for s in slopes:
        assert s == pytest.approx(1.0, abs=0.1)


def test_isotropic_block_is_diagonal_closed_form():
    p = ModelParams(16, 1e5, 1.2, 0.0)
    down, _, _ = split_blocks(conjugated_hamiltonian(p), CentralSpinBasis(16))
    c = derived_couplings(p)
    m = DickeBasis(16).m_values()
    # energies above -Omega/2: gamma_z m - (gamma_x / N)(I^2 - m^2)
    closed = c.gamma_z * m - c.gamma_x / 16 * (8 * 9 - m ** 2)
    diag = np.diagonal(down).real + p.Omega / 2
    np.testing.assert_allclose(diag, closed, atol=1e-3)
    off = down - np.diag(np.diagonal(down))
    assert np.abs(off).max() < 1e-3


def test_block_matches_lmg_operator():
    p = ModelParams(12, 1e4, 0.8, 0.6)
    down, _, _ = split_blocks(conjugated_hamiltonian(p), CentralSpinBasis(12))
    np.testing.assert_allclose(down.real, build_lmg_h(p), atol=5e-3)


def test_low_energy_spectrum():
    p = ModelParams(50, 1e5, 1.0, 1.0)
    e_cs, e_lmg = low_energy_comparison(p)
    # compare energies measured from the common offset -Omega/2
    rel = np.abs((e_cs - e_lmg) / (e_lmg + p.Omega / 2))
    assert rel.max() <= 1e-3
