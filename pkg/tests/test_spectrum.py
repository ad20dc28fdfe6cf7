import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centralspin.model import ModelParams, build_central_spin_h, build_lmg_h
from centralspin.spectrum import (
    EVEN,
    ODD,
    eigensystem,
    excitation_number_limit,
    ground_sector_number,
    ground_state,
    ground_state_in_sector,
    isotropic_ground_analytic,
    isotropic_ground_params,
    sector_energy,
    sector_indices,
)
from centralspin.spinspace import DOWN, CentralSpinBasis, DickeBasis, parity_diagonal


def test_eigensystem_trivial():
    pairs = eigensystem(np.diag([3.0, 1.0, 2.0]), DickeBasis(2))
    assert [p.energy for p in pairs] == [1.0, 2.0, 3.0]
    pairs = eigensystem(np.array([[0.0, 1.0], [1.0, 0.0]]), DickeBasis(1))
    np.testing.assert_allclose([p.energy for p in pairs], [-1, 1])
    np.testing.assert_allclose(np.abs(pairs[0].state.amplitudes), [2 ** -0.5] * 2)


def test_eigensystem_rejects_nonhermitian():
    with pytest.raises(ValueError):
        eigensystem(np.array([[0.0, 1.0], [0.0, 0.0]]), DickeBasis(1))


def test_phase_convention():
    for p in eigensystem(build_lmg_h(ModelParams(6, 10, 1.1, lam=0.4)), DickeBasis(6)):
        a = p.state.amplitudes
        k = np.argmax(np.abs(a))
        assert a[k].imag == 0 and a[k].real > 0


def test_lmg_spectrum_independent_solver():
    h = build_lmg_h(ModelParams(4, 10, 0.5, lam=1.0))
    ours = [p.energy for p in eigensystem(h, DickeBasis(4))]
    ref = np.sort(np.roots(np.poly(h)).real)
    np.testing.assert_allclose(ours, ref, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30), st.floats(1, 1e4), st.floats(0, 4), st.floats(0, 1))
def test_sector_spectra_reassemble_full_spectrum(n_bath, eta, g, lam):
    p = ModelParams(n_bath, eta, g, lam)
    for h, basis in ((build_central_spin_h(p), CentralSpinBasis(n_bath)),
                     (build_lmg_h(p), DickeBasis(n_bath))):
        full = np.linalg.eigvalsh(h)
        parts = np.concatenate([np.linalg.eigvalsh(h[np.ix_(i, i)])
                                for i in (sector_indices(basis, EVEN), sector_indices(basis, ODD))])
        np.testing.assert_allclose(np.sort(parts), full, atol=1e-10 * max(1, np.abs(full).max()))
        gs = ground_state(h, basis, sector=None)
        assert abs(gs.energy - full[0]) <= 1e-10 * max(1, abs(full[0]))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 60), st.floats(1, 1e5), st.floats(0, 4), st.floats(0, 1),
       st.sampled_from([EVEN, ODD]))
def test_sector_ground_state_residual(n_bath, eta, g, lam, sector):
    p = ModelParams(n_bath, eta, g, lam)
    h = build_central_spin_h(p)
    basis = CentralSpinBasis(n_bath)
    pair = ground_state_in_sector(h, basis, sector)
    v = pair.state.amplitudes
    assert np.linalg.norm(h @ v - pair.energy * v) <= 1e-9 * np.linalg.norm(h)
    outside = parity_diagonal(basis) != sector
    assert np.linalg.norm(v[outside]) <= 1e-8


def test_sector_rejects_parity_breaking_operator():
    h = np.zeros((4, 4))
    h[0, 1] = h[1, 0] = 1.0  # couples |down,0> (even) to |down,1> (odd)
    with pytest.raises(ValueError):
        ground_state_in_sector(h, CentralSpinBasis(1), EVEN)


def test_sector_selector_validation():
    with pytest.raises(ValueError):
        sector_indices(DickeBasis(3), 0)


def test_decoupled_even_ground_state():
    basis = CentralSpinBasis(5)
    pair = ground_state_in_sector(build_central_spin_h(ModelParams(5, 10, 0.0)), basis)
    assert abs(pair.state.amplitudes[basis.index(DOWN, 0)]) == pytest.approx(1.0)


def test_broken_phase_quasi_degeneracy():
    p = ModelParams(100, 1e5, 3.0, lam=1.0)
    h, basis = build_central_spin_h(p), CentralSpinBasis(100)
    e = ground_state_in_sector(h, basis, EVEN).energy
    o = ground_state_in_sector(h, basis, ODD).energy
    assert abs(e - o) < 1e-6 * p.omega


def test_normal_isotropic_ground_state_is_vacuum():
    basis = CentralSpinBasis(200)
    pair = ground_state_in_sector(build_central_spin_h(ModelParams(200, 1e5, 1.5)), basis)
    assert abs(pair.state.amplitudes[basis.index(DOWN, 0)]) ** 2 > 0.999


def test_sector_energy_at_zero():
    p = ModelParams(10, 100, 3.0)
    assert sector_energy(p, 0) == pytest.approx(-p.Omega / 2 - 5 * p.omega)


@pytest.mark.parametrize("g", [0.5, 1.5, 1.99])
def test_no_excitations_below_threshold(g):
    p = ModelParams(200, 1e5, g)
    assert ground_sector_number(p, None) == 0
    assert excitation_number_limit(p) == 0.0


def test_excitation_number_limit_large_bath():
    # for n << N the continuous minimizer approaches the closed form
    p = ModelParams(10 ** 9, 1e4, 3.0)
    gp = isotropic_ground_params(p, None)
    assert gp.n_limit == pytest.approx(2500 * (1.5 ** 2 - 1.5 ** -2))
    assert gp.n_star == pytest.approx(gp.n_limit, rel=1e-3)


@pytest.mark.parametrize("eta,g", [(1e5, 2.5), (1e3, 3.0), (1e2, 2.2)])
def test_isotropic_amplitudes_normalized(eta, g):
    gp = isotropic_ground_params(ModelParams(200, eta, g), EVEN)
    assert gp.p_up ** 2 + gp.p_down ** 2 == pytest.approx(1.0, abs=1e-12)
    assert gp.n_sector % 2 == 0


def test_isotropic_analytic_requires_isotropy():
    with pytest.raises(ValueError):
        isotropic_ground_analytic(ModelParams(10, 10, 3.0, lam=0.2))


def _overlap(p):
    _, psi = isotropic_ground_analytic(p, EVEN)
    pair = ground_state_in_sector(build_central_spin_h(p), CentralSpinBasis(p.n_bath), EVEN)
    return abs(np.vdot(psi.amplitudes, pair.state.amplitudes)) ** 2


def test_isotropic_analytic_overlap():
    assert _overlap(ModelParams(200, 1e5, 2.5)) > 0.99
    _, psi = isotropic_ground_analytic(ModelParams(200, 1e5, 1.0))
    assert abs(psi.amplitudes[0]) == 1.0


@pytest.mark.parametrize("eta", [1e2, 1e3, 1e4, 1e5])
def test_isotropic_analytic_overlap_is_exact(eta):
    # at lam = 0 the even ground state lies in one two-level sector, so the
    # sector state with the detuned mixing ratio is exact for every eta
    assert _overlap(ModelParams(100, eta, 2.5)) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 300), st.floats(1, 1e5), st.floats(0, 6),
       st.sampled_from([EVEN, ODD, None]))
def test_ground_sector_number_matches_enumeration(n_bath, eta, g, sector):
    p = ModelParams(n_bath, eta, g)
    n = np.arange(n_bath + 1)
    if sector is not None:
        n = n[(n % 2 == 0) == (sector == EVEN)]
    assert ground_sector_number(p, sector) == n[np.argmin(sector_energy(p, n))]
