"""Basis orderings and collective spin operators in the maximal-spin Dicke sector.

Two bases are used throughout the package:

* ``DickeBasis``: index ``n`` is the Dicke state ``|N/2, -N/2 + n>``.
* ``CentralSpinBasis``: central spin tensored with the Dicke sector, laid out
  as the full spin-down block followed by the full spin-up block, i.e.
  index ``s * (N + 1) + n`` with ``s = 0`` (down) or ``s = 1`` (up).

Operators are plain dense numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gammaln

DOWN = 0
UP = 1

# central spin operators in the (down, up) ordering
SIGMA_Z = np.diag([-1.0, 1.0])
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, 1j], [-1j, 0.0]])  # <up|sy|down> = -i
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]])  # |up><down|
SIGMA_MINUS = SIGMA_PLUS.T.copy()


@dataclass(frozen=True)
class DickeBasis:
    n_bath: int

    def __post_init__(self):
        if int(self.n_bath) != self.n_bath or self.n_bath < 1:
            raise ValueError(f"n_bath must be a positive integer, got {self.n_bath!r}")

    @property
    def dimension(self) -> int:
        return self.n_bath + 1

    @property
    def spin(self) -> float:
        return self.n_bath / 2

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers ``m = -N/2 + n`` for ``n = 0..N``."""
        return np.arange(self.n_bath + 1) - self.n_bath / 2

    def index_of_m(self, m: float) -> int:
        n = m + self.n_bath / 2
        if abs(n - round(n)) > 1e-9 or not 0 <= round(n) <= self.n_bath:
            raise ValueError(f"m={m} is not in the spin-{self.spin} multiplet")
        return int(round(n))


@dataclass(frozen=True)
class CentralSpinBasis:
    n_bath: int

    def __post_init__(self):
        if int(self.n_bath) != self.n_bath or self.n_bath < 1:
            raise ValueError(f"n_bath must be a positive integer, got {self.n_bath!r}")

    @property
    def bath(self) -> DickeBasis:
        return DickeBasis(self.n_bath)

    @property
    def dimension(self) -> int:
        return 2 * (self.n_bath + 1)

    def index(self, s: int, n: int) -> int:
        if s not in (DOWN, UP) or not 0 <= n <= self.n_bath:
            raise ValueError(f"invalid (s, n) = ({s}, {n})")
        return s * (self.n_bath + 1) + n

    def decode(self, index: int) -> tuple[int, int]:
        if not 0 <= index < self.dimension:
            raise ValueError(f"index {index} out of range")
        return divmod(index, self.n_bath + 1)

    def block(self, s: int) -> slice:
        """Contiguous slice of the spin-``s`` block."""
        start = s * (self.n_bath + 1)
        return slice(start, start + self.n_bath + 1)


Basis = Union[DickeBasis, CentralSpinBasis]


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitude vector tagged with the basis it lives in."""

    basis: Basis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dimension,):
            raise ValueError(
                f"expected {self.basis.dimension} amplitudes, got shape {amps.shape}"
            )
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, basis: Basis, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex)
        return cls(basis, amps / np.linalg.norm(amps))

    @property
    def n_bath(self) -> int:
        return self.basis.n_bath

    def expect(self, op: np.ndarray) -> complex:
        return np.vdot(self.amplitudes, op @ self.amplitudes)


def basis_state(basis: Basis, index: int) -> StateVector:
    amps = np.zeros(basis.dimension, dtype=complex)
    amps[index] = 1.0
    return StateVector(basis, amps)


def check_hermitian(op: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Return ``op`` unchanged, raising ``ValueError`` if it is not Hermitian."""
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"operator must be square, got shape {op.shape}")
    scale = np.max(np.abs(op)) if op.size else 0.0
    if np.max(np.abs(op - op.conj().T), initial=0.0) > rtol * max(scale, 1e-300):
        raise ValueError("operator is not Hermitian")
    return op


@dataclass(frozen=True)
class CollectiveOps:
    Iz: np.ndarray
    Iplus: np.ndarray
    Iminus: np.ndarray
    Ix: np.ndarray
    Iy: np.ndarray


def ladder_elements(n_bath: int) -> np.ndarray:
    """``<n+1|I+|n>`` for ``n = 0..N-1``, equal to sqrt((n+1)(N-n))."""
    n = np.arange(n_bath)
    return np.sqrt((n + 1.0) * (n_bath - n))


def collective_ops(basis: DickeBasis) -> CollectiveOps:
    N = basis.n_bath
    Iz = np.diag(basis.m_values())
    Iplus = np.diag(ladder_elements(N), k=-1)  # raises n -> n + 1
    Iminus = Iplus.T.copy()
    Ix = 0.5 * (Iplus + Iminus)
    Iy = (Iplus - Iminus) / 2j
    return CollectiveOps(Iz=Iz, Iplus=Iplus, Iminus=Iminus, Ix=Ix, Iy=Iy)


def embed_with_central(op_bath: np.ndarray, op_central: np.ndarray) -> np.ndarray:
    """Kronecker product ``op_central (x) op_bath`` in the (s, n) ordering."""
    op_bath = np.asarray(op_bath)
    op_central = np.asarray(op_central)
    if op_central.shape != (2, 2):
        raise ValueError(f"central-spin operator must be 2x2, got {op_central.shape}")
    if op_bath.ndim != 2 or op_bath.shape[0] != op_bath.shape[1]:
        raise ValueError(f"bath operator must be square, got {op_bath.shape}")
    return np.kron(op_central, op_bath)


def log_binomial(n: int, k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def coherent_amplitudes(n_bath: int, theta0: float, phi0: float = 0.0) -> np.ndarray:
    """Amplitudes of the spin coherent state on the Dicke ladder.

    The amplitude of ``|n>`` is sqrt(C(N, n)) cos(theta0/2)^n (e^{i phi0} sin(theta0/2))^(N-n),
    so ``theta0 = 0`` is the fully polarized up state.
    """
    n = np.arange(n_bath + 1)
    c, s = np.cos(theta0 / 2), np.sin(theta0 / 2)
    log_mag = 0.5 * log_binomial(n_bath, n) + _xlogy(n, abs(c)) + _xlogy(n_bath - n, abs(s))
    sign = np.sign(c) ** n * np.sign(s) ** (n_bath - n)
    return np.exp(log_mag) * sign * np.exp(1j * phi0 * (n_bath - n))


def _xlogy(k, x):
    # k * log(x) with 0 * log(0) = 0 (poles of the Bloch sphere)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(k == 0, 0.0, k * np.log(x))


def spin_coherent_state(basis: DickeBasis, theta0: float, phi0: float = 0.0) -> StateVector:
    if not -1e-12 <= theta0 <= np.pi + 1e-12:
        raise ValueError(f"theta0 must lie in [0, pi], got {theta0}")
    return StateVector.normalized(basis, coherent_amplitudes(basis.n_bath, theta0, phi0))


def with_central_down(state: StateVector) -> StateVector:
    """``|down> (x) state`` on the central-spin basis."""
    if not isinstance(state.basis, DickeBasis):
        raise ValueError("expected a Dicke-basis state")
    cb = CentralSpinBasis(state.n_bath)
    amps = np.zeros(cb.dimension, dtype=complex)
    amps[cb.block(DOWN)] = state.amplitudes
    return StateVector(cb, amps)


def excitation_numbers(basis: CentralSpinBasis) -> np.ndarray:
    """Eigenvalues of sigma+ sigma- + Iz + N/2 for every basis index."""
    n = np.arange(basis.n_bath + 1)
    return np.concatenate([n, n + 1])


def parity_diagonal(basis: Basis) -> np.ndarray:
    """Diagonal of the Z2 parity operator, +1 or -1 per basis index.

    On the central-spin basis this is exp[i pi (sigma+ sigma- + Iz + N/2)];
    on the Dicke basis the bath parity exp[i pi (Iz + N/2)].
    """
    if isinstance(basis, CentralSpinBasis):
        k = excitation_numbers(basis)
    else:
        k = np.arange(basis.dimension)
    return np.where(k % 2 == 0, 1.0, -1.0)


def parity_operator(basis: Basis) -> np.ndarray:
    return np.diag(parity_diagonal(basis))


def apply_collective(vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Apply ``Ix``, ``Iy``, ``Iz`` to Dicke-ladder vectors without building matrices.

    ``vectors`` has the Dicke index on its last axis; leading axes (central-spin
    block, time) are carried along.
    """
    v = np.asarray(vectors)
    N = v.shape[-1] - 1
    lad = ladder_elements(N)
    up = np.zeros(v.shape, dtype=complex)
    down = np.zeros(v.shape, dtype=complex)
    up[..., 1:] = lad * v[..., :-1]    # I+ v
    down[..., :-1] = lad * v[..., 1:]  # I- v
    z = (np.arange(N + 1) - N / 2) * v
    return 0.5 * (up + down), (up - down) / 2j, z


def bath_blocks(state: StateVector) -> np.ndarray:
    """Amplitudes reshaped to ``(blocks, N + 1)``: one row per central-spin block."""
    return state.amplitudes.reshape(-1, state.n_bath + 1)
