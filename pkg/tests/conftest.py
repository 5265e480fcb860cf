"""Shared test helpers: dense-matrix oracles kept independent of the package
internals (matrices are built by explicit Kronecker products and states are
evaluated by full matrix-vector algebra)."""

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_1Q = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def dense_pauli(label: str) -> np.ndarray:
    """Dense matrix of a Pauli label, leftmost character = qubit 0.

    Qubit 0 is the least-significant index bit, so the Kronecker product
    runs right-to-left over the label.
    """
    m = np.eye(1, dtype=complex)
    for ch in reversed(label):
        m = np.kron(m, PAULI_1Q[ch])
    return m


def dense_expectation(amplitudes, label: str) -> float:
    """<psi|P|psi> via the dense matrix."""
    m = dense_pauli(label)
    return float(np.real(np.vdot(amplitudes, m @ amplitudes)))


def dense_trace_expectation(rho, label: str) -> float:
    """Tr[rho P] via the dense matrix."""
    return float(np.real(np.trace(rho @ dense_pauli(label))))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def random_amplitudes(rng, n):
    z = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    return z / np.linalg.norm(z)
