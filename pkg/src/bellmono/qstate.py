"""Dense pure/mixed multiqubit states, Pauli expectations, correlation tensors.

Index convention: amplitude index i encodes the computational basis state
whose bit b (bit 0 = qubit 0) gives that qubit's Z-basis value.  Pure
states are primary and support up to 14 qubits; density matrices are a
secondary path capped at 8 qubits (reduced states for the Mermin
examples).  Pauli expectations are evaluated by applying the string to
the amplitude vector in O(2^N) — never via a 2^N x 2^N matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .backend import kernels
from .pauli import AnticommutingSet, PauliString

MAX_STATE_QUBITS = 14
MAX_DENSITY_QUBITS = 8

NORM_ATOL = 1e-10
PSD_ATOL = 1e-8

_AXIS_CODE = {"x": 1, "y": 2, "z": 3}


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_STATE_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_STATE_QUBITS}]")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2 ** self.n_qubits,):
            raise ValueError(f"expected {2 ** self.n_qubits} amplitudes, got {amps.shape}")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise ValueError(f"state not normalized: |psi|^2 = {norm2}")
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class DensityMatrix:
    n_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_DENSITY_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_DENSITY_QUBITS}]")
        d = 2 ** self.n_qubits
        m = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        if m.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrix, got {m.shape}")
        if abs(np.trace(m).real - 1.0) > NORM_ATOL or abs(np.trace(m).imag) > NORM_ATOL:
            raise ValueError("trace differs from 1")
        if np.max(np.abs(m - m.conj().T)) > NORM_ATOL:
            raise ValueError("matrix not Hermitian")
        if np.linalg.eigvalsh(m)[0] < -PSD_ATOL:
            raise ValueError("matrix not positive semidefinite")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class CorrelationTensor:
    """Sparse map from per-qubit index words over {0,x,y,z} to expectations."""

    n_qubits: int
    entries: dict[str, float]

    def __post_init__(self):
        for key, val in self.entries.items():
            if len(key) != self.n_qubits or any(c not in "0xyz" for c in key):
                raise ValueError(f"bad component index {key!r}")
            if abs(val) > 1.0 + 1e-9:
                raise ValueError(f"component {key} = {val} outside [-1, 1]")
        allzero = "0" * self.n_qubits
        if allzero in self.entries and abs(self.entries[allzero] - 1.0) > 1e-9:
            raise ValueError("all-identity component must equal 1")

    def __getitem__(self, key: str) -> float:
        return self.entries.get(key, 0.0)

    def nonzero(self, tolerance: float = 1e-12) -> dict[str, float]:
        return {k: v for k, v in sorted(self.entries.items()) if abs(v) > tolerance}


def _pauli_for(n_qubits, sites, chars):
    label = ["I"] * n_qubits
    for q, c in zip(sites, chars):
        label[q] = c.upper()
    from .pauli import parse_label
    return parse_label("".join(label))


def expectation(state, p: PauliString) -> float:
    """Tr[rho P] (pure states: <psi|P|psi>) as a real number in [-1, 1]."""
    if p.n_qubits != state.n_qubits:
        raise ValueError(f"qubit count mismatch: state {state.n_qubits}, operator {p.n_qubits}")
    ny = p.n_y % 4
    if isinstance(state, StateVector):
        return float(kernels.expval(state.amplitudes, p.x_mask, p.z_mask, ny))
    rho = state.matrix
    idx = np.arange(rho.shape[0], dtype=np.int64)
    par = np.bitwise_count(idx & np.int64(p.z_mask)) & 1
    signs = 1.0 - 2.0 * par
    acc = np.sum(rho[idx, idx ^ np.int64(p.x_mask)] * signs) * (1j ** ny)
    return float(acc.real)


def correlation_components(state, sites, axes="xy") -> CorrelationTensor:
    """All tensor components with labels from `axes` on `sites`, identity elsewhere."""
    sites = sorted(set(sites))
    if not sites:
        raise ValueError("sites must be nonempty")
    if any(not 0 <= q < state.n_qubits for q in sites):
        raise ValueError("site outside qubit range")
    axes = [a for a in ("x", "y", "z") if a in set(axes)]
    if not axes:
        raise ValueError("axes must be a nonempty subset of xyz")
    entries = {}
    import itertools
    for chars in itertools.product(axes, repeat=len(sites)):
        word = ["0"] * state.n_qubits
        for q, c in zip(sites, chars):
            word[q] = c
        p = _pauli_for(state.n_qubits, sites, chars)
        entries["".join(word)] = expectation(state, p)
    return CorrelationTensor(state.n_qubits, entries)


def xyz_subset_tensor(state, subset) -> np.ndarray:
    """Dense (3,)*k array of <sigma_j1 ... sigma_jk> on the sorted subset."""
    subset = sorted(set(subset))
    if not subset:
        raise ValueError("subset must be nonempty")
    if subset[0] < 0 or subset[-1] >= state.n_qubits:
        raise ValueError(f"subset {subset} outside the {state.n_qubits}-qubit register")
    k = len(subset)
    import itertools
    strings = [
        _pauli_for(state.n_qubits, subset, ["xyz"[j] for j in idx])
        for idx in itertools.product(range(3), repeat=k)
    ]
    if isinstance(state, StateVector):
        flat = kernels.expval_batch(
            state.amplitudes,
            np.array([p.x_mask for p in strings], dtype=np.int64),
            np.array([p.z_mask for p in strings], dtype=np.int64),
            np.array([p.n_y % 4 for p in strings], dtype=np.int64))
    else:
        flat = np.array([expectation(state, p) for p in strings])
    return flat.reshape((3,) * k)


def complementarity_norm(state, s) -> float:
    """Euclidean length of the expectation vector over an anticommuting set.

    Bounded by 1 in any physical state; the input is (re)validated as
    mutually anticommuting.
    """
    if not isinstance(s, AnticommutingSet):
        s = AnticommutingSet(s[0].n_qubits, tuple(s))
    if s.n_qubits != state.n_qubits:
        raise ValueError("qubit count mismatch between state and set")
    return math.sqrt(sum(expectation(state, p) ** 2 for p in s))


def tsallis_2(expectation_value: float) -> float:
    """Quadratic (Tsallis) entropy of a dichotomic outcome, (1 - <A>^2)/2."""
    if abs(expectation_value) > 1.0 + 1e-12:
        raise ValueError(f"expectation value {expectation_value} outside [-1, 1]")
    return 0.5 * (1.0 - min(1.0, expectation_value ** 2))


def random_pure_state(n_qubits: int, seed) -> StateVector:
    """Haar-random pure state; deterministic for a fixed seed."""
    if not 1 <= n_qubits <= MAX_STATE_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_STATE_QUBITS}]")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return StateVector(n_qubits, haar_amplitudes(n_qubits, rng))


def haar_amplitudes(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(2 ** n_qubits) + 1j * rng.standard_normal(2 ** n_qubits)
    return z / np.linalg.norm(z)


def partial_trace(state, keep) -> DensityMatrix:
    """Reduced density matrix on the kept qubits (ascending order)."""
    keep = sorted(set(keep))
    if not keep or any(not 0 <= q < state.n_qubits for q in keep):
        raise ValueError("kept qubits must be a nonempty subset of the register")
    k = len(keep)
    if k > MAX_DENSITY_QUBITS:
        raise ValueError(f"reduced state would exceed {MAX_DENSITY_QUBITS} qubits")
    env = [q for q in range(state.n_qubits) if q not in keep]
    full = np.arange(2 ** state.n_qubits, dtype=np.int64)
    kv = np.zeros_like(full)
    for pos, q in enumerate(keep):
        kv |= ((full >> q) & 1) << pos
    ev = np.zeros_like(full)
    for pos, q in enumerate(env):
        ev |= ((full >> q) & 1) << pos
    if isinstance(state, StateVector):
        m = np.zeros((2 ** k, 2 ** len(env)), dtype=np.complex128)
        m[kv, ev] = state.amplitudes
        return DensityMatrix(k, m @ m.conj().T)
    order = np.empty_like(full)
    order[(kv << len(env)) | ev] = full
    d_k, d_e = 2 ** k, 2 ** len(env)
    blocks = state.matrix[np.ix_(order, order)].reshape(d_k, d_e, d_k, d_e)
    return DensityMatrix(k, np.trace(blocks, axis1=1, axis2=3))


def save_state(state: StateVector, path) -> None:
    data = {"n": state.n_qubits,
            "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes]}
    with open(path, "w") as fh:
        json.dump(data, fh)


def load_state(path) -> StateVector:
    with open(path) as fh:
        data = json.load(fh)
    try:
        n = int(data["n"])
        amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state file {path}: {exc}") from None
    return StateVector(n, amps)
