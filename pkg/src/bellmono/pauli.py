"""N-qubit Pauli strings with a symplectic bitmask representation.

A string over {I, X, Y, Z} is stored as two integer bitmasks: bit q of
``x_mask``/``z_mask`` records the X/Z part of the operator on qubit q,
with X=(1,0), Z=(0,1), Y=(1,1), I=(0,0).  The leftmost character of a
text label is qubit 0.  Strings represent exactly the tensor product of
the labelled operators; no global phase is tracked (products of strings
are out of scope).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

_CODE = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_CHAR = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}

MAX_QUBITS = 64


@dataclass(frozen=True, order=True)
class PauliString:
    """Immutable Pauli string; ordering is (n_qubits, label) lexicographic."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        top = 1 << self.n_qubits
        if not (0 <= self.x_mask < top and 0 <= self.z_mask < top):
            raise ValueError("bitmask outside qubit range")

    @property
    def label(self) -> str:
        return "".join(
            _CHAR[(self.x_mask >> q) & 1, (self.z_mask >> q) & 1]
            for q in range(self.n_qubits)
        )

    @property
    def support(self) -> tuple[int, ...]:
        """Qubits carrying a non-identity operator."""
        m = self.x_mask | self.z_mask
        return tuple(q for q in range(self.n_qubits) if (m >> q) & 1)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def n_y(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    def __str__(self):
        return self.label

    def __repr__(self):
        return f"PauliString({self.label!r})"


def parse_label(text: str) -> PauliString:
    """Build a PauliString from a label like "XYIX" (leftmost char = qubit 0)."""
    if not text:
        raise ValueError("empty Pauli label")
    if len(text) > MAX_QUBITS:
        raise ValueError(f"label longer than {MAX_QUBITS} qubits")
    x = z = 0
    for q, ch in enumerate(text):
        try:
            xb, zb = _CODE[ch]
        except KeyError:
            raise ValueError(f"invalid Pauli character {ch!r} in {text!r}") from None
        x |= xb << q
        z |= zb << q
    return PauliString(len(text), x, z)


def anticommutes(p: PauliString, q: PauliString) -> bool:
    """True iff p and q anticommute (odd symplectic inner product)."""
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {q.n_qubits}")
    return ((p.x_mask & q.z_mask).bit_count() + (p.z_mask & q.x_mask).bit_count()) % 2 == 1


def is_mutually_anticommuting(elements) -> tuple[bool, tuple[PauliString, PauliString] | None]:
    """Check all unordered pairs; on failure also return one violating pair."""
    elements = list(elements)
    if not elements:
        raise ValueError("empty sequence of Pauli strings")
    n = elements[0].n_qubits
    for e in elements[1:]:
        if e.n_qubits != n:
            raise ValueError("mixed qubit counts in sequence")
    for a, b in itertools.combinations(elements, 2):
        if not anticommutes(a, b):
            return False, (a, b)
    return True, None


@dataclass(frozen=True)
class AnticommutingSet:
    """A validated set of distinct, mutually anticommuting Pauli strings.

    At most 2N+1 pairwise-anticommuting N-qubit strings can exist; the
    constructor enforces this cap as a sanity check.
    """

    n_qubits: int
    elements: tuple[PauliString, ...]

    def __post_init__(self):
        if not self.elements:
            raise ValueError("AnticommutingSet needs at least one element")
        object.__setattr__(self, "elements", tuple(self.elements))
        for e in self.elements:
            if e.n_qubits != self.n_qubits:
                raise ValueError("element qubit count differs from set n_qubits")
            if e.is_identity:
                raise ValueError("identity string not allowed in an anticommuting set")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate elements")
        if len(self.elements) > 2 * self.n_qubits + 1:
            raise ValueError(
                f"{len(self.elements)} mutually anticommuting strings on "
                f"{self.n_qubits} qubits exceeds the 2N+1 cap"
            )
        ok, pair = is_mutually_anticommuting(self.elements)
        if not ok:
            raise ValueError(f"pair does not anticommute: {pair[0]}, {pair[1]}")

    @classmethod
    def from_labels(cls, *labels: str) -> "AnticommutingSet":
        elems = tuple(parse_label(t) for t in labels)
        return cls(elems[0].n_qubits, elems)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __str__(self):
        return " ".join(e.label for e in self.elements)
