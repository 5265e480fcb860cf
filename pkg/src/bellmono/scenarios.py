"""Closed-form witness states and their predicted Bell values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .monogamy import tree_paths
from .qstate import MAX_STATE_QUBITS, StateVector, load_state


def ghz(n_qubits: int, phase: float = 0.0) -> StateVector:
    """(|0...0> + e^{i phase}|1...1>)/sqrt(2) on n_qubits >= 2."""
    if n_qubits < 2:
        raise ValueError("GHZ state needs at least 2 qubits")
    amps = np.zeros(2 ** n_qubits, dtype=np.complex128)
    amps[0] = 1 / math.sqrt(2)
    amps[-1] = np.exp(1j * phase) / math.sqrt(2)
    return StateVector(n_qubits, amps)


def star_state(M: int, alpha: float) -> StateVector:
    """Hub-and-two-groups witness on 2M+1 qubits (hub A, groups B then C).

    cos(a)/sqrt(2) (|0 0..0 0..0> + |1 0..0 1..1>)
    + sin(a)/sqrt(2) (|1 1..1 0..0> + |0 1..1 1..1>).
    """
    if M < 1:
        raise ValueError("group size must be at least 1")
    n = 2 * M + 1
    if n > MAX_STATE_QUBITS:
        raise ValueError(f"{n} qubits exceeds the {MAX_STATE_QUBITS}-qubit state limit")
    b_mask = sum(1 << q for q in range(1, M + 1))
    c_mask = sum(1 << q for q in range(M + 1, 2 * M + 1))
    c = math.cos(alpha) / math.sqrt(2)
    s = math.sin(alpha) / math.sqrt(2)
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[0] = c
    amps[1 | c_mask] = c
    amps[1 | b_mask] = s
    amps[b_mask | c_mask] = s
    return StateVector(n, amps)


def star_prediction(M: int, alpha: float) -> tuple[float, float]:
    """Predicted squared Bell values (hub+B group, hub+C group); sum is 2^M."""
    if M < 1:
        raise ValueError("group size must be at least 1")
    s2 = math.sin(2 * alpha) ** 2
    return (2 ** (M - 1) * s2, 2 ** (M - 1) * (2.0 - s2))


def tree_state(M: int, paths) -> StateVector:
    """Superposition flipping the qubits of each chosen root-to-leaf path.

    |0..0>/sqrt(2) plus, for each of the m chosen paths, its all-ones
    branch at weight 1/sqrt(2m).  Branches are orthogonal (different
    supports), so the state is normalized.  Unchosen-path qubits stay |0>.
    """
    all_paths = tree_paths(M)
    chosen = list(paths)
    if not chosen:
        raise ValueError("choose at least one path")
    if len(set(chosen)) != len(chosen):
        raise ValueError("duplicate paths")
    if any(not 0 <= j < len(all_paths) for j in chosen):
        raise ValueError(f"path index outside [0, {len(all_paths) - 1}]")
    n = 2 ** M - 1
    if n > MAX_STATE_QUBITS:
        raise ValueError(f"{n} qubits exceeds the {MAX_STATE_QUBITS}-qubit state limit")
    m = len(chosen)
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[0] = 1 / math.sqrt(2)
    for j in chosen:
        amps[sum(1 << q for q in all_paths[j])] = 1 / math.sqrt(2 * m)
    return StateVector(n, amps)


def tree_prediction(M: int, m: int) -> tuple[float, bool]:
    """Per-chosen-path squared Bell value 2^(M-1)/m and its violation flag.

    Unchosen paths are predicted to vanish; all m paths violate exactly
    when m < 2^(M-1).
    """
    n_paths = 2 ** (M - 1)
    if not 1 <= m <= n_paths:
        raise ValueError(f"m must be in [1, {n_paths}]")
    l2 = n_paths / m
    return l2, l2 > 1.0


_MERMIN_VARIANTS = ("two_triples", "three_triples")


def mermin_example(variant: str):
    """A 4-qubit state plus its per-triple Mermin values at shared settings.

    two_triples:   (|0001> + |0010> + i sqrt(2) |1111>)/2, two triples at 2*sqrt(2).
    three_triples: (|0001> + |0010> + |0100> + i sqrt(3) |1111>)/sqrt(6),
                   three triples at 4/sqrt(3).
    Kets list parties A..D left to right (leftmost = qubit 0).  The listed
    values are attained simultaneously (each party measuring one settings
    pair) and their squares sum to the monogamy bound 16; the zero entries
    hold at that joint optimum, not for stand-alone optimization.
    """
    amps = np.zeros(16, dtype=np.complex128)
    if variant == "two_triples":
        amps[0b1000] = 0.5          # |0001>: D excited
        amps[0b0100] = 0.5          # |0010>: C excited
        amps[0b1111] = 0.5j * math.sqrt(2)
        m = 2 * math.sqrt(2)
        predictions = {(0, 1, 2): m, (0, 1, 3): m, (0, 2, 3): 0.0, (1, 2, 3): 0.0}
    elif variant == "three_triples":
        amps[0b1000] = 1 / math.sqrt(6)
        amps[0b0100] = 1 / math.sqrt(6)
        amps[0b0010] = 1 / math.sqrt(6)   # |0100>: B excited
        amps[0b1111] = 1j * math.sqrt(3) / math.sqrt(6)
        m = 4 / math.sqrt(3)
        predictions = {(0, 1, 2): m, (0, 1, 3): m, (0, 2, 3): m, (1, 2, 3): 0.0}
    else:
        raise ValueError(f"unknown variant {variant!r}; use one of {_MERMIN_VARIANTS}")
    return StateVector(4, amps), predictions


@dataclass(frozen=True)
class WitnessPrediction:
    """A witness state with its predicted squared Bell values per experiment."""

    state: StateVector = field(repr=False)
    predicted_values: dict[tuple[int, ...], float]
    bound: float
    source: str

    def __post_init__(self):
        total = 0.0
        for exp, v in self.predicted_values.items():
            if v < 0:
                raise ValueError(f"negative squared value for {exp}")
            total += v
        if total > self.bound + 1e-12:
            raise ValueError("predicted squared values exceed the bound")


def star_witness(M: int, alpha: float) -> WitnessPrediction:
    l2_b, l2_c = star_prediction(M, alpha)
    exps = (tuple([0] + list(range(1, M + 1))),
            tuple([0] + list(range(M + 1, 2 * M + 1))))
    return WitnessPrediction(star_state(M, alpha),
                             {exps[0]: l2_b, exps[1]: l2_c},
                             bound=float(2 ** M),
                             source="hub-group trade-off curve")


def tree_witness(M: int, paths) -> WitnessPrediction:
    paths = list(paths)
    l2, _violated = tree_prediction(M, len(paths))
    preds = {}
    for j, sub in enumerate(tree_paths(M)):
        preds[sub] = l2 if j in paths else 0.0
    return WitnessPrediction(tree_state(M, paths), preds,
                             bound=float(2 ** (M - 1)),
                             source="binary-tree equal-split witness")


def parse_state_spec(text: str) -> StateVector:
    """Build a state from a CLI spec.

    Formats: "ghz:n=3,phi=1.5708", "psimono:M=2,alpha=0.3",
    "tree:M=3,paths=0,1,2", "mermin:variant=two_triples",
    "file:/path/to/state.json".
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "file":
        if not rest:
            raise ValueError("file: spec needs a path")
        return load_state(rest)
    params = _parse_kv(rest)
    try:
        if kind == "ghz":
            return ghz(int(_single(params, "n")),
                       float(_single(params, "phi", "0")))
        if kind == "psimono":
            return star_state(int(_single(params, "M")),
                              float(_single(params, "alpha")))
        if kind == "tree":
            M = int(_single(params, "M"))
            paths = params.get("paths")
            chosen = [int(p) for p in paths] if paths else list(range(2 ** (M - 1)))
            return tree_state(M, chosen)
        if kind == "mermin":
            state, _ = mermin_example(_single(params, "variant"))
            return state
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad state spec {text!r}: {exc}") from None
    raise ValueError(f"unknown state spec {text!r}")


def _parse_kv(rest: str) -> dict[str, list[str]]:
    """k=v pairs separated by commas; bare tokens extend the previous value."""
    params: dict[str, list[str]] = {}
    last = None
    for token in filter(None, (t.strip() for t in rest.split(","))):
        if "=" in token:
            key, _, val = token.partition("=")
            last = key.strip()
            params.setdefault(last, []).append(val.strip())
        elif last is not None:
            params[last].append(token)
        else:
            raise ValueError(f"stray token {token!r}")
    return params


def _single(params: dict, key: str, default: str | None = None) -> str:
    vals = params.get(key)
    if not vals:
        if default is not None:
            return default
        raise ValueError(f"missing parameter {key!r}")
    if len(vals) != 1:
        raise ValueError(f"parameter {key!r} given multiple values")
    return vals[0]
