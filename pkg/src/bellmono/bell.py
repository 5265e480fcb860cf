"""Quantum values of two-setting correlation Bell inequalities.

The general (full two-setting family) Bell parameter of an N-party
correlation table E is

    L(E) = 2^-N * sum over sign vectors s of |sum_k s1^(k1-1)...sN^(kN-1) E_k|

i.e. the Walsh-Hadamard abs-sum of E, normalized so the local-hidden-
variable bound is exactly 1.  The Mermin parameter E112+E121+E211-E222
(classical bound 2) is supported as an alternative functional.

Settings maximization runs deterministic coordinate-descent sweeps over
per-direction spherical-angle grids with shrinking spans, alternated
with Nelder-Mead polish rounds restarted from the previous endpoint.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .backend import GENERAL, MERMIN, kernels
from .qstate import xyz_subset_tensor

VIOLATION_ATOL = 1e-9
_IMPROVE_EPS = 1e-15

CLASSICAL_BOUNDS = {"general": 1.0, "mermin": 2.0}
_KINDS = {"general": GENERAL, "mermin": MERMIN}


def _sph(theta, phi):
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def _angles_of(direction):
    x, y, z = direction
    return math.acos(max(-1.0, min(1.0, z))), math.atan2(y, x)


@dataclass(frozen=True)
class PartySettings:
    """Per-party pair of unit measurement directions, shape (k, 2, 3)."""

    directions: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        if d.ndim != 3 or d.shape[1:] != (2, 3):
            raise ValueError("directions must have shape (n_parties, 2, 3)")
        norms = np.linalg.norm(d, axis=2)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise ValueError("directions must be unit vectors")
        object.__setattr__(self, "directions", d)

    @classmethod
    def from_angles(cls, angles) -> "PartySettings":
        """angles: (k, 2, 2) of (theta, phi) per direction."""
        a = np.asarray(angles, dtype=float)
        return cls(np.array([[_sph(t, p) for t, p in row] for row in a]))

    @classmethod
    def canonical(cls, n_parties: int) -> "PartySettings":
        """First setting x, second setting y, for every party."""
        d = np.zeros((n_parties, 2, 3))
        d[:, 0, 0] = 1.0
        d[:, 1, 1] = 1.0
        return cls(d)

    @property
    def n_parties(self) -> int:
        return self.directions.shape[0]

    @property
    def angles(self) -> np.ndarray:
        return np.array([[_angles_of(d) for d in row] for row in self.directions])

    def plane(self, i: int):
        """Orthonormal basis of the plane spanned by party i's directions.

        Returns None when the two directions are (anti)parallel.
        """
        a, b = self.directions[i]
        e2 = b - np.dot(a, b) * a
        n = np.linalg.norm(e2)
        if n < 1e-9:
            return None
        return np.array([a, e2 / n])


def canonical_planes(n_parties: int) -> np.ndarray:
    """The x,y coordinate plane for every party, shape (k, 2, 3)."""
    p = np.zeros((n_parties, 2, 3))
    p[:, 0, 0] = 1.0
    p[:, 1, 1] = 1.0
    return p


@dataclass(frozen=True)
class CorrelationTable:
    """Full correlation functions E_{k1..kN}, k_i in {1,2}; values (2,)*N."""

    n_parties: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (2,) * self.n_parties:
            raise ValueError(f"expected shape {(2,) * self.n_parties}, got {v.shape}")
        if np.max(np.abs(v)) > 1.0 + 1e-9:
            raise ValueError("correlation function outside [-1, 1]")
        object.__setattr__(self, "values", v)

    def flat(self) -> list[float]:
        """Lexicographic (k_1 major) flat list, the serialization order."""
        return [float(x) for x in self.values.reshape(-1)]


@dataclass(frozen=True)
class BellValueReport:
    value: float
    settings: PartySettings
    classical_bound: float
    violated: bool

    def __post_init__(self):
        expect = self.value > self.classical_bound + VIOLATION_ATOL
        if self.violated != expect:
            raise ValueError("violated flag inconsistent with value and bound")

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "classical_bound": self.classical_bound,
            "violated": self.violated,
            "settings": [[list(map(float, ang)) for ang in row]
                         for row in self.settings.angles],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def correlation_table(state, subset, settings: PartySettings) -> CorrelationTable:
    """Contract the state's correlation tensor with the given directions.

    Parties outside `subset` are traced out (identity-padded expectations).
    """
    subset = sorted(subset)
    if settings.n_parties != len(subset):
        raise ValueError("one settings pair required per party in subset")
    t = xyz_subset_tensor(state, subset)
    e = t
    for axis in range(len(subset)):
        e = np.moveaxis(np.tensordot(settings.directions[axis], e, axes=([1], [axis])),
                        0, axis)
    return CorrelationTable(len(subset), e)


def _wht(flat):
    e = np.array(flat, dtype=float).copy()
    h = 1
    while h < e.size:
        for i in range(0, e.size, 2 * h):
            a = e[i:i + h].copy()
            b = e[i + h:i + 2 * h].copy()
            e[i:i + h] = a + b
            e[i + h:i + 2 * h] = a - b
        h *= 2
    return e


def general_bell_value(table: CorrelationTable) -> float:
    """Quantum value of the condensed two-setting family functional (LHV bound 1)."""
    flat = table.values.reshape(-1)
    return float(np.abs(_wht(flat)).sum() / flat.size)


def mermin_value(table: CorrelationTable) -> float:
    """E112 + E121 + E211 - E222 (three parties, classical bound 2)."""
    if table.n_parties != 3:
        raise ValueError("Mermin functional requires exactly 3 parties")
    v = table.values
    return float(v[0, 0, 1] + v[0, 1, 0] + v[1, 0, 0] - v[1, 1, 1])


def plane_upper_bound(state, subset, planes=None) -> float:
    """sqrt of the summed squared tensor components in the parties' planes.

    `planes`: (k, 2, 3) orthonormal pair per party; defaults to the
    canonical x,y plane.  Upper-bounds the general Bell value for any
    settings lying in those planes.
    """
    subset = sorted(subset)
    k = len(subset)
    if planes is None:
        planes = canonical_planes(k)
    planes = np.asarray(planes, dtype=float)
    if planes.shape != (k, 2, 3):
        raise ValueError(f"expected planes of shape {(k, 2, 3)}")
    for i in range(k):
        g = planes[i] @ planes[i].T
        if np.max(np.abs(g - np.eye(2))) > 1e-10:
            raise ValueError(f"plane for party {i} is not orthonormal")
    t = xyz_subset_tensor(state, subset)
    e = t
    for axis in range(k):
        e = np.moveaxis(np.tensordot(planes[axis], e, axes=([1], [axis])), 0, axis)
    return float(np.sqrt(np.sum(e ** 2)))


def lhv_bound_bruteforce(coefficients, n_parties: int) -> float:
    """Exact LHV maximum of sum_k c_k prod_i sigma_i(k_i) by enumeration.

    `coefficients` maps setting words (tuple like (1,1,2) or string
    "112") to reals.  Limited to 5 parties (4^N deterministic strategies).
    """
    if n_parties > 5:
        raise ValueError("brute-force enumeration limited to 5 parties")
    if n_parties < 1:
        raise ValueError("need at least one party")
    terms = []
    for key, c in coefficients.items():
        word = tuple(int(ch) for ch in key) if isinstance(key, str) else tuple(key)
        if len(word) != n_parties or any(ki not in (1, 2) for ki in word):
            raise ValueError(f"bad setting word {key!r}")
        terms.append((word, float(c)))
    best = -math.inf
    for strat in itertools.product(((1, 1), (1, -1), (-1, 1), (-1, -1)),
                                   repeat=n_parties):
        v = 0.0
        for word, c in terms:
            prod = c
            for i, ki in enumerate(word):
                prod *= strat[i][ki - 1]
            v += prod
        best = max(best, v)
    return best


@dataclass(frozen=True)
class OptBudget:
    """Search effort for settings maximization.

    grid_resolution: points per spherical angle in each direction scan.
    refinement_passes: shrinking-span levels per direction scan.
    max_rounds: coordinate-descent + polish alternations.
    restarts: extra seeded random starts beyond the canonical one.
    """

    grid_resolution: int = 24
    refinement_passes: int = 3
    max_rounds: int = 4
    nm_restarts: int = 6
    polish: bool = True
    restarts: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.grid_resolution < 2:
            raise ValueError("grid_resolution must be at least 2")
        if self.refinement_passes < 1 or self.max_rounds < 1:
            raise ValueError("refinement_passes and max_rounds must be positive")
        if self.restarts < 0:
            raise ValueError("restarts must be nonnegative")


SAMPLING_BUDGET = OptBudget(grid_resolution=10, refinement_passes=2,
                            max_rounds=1, polish=False)


class _Compiled:
    """Flattened experiment tensors for the kernels."""

    def __init__(self, state, experiments):
        if not experiments:
            raise ValueError("need at least one experiment")
        self.experiments = [tuple(sorted(set(s))) for s in experiments]
        tensors = []
        parties = []
        t_off = [0]
        p_off = [0]
        for sub in self.experiments:
            t = xyz_subset_tensor(state, sub).reshape(-1)
            tensors.append(t)
            parties.extend(sub)
            t_off.append(t_off[-1] + t.size)
            p_off.append(p_off[-1] + len(sub))
        self.tensors = np.concatenate(tensors)
        self.t_off = np.array(t_off, dtype=np.int64)
        self.parties = np.array(parties, dtype=np.int64)
        self.p_off = np.array(p_off, dtype=np.int64)
        self.n_parties = state.n_qubits
        self.active = sorted(set(self.parties.tolist()))

    def objective(self, settings, kind):
        values = np.empty(len(self.experiments))
        total = kernels.joint_objective(self.tensors, self.t_off, self.parties,
                                        self.p_off, settings, kind, values)
        return total, values


def _grid_angles(center_t, center_p, span_t, span_p, g):
    ts = center_t + np.linspace(-span_t / 2, span_t / 2, g)
    ps = center_p + np.linspace(-span_p / 2, span_p / 2, g)
    return ts, ps


def _cd_sweep(comp, kind, settings, angles, total, budget):
    """One coordinate-descent sweep over every active direction."""
    g = budget.grid_resolution
    for q in comp.active:
        for which in (0, 1):
            span_t, span_p = math.pi, 2 * math.pi
            ct, cp = angles[q, which]
            for _level in range(budget.refinement_passes):
                ts, ps = _grid_angles(ct, cp, span_t, span_p, g)
                cands = np.empty((g * g, 3))
                ang_list = np.empty((g * g, 2))
                i = 0
                for t in ts:
                    for p in ps:
                        cands[i] = _sph(t, p)
                        ang_list[i] = (t, p)
                        i += 1
                idx, val = kernels.scan_direction(
                    comp.tensors, comp.t_off, comp.parties, comp.p_off,
                    settings, kind, q, which, cands)
                if val > total + _IMPROVE_EPS:
                    total = val
                    settings[q, which] = cands[idx]
                    ct, cp = ang_list[idx]
                    angles[q, which] = (ct, cp)
                shrink = g / 2.5
                span_t /= shrink
                span_p /= shrink
    return total


def _nm_polish(comp, kind, settings, angles, total, budget):
    idx = np.array(comp.active)

    def negative(x):
        a = angles.copy()
        a[idx] = x.reshape(len(idx), 2, 2)
        s = settings.copy()
        for q in idx:
            s[q, 0] = _sph(*a[q, 0])
            s[q, 1] = _sph(*a[q, 1])
        return -comp.objective(s, kind)[0]

    x = angles[idx].reshape(-1).copy()
    for _ in range(budget.nm_restarts):
        res = minimize(negative, x, method="Nelder-Mead",
                       options=dict(xatol=1e-11, fatol=1e-13,
                                    maxiter=40000, maxfev=40000))
        improved = -res.fun > total + 1e-14
        if -res.fun > total:
            total = -res.fun
            x = res.x
            angles[idx] = x.reshape(len(idx), 2, 2)
            for q in idx:
                settings[q, 0] = _sph(*angles[q, 0])
                settings[q, 1] = _sph(*angles[q, 1])
        else:
            x = res.x
        if not improved:
            break
    return total


def _optimize_from(comp, kind, start_angles, budget):
    angles = start_angles.copy()
    settings = np.empty((comp.n_parties, 2, 3))
    for q in range(comp.n_parties):
        settings[q, 0] = _sph(*angles[q, 0])
        settings[q, 1] = _sph(*angles[q, 1])
    total, _ = comp.objective(settings, kind)
    for _round in range(budget.max_rounds):
        before = total
        total = _cd_sweep(comp, kind, settings, angles, total, budget)
        if budget.polish:
            total = _nm_polish(comp, kind, settings, angles, total, budget)
        if total - before <= 1e-12:
            break
    return total, settings, angles


def joint_maximize(state, experiments, functional="general", budget=None):
    """Maximize the sum of squared Bell values with per-party shared settings.

    Returns (per-experiment values at the optimum, their squared sum,
    PartySettings over all n_qubits parties).  Deterministic for a fixed
    budget: canonical start plus `budget.restarts` seeded random starts.
    """
    if budget is None:
        budget = OptBudget()
    kind = _KINDS[functional]
    comp = _Compiled(state, experiments)
    if kind == MERMIN and any(len(s) != 3 for s in comp.experiments):
        raise ValueError("Mermin functional requires 3-party experiments")
    canonical = np.zeros((comp.n_parties, 2, 2))
    canonical[:, 0] = (math.pi / 2, 0.0)
    canonical[:, 1] = (math.pi / 2, math.pi / 2)
    starts = [canonical]
    if budget.restarts:
        rng = np.random.default_rng(budget.seed)
        for _ in range(budget.restarts):
            a = np.empty((comp.n_parties, 2, 2))
            a[:, :, 0] = rng.uniform(0.0, math.pi, (comp.n_parties, 2))
            a[:, :, 1] = rng.uniform(0.0, 2 * math.pi, (comp.n_parties, 2))
            starts.append(a)
    best = None
    for start in starts:
        total, settings, _ = _optimize_from(comp, kind, start, budget)
        if best is None or total > best[0]:
            best = (total, settings)
    total, settings = best
    _, values = comp.objective(settings, kind)
    return values, float(total), PartySettings(settings.copy())


def maximize_bell(state, subset, functional="general", budget=None) -> BellValueReport:
    """Best Bell value of one experiment over all measurement settings.

    The reported value is a lower bound on the true maximum; at the
    default budget it is accurate to ~1e-6 for up to 4 parties.
    """
    subset = tuple(sorted(set(subset)))
    if not subset:
        raise ValueError("subset must be nonempty")
    if functional not in _KINDS:
        raise ValueError(f"unknown functional {functional!r}")
    values, _total, full_settings = joint_maximize(state, [subset], functional, budget)
    value = abs(float(values[0]))
    sub_dirs = full_settings.directions[list(subset)]
    settings = PartySettings(sub_dirs)
    _assert_plane_bound(state, subset, settings, value, functional)
    bound = CLASSICAL_BOUNDS[functional]
    return BellValueReport(value=value, settings=settings, classical_bound=bound,
                           violated=value > bound + VIOLATION_ATOL)


def _assert_plane_bound(state, subset, settings, value, functional):
    """Runtime check: a general Bell value never exceeds its plane bound."""
    if functional != "general":
        return
    planes = []
    for i in range(settings.n_parties):
        pl = settings.plane(i)
        if pl is None:
            return
        planes.append(pl)
    bound = plane_upper_bound(state, subset, np.array(planes))
    if value > bound + VIOLATION_ATOL:
        raise RuntimeError(
            f"Bell value {value} exceeds its settings-plane bound {bound}; "
            "this indicates an implementation bug")
