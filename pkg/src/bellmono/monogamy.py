"""Anticommuting-set partitions and the monogamy bounds they certify.

Grouping the Pauli terms that enter the plane bounds of several Bell
experiments into K disjoint mutually anticommuting sets proves
sum_i L_i^2 <= K for those experiments at shared per-party settings.
This module builds the four closed-form partitions (triangle, four
tripartite experiments on four parties, star, binary tree), generalizes
to arbitrary overlap scenarios with a clique cover of the
anticommutation graph, and checks states against the bounds.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .bell import OptBudget, joint_maximize
from .pauli import AnticommutingSet, PauliString, anticommutes, parse_label

SATURATION_ATOL = 1e-6


@dataclass(frozen=True)
class OverlapScenario:
    """Parties plus the collection of experiment subsets (hyperedges)."""

    n_parties: int
    experiments: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        exps = tuple(tuple(sorted(set(e))) for e in self.experiments)
        if not exps:
            raise ValueError("scenario needs at least one experiment")
        for e in exps:
            if len(e) < 2:
                raise ValueError(f"experiment {e} has fewer than 2 parties")
            if e[0] < 0 or e[-1] >= self.n_parties:
                raise ValueError(f"experiment {e} outside party range")
        if len(set(exps)) != len(exps):
            raise ValueError("duplicate experiments")
        object.__setattr__(self, "experiments", exps)


@dataclass(frozen=True)
class AnticommutingPartition:
    """Disjoint anticommuting sets exactly covering a target term set.

    Construction certifies the three partition properties; the number of
    sets is then a valid monogamy bound for any scenario whose required
    terms equal `covered_terms`.
    """

    sets: tuple[AnticommutingSet, ...]
    covered_terms: frozenset[PauliString]

    def __post_init__(self):
        if not self.sets:
            raise ValueError("partition needs at least one set")
        object.__setattr__(self, "sets", tuple(self.sets))
        object.__setattr__(self, "covered_terms", frozenset(self.covered_terms))
        seen = set()
        for s in self.sets:
            for e in s:
                if e in seen:
                    raise ValueError(f"term {e} appears in more than one set")
                seen.add(e)
        if seen != self.covered_terms:
            missing = self.covered_terms - seen
            extra = seen - self.covered_terms
            raise ValueError(
                f"sets do not exactly cover the target terms "
                f"(missing {len(missing)}, extra {len(extra)})")

    @property
    def bound(self) -> float:
        return float(len(self.sets))

    def to_text(self) -> str:
        return "\n".join(" ".join(e.label for e in s) for s in self.sets)


@dataclass(frozen=True)
class MonogamyReport:
    per_experiment_values: tuple[float, ...]
    squared_sum: float
    bound: float
    saturated: bool

    def __post_init__(self):
        object.__setattr__(self, "per_experiment_values",
                           tuple(float(v) for v in self.per_experiment_values))
        recomputed = sum(v * v for v in self.per_experiment_values)
        if abs(recomputed - self.squared_sum) > 1e-12:
            raise ValueError("squared_sum inconsistent with per-experiment values")

    @property
    def exceeds_bound(self) -> bool:
        return self.squared_sum > self.bound + SATURATION_ATOL

    def to_dict(self) -> dict:
        return {
            "values": list(self.per_experiment_values),
            "squared_values": [v * v for v in self.per_experiment_values],
            "squared_sum": self.squared_sum,
            "bound": self.bound,
            "saturated": self.saturated,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def required_terms(scenario: OverlapScenario) -> frozenset[PauliString]:
    """Every X/Y word on each experiment's parties, identity elsewhere."""
    terms = set()
    for sub in scenario.experiments:
        for chars in itertools.product("XY", repeat=len(sub)):
            label = ["I"] * scenario.n_parties
            for q, c in zip(sub, chars):
                label[q] = c
            terms.add(parse_label("".join(label)))
    return frozenset(terms)


def _partition_from_labels(label_sets, scenario) -> AnticommutingPartition:
    n = scenario.n_parties
    sets = tuple(AnticommutingSet(n, tuple(parse_label(t) for t in labels))
                 for labels in label_sets)
    return AnticommutingPartition(sets, required_terms(scenario))


def triangle_scenario() -> OverlapScenario:
    return OverlapScenario(3, ((0, 1), (0, 2)))


def triangle_partition() -> AnticommutingPartition:
    """The two 4-element sets proving L_AB^2 + L_AC^2 <= 2."""
    return _partition_from_labels(
        [["XXI", "XYI", "YIX", "YIY"],
         ["YXI", "YYI", "XIX", "XIY"]],
        triangle_scenario())


def four_party_scenario() -> OverlapScenario:
    return OverlapScenario(4, ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))


def _swap_xy(label: str) -> str:
    return label.translate(str.maketrans("XY", "YX"))


def four_party_partition() -> AnticommutingPartition:
    """Four 8-element sets proving the bound 4 for the four tripartite experiments.

    Each listed half is completed by the same operators with X and Y
    interchanged.
    """
    halves = [
        ["XXYI", "XYIX", "XIXY", "IYYY"],
        ["XYXI", "YYIY", "YIXX", "IXXY"],
        ["YXXI", "XXIY", "YIYY", "IXYX"],
        ["YYYI", "YXIX", "XIYX", "IYXX"],
    ]
    label_sets = [h + [_swap_xy(t) for t in h] for h in halves]
    return _partition_from_labels(label_sets, four_party_scenario())


def star_scenario(M: int) -> OverlapScenario:
    if M < 1:
        raise ValueError("star group size must be at least 1")
    return OverlapScenario(
        2 * M + 1,
        (tuple([0] + list(range(1, M + 1))),
         tuple([0] + list(range(M + 1, 2 * M + 1)))))


def star_partition(M: int) -> AnticommutingPartition:
    """2^M sets of four operators for the hub-and-two-groups scenario.

    For each word S over {X,Y} of length M-1 the two sets are
    {X X S I.., X Y S I.., Y I.. X S, Y I.. Y S} and the same with the
    roles of X and Y swapped on the hub and first group qubit.
    """
    if M < 1:
        raise ValueError("star group size must be at least 1")
    idle = "I" * M
    label_sets = []
    for s_word in itertools.product("XY", repeat=M - 1):
        s = "".join(s_word)
        for hub_b, hub_c in (("X", "Y"), ("Y", "X")):
            label_sets.append([
                hub_b + "X" + s + idle, hub_b + "Y" + s + idle,
                hub_c + idle + "X" + s, hub_c + idle + "Y" + s,
            ])
    return _partition_from_labels(label_sets, star_scenario(M))


def tree_paths(M: int) -> list[tuple[int, ...]]:
    """Root-to-leaf party subsets of the depth-M complete binary tree.

    Breadth-first numbering, root 0, children of v at 2v+1 and 2v+2;
    paths are ordered left to right by leaf.
    """
    if M < 2:
        raise ValueError("tree depth must be at least 2")
    n = 2 ** M - 1
    out = []
    for leaf in range(2 ** (M - 1) - 1, n):
        path = []
        v = leaf
        while True:
            path.append(v)
            if v == 0:
                break
            v = (v - 1) // 2
        out.append(tuple(sorted(path)))
    return out


def tree_scenario(M: int) -> OverlapScenario:
    return OverlapScenario(2 ** M - 1, tuple(tree_paths(M)))


def _tree_base_ops(M: int) -> list[dict[int, str]]:
    """The growth rule's 2^M mutually anticommuting operators.

    Walking from the root, an X at a node extends at its upper child and
    a Y extends at its lower child; leaves take both labels.  Every
    operator is supported on one root-to-leaf path.
    """
    n = 2 ** M - 1
    ops = []

    def build(v, labels):
        up = 2 * v + 1
        if up >= n:
            for leaf_label in "XY":
                ops.append({**labels, v: leaf_label})
        else:
            build(up, {**labels, v: "X"})
            build(up + 1, {**labels, v: "Y"})

    build(0, {})
    return ops


def _level_swap_perm(M: int, flips) -> dict[int, int]:
    """Tree automorphism flipping the child choice at the given depths."""
    n = 2 ** M - 1
    perm = {}
    for v in range(n):
        depth = (v + 1).bit_length() - 1
        bits = [((v + 1) >> (depth - 1 - i)) & 1 for i in range(depth)]
        new_bits = [b ^ flips[i] for i, b in enumerate(bits)]
        w = (1 << depth) - 1
        for i, b in enumerate(new_bits):
            w += b << (depth - 1 - i)
        perm[v] = w
    return perm


def tree_partition(M: int) -> AnticommutingPartition:
    """2^(M-1) sets of 2^M operators proving the binary-tree bound.

    The growth-rule base set covers one X/Y pattern per path; copies
    under level-wise child swaps move the patterns around so the union
    covers every pattern of every path exactly once.  Swapping whole
    levels relabels qubits uniformly inside a set, so anticommutation is
    preserved; the partition constructor re-certifies everything anyway.
    """
    if M < 2:
        raise ValueError("tree depth must be at least 2")
    n = 2 ** M - 1
    base = _tree_base_ops(M)
    label_sets = []
    for flips in itertools.product((0, 1), repeat=M - 1):
        perm = _level_swap_perm(M, flips)
        labels = []
        for op in base:
            chars = ["I"] * n
            for q, c in op.items():
                chars[perm[q]] = c
            labels.append("".join(chars))
        label_sets.append(labels)
    return _partition_from_labels(label_sets, tree_scenario(M))


EXACT_COVER_LIMIT = 16


def _anticommutation_adjacency(terms):
    n = len(terms)
    adj = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            adj[i][j] = adj[j][i] = anticommutes(terms[i], terms[j])
    return adj


def greedy_clique_cover(terms, method: str = "greedy") -> AnticommutingPartition:
    """Cover the anticommutation graph of `terms` with anticommuting cliques.

    Greedy: vertices in descending anticommutation degree (ties broken
    by label), each assigned to the first clique it anticommutes with
    entirely.  method="exact" searches for a minimum cover instead
    (limited to 16 terms).  The set count is a valid monogamy bound.
    """
    terms = sorted(set(terms), key=lambda p: p.label)
    if not terms:
        raise ValueError("no terms to cover")
    n_qubits = terms[0].n_qubits
    if any(t.n_qubits != n_qubits for t in terms):
        raise ValueError("mixed qubit counts")
    if method == "exact":
        groups = _exact_min_cover(terms)
    elif method == "greedy":
        adj = _anticommutation_adjacency(terms)
        order = sorted(range(len(terms)),
                       key=lambda i: (-sum(adj[i]), terms[i].label))
        groups = []
        for i in order:
            for g in groups:
                if all(adj[i][j] for j in g):
                    g.append(i)
                    break
            else:
                groups.append([i])
    else:
        raise ValueError(f"unknown method {method!r}")
    sets = tuple(AnticommutingSet(n_qubits, tuple(terms[i] for i in sorted(g)))
                 for g in groups)
    return AnticommutingPartition(sets, frozenset(terms))


def _exact_min_cover(terms):
    """Minimum clique cover by branch-and-bound coloring of the complement."""
    n = len(terms)
    if n > EXACT_COVER_LIMIT:
        raise ValueError(f"exact cover limited to {EXACT_COVER_LIMIT} terms")
    adj = _anticommutation_adjacency(terms)
    order = sorted(range(n), key=lambda i: (-sum(adj[i]), terms[i].label))
    best_groups = None
    best_k = n + 1

    def backtrack(pos, groups):
        nonlocal best_groups, best_k
        if len(groups) >= best_k:
            return
        if pos == n:
            best_k = len(groups)
            best_groups = [list(g) for g in groups]
            return
        v = order[pos]
        for g in groups:
            if all(adj[v][u] for u in g):
                g.append(v)
                backtrack(pos + 1, groups)
                g.pop()
        groups.append([v])
        backtrack(pos + 1, groups)
        groups.pop()

    backtrack(0, [])
    return best_groups


def check_state(scenario: OverlapScenario, state, partition: AnticommutingPartition,
                budget: OptBudget | None = None) -> MonogamyReport:
    """Jointly maximize the squared Bell values and compare with the bound.

    Each party holds one settings pair shared by every experiment
    containing it.  The partition must cover exactly the scenario's
    required terms; its set count is the reported bound.
    """
    if partition.covered_terms != required_terms(scenario):
        raise ValueError("partition is not certified for this scenario")
    if state.n_qubits != scenario.n_parties:
        raise ValueError("state qubit count does not match the scenario")
    values, total, _settings = joint_maximize(state, scenario.experiments,
                                              "general", budget)
    return MonogamyReport(
        per_experiment_values=tuple(abs(float(v)) for v in values),
        squared_sum=float(total),
        bound=partition.bound,
        saturated=abs(float(total) - partition.bound) <= SATURATION_ATOL)


_NAMED = {"triangle": (triangle_scenario, triangle_partition),
          "fourparty": (four_party_scenario, four_party_partition)}


def named_scenario(kind: str, M: int | None = None):
    """(scenario, partition) for triangle|fourparty|star:M|tree:M."""
    if kind in _NAMED:
        scen_fn, part_fn = _NAMED[kind]
        return scen_fn(), part_fn()
    if kind == "star":
        if M is None:
            raise ValueError("star scenario needs M")
        return star_scenario(M), star_partition(M)
    if kind == "tree":
        if M is None:
            raise ValueError("tree scenario needs M")
        return tree_scenario(M), tree_partition(M)
    raise ValueError(f"unknown scenario {kind!r}")
